#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sumprod/entropy.hpp"
#include "sumprod/experiments.hpp"
#include "sumprod/measure.hpp"
#include "sumprod/projection.hpp"
#include "sumprod/rng.hpp"
#include "sumprod/uniformization.hpp"

namespace sumprod {

bool AssemblyReport::has_low() const { return !partition.with_tag(IntervalTag::low).empty(); }

bool AssemblyReport::all_blocks_ok() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const AssemblyBlock& b) {
    return b.bound_ok && b.fiber_ok && b.min_collapse_ok;
  });
}

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// max over level-j dyadic intervals I of nu(I) / 2^(-j gamma), nu on [0, 1).
double frostman_constant(const DiscreteMeasure& nu, int j, double gamma) {
  std::uint64_t best = 0;
  if (j >= nu.n()) {
    for (const auto& a : nu.atoms()) best = std::max(best, a.mass);
  } else {
    DiscreteMeasure c = coarsen(nu, j);
    for (const auto& a : c.atoms()) best = std::max(best, a.mass);
  }
  return static_cast<double>(best) / static_cast<double>(nu.total()) * std::exp2(gamma * j);
}

void run_pipeline(AssemblyReport& rep, const ParameterSet& p, const BranchingProfile& prof_a,
                  const BranchingProfile& prof_b, std::uint64_t seed, const AssemblyOptions& opt) {
  const int m = p.m, ell = p.ell, N = p.N, levels = ell * N, n = p.n();
  SeedStream seeds(seed);

  // B' separated at every fine level
  DeltaSet b0 = gen_uniform_tree(prof_b, seeds.derive("tree_B"), opt.b_placement);
  UniformPart b1 = prune_separation_1(b0, m, levels);
  rep.separation1_violations = static_cast<std::int64_t>(separation_violations(b1.set, m, levels).size());
  if (rep.separation1_violations > 0) throw Failure("coarse separation lost");
  rep.profile_b = b1.profile;

  IntervalFamily lifted = lift_intervals(trivial_intervals(b1.profile.coarsen(ell)), ell);
  rep.extended = extend_intervals(b1.profile, lifted, p.zeta, ell);
  rep.sandwich_violations = static_cast<std::int64_t>(sandwich_violations(b1.profile, rep.extended, p.zeta).size());
  if (rep.sandwich_violations > 0) throw Failure("sandwich violated");

  rep.profile_a = prof_a;
  const double Gamma = p.Gamma();
  rep.classified = classify_low_high(rep.extended, prof_a, Gamma);

  const Dyadic xi = p.xi_dyadic(opt.xi_bits);
  for (const auto& j : rep.classified.intervals) {
    if (is_case_a(j.tag) && xi.floor_mul(j.length()) < 1) throw Failure("xi |J| < 1 on a case-(a) interval");
  }
  PruneTwoResult b2 = prune_separation_2(b1.set, rep.classified, xi, b1.profile);
  rep.profile_b_pruned = b2.profile;
  rep.collapsed = b2.collapsed;
  PruneTwoAudit audit = audit_prune_separation_2(b2.set, b2.profile, rep.classified, xi, p.zeta);
  rep.prune2_floor_violations = audit.floor_violations;
  rep.prune2_separation_violations = audit.separation_violations;
  if (audit.floor_violations || audit.separation_violations) throw Failure("second pruning audit failed");

  PolarisationResult pol = polarisation_check(prof_a, b2.profile, p.eta);
  if (!pol.ok) throw Failure("(A, B'') not polarised");
  rep.eta_measured = polarisation_eta(prof_a, b2.profile);

  DeltaSet a = gen_uniform_tree(prof_a, seeds.derive("tree_A"), Placement::random);
  rep.size_a = a.size();
  rep.size_b = b2.set.size();
  if (rep.size_a * rep.size_b > opt.max_atoms) throw Failure("|A'| |B''| above the atom cap");
  rep.alpha_bar = log2_int(static_cast<std::int64_t>(rep.size_a)) / n;
  rep.beta_1 = log2_int(static_cast<std::int64_t>(rep.size_b)) / n;

  rep.partition = low_partition(rep.classified, levels);
  std::vector<int> cuts;
  for (const auto& j : rep.partition.intervals) cuts.push_back(m * j.lo);
  cuts.push_back(n);
  const auto h = static_cast<double>(rep.partition.intervals.size());
  rep.correction = h * kChainCorrection;

  DiscreteMeasure mu = product_measure(counting_measure(a), counting_measure(b2.set));
  std::vector<std::int64_t> grid(std::size_t{1} << opt.nu_bits);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<std::int64_t>(i);
  DiscreteMeasure nu = counting_measure(DeltaSet(opt.nu_bits, grid));
  for (const auto& at : nu.atoms()) rep.c_values.push_back(atom_value(at, opt.nu_bits));
  const auto nc = static_cast<double>(rep.c_values.size());

  const double xi_val = xi.value();
  for (const auto& j : rep.partition.intervals) {
    AssemblyBlock blk;
    blk.lo = j.lo;
    blk.hi = j.hi;
    blk.tag = j.tag;
    blk.log2_RA = prof_a.log2_range(j.lo, j.hi);
    const int len = j.length();
    blk.C_block = std::max(1.0, frostman_constant(nu, m * len, p.gamma));
    if (j.tag == IntervalTag::low) {
      blk.lower = blk.log2_RA + xi_val * p.zeta * m * len - std::log2(blk.C_block) - std::log2(opt.C0);
      const double gA = blk.log2_RA / (m * len);
      const double gB = b2.profile.log2_range(j.lo, j.hi) / (m * len);
      blk.min_collapse_ok = std::min(gA + gB, p.gamma - 2 * xi_val) >= gA + xi_val * p.zeta - 1e-9;
    } else {
      blk.lower = blk.log2_RA - 1;
    }
    blk.fiber_ok = true;
    std::vector<double> cell_avg;
    std::vector<std::pair<std::int64_t, std::int64_t>> keys;
    long double weighted = 0;
    const long double total = static_cast<long double>(mu.total());
    for (const auto& c : rep.c_values) {
      auto cells = cell_projected_entropies(mu, c, m * j.lo, m * len);
      if (cell_avg.empty()) {
        cell_avg.assign(cells.size(), 0);
        for (const auto& q : cells) keys.emplace_back(q.qx, q.qy);
      }
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (keys[i] != std::make_pair(cells[i].qx, cells[i].qy)) throw std::logic_error("cell order changed with c");
        cell_avg[i] += cells[i].entropy / nc;
        weighted += static_cast<long double>(cells[i].mass) / total * cells[i].entropy / nc;
        if (cells[i].entropy < blk.log2_RA - 1 - kLogTolerance) blk.fiber_ok = false;
      }
    }
    blk.cells = cell_avg.size();
    blk.weighted = static_cast<double>(weighted);
    blk.min_cell_avg = cell_avg.empty() ? 0 : *std::min_element(cell_avg.begin(), cell_avg.end());
    blk.bound_ok = j.tag == IntervalTag::low ? blk.min_cell_avg >= blk.lower - kLogTolerance : blk.fiber_ok;
    rep.contributions += blk.lower;
    rep.blocks.push_back(blk);
  }

  rep.best_entropy = -1;
  long double lhs_sum = 0, rhs_sum = 0;
  for (const auto& c : rep.c_values) {
    EntropyChainReport ch = entropy_chain(mu, c, cuts);
    rep.lhs_per_c.push_back(ch.lhs);
    lhs_sum += ch.lhs;
    rhs_sum += ch.rhs_sum;
    if (!ch.holds) ++rep.chain_failures;
    if (ch.lhs > rep.best_entropy) {
      rep.best_entropy = ch.lhs;
      rep.best_c = c;
    }
  }
  rep.lhs_avg = static_cast<double>(lhs_sum / static_cast<long double>(nc));
  rep.chain_rhs_avg = static_cast<double>(rhs_sum / static_cast<long double>(nc));
  rep.chain_ok = rep.chain_failures == 0;
  rep.assembly_ok = rep.lhs_avg >= rep.contributions - rep.correction - kLogTolerance;

  ParameterSet measured = p;
  measured.alpha_bar = rep.alpha_bar;
  rep.params = measured;
  rep.rate_target = measured.assembly_rate() * n - h * (std::log2(40.0) + std::log2(opt.C0));
  rep.rate_target_reached = rep.best_entropy >= rep.rate_target;
  rep.low_length = static_cast<double>(rep.partition.total_length(IntervalTag::low)) / levels;
  rep.low_length_bound = p.low_fraction();
}

void check_options(const ParameterSet& p, const AssemblyOptions& opt) {
  auto errs = p.validate_desk_scale();
  if (!errs.empty()) throw std::invalid_argument("run_final_assembly: " + errs.front());
  if (p.n() > 48) throw std::invalid_argument("run_final_assembly: ell m N above 48");
  if (opt.nu_bits < 1 || opt.nu_bits > 12) throw std::invalid_argument("run_final_assembly: nu_bits outside [1, 12]");
  if (opt.max_attempts < 1) throw std::invalid_argument("run_final_assembly: max_attempts must be >= 1");
}

}  // namespace

AssemblyReport run_final_assembly(const ParameterSet& params, const BranchingProfile& profile_a,
                                  const BranchingProfile& profile_b, std::uint64_t seed, const AssemblyOptions& opt) {
  check_options(params, opt);
  const int levels = params.ell * params.N;
  if (profile_a.m != params.m || profile_b.m != params.m || profile_a.levels() != levels ||
      profile_b.levels() != levels) {
    throw std::invalid_argument("run_final_assembly: profiles must have m bits and ell N levels");
  }
  AssemblyReport rep;
  rep.params = params;
  rep.seed = seed;
  rep.attempts = 1;
  try {
    run_pipeline(rep, params, profile_a, profile_b, seed, opt);
  } catch (const Failure& f) {
    rep.failure = f.what();
  }
  return rep;
}

AssemblyReport run_final_assembly(const ParameterSet& params, std::uint64_t seed, const AssemblyOptions& opt) {
  check_options(params, opt);
  const int m = params.m, ell = params.ell, N = params.N, levels = ell * N;
  const std::int64_t full = std::int64_t{1} << m;
  SeedStream seeds(seed);
  AssemblyReport last;
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    Rng rng = seeds.stream("profiles", static_cast<std::uint64_t>(attempt));
    // one coarse level left trivial, usually the last so the extension has room;
    // elsewhere B mostly branches fully, A is sparse off it
    const int trivial = rng.below(4) == 0 ? static_cast<int>(rng.below(static_cast<std::uint64_t>(N))) : N - 1;
    std::vector<std::int64_t> rb(static_cast<std::size_t>(levels)), ra(rb.size());
    for (int s = 0; s < levels; ++s) {
      std::int64_t r = 1;
      if (s / ell != trivial) {
        // full branching survives the first pruning at about half its bits
        r = rng.below(4) == 0 ? 1 : full;
      }
      rb[static_cast<std::size_t>(s)] = r;
      // polarised: A branches fully wherever B does
      ra[static_cast<std::size_t>(s)] = r > 1 ? full : (rng.below(3) == 0 ? 2 : 1);
    }
    BranchingProfile pa(m, ra), pb(m, rb);
    AssemblyReport rep;
    rep.params = params;
    rep.seed = seed;
    try {
      run_pipeline(rep, params, pa, pb, seeds.derive("trees", static_cast<std::uint64_t>(attempt)), opt);
      rep.attempts = attempt;
      return rep;
    } catch (const Failure& f) {
      rep.failure = f.what();
      rep.attempts = attempt;
      last = std::move(rep);
    }
  }
  return last;
}

}  // namespace sumprod
