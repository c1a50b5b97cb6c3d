#include "sumprod/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sumprod/branching.hpp"
#include "sumprod/entropy.hpp"
#include "sumprod/rng.hpp"

namespace sumprod {

namespace {

std::int64_t cell_at(std::int64_t x, int from, int to) { return from >= to ? x >> (from - to) : x << (to - from); }

std::string fmt(const char* what, double value, double limit) {
  std::ostringstream s;
  s << what << " (measured " << value << ", allowed " << limit << ")";
  return s.str();
}

}  // namespace

HypothesisError::HypothesisError(HypothesisAudit a)
    : std::runtime_error("projection hypotheses fail: " + (a.failures.empty() ? std::string() : a.failures.front())),
      audit(std::move(a)) {}

ProjectionL2 l2_of_projection(const DiscreteMeasure& mu2, const Dyadic& c, int n, bool pair_path) {
  if (mu2.dim() != 2) throw std::invalid_argument("l2_of_projection: measure must be 2-d");
  if (n < 0 || n > mu2.n()) throw std::out_of_range("l2_of_projection: n outside [0, resolution]");
  ProjectionL2 out;
  out.pushforward = discretize_density_l2(project(mu2, c), n);
  if (pair_path && mu2.size() <= kPairCountLimit) {
    const int sh = mu2.n() - n;
    const auto& at = mu2.atoms();
    std::vector<std::int64_t> bin(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) bin[i] = project_index(at[i].x, at[i].y, c) >> sh;
    // every ordered pair (p, q) inside a common tube pi_c^-1(I)
    u128 pairs = 0;
    for (std::size_t i = 0; i < at.size(); ++i) {
      for (std::size_t j = 0; j < at.size(); ++j) {
        if (bin[i] == bin[j]) pairs += static_cast<u128>(at[i].mass) * at[j].mass;
      }
    }
    DensityL2 pc;
    pc.sum_sq = pairs;
    pc.total = mu2.total();
    pc.log_scale = n;
    out.pair_count = pc;
    out.paths_agree = pc == out.pushforward;
  }
  return out;
}

HypothesisAudit audit_hypotheses(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n,
                                 const ProjectionParams& p) {
  if (mu2.dim() != 2 || nu.dim() != 1) throw std::invalid_argument("audit_hypotheses: need 2-d mu and 1-d nu");
  if (n < 1 || n > mu2.n()) throw std::out_of_range("audit_hypotheses: n outside [1, resolution]");
  HypothesisAudit a;
  a.n = n;
  const int sh = mu2.n() - n;
  std::vector<std::int64_t> xs, ys;
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> cells;
  for (const auto& at : mu2.atoms()) {
    xs.push_back(at.x >> sh);
    ys.push_back(at.y >> sh);
    cells[{at.x >> sh, at.y >> sh}] += at.mass;
  }
  for (auto* v : {&xs, &ys}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  a.a_cells = static_cast<std::int64_t>(xs.size());
  a.b_cells = static_cast<std::int64_t>(ys.size());
  a.gamma_A = log2_int(a.a_cells) / n;
  a.gamma_B = log2_int(a.b_cells) / n;
  std::uint64_t max_cell = 0;
  for (const auto& [q, m] : cells) max_cell = std::max(max_cell, m);
  a.C_mu = static_cast<double>(max_cell) / static_cast<double>(mu2.total()) * static_cast<double>(a.a_cells) *
           static_cast<double>(a.b_cells);
  std::map<std::int64_t, std::uint64_t> nu_cells;
  for (const auto& at : nu.atoms()) nu_cells[cell_at(at.x, nu.n(), n)] += at.mass;
  std::uint64_t max_nu = 0;
  for (const auto& [q, m] : nu_cells) max_nu = std::max(max_nu, m);
  a.C_nu = static_cast<double>(max_nu) / static_cast<double>(nu.total()) * std::exp2(p.gamma * n);
  for (std::size_t i = 1; i < ys.size(); ++i) {
    std::int64_t gap = ys[i] - ys[i - 1] - 1;
    if (a.min_b_gap < 0 || gap < a.min_b_gap) a.min_b_gap = gap;
  }
  a.C_used = p.C > 0 ? p.C : std::max({1.0, a.C_mu, a.C_nu});

  if (a.C_mu > a.C_used * (1 + 1e-12)) a.failures.push_back(fmt("mu(Q) <= C Delta^(gA+gB)", a.C_mu, a.C_used));
  if (a.C_nu > a.C_used * (1 + 1e-12)) a.failures.push_back(fmt("nu(I) <= C Delta^gamma", a.C_nu, a.C_used));
  if (a.min_b_gap >= 0) {
    // dist = gap * Delta >= Delta^xi
    double need = n * (1 - p.xi);
    if (a.min_b_gap == 0 || log2_int(a.min_b_gap) < need - kLogTolerance) {
      a.failures.push_back(fmt("B-cells Delta^xi separated (log2 gap)",
                               a.min_b_gap == 0 ? -INFINITY : log2_int(a.min_b_gap), need));
    }
  }
  const std::int64_t one = std::int64_t{1} << nu.n();
  if (nu.atoms().front().x < -one || nu.atoms().back().x > one) a.failures.push_back("nu supported in [-1, 1]");
  if (!(p.xi > 0 && p.xi <= 1)) a.failures.push_back(fmt("xi in (0, 1]", p.xi, 1));
  return a;
}

ProjectionAverageReport averaged_l2(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n,
                                    const ProjectionParams& p) {
  ProjectionAverageReport rep;
  rep.audit = audit_hypotheses(mu2, nu, n, p);
  if (!rep.audit.ok() && !p.exploratory) throw HypothesisError(rep.audit);
  long double avg = 0;
  for (const auto& at : nu.atoms()) {
    Dyadic c = atom_value(at, nu.n());
    ProjectionL2 v = l2_of_projection(mu2, c, n);
    if (v.pair_count) ++rep.pair_checked;
    rep.paths_agree = rep.paths_agree && v.paths_agree;
    long double w = static_cast<long double>(at.mass) / nu.total();
    long double val = v.pushforward.value();
    rep.c_values.push_back(c.value());
    rep.weights.push_back(static_cast<double>(w));
    rep.l2.push_back(static_cast<double>(val));
    avg += w * val;
  }
  rep.average = static_cast<double>(avg);
  const auto& a = rep.audit;
  // Delta^x = 2^(-n x)
  rep.bound_term = std::max(std::exp2(-n * (a.gamma_A + a.gamma_B - 1)), std::exp2(-n * (p.gamma - 1 - p.xi)));
  rep.fitted = rep.average / rep.bound_term;
  return rep;
}

ProjectionEntropyReport averaged_projection_entropy(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n,
                                                    const ProjectionParams& p) {
  ProjectionEntropyReport rep;
  rep.audit = audit_hypotheses(mu2, nu, n, p);
  if (!rep.audit.ok() && !p.exploratory) throw HypothesisError(rep.audit);
  long double avg = 0, log_avg = 0, l2_avg = 0;
  rep.l2_entropy_ok = true;
  for (const auto& at : nu.atoms()) {
    Dyadic c = atom_value(at, nu.n());
    const long double w = static_cast<long double>(at.mass) / nu.total();
    const double h = projected_entropy(mu2, c, n);
    const DensityL2 l2 = discretize_density_l2(project(mu2, c), n);
    const double lg = l2.log2_value();
    if (h < n - lg - kLogTolerance) rep.l2_entropy_ok = false;
    rep.entropies.push_back(h);
    avg += w * h;
    log_avg += w * lg;
    l2_avg += w * l2.value();
  }
  rep.average = static_cast<double>(avg);
  rep.jensen_lhs = static_cast<double>(-log_avg);
  rep.jensen_rhs = static_cast<double>(-std::log2(l2_avg));
  rep.jensen_ok = rep.jensen_lhs >= rep.jensen_rhs - kLogTolerance;
  const auto& a = rep.audit;
  rep.lower_bound =
      n * std::min(a.gamma_A + a.gamma_B, p.gamma - p.xi) - std::log2(a.C_used) - std::log2(p.C0);
  rep.holds = rep.average >= rep.lower_bound - kLogTolerance;
  return rep;
}

NearFarAudit near_far_audit(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n, const ProjectionParams& p,
                            std::uint64_t seed, std::int64_t max_far_pairs) {
  if (mu2.n() != n) throw std::invalid_argument("near_far_audit: mu must live on the n-grid");
  ProjectionParams loose = p;
  loose.exploratory = true;
  HypothesisAudit a = audit_hypotheses(mu2, nu, n, loose);
  NearFarAudit out;
  const auto& at = mu2.atoms();
  std::unordered_map<std::int64_t, std::uint64_t> where;  // packed (x, y) -> mass
  auto key = [](std::int64_t x, std::int64_t y) { return (x << 32) ^ (y & 0xffffffff); };
  for (const auto& q : at) where[key(q.x, q.y)] = q.mass;
  u128 near = 0;
  for (const auto& q : at) {
    for (std::int64_t dx = -9; dx <= 9; ++dx) {
      for (std::int64_t dy = -9; dy <= 9; ++dy) {
        if (dx * dx + dy * dy >= 100) continue;
        auto it = where.find(key(q.x + dx, q.y + dy));
        if (it != where.end()) near += static_cast<u128>(q.mass) * it->second;
      }
    }
  }
  const long double t = static_cast<long double>(mu2.total());
  out.near_mass = static_cast<double>(static_cast<long double>(near) / (t * t));
  out.near_bound = 361 * a.C_mu * std::exp2(-n * (a.gamma_A + a.gamma_B));
  out.near_ok = out.near_mass <= out.near_bound * (1 + 1e-12);

  std::vector<Dyadic> cs;
  for (const auto& c : nu.atoms()) cs.push_back(atom_value(c, nu.n()));
  const double unit = a.C_nu * std::exp2(-p.gamma * n);
  Rng rng(seed);
  std::int64_t attempts = 0;
  while (out.far_pairs < max_far_pairs && attempts < 50 * max_far_pairs && at.size() > 1) {
    ++attempts;
    const Atom& P = at[rng.below(at.size())];
    const Atom& Q = at[rng.below(at.size())];
    const std::int64_t dx = P.x - Q.x, dy = P.y - Q.y;
    if (dx * dx + dy * dy < 100) continue;
    ++out.far_pairs;
    std::uint64_t shared = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (project_index(P.x, P.y, cs[i]) == project_index(Q.x, Q.y, cs[i])) shared += nu.atoms()[i].mass;
    }
    if (shared == 0) continue;
    if (std::llabs(dy) < 2) ++out.horizontal_violations;
    const double mass = static_cast<double>(shared) / static_cast<double>(nu.total());
    const double bound =
        dy == 0 ? 0 : (std::floor(4.0 * std::exp2(n) / static_cast<double>(std::llabs(dy))) + 2) * unit;
    if (bound > 0) out.worst_far_ratio = std::max(out.worst_far_ratio, mass / bound);
    if (mass > bound * (1 + 1e-12)) ++out.far_violations;
  }
  return out;
}

TubeAudit tube_geometry_audit(int n, std::int64_t pairs, std::uint64_t seed) {
  if (n < 1 || n > 20) throw std::invalid_argument("tube_geometry_audit: n must lie in [1, 20]");
  const std::int64_t side = std::int64_t{1} << n;
  Rng rng(seed);
  TubeAudit out;
  for (std::int64_t t = 0; t < pairs; ++t) {
    const std::int64_t y1 = rng.between(0, side - 1), y2 = rng.between(0, side - 1);
    if (y1 == y2) continue;
    const std::int64_t k0 = rng.between(-side, side);
    // plant a common tube at c = k0 / 2^n, then look for all others
    const std::int64_t x1 = rng.between(0, side - 1);
    const std::int64_t x2 = x1 + ((k0 * y1) >> n) - ((k0 * y2) >> n);
    std::int64_t lo = side + 1, hi = -side - 1;
    for (std::int64_t k = -side; k <= side; ++k) {
      if (x1 + ((k * y1) >> n) == x2 + ((k * y2) >> n)) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
    ++out.pairs;
    const double diameter = static_cast<double>(hi - lo) / static_cast<double>(side);
    const double ratio = diameter * static_cast<double>(std::llabs(y1 - y2));
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 4) ++out.violations;
  }
  return out;
}

VerticalAudit vertical_separation_audit(int n) {
  if (n < 1 || n > 10) throw std::invalid_argument("vertical_separation_audit: n must lie in [1, 10]");
  const std::int64_t side = std::int64_t{1} << n;
  VerticalAudit out;
  for (std::int64_t y1 = 0; y1 < side; ++y1) {
    for (std::int64_t y2 = 0; y2 < side; ++y2) {
      const std::int64_t dy = y1 - y2;
      for (std::int64_t k = -side; k <= side; ++k) {
        // p, q share the tube iff x_p - x_q = floor(c y2) - floor(c y1)
        const std::int64_t dx = ((k * y2) >> n) - ((k * y1) >> n);
        if (dx * dx + dy * dy < 100) continue;
        ++out.tube_pairs;
        if (std::llabs(dy) < 2) ++out.violations;
      }
    }
  }
  return out;
}

}  // namespace sumprod
