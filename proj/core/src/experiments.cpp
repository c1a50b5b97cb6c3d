#include "sumprod/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sumprod/rng.hpp"
#include "sumprod/sumset_kernel.hpp"

namespace sumprod {

BranchingProfile regular_profile(int m, int levels, double dim) {
  if (m < 1 || levels < 1) throw std::invalid_argument("regular_profile: m and levels must be >= 1");
  if (!(dim >= 0 && dim <= 1)) throw std::invalid_argument("regular_profile: dim must lie in [0, 1]");
  const auto total = static_cast<std::int64_t>(std::llround(dim * m * levels));
  std::vector<std::int64_t> r(static_cast<std::size_t>(levels));
  for (int s = 0; s < levels; ++s) {
    std::int64_t bits = (s + 1) * total / levels - s * total / levels;
    r[static_cast<std::size_t>(s)] = std::int64_t{1} << bits;
  }
  return BranchingProfile(m, std::move(r));
}

std::vector<SharpnessRow> run_sharpness_form87(const std::vector<std::int64_t>& n_params) {
  std::vector<SharpnessRow> rows;
  for (std::int64_t np : n_params) {
    if (np > (std::int64_t{1} << 24)) throw std::invalid_argument("run_sharpness_form87: n above 2^24");
    ThreeProgressions s = gen_example_form87(np);
    SharpnessRow row;
    row.n_param = np;
    row.size_a = s.a.size();
    row.size_b = s.b.size();
    row.size_c = s.c.size();
    row.exact = s.exact;
    std::vector<std::int64_t> all;
    for (std::int64_t k : s.c.indices()) {
      Dyadic c(k, s.c.n());
      DeltaSet sum = sumset(s.a, c, s.b);
      row.max_single = std::max(row.max_single, sum.size());
      std::vector<std::int64_t> merged;
      merged.reserve(all.size() + sum.size());
      std::set_union(all.begin(), all.end(), sum.indices().begin(), sum.indices().end(), std::back_inserter(merged));
      all.swap(merged);
    }
    row.abc = all.size();
    row.ratio = static_cast<double>(row.abc) / static_cast<double>(row.size_a);
    row.slope = np > 1 ? std::log(row.ratio) / std::log(static_cast<double>(np)) : 0;
    rows.push_back(row);
  }
  return rows;
}

LadderResult run_doubling_ladder(const DeltaSet& b, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("run_doubling_ladder: n_steps must be >= 1");
  if (b.empty()) throw std::invalid_argument("run_doubling_ladder: empty set");
  constexpr std::int64_t kSpanLimit = std::int64_t{1} << 28;
  LadderResult res;
  res.factor = 2 * std::exp2(static_cast<double>(b.n()) / n_steps);
  std::vector<std::int64_t> cur = b.indices();
  res.sizes.push_back(cur.size());
  for (int k = 1; k <= n_steps + 1; ++k) {
    if (2 * (cur.back() - cur.front()) > kSpanLimit) throw std::length_error("run_doubling_ladder: 2^k B too wide");
    cur = integer_sumset(cur, cur);
    res.sizes.push_back(cur.size());
  }
  for (int k = 1; k <= n_steps; ++k) {
    auto lhs = static_cast<double>(res.sizes[static_cast<std::size_t>(k + 1)]);
    if (lhs <= res.factor * static_cast<double>(res.sizes[static_cast<std::size_t>(k)])) {
      res.k = k;
      break;
    }
  }
  return res;
}

GreedyResult run_greedy_iterated_sum(const DeltaSet& b, const DeltaSet& c, int n_steps, double beta, double gamma,
                                     double eta) {
  if (n_steps < 2) throw std::invalid_argument("run_greedy_iterated_sum: need N >= 2");
  if (b.empty() || c.empty()) throw std::invalid_argument("run_greedy_iterated_sum: empty set");
  if (b.n() != c.n()) throw std::invalid_argument("run_greedy_iterated_sum: scale mismatch");
  const int n = b.n();
  std::vector<Dyadic> cs;
  for (std::int64_t k : c.indices()) {
    Dyadic v(k, n);
    if (v > Dyadic::integer(1)) throw std::invalid_argument("run_greedy_iterated_sum: C must lie in [0, 1]");
    cs.push_back(v);
  }
  std::vector<std::vector<std::int64_t>> scaled;
  scaled.reserve(cs.size());
  for (const auto& v : cs) scaled.push_back(scaled_indices(b, v));

  GreedyResult res;
  res.target = beta + gamma * (1 - beta) - eta;
  std::vector<std::int64_t> h = scaled.front();
  res.c_sequence.push_back(cs.front());
  res.sizes.push_back(h.size());
  for (int step = 2; step <= n_steps; ++step) {
    std::size_t best = 0, best_i = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::size_t sz = integer_sumset_size(h, scaled[i]);
      if (sz > best) {
        best = sz;
        best_i = i;
      }
    }
    h = integer_sumset(h, scaled[best_i]);
    res.c_sequence.push_back(cs[best_i]);
    res.sizes.push_back(h.size());
  }
  const double factor = 2 * std::exp2(static_cast<double>(n) / (n_steps - 1));
  for (int k = 1; k < n_steps; ++k) {
    if (static_cast<double>(res.sizes[static_cast<std::size_t>(k)]) <=
        factor * static_cast<double>(res.sizes[static_cast<std::size_t>(k - 1)])) {
      res.n_star = k;
      break;
    }
  }
  res.exponent = log2_int(static_cast<std::int64_t>(res.sizes.back())) / n;
  res.final_width = width_for(n, h.back());
  return res;
}

std::string family_name(InstanceFamily f) {
  switch (f) {
    case InstanceFamily::form87: return "form87";
    case InstanceFamily::uniform_tree: return "uniform-tree";
    case InstanceFamily::random_frostman: return "random-frostman";
    case InstanceFamily::p1p2_tree: return "p1p2-tree";
  }
  return "?";
}

InstanceFamily parse_family(const std::string& s) {
  for (auto f : {InstanceFamily::form87, InstanceFamily::uniform_tree, InstanceFamily::random_frostman,
                 InstanceFamily::p1p2_tree}) {
    if (s == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown instance family '" + s + "'");
}

void ExperimentConfig::validate() const {
  auto errs = params.validate_desk_scale();
  if (!errs.empty()) throw std::invalid_argument("parameters: " + errs.front());
  if (deltas.empty() || gammas.empty()) throw std::invalid_argument("config: empty delta or gamma list");
  for (int n : deltas) {
    if (n < 1 || n > 40) throw std::invalid_argument("config: delta exponent outside [1, 40]");
    if (family != InstanceFamily::form87 && n % params.m != 0) {
      throw std::invalid_argument("config: delta exponent " + std::to_string(n) + " not a multiple of m");
    }
    if (family == InstanceFamily::form87 && (n % 4 != 0 || n > 24)) {
      throw std::invalid_argument("config: form87 needs delta exponents divisible by 4 and <= 24");
    }
  }
  for (double g : gammas) {
    if (!(g > 0 && g <= 1)) throw std::invalid_argument("config: gamma must lie in (0, 1]");
  }
  if (max_atoms < 1) throw std::invalid_argument("config: max_atoms must be >= 1");
  if (format != "csv" && format != "json") throw std::invalid_argument("config: format must be csv or json");
}

namespace {

// R in {1, 2^m}: round(dim * levels) full levels, spread evenly.
BranchingProfile p2_profile(int m, int levels, double dim) {
  const auto full = static_cast<std::int64_t>(std::llround(dim * levels));
  std::vector<std::int64_t> r(static_cast<std::size_t>(levels));
  for (int s = 0; s < levels; ++s) {
    bool on = (s + 1) * full / levels - s * full / levels > 0;
    r[static_cast<std::size_t>(s)] = on ? (std::int64_t{1} << m) : 1;
  }
  return BranchingProfile(m, std::move(r));
}

}  // namespace

SweepInstance build_sweep_instance(const ExperimentConfig& cfg, int n, double gamma) {
  const ParameterSet& p = cfg.params;
  SeedStream seeds(cfg.seed);
  if (cfg.family == InstanceFamily::form87) {
    ThreeProgressions s = gen_example_form87(std::int64_t{1} << n);
    return {s.a, s.b, s.c};
  }
  const int levels = n / p.m;
  auto a_size = static_cast<std::int64_t>(std::llround(std::exp2(p.alpha * n)));
  SweepInstance out;
  out.a = gen_ap(n, std::max<std::int64_t>(1, a_size));
  const auto salt = static_cast<std::uint64_t>(n) * 1000 + static_cast<std::uint64_t>(std::llround(gamma * 1000));
  switch (cfg.family) {
    case InstanceFamily::uniform_tree:
      out.b = gen_uniform_tree(regular_profile(p.m, levels, p.beta), seeds.derive("B", salt), Placement::left_packed);
      out.c = gen_uniform_tree(regular_profile(p.m, levels, gamma), seeds.derive("C", salt), Placement::left_packed);
      break;
    case InstanceFamily::random_frostman:
      out.b = gen_uniform_tree(regular_profile(p.m, levels, p.beta), seeds.derive("B", salt), Placement::random);
      out.c = gen_uniform_tree(regular_profile(p.m, levels, gamma), seeds.derive("C", salt), Placement::random);
      break;
    case InstanceFamily::p1p2_tree:
      out.b = gen_uniform_tree(p2_profile(p.m, levels, p.beta), seeds.derive("B", salt), Placement::random);
      out.c = gen_uniform_tree(regular_profile(p.m, levels, gamma), seeds.derive("C", salt), Placement::random);
      break;
    case InstanceFamily::form87: break;
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<ExpansionRecord> run_expansion_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ExpansionRecord> out;
  SeedStream seeds(cfg.seed);
  for (int n : cfg.deltas) {
    for (double gamma : cfg.gammas) {
      SweepInstance inst = build_sweep_instance(cfg, n, gamma);
      ExpansionRecord rec;
      rec.n = inst.a.n();
      rec.gamma = gamma;
      rec.size_a = inst.a.size();
      rec.size_b = inst.b.size();
      rec.size_c = inst.c.size();
      rec.alpha_bar = log2_int(static_cast<std::int64_t>(rec.size_a)) / rec.n;
      if (cfg.family == InstanceFamily::form87) rec.a_family = "three progressions";

      std::vector<std::int64_t> cidx = inst.c.indices();
      if (cidx.size() > cfg.max_atoms) {
        rec.sampled = true;
        Rng rng = seeds.stream("sweep_c", static_cast<std::uint64_t>(n) * 1000 +
                                              static_cast<std::uint64_t>(std::llround(gamma * 1000)));
        for (std::size_t i = 0; i < cfg.max_atoms; ++i) {
          auto j = i + static_cast<std::size_t>(rng.below(cidx.size() - i));
          std::swap(cidx[i], cidx[j]);
        }
        cidx.resize(cfg.max_atoms);
        std::sort(cidx.begin(), cidx.end());
      }
      double best = -1e300, sum = 0;
      for (std::int64_t k : cidx) {
        Dyadic c(k, inst.c.n());
        if (c > Dyadic::integer(1)) continue;
        std::size_t sz = sumset_size(inst.a, c, inst.b);
        double e = log2_int(static_cast<std::int64_t>(sz)) / rec.n - rec.alpha_bar;
        rec.c_values.push_back(c);
        rec.sizes.push_back(sz);
        rec.exponents.push_back(e);
        sum += e;
        if (e > best) {
          best = e;
          rec.best_c = c;
        }
      }
      rec.best_exponent = best;
      rec.median = median_of(rec.exponents);
      rec.mean = rec.exponents.empty() ? 0 : sum / static_cast<double>(rec.exponents.size());
      out.push_back(std::move(rec));
    }
  }
  return out;
}

NumerologyReport numerology_scan(int m_max, int N_max, double gamma_step) {
  if (m_max < 1 || N_max < 1 || N_max > 12) throw std::invalid_argument("numerology_scan: bad range");
  if (!(gamma_step > 0 && gamma_step <= 1)) throw std::invalid_argument("numerology_scan: bad gamma step");
  NumerologyReport rep;
  const int steps = static_cast<int>(std::floor(1 / gamma_step + 1e-9));
  for (int m = 1; m <= m_max; ++m) {
    const std::int64_t full = std::int64_t{1} << m;
    for (int N = 1; N <= N_max; ++N) {
      for (std::uint32_t mask = 0; mask + 1 < (1u << N); ++mask) {
        std::vector<int> free;
        for (int s = 0; s < N; ++s) {
          if (!((mask >> s) & 1u)) free.push_back(s);
        }
        const int nb = N - static_cast<int>(free.size());
        std::vector<std::int64_t> ra(free.size(), 1);
        while (true) {
          ++rep.pairs;
          double log_a = m * nb;
          double min_free = 1e300;
          for (std::int64_t r : ra) {
            log_a += log2_int(r);
            min_free = std::min(min_free, log2_int(r));
          }
          const double alpha = log_a / (m * N), beta = static_cast<double>(nb) / N;
          const double thr = (alpha - beta) / (1 - beta);
          for (int g = 1; g <= steps; ++g) {
            const double Gamma = g * gamma_step;
            if (!(Gamma > thr + 1e-12)) continue;
            ++rep.checks;
            if (min_free > Gamma * m + kLogTolerance) {
              if (rep.exceptions++ == 0) {
                std::ostringstream s;
                s << "m=" << m << " N=" << N << " mask=" << mask << " Gamma=" << Gamma;
                rep.first_exception = s.str();
              }
            }
          }
          std::size_t i = 0;
          while (i < ra.size() && ra[i] == full) ra[i++] = 1;
          if (i == ra.size()) break;
          ++ra[i];
        }
      }
    }
  }
  return rep;
}

}  // namespace sumprod
