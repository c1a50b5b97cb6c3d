#include "sumprod/entropy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace sumprod {

namespace {

// log2 T - (1/T) sum M log2 M
long double entropy_ld(const std::uint64_t* m, std::size_t count) {
  long double total = 0, acc = 0;
  for (std::size_t i = 0; i < count; ++i) {
    long double v = static_cast<long double>(m[i]);
    total += v;
    acc += v * std::log2(v);
  }
  if (total <= 0) return 0;
  long double h = std::log2(total) - acc / total;
  return h < 0 ? 0 : h;
}

void check_level(const DiscreteMeasure& mu, int j, const char* who) {
  if (j < 0 || j > mu.n()) {
    throw std::out_of_range(std::string(who) + ": level " + std::to_string(j) + " outside [0, " +
                            std::to_string(mu.n()) + "]");
  }
}

std::vector<std::uint64_t> cell_masses(const DiscreteMeasure& mu, int j) {
  DiscreteMeasure c = coarsen(mu, j);
  std::vector<std::uint64_t> out;
  out.reserve(c.size());
  for (const auto& a : c.atoms()) out.push_back(a.mass);
  return out;
}

// Entropy of bins given as (bin, mass) pairs; sorts in place.
double binned_entropy(std::vector<std::pair<std::int64_t, std::uint64_t>>& bins) {
  std::sort(bins.begin(), bins.end());
  std::vector<std::uint64_t> masses;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i > 0 && bins[i].first == bins[i - 1].first) {
      masses.back() += bins[i].second;
    } else {
      masses.push_back(bins[i].second);
    }
  }
  return entropy_of_masses(masses);
}

}  // namespace

double entropy_of_masses(const std::vector<std::uint64_t>& masses) {
  return static_cast<double>(entropy_ld(masses.data(), masses.size()));
}

double entropy(const DiscreteMeasure& mu, int j) {
  check_level(mu, j, "entropy");
  return entropy_of_masses(cell_masses(mu, j));
}

ConditionalEntropy conditional_entropy(const DiscreteMeasure& mu, int j_fine, int j_coarse) {
  check_level(mu, j_fine, "conditional_entropy");
  check_level(mu, j_coarse, "conditional_entropy");
  if (j_coarse > j_fine) throw std::invalid_argument("conditional_entropy: need j_coarse <= j_fine");
  DiscreteMeasure fine = coarsen(mu, j_fine);
  const int d = j_fine - j_coarse;
  std::vector<std::tuple<std::int64_t, std::int64_t, std::uint64_t>> keyed;
  keyed.reserve(fine.size());
  for (const auto& a : fine.atoms()) keyed.emplace_back(a.x >> d, a.y >> d, a.mass);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& p, const auto& q) {
    return std::tie(std::get<0>(p), std::get<1>(p)) < std::tie(std::get<0>(q), std::get<1>(q));
  });
  const long double total = static_cast<long double>(fine.total());
  long double def = 0;
  std::vector<std::uint64_t> group;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    group.push_back(std::get<2>(keyed[i]));
    bool last = i + 1 == keyed.size() || std::get<0>(keyed[i + 1]) != std::get<0>(keyed[i]) ||
                std::get<1>(keyed[i + 1]) != std::get<1>(keyed[i]);
    if (last) {
      long double me = 0;
      for (auto v : group) me += static_cast<long double>(v);
      def += me / total * entropy_ld(group.data(), group.size());
      group.clear();
    }
  }
  ConditionalEntropy out;
  out.by_definition = static_cast<double>(def);
  out.by_difference = static_cast<double>(entropy_ld(cell_masses(mu, j_fine).data(), fine.size()) -
                                          static_cast<long double>(entropy(mu, j_coarse)));
  return out;
}

double l2_entropy_gap(const DiscreteMeasure& mu, int j) {
  return entropy(mu, j) - (mu.dim() * j - discretize_density_l2(mu, j).log2_value());
}

ConcavityReport concavity_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int j) {
  if (mu.dim() != 1 || nu.dim() != 1) throw std::invalid_argument("concavity_check: measures must be 1-d");
  ConcavityReport rep;
  rep.lhs = entropy(convolve(mu, nu), j);
  long double rhs = 0;
  for (const auto& a : nu.atoms()) {
    rhs += static_cast<long double>(a.mass) / nu.total() * entropy(translate(mu, a.x), j);
  }
  rep.rhs = static_cast<double>(rhs);
  rep.holds = rep.lhs >= rep.rhs - kLogTolerance;
  return rep;
}

double projected_entropy(const DiscreteMeasure& mu2, const Dyadic& c, int k) {
  if (mu2.dim() != 2) throw std::invalid_argument("projected_entropy: measure must be 2-d");
  check_level(mu2, k, "projected_entropy");
  const int sh = mu2.n() - k;
  std::vector<std::pair<std::int64_t, std::uint64_t>> bins;
  bins.reserve(mu2.size());
  for (const auto& a : mu2.atoms()) bins.emplace_back(project_index(a.x, a.y, c) >> sh, a.mass);
  return binned_entropy(bins);
}

std::vector<CellEntropy> cell_projected_entropies(const DiscreteMeasure& mu2, const Dyadic& c, int j0, int k) {
  if (mu2.dim() != 2) throw std::invalid_argument("cell_projected_entropies: measure must be 2-d");
  check_level(mu2, j0, "cell_projected_entropies");
  const int sh = mu2.n() - j0;
  if (k < 0 || k > sh) throw std::out_of_range("cell_projected_entropies: need 0 <= k <= n - j0");
  std::vector<Atom> atoms = mu2.atoms();
  std::stable_sort(atoms.begin(), atoms.end(), [sh](const Atom& p, const Atom& q) {
    return std::make_pair(p.x >> sh, p.y >> sh) < std::make_pair(q.x >> sh, q.y >> sh);
  });
  std::vector<CellEntropy> out;
  std::vector<std::pair<std::int64_t, std::uint64_t>> bins;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const std::int64_t qx = atoms[i].x >> sh, qy = atoms[i].y >> sh;
    CellEntropy cell{qx, qy, 0, 0};
    bins.clear();
    for (; i < atoms.size() && (atoms[i].x >> sh) == qx && (atoms[i].y >> sh) == qy; ++i) {
      const std::int64_t lx = atoms[i].x - (qx << sh), ly = atoms[i].y - (qy << sh);
      bins.emplace_back(project_index(lx, ly, c) >> (sh - k), atoms[i].mass);
      cell.mass += atoms[i].mass;
    }
    cell.entropy = binned_entropy(bins);
    out.push_back(cell);
  }
  return out;
}

EntropyChainReport entropy_chain(const DiscreteMeasure& mu2, const Dyadic& c, const std::vector<int>& cuts) {
  if (mu2.dim() != 2) throw std::invalid_argument("entropy_chain: measure must be 2-d");
  if (cuts.size() < 2 || cuts.front() != 0 || cuts.back() != mu2.n()) {
    throw std::invalid_argument("entropy_chain: cuts must run from 0 to n");
  }
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] <= cuts[i - 1]) throw std::invalid_argument("entropy_chain: cuts must be strictly increasing");
  }
  EntropyChainReport rep;
  rep.cuts = cuts;
  rep.lhs = projected_entropy(mu2, c, mu2.n());
  const long double total = static_cast<long double>(mu2.total());
  long double sum = 0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    auto cells = cell_projected_entropies(mu2, c, cuts[j], cuts[j + 1] - cuts[j]);
    long double w = 0;
    for (const auto& q : cells) w += static_cast<long double>(q.mass) / total * q.entropy;
    rep.blocks.push_back({cuts[j], cuts[j + 1], cells.size(), static_cast<double>(w)});
    sum += w;
  }
  rep.rhs_sum = static_cast<double>(sum);
  rep.correction = static_cast<double>(rep.blocks.size()) * kChainCorrection;
  rep.holds = rep.lhs >= rep.rhs_sum - rep.correction - kLogTolerance;
  return rep;
}

FiberBound uniform_fiber_entropy_bound(const DiscreteMeasure& mu2, const BranchingProfile& profile_a,
                                       const Dyadic& c, int lo, int hi) {
  const int m = profile_a.m;
  if (mu2.n() != m * profile_a.levels()) throw std::invalid_argument("uniform_fiber_entropy_bound: scale mismatch");
  if (lo < 0 || hi < lo || hi >= profile_a.levels()) throw std::out_of_range("uniform_fiber_entropy_bound: bad J");
  auto cells = cell_projected_entropies(mu2, c, m * lo, m * (hi - lo + 1));
  FiberBound fb;
  fb.cells = cells.size();
  fb.min_entropy = cells.empty() ? 0 : cells.front().entropy;
  for (const auto& q : cells) fb.min_entropy = std::min(fb.min_entropy, q.entropy);
  fb.bound = profile_a.log2_range(lo, hi) - 1;
  fb.holds = fb.min_entropy >= fb.bound - kLogTolerance;
  return fb;
}

}  // namespace sumprod
