#include "sumprod/dyadic_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "sumprod/rng.hpp"

namespace sumprod {

void ScaleSpec::validate() const {
  if (m < 1 || ell < 1 || N < 1) throw std::invalid_argument("ScaleSpec: m, ell, N must be >= 1");
  if (n() > kMaxResolution) throw std::invalid_argument("ScaleSpec: ell*m*N too large");
}

std::int64_t covering_number(const DeltaSet& a, int r_exp) {
  if (r_exp < 0 || r_exp > a.n()) {
    throw std::out_of_range("covering_number: r_exp " + std::to_string(r_exp) + " outside [0, n]");
  }
  const int shift = a.n() - r_exp;
  std::int64_t count = 0;
  std::int64_t last = -1;
  for (std::int64_t k : a.indices()) {
    std::int64_t cell = k >> shift;
    if (count == 0 || cell != last) {
      ++count;
      last = cell;
    }
  }
  return count;
}

std::vector<std::int64_t> scaled_indices(const DeltaSet& b, const Dyadic& c) {
  std::vector<std::int64_t> out;
  out.reserve(b.size());
  for (std::int64_t k : b.indices()) out.push_back(c.floor_mul(k));
  // c >= 0 keeps the sequence non-decreasing
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_sumset_args(const DeltaSet& a, const Dyadic& c, const DeltaSet& b) {
  if (a.n() != b.n()) throw std::invalid_argument("sumset: scale mismatch");
  if (c.negative() || c > Dyadic::integer(1)) throw std::invalid_argument("sumset: c must lie in [0, 1]");
  if (c.exp() > a.n()) throw std::invalid_argument("sumset: c = " + c.str() + " not representable at 2^-n");
}

}  // namespace

DeltaSet sumset(const DeltaSet& a, const Dyadic& c, const DeltaSet& b, SumsetKernel kernel) {
  check_sumset_args(a, c, b);
  std::vector<std::int64_t> cb = scaled_indices(b, c);
  std::vector<std::int64_t> out = integer_sumset(a.indices(), cb, kernel);
  std::int64_t w = std::max(a.width(), out.empty() ? 1 : width_for(a.n(), out.back()));
  return DeltaSet(a.n(), std::move(out), w);
}

std::size_t sumset_size(const DeltaSet& a, const Dyadic& c, const DeltaSet& b, SumsetKernel kernel) {
  check_sumset_args(a, c, b);
  std::vector<std::int64_t> cb = scaled_indices(b, c);
  return integer_sumset_size(a.indices(), cb, kernel);
}

DeltaSet iterated_sum(const DeltaSet& b, int k, std::int64_t max_width) {
  if (k < 1) throw std::invalid_argument("iterated_sum: k must be >= 1");
  if (b.empty()) return b;
  DeltaSet acc = b;
  for (int i = 2; i <= k; ++i) {
    std::int64_t top = acc.back() + b.back();
    if (width_for(b.n(), top) > max_width) throw std::length_error("iterated_sum: domain width above limit");
    acc = sumset(acc, Dyadic::integer(1), b);
  }
  return acc;
}

FrostmanReport frostman_check(const DeltaSet& a, double kappa, int r_min_exp, int r_max_exp) {
  if (a.empty()) throw std::invalid_argument("frostman_check: empty set");
  if (r_min_exp < r_max_exp) throw std::invalid_argument("frostman_check: need r_min_exp >= r_max_exp");
  if (r_max_exp < 0) throw std::invalid_argument("frostman_check: negative radius exponent");
  FrostmanReport rep;
  rep.kappa = kappa;
  rep.r_min_exp = r_min_exp;
  rep.r_max_exp = r_max_exp;
  rep.worst_ratio = -1;
  const auto& idx = a.indices();
  const double total = static_cast<double>(a.size());
  for (int j = r_max_exp; j <= r_min_exp; ++j) {
    // closed ball of radius 2^-j in index units; below one grid step only x itself
    std::int64_t h = j <= a.n() ? (std::int64_t{1} << (a.n() - j)) : 0;
    double scale = std::exp2(kappa * j) / total;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      while (idx[lo] < idx[i] - h) ++lo;
      if (hi < i) hi = i;
      while (hi + 1 < idx.size() && idx[hi + 1] <= idx[i] + h) ++hi;
      double ratio = static_cast<double>(hi - lo + 1) * scale;
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.witness_index = idx[i];
        rep.witness_r_exp = j;
      }
    }
  }
  return rep;
}

DeltaSet gen_ap(int n, std::int64_t size, std::int64_t step, std::int64_t start) {
  if (size < 1) throw std::invalid_argument("gen_ap: size must be >= 1");
  if (n < 1 || n > kMaxResolution) throw std::invalid_argument("gen_ap: bad resolution");
  if (step == 0) step = std::max<std::int64_t>(1, (std::int64_t{1} << n) / size);
  if (step < 0 || start < 0) throw std::invalid_argument("gen_ap: negative step or start");
  std::vector<std::int64_t> idx(static_cast<std::size_t>(size));
  for (std::int64_t i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = start + i * step;
  return DeltaSet::from_unsorted(n, std::move(idx));
}

ThreeProgressions gen_example_form87(std::int64_t n_param) {
  if (n_param < 1) throw std::invalid_argument("gen_example_form87: n must be >= 1");
  std::int64_t r = 1;
  while (r * r * r * r < n_param) ++r;
  if (r * r * r * r != n_param) {
    throw std::invalid_argument("gen_example_form87: " + std::to_string(n_param) + " is not a fourth power");
  }
  const std::int64_t s = r * r;
  ThreeProgressions out;
  out.n_param = n_param;
  auto ur = static_cast<std::uint64_t>(r);
  int res = 0;
  if ((ur & (ur - 1)) == 0) {
    // 1/s is itself a grid step
    while ((std::int64_t{1} << res) < s) ++res;
    res = std::max(res, 1);
    out.exact = true;
  } else {
    res = 2;
    while ((std::int64_t{1} << res) < 4 * n_param) ++res;
    out.exact = false;
  }
  const std::int64_t one = std::int64_t{1} << res;
  std::vector<std::int64_t> ai, bi;
  for (std::int64_t i = 1; i <= s; ++i) ai.push_back(i * one / s);
  for (std::int64_t j = 1; j <= r; ++j) bi.push_back(j * one / r);
  out.a = DeltaSet::from_unsorted(res, ai);
  out.b = DeltaSet::from_unsorted(res, bi);
  out.c = out.b;
  return out;
}

namespace {

std::vector<std::int64_t> pick_children(Rng& rng, int m, std::int64_t r) {
  const std::int64_t full = std::int64_t{1} << m;
  std::vector<std::int64_t> out;
  if (full <= (std::int64_t{1} << 16)) {
    std::vector<std::int64_t> pool(static_cast<std::size_t>(full));
    std::iota(pool.begin(), pool.end(), 0);
    for (std::int64_t i = 0; i < r; ++i) {
      auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(full - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    out.assign(pool.begin(), pool.begin() + r);
  } else {
    std::set<std::int64_t> chosen;  // Floyd's sampling
    for (std::int64_t j = full - r; j < full; ++j) {
      auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    out.assign(chosen.begin(), chosen.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DeltaSet gen_uniform_tree(const BranchingProfile& profile, std::uint64_t seed, Placement placement) {
  profile.validate();
  const int levels = profile.levels();
  const int n = profile.m * levels;
  if (levels < 1 || n > kMaxResolution) throw std::invalid_argument("gen_uniform_tree: bad scale");
  if (profile.cardinality() > (std::int64_t{1} << 26)) throw std::length_error("gen_uniform_tree: set too large");
  Rng rng(seed);
  std::vector<std::int64_t> cells{0};
  for (int s = 0; s < levels; ++s) {
    const std::int64_t r = profile.at(s);
    std::vector<std::int64_t> next;
    next.reserve(cells.size() * static_cast<std::size_t>(r));
    for (std::int64_t cell : cells) {
      if (placement == Placement::left_packed) {
        for (std::int64_t i = 0; i < r; ++i) next.push_back((cell << profile.m) + i);
      } else {
        for (std::int64_t off : pick_children(rng, profile.m, r)) next.push_back((cell << profile.m) + off);
      }
    }
    cells = std::move(next);
  }
  return DeltaSet(n, std::move(cells), 1);
}

DeltaSet gen_uniform_tree(const ScaleSpec& spec, const BranchingProfile& profile, std::uint64_t seed,
                          Placement placement) {
  spec.validate();
  if (profile.m != spec.m) throw std::invalid_argument("gen_uniform_tree: profile m differs from ScaleSpec m");
  if (profile.levels() != spec.fine_levels()) {
    throw std::invalid_argument("gen_uniform_tree: profile length " + std::to_string(profile.levels()) +
                                " differs from ell*N = " + std::to_string(spec.fine_levels()));
  }
  return gen_uniform_tree(profile, seed, placement);
}

}  // namespace sumprod
