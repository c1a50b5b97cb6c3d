#pragma once

#include <cstdint>
#include <vector>

#include "sumprod/branching.hpp"
#include "sumprod/delta_set.hpp"
#include "sumprod/dyadic.hpp"
#include "sumprod/sumset_kernel.hpp"

namespace sumprod {

struct ScaleSpec {
  int m = 1;
  int ell = 1;
  int N = 1;
  int n() const { return ell * m * N; }
  int fine_levels() const { return ell * N; }
  void validate() const;
};

// Number of dyadic cells of side 2^-r_exp meeting A.
std::int64_t covering_number(const DeltaSet& a, int r_exp);

// Cells hit by {a + c b}: index k_a + floor(c k_b). Requires 0 <= c <= 1 with
// c.exp() <= n.
DeltaSet sumset(const DeltaSet& a, const Dyadic& c, const DeltaSet& b, SumsetKernel kernel = SumsetKernel::automatic);
std::size_t sumset_size(const DeltaSet& a, const Dyadic& c, const DeltaSet& b,
                        SumsetKernel kernel = SumsetKernel::automatic);

// {floor(c k) : k in B}, deduplicated; the image of B under the grid map of c.
std::vector<std::int64_t> scaled_indices(const DeltaSet& b, const Dyadic& c);

// k-fold sum B + ... + B. Throws std::length_error if the result would need a
// domain wider than max_width.
DeltaSet iterated_sum(const DeltaSet& b, int k, std::int64_t max_width = std::int64_t{1} << 20);

struct FrostmanReport {
  double kappa = 0;
  int r_min_exp = 0;  // smallest radius 2^-r_min_exp
  int r_max_exp = 0;  // largest radius 2^-r_max_exp
  double worst_ratio = 0;
  std::int64_t witness_index = 0;
  int witness_r_exp = 0;
  bool holds(double constant) const { return worst_ratio <= constant; }
};

// max over x in A and r = 2^-j (r_max_exp <= j <= r_min_exp) of
// |A ∩ [x - r, x + r]| / (r^kappa |A|).
FrostmanReport frostman_check(const DeltaSet& a, double kappa, int r_min_exp, int r_max_exp);

// `size` points starting at `start` with the given step; step 0 spreads the
// points evenly over [0, 1).
DeltaSet gen_ap(int n, std::int64_t size, std::int64_t step = 0, std::int64_t start = 0);

struct ThreeProgressions {
  std::int64_t n_param = 1;
  DeltaSet a, b, c;
  bool exact = true;  // false when the progressions had to be snapped to the grid
};

// A = {i / n^(1/2)}, B = C = {j / n^(1/4)}, i, j >= 1.
ThreeProgressions gen_example_form87(std::int64_t n_param);

enum class Placement { random, left_packed };

DeltaSet gen_uniform_tree(const BranchingProfile& profile, std::uint64_t seed, Placement placement = Placement::random);
DeltaSet gen_uniform_tree(const ScaleSpec& spec, const BranchingProfile& profile, std::uint64_t seed,
                          Placement placement = Placement::random);

}  // namespace sumprod
