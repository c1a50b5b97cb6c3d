#pragma once

#include <optional>
#include <vector>

#include "sumprod/branching.hpp"
#include "sumprod/delta_set.hpp"

namespace sumprod {

// Profile of A iff every level-s cell meeting A has the same number of
// level-(s+1) children meeting A. Requires A.n() == m * N.
std::optional<BranchingProfile> is_uniform(const DeltaSet& a, int m, int N);

// Distinct level-s cells (side 2^-(m s)) meeting A, in increasing order.
std::vector<std::int64_t> level_cells(const DeltaSet& a, int m, int s);

struct UniformPart {
  DeltaSet set;
  BranchingProfile profile;
};

// Bottom-up dyadic pigeonhole. At each level the parents are bucketed by
// ceil(log2(child count)); the bucket carrying the most points after every
// parent in it is cut to the bucket's smallest child count (leftmost children
// kept) wins. |A'| >= |A| / (2m)^N.
UniformPart uniformize(const DeltaSet& a, int m, int N);

// Keep only the leftmost child at every level in S. Exact:
// |A'| = |A| / prod_{s in S} R(s).
UniformPart collapse(const DeltaSet& a, const BranchingProfile& profile, const std::vector<int>& levels);

// Top-down: at level s = 1..N, inside each maximal run of adjacent cells keep
// the 1st, 3rd, ... cell, then cut every parent to the smallest surviving
// child count. Afterwards distinct level-s cells are never adjacent.
UniformPart prune_separation_1(const DeltaSet& b, int m, int N);

struct SeparationViolation {
  int level = 0;
  std::int64_t left = 0, right = 0;  // offending cell indices
};

// Pairs of distinct level-s cells (0 <= s <= N) closer than 2^-(m s).
std::vector<SeparationViolation> separation_violations(const DeltaSet& b, int m, int N);

struct PolarisationResult {
  bool ok = true;
  std::vector<int> violations;  // levels with R_B(s) > 1 and R_A(s) < 2^((1-eta) m)
};

PolarisationResult polarisation_check(const BranchingProfile& a, const BranchingProfile& b, double eta);

// Smallest eta making (A, B) polarised (0 when B never branches).
double polarisation_eta(const BranchingProfile& a, const BranchingProfile& b);

}  // namespace sumprod
