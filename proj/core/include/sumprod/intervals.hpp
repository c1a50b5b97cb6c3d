#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sumprod/branching.hpp"
#include "sumprod/delta_set.hpp"
#include "sumprod/dyadic.hpp"

namespace sumprod {

enum class IntervalTag { N_B, N_plus_case_a, N_plus_case_b, low, high, useless };

std::string_view tag_name(IntervalTag t);
IntervalTag parse_tag(std::string_view s);

// Integer interval {lo, ..., hi} of scale levels.
struct Interval {
  int lo = 0;
  int hi = 0;
  IntervalTag tag = IntervalTag::N_B;
  int length() const { return hi - lo + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalFamily {
  std::vector<Interval> intervals;  // sorted by lo, pairwise disjoint

  int total_length() const;
  int total_length(IntervalTag t) const;
  std::vector<Interval> with_tag(IntervalTag t) const;
  // Throws std::logic_error on overlap or disorder.
  void validate() const;
  friend bool operator==(const IntervalFamily&, const IntervalFamily&) = default;
};

inline bool is_case_a(IntervalTag t) {
  return t == IntervalTag::N_plus_case_a || t == IntervalTag::low || t == IntervalTag::high;
}

// Maximal runs of coarse levels with R(sigma) = 1.
IntervalFamily trivial_intervals(const BranchingProfile& coarse);

// I -> {ell lo, ..., ell (hi + 1) - 1}.
IntervalFamily lift_intervals(const IntervalFamily& family, int ell);

// Right-to-left extension. Each interval grows leftwards one level at a time
// until R_B(J) >= 2^(zeta m |J|) (case a) or it contains level 0 (case b).
// Earlier intervals that the extension meets are absorbed. Requires ell*zeta >= 1.
IntervalFamily extend_intervals(const BranchingProfile& fine_b, const IntervalFamily& lifted, double zeta, int ell);

struct SandwichViolation {
  Interval interval;
  double log2_r = 0, lower = 0, upper = 0;
};

// Case-(a) intervals violating 2^(zeta m|J|) <= R(J) <= 2^(2 zeta m|J|).
std::vector<SandwichViolation> sandwich_violations(const BranchingProfile& fine_b, const IntervalFamily& extended,
                                                   double zeta);

// Case-(a) intervals become low when R_A(J) <= 2^(Gamma m |J|), high otherwise.
IntervalFamily classify_low_high(const IntervalFamily& family, const BranchingProfile& fine_a, double Gamma);

// The partition of [0, levels) into the low intervals and the maximal gaps
// between them; gaps are tagged `useless`.
IntervalFamily low_partition(const IntervalFamily& classified, int levels);

// Levels collapsed for one case-(a) interval J = {lo..hi}: the top part
// {lo + ceil(xi |J|), ..., hi}.
std::vector<int> xi_levels(const Interval& j, const Dyadic& xi);

struct PruneTwoResult {
  DeltaSet set;
  BranchingProfile profile;
  std::vector<int> collapsed;
};

// Collapses the union of xi_levels(J) over the case-(a) intervals. Needs
// 0 < xi <= 1/2 and xi |J| >= 1 for each of them.
PruneTwoResult prune_separation_2(const DeltaSet& b, const IntervalFamily& family, const Dyadic& xi,
                                  const BranchingProfile& fine_b);

struct PruneTwoAudit {
  int floor_violations = 0;       // R_B''(J) < 2^(xi zeta m |J|)
  int separation_violations = 0;  // distances below (delta_J / Delta_J)^(2 xi) Delta_J
  std::int64_t pairs_checked = 0;
};

PruneTwoAudit audit_prune_separation_2(const DeltaSet& pruned, const BranchingProfile& pruned_profile,
                                       const IntervalFamily& family, const Dyadic& xi, double zeta);

}  // namespace sumprod
