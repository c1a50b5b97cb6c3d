#pragma once

#include <cstdint>
#include <vector>

namespace sumprod {

// Slack used whenever a branching number is compared against a real power of
// two, so that exact ties like 2^4 >= 2^(0.25 * 2 * 8) count as satisfied.
inline constexpr double kLogTolerance = 0x1.0p-30;

// log2 of a positive integer; exact for powers of two.
double log2_int(std::int64_t x);

// R(s) for s = 0..levels-1, each in [1, 2^m].
struct BranchingProfile {
  int m = 1;
  std::vector<std::int64_t> R;

  BranchingProfile() = default;
  BranchingProfile(int m_, std::vector<std::int64_t> r) : m(m_), R(std::move(r)) {}

  int levels() const { return static_cast<int>(R.size()); }
  std::int64_t at(int s) const { return R.at(static_cast<std::size_t>(s)); }

  // prod R(s); throws std::overflow_error past 2^62.
  std::int64_t cardinality() const;
  // sum of log2 R(s) over lo <= s <= hi (empty when hi < lo).
  double log2_range(int lo, int hi) const;
  double log2_total() const { return log2_range(0, levels() - 1); }
  // R^{ell m}(sigma) = prod_{s = ell sigma}^{ell(sigma+1)-1} R(s); needs levels % ell == 0.
  BranchingProfile coarsen(int ell) const;

  void validate() const;
  friend bool operator==(const BranchingProfile&, const BranchingProfile&) = default;
};

}  // namespace sumprod
