#include "sumprod/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sumprod/uniformization.hpp"

namespace sumprod {

std::string_view tag_name(IntervalTag t) {
  switch (t) {
    case IntervalTag::N_B: return "N_B";
    case IntervalTag::N_plus_case_a: return "N_plus_case_a";
    case IntervalTag::N_plus_case_b: return "N_plus_case_b";
    case IntervalTag::low: return "low";
    case IntervalTag::high: return "high";
    case IntervalTag::useless: return "useless";
  }
  return "?";
}

IntervalTag parse_tag(std::string_view s) {
  for (auto t : {IntervalTag::N_B, IntervalTag::N_plus_case_a, IntervalTag::N_plus_case_b, IntervalTag::low,
                 IntervalTag::high, IntervalTag::useless}) {
    if (tag_name(t) == s) return t;
  }
  throw std::invalid_argument("unknown interval tag '" + std::string(s) + "'");
}

int IntervalFamily::total_length() const {
  int t = 0;
  for (const auto& i : intervals) t += i.length();
  return t;
}

int IntervalFamily::total_length(IntervalTag tag) const {
  int t = 0;
  for (const auto& i : intervals)
    if (i.tag == tag) t += i.length();
  return t;
}

std::vector<Interval> IntervalFamily::with_tag(IntervalTag tag) const {
  std::vector<Interval> out;
  for (const auto& i : intervals)
    if (i.tag == tag) out.push_back(i);
  return out;
}

void IntervalFamily::validate() const {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].hi < intervals[i].lo) throw std::logic_error("interval with hi < lo");
    if (i > 0 && intervals[i].lo <= intervals[i - 1].hi) throw std::logic_error("intervals overlap or are unsorted");
  }
}

IntervalFamily trivial_intervals(const BranchingProfile& coarse) {
  IntervalFamily fam;
  int start = -1;
  for (int s = 0; s <= coarse.levels(); ++s) {
    bool trivial = s < coarse.levels() && coarse.at(s) == 1;
    if (trivial && start < 0) start = s;
    if (!trivial && start >= 0) {
      fam.intervals.push_back({start, s - 1, IntervalTag::N_B});
      start = -1;
    }
  }
  return fam;
}

IntervalFamily lift_intervals(const IntervalFamily& family, int ell) {
  if (ell < 1) throw std::invalid_argument("lift_intervals: ell must be >= 1");
  IntervalFamily out;
  for (const auto& i : family.intervals) out.intervals.push_back({ell * i.lo, ell * (i.hi + 1) - 1, i.tag});
  return out;
}

IntervalFamily extend_intervals(const BranchingProfile& fine_b, const IntervalFamily& lifted, double zeta, int ell) {
  if (!(zeta > 0)) throw std::invalid_argument("extend_intervals: zeta must be positive");
  if (ell * zeta < 1.0 - 1e-12) throw std::invalid_argument("extend_intervals: need ell * zeta >= 1");
  lifted.validate();
  const int m = fine_b.m;
  for (const auto& i : lifted.intervals) {
    if (i.lo < 0 || i.hi >= fine_b.levels()) throw std::out_of_range("extend_intervals: interval outside profile");
  }
  std::vector<Interval> out;
  int k = static_cast<int>(lifted.intervals.size()) - 1;
  while (k >= 0) {
    int lo = lifted.intervals[static_cast<std::size_t>(k)].lo;
    const int hi = lifted.intervals[static_cast<std::size_t>(k)].hi;
    IntervalTag tag;
    for (;;) {
      if (fine_b.log2_range(lo, hi) >= zeta * m * (hi - lo + 1) - kLogTolerance) {
        tag = IntervalTag::N_plus_case_a;
        break;
      }
      if (lo == 0) {
        tag = IntervalTag::N_plus_case_b;
        break;
      }
      --lo;
    }
    --k;
    // anything the extension reached is swallowed; it can only be contained,
    // since a trivial level never completes case (a)
    while (k >= 0 && lifted.intervals[static_cast<std::size_t>(k)].hi >= lo) {
      if (lifted.intervals[static_cast<std::size_t>(k)].lo < lo) {
        throw std::logic_error("extend_intervals: extension stopped inside an earlier interval");
      }
      --k;
    }
    out.push_back({lo, hi, tag});
  }
  std::reverse(out.begin(), out.end());
  IntervalFamily fam{std::move(out)};
  fam.validate();
  return fam;
}

std::vector<SandwichViolation> sandwich_violations(const BranchingProfile& fine_b, const IntervalFamily& extended,
                                                   double zeta) {
  std::vector<SandwichViolation> out;
  for (const auto& j : extended.intervals) {
    if (!is_case_a(j.tag)) continue;
    double r = fine_b.log2_range(j.lo, j.hi);
    double lower = zeta * fine_b.m * j.length();
    double upper = 2 * lower;
    if (r < lower - kLogTolerance || r > upper + kLogTolerance) out.push_back({j, r, lower, upper});
  }
  return out;
}

IntervalFamily classify_low_high(const IntervalFamily& family, const BranchingProfile& fine_a, double Gamma) {
  IntervalFamily out = family;
  for (auto& j : out.intervals) {
    if (!is_case_a(j.tag)) continue;
    double r = fine_a.log2_range(j.lo, j.hi);
    j.tag = r <= Gamma * fine_a.m * j.length() + kLogTolerance ? IntervalTag::low : IntervalTag::high;
  }
  return out;
}

IntervalFamily low_partition(const IntervalFamily& classified, int levels) {
  IntervalFamily out;
  int next = 0;
  for (const auto& j : classified.intervals) {
    if (j.tag != IntervalTag::low) continue;
    if (j.lo > next) out.intervals.push_back({next, j.lo - 1, IntervalTag::useless});
    out.intervals.push_back(j);
    next = j.hi + 1;
  }
  if (next < levels) out.intervals.push_back({next, levels - 1, IntervalTag::useless});
  return out;
}

std::vector<int> xi_levels(const Interval& j, const Dyadic& xi) {
  if (xi.num() <= 0 || xi > Dyadic(1, 1)) throw std::invalid_argument("xi must lie in (0, 1/2]");
  std::int64_t head = xi.ceil_mul(j.length());
  if (head < 1) throw std::invalid_argument("xi_levels: need xi * |J| >= 1");
  // keep ceil(xi |J|) levels: >= xi |J| gives the branching floor, <= 2 xi |J|
  // (as xi |J| >= 1) gives the separation
  std::vector<int> out;
  for (int s = j.lo + static_cast<int>(head); s <= j.hi; ++s) out.push_back(s);
  return out;
}

PruneTwoResult prune_separation_2(const DeltaSet& b, const IntervalFamily& family, const Dyadic& xi,
                                  const BranchingProfile& fine_b) {
  family.validate();
  std::vector<int> S;
  for (const auto& j : family.intervals) {
    if (!is_case_a(j.tag)) continue;
    if (xi.floor_mul(j.length()) < 1) {
      throw std::invalid_argument("prune_separation_2: xi * |J| < 1 for J = {" + std::to_string(j.lo) + ".." +
                                  std::to_string(j.hi) + "}");
    }
    auto lv = xi_levels(j, xi);
    S.insert(S.end(), lv.begin(), lv.end());
  }
  auto part = collapse(b, fine_b, S);
  std::sort(S.begin(), S.end());
  return {std::move(part.set), std::move(part.profile), std::move(S)};
}

PruneTwoAudit audit_prune_separation_2(const DeltaSet& pruned, const BranchingProfile& pruned_profile,
                                       const IntervalFamily& family, const Dyadic& xi, double zeta) {
  PruneTwoAudit audit;
  const int m = pruned_profile.m;
  const double x = xi.value();
  for (const auto& j : family.intervals) {
    if (!is_case_a(j.tag)) continue;
    if (pruned_profile.log2_range(j.lo, j.hi) < x * zeta * m * j.length() - kLogTolerance) ++audit.floor_violations;
    // cells of level hi+1 inside a common level-lo cell, distance in units of
    // the level-(hi+1) side must be at least 2^(m|J|(1 - 2 xi))
    const double need = m * j.length() * (1.0 - 2.0 * x);
    auto fine = level_cells(pruned, m, j.hi + 1);
    const int up = m * j.length();
    std::size_t start = 0;
    while (start < fine.size()) {
      std::size_t end = start;
      while (end < fine.size() && (fine[end] >> up) == (fine[start] >> up)) ++end;
      for (std::size_t p = start; p < end; ++p) {
        for (std::size_t q = p + 1; q < end; ++q) {
          ++audit.pairs_checked;
          std::int64_t gap = fine[q] - fine[p] - 1;
          if (gap < 1 || log2_int(gap) < need - kLogTolerance) ++audit.separation_violations;
        }
      }
      start = end;
    }
  }
  return audit;
}

}  // namespace sumprod
