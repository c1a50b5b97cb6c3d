#include "sumprod/uniformization.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <string>

namespace sumprod {

namespace {

void check_scale(const DeltaSet& a, int m, int N, const char* who) {
  if (m < 1 || N < 1) throw std::invalid_argument(std::string(who) + ": m and N must be >= 1");
  if (a.n() != m * N) {
    throw std::invalid_argument(std::string(who) + ": scale mismatch, n = " + std::to_string(a.n()) +
                                " but m*N = " + std::to_string(m * N));
  }
  if (a.empty()) throw std::invalid_argument(std::string(who) + ": empty set");
}

void check_unit_interval(const DeltaSet& a, const char* who) {
  if (a.back() >= (std::int64_t{1} << a.n())) throw std::invalid_argument(std::string(who) + ": set must lie in [0,1)");
}

// Child count of every parent at level s, in order of appearance.
std::vector<std::int64_t> child_counts(const std::vector<std::int64_t>& pts, int n, int m, int s) {
  const int ps = n - m * s;
  const int cs = n - m * (s + 1);
  std::vector<std::int64_t> counts;
  std::int64_t parent = -1, child = -1;
  bool first = true;
  for (std::int64_t k : pts) {
    std::int64_t p = k >> ps, c = k >> cs;
    if (first || p != parent) {
      counts.push_back(1);
      parent = p;
      child = c;
      first = false;
    } else if (c != child) {
      ++counts.back();
      child = c;
    }
  }
  return counts;
}

int bucket_of(std::int64_t count) { return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(count - 1))); }

// Keeps points whose level-s parent (by ordinal) is selected and whose child
// ordinal within that parent is below the parent's quota.
std::vector<std::int64_t> filter_children(const std::vector<std::int64_t>& pts, int n, int m, int s,
                                          const std::vector<std::int64_t>& quota) {
  const int ps = n - m * s;
  const int cs = n - m * (s + 1);
  std::vector<std::int64_t> out;
  out.reserve(pts.size());
  std::int64_t parent = -1, child = -1;
  std::int64_t parent_ord = -1, child_ord = 0;
  bool first = true;
  for (std::int64_t k : pts) {
    std::int64_t p = k >> ps, c = k >> cs;
    if (first || p != parent) {
      ++parent_ord;
      child_ord = 0;
      parent = p;
      child = c;
      first = false;
    } else if (c != child) {
      ++child_ord;
      child = c;
    }
    if (child_ord < quota[static_cast<std::size_t>(parent_ord)]) out.push_back(k);
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> level_cells(const DeltaSet& a, int m, int s) {
  const int shift = a.n() - m * s;
  if (shift < 0) throw std::invalid_argument("level_cells: level below grid resolution");
  std::vector<std::int64_t> out;
  for (std::int64_t k : a.indices()) {
    std::int64_t c = k >> shift;
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

std::optional<BranchingProfile> is_uniform(const DeltaSet& a, int m, int N) {
  check_scale(a, m, N, "is_uniform");
  BranchingProfile prof;
  prof.m = m;
  for (int s = 0; s < N; ++s) {
    auto counts = child_counts(a.indices(), a.n(), m, s);
    for (std::int64_t c : counts) {
      if (c != counts.front()) return std::nullopt;
    }
    prof.R.push_back(counts.front());
  }
  return prof;
}

UniformPart uniformize(const DeltaSet& a, int m, int N) {
  check_scale(a, m, N, "uniformize");
  const int n = a.n();
  std::vector<std::int64_t> pts = a.indices();
  for (int s = N - 1; s >= 0; --s) {
    auto counts = child_counts(pts, n, m, s);
    // subtrees below level s+1 are already uniform, so points per child is constant
    std::map<int, std::pair<std::int64_t, std::int64_t>> buckets;  // bucket -> (parents, min count)
    for (std::int64_t c : counts) {
      auto [it, fresh] = buckets.try_emplace(bucket_of(c), 0, c);
      it->second.first += 1;
      it->second.second = std::min(it->second.second, c);
    }
    int best = -1;
    std::int64_t best_score = -1, keep = 0;
    for (const auto& [b, pm] : buckets) {
      std::int64_t score = pm.first * pm.second;
      if (score > best_score) {
        best_score = score;
        best = b;
        keep = pm.second;
      }
    }
    std::vector<std::int64_t> quota(counts.size(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (bucket_of(counts[i]) == best) quota[i] = keep;
    }
    pts = filter_children(pts, n, m, s, quota);
  }
  DeltaSet out(n, std::move(pts), a.width());
  auto prof = is_uniform(out, m, N);
  if (!prof) throw std::logic_error("uniformize produced a non-uniform set");
  return {std::move(out), *prof};
}

UniformPart collapse(const DeltaSet& a, const BranchingProfile& profile, const std::vector<int>& levels) {
  const int m = profile.m;
  const int N = profile.levels();
  auto actual = is_uniform(a, m, N);
  if (!actual || actual->R != profile.R) throw std::invalid_argument("collapse: set is not uniform with the given profile");
  std::vector<int> S = levels;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (int s : S) {
    if (s < 0 || s >= N) throw std::out_of_range("collapse: level " + std::to_string(s) + " outside [0, N)");
  }
  const int n = a.n();
  // a point survives iff at every s in S its level-(s+1) cell is the first
  // child of its level-s cell
  std::vector<std::int64_t> parent(S.size(), -1), first_child(S.size(), -1);
  std::vector<std::int64_t> out;
  for (std::int64_t k : a.indices()) {
    bool keep = true;
    for (std::size_t i = 0; i < S.size(); ++i) {
      std::int64_t p = k >> (n - m * S[i]);
      std::int64_t c = k >> (n - m * (S[i] + 1));
      if (p != parent[i]) {
        parent[i] = p;
        first_child[i] = c;
      }
      if (c != first_child[i]) keep = false;
    }
    if (keep) out.push_back(k);
  }
  BranchingProfile prof = profile;
  for (int s : S) prof.R[static_cast<std::size_t>(s)] = 1;
  DeltaSet set(n, std::move(out), a.width());
  return {std::move(set), std::move(prof)};
}

UniformPart prune_separation_1(const DeltaSet& b, int m, int N) {
  check_scale(b, m, N, "prune_separation_1");
  check_unit_interval(b, "prune_separation_1");
  if (!is_uniform(b, m, N)) throw std::invalid_argument("prune_separation_1: set is not uniform");
  const int n = b.n();
  std::vector<std::int64_t> pts = b.indices();
  for (int s = 1; s <= N; ++s) {
    const int shift = n - m * s;
    std::vector<std::int64_t> cells;
    for (std::int64_t k : pts) {
      std::int64_t c = k >> shift;
      if (cells.empty() || cells.back() != c) cells.push_back(c);
    }
    std::vector<char> kept(cells.size(), 0);
    std::int64_t run_pos = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      run_pos = (i > 0 && cells[i] == cells[i - 1] + 1) ? run_pos + 1 : 0;
      kept[i] = (run_pos % 2 == 0) ? 1 : 0;
    }
    // equalise: every parent keeps its leftmost `quota` survivors
    std::map<std::int64_t, std::int64_t> per_parent;
    for (std::size_t i = 0; i < cells.size(); ++i) per_parent[cells[i] >> m] += kept[i];
    std::int64_t quota = INT64_MAX;
    for (const auto& [p, c] : per_parent) quota = std::min(quota, c);
    std::vector<std::int64_t> allowed;
    std::int64_t cur_parent = -1, used = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!kept[i]) continue;
      std::int64_t p = cells[i] >> m;
      if (p != cur_parent) {
        cur_parent = p;
        used = 0;
      }
      if (used < quota) {
        allowed.push_back(cells[i]);
        ++used;
      }
    }
    std::vector<std::int64_t> next;
    next.reserve(pts.size());
    for (std::int64_t k : pts) {
      if (std::binary_search(allowed.begin(), allowed.end(), k >> shift)) next.push_back(k);
    }
    pts = std::move(next);
  }
  DeltaSet out(n, std::move(pts), b.width());
  auto prof = is_uniform(out, m, N);
  if (!prof) throw std::logic_error("prune_separation_1 produced a non-uniform set");
  return {std::move(out), *prof};
}

std::vector<SeparationViolation> separation_violations(const DeltaSet& b, int m, int N) {
  std::vector<SeparationViolation> out;
  for (int s = 0; s <= N; ++s) {
    auto cells = level_cells(b, m, s);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      // gap (right - left - 1) cells of side 2^-(ms) must be at least one
      if (cells[i] - cells[i - 1] < 2) out.push_back({s, cells[i - 1], cells[i]});
    }
  }
  return out;
}

PolarisationResult polarisation_check(const BranchingProfile& a, const BranchingProfile& b, double eta) {
  if (a.m != b.m || a.levels() != b.levels()) throw std::invalid_argument("polarisation_check: profile shapes differ");
  PolarisationResult res;
  const double need = (1.0 - eta) * a.m;
  for (int s = 0; s < a.levels(); ++s) {
    if (b.at(s) > 1 && log2_int(a.at(s)) < need - kLogTolerance) {
      res.ok = false;
      res.violations.push_back(s);
    }
  }
  return res;
}

double polarisation_eta(const BranchingProfile& a, const BranchingProfile& b) {
  if (a.m != b.m || a.levels() != b.levels()) throw std::invalid_argument("polarisation_eta: profile shapes differ");
  double eta = 0;
  for (int s = 0; s < a.levels(); ++s) {
    if (b.at(s) > 1) eta = std::max(eta, 1.0 - log2_int(a.at(s)) / a.m);
  }
  return eta;
}

}  // namespace sumprod
