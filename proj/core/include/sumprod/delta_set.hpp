#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sumprod {

// Finite set of grid points k * 2^-n inside [0, W).
class DeltaSet {
 public:
  DeltaSet() = default;
  // indices must be strictly increasing and lie in [0, width * 2^n).
  DeltaSet(int n, std::vector<std::int64_t> indices, std::int64_t width = 1);

  // Sorts, removes duplicates and picks the smallest width that fits (at least min_width).
  static DeltaSet from_unsorted(int n, std::vector<std::int64_t> indices, std::int64_t min_width = 1);

  int n() const { return n_; }
  std::int64_t width() const { return width_; }
  std::int64_t grid_size() const { return width_ << n_; }
  const std::vector<std::int64_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::int64_t front() const { return indices_.front(); }
  std::int64_t back() const { return indices_.back(); }
  bool contains(std::int64_t k) const;

  friend bool operator==(const DeltaSet&, const DeltaSet&) = default;

 private:
  int n_ = 1;
  std::int64_t width_ = 1;
  std::vector<std::int64_t> indices_;
};

// Text format: "n=<int> W=<int>" then one index per line.
void write_set(std::ostream& out, const DeltaSet& a);
DeltaSet read_set(std::istream& in);

// Smallest W with every index < W * 2^n.
std::int64_t width_for(int n, std::int64_t max_index);

inline constexpr int kMaxResolution = 56;

}  // namespace sumprod
