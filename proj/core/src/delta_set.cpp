#include "sumprod/delta_set.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sumprod {

namespace {

void check_resolution(int n) {
  if (n < 1 || n > kMaxResolution) {
    throw std::invalid_argument("resolution n must be in [1, " + std::to_string(kMaxResolution) + "], got " +
                                std::to_string(n));
  }
}

}  // namespace

std::int64_t width_for(int n, std::int64_t max_index) {
  if (max_index < 0) return 1;
  return std::max<std::int64_t>(1, (max_index >> n) + 1);
}

DeltaSet::DeltaSet(int n, std::vector<std::int64_t> indices, std::int64_t width)
    : n_(n), width_(width), indices_(std::move(indices)) {
  check_resolution(n);
  if (width < 1 || width > (std::int64_t{1} << (62 - n))) throw std::invalid_argument("domain width out of range");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= grid_size()) {
      throw std::out_of_range("index " + std::to_string(indices_[i]) + " outside [0, W*2^n)");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) throw std::invalid_argument("indices not strictly increasing");
  }
}

DeltaSet DeltaSet::from_unsorted(int n, std::vector<std::int64_t> indices, std::int64_t min_width) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  check_resolution(n);
  std::int64_t w = indices.empty() ? min_width : std::max(min_width, width_for(n, indices.back()));
  return DeltaSet(n, std::move(indices), w);
}

bool DeltaSet::contains(std::int64_t k) const { return std::binary_search(indices_.begin(), indices_.end(), k); }

void write_set(std::ostream& out, const DeltaSet& a) {
  out << "n=" << a.n() << " W=" << a.width() << '\n';
  for (std::int64_t k : a.indices()) out << k << '\n';
}

DeltaSet read_set(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("set file: missing header");
  int n = 0;
  std::int64_t w = 0;
  {
    std::istringstream hs(header);
    std::string a, b;
    hs >> a >> b;
    if (a.rfind("n=", 0) != 0 || b.rfind("W=", 0) != 0) {
      throw std::invalid_argument("set file: header must read 'n=<int> W=<int>'");
    }
    n = std::stoi(a.substr(2));
    w = std::stoll(b.substr(2));
  }
  std::vector<std::int64_t> idx;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t used = 0;
    std::int64_t v = std::stoll(line, &used);
    if (used != line.size()) throw std::invalid_argument("set file: bad index line '" + line + "'");
    idx.push_back(v);
  }
  return DeltaSet(n, std::move(idx), w);
}

}  // namespace sumprod
