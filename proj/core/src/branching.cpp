#include "sumprod/branching.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sumprod {

double log2_int(std::int64_t x) {
  if (x <= 0) throw std::domain_error("log2 of non-positive integer");
  auto u = static_cast<std::uint64_t>(x);
  if (std::has_single_bit(u)) return static_cast<double>(std::countr_zero(u));
  return std::log2(static_cast<double>(x));
}

std::int64_t BranchingProfile::cardinality() const {
  unsigned __int128 p = 1;
  for (std::int64_t r : R) {
    p *= static_cast<unsigned __int128>(r);
    if (p > (static_cast<unsigned __int128>(1) << 62)) throw std::overflow_error("profile cardinality above 2^62");
  }
  return static_cast<std::int64_t>(p);
}

double BranchingProfile::log2_range(int lo, int hi) const {
  double s = 0;
  for (int i = lo; i <= hi; ++i) s += log2_int(at(i));
  return s;
}

BranchingProfile BranchingProfile::coarsen(int ell) const {
  if (ell < 1 || levels() % ell != 0) throw std::invalid_argument("coarsen: levels not divisible by ell");
  if (static_cast<long>(ell) * m > 62) throw std::overflow_error("coarsen: ell * m above 62 bits");
  BranchingProfile out;
  out.m = ell * m;
  for (int sigma = 0; sigma < levels() / ell; ++sigma) {
    std::int64_t p = 1;
    for (int s = ell * sigma; s < ell * (sigma + 1); ++s) p *= at(s);
    out.R.push_back(p);
  }
  return out;
}

void BranchingProfile::validate() const {
  if (m < 1 || m > 62) throw std::invalid_argument("profile: m out of range");
  for (std::size_t s = 0; s < R.size(); ++s) {
    if (R[s] < 1 || R[s] > (std::int64_t{1} << m)) {
      throw std::invalid_argument("profile: R(" + std::to_string(s) + ") = " + std::to_string(R[s]) +
                                  " outside [1, 2^m]");
    }
  }
}

}  // namespace sumprod
