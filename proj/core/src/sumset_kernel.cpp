#include "sumprod/sumset_kernel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace sumprod {

namespace {

using Bits = std::vector<std::uint64_t>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Bits to_bits(std::span<const std::int64_t> a, std::int64_t origin, std::size_t words) {
  Bits bits(words, 0);
  for (std::int64_t x : a) {
    auto p = static_cast<std::uint64_t>(x - origin);
    bits[p >> 6] |= std::uint64_t{1} << (p & 63);
  }
  return bits;
}

void shift_or(Bits& dst, const Bits& src, std::uint64_t offset) {
  std::size_t w = offset >> 6;
  unsigned b = offset & 63;
  std::size_t n = src.size();
  if (b == 0) {
    for (std::size_t i = 0; i < n; ++i) dst[i + w] |= src[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    dst[i + w] |= src[i] << b;
    dst[i + w + 1] |= src[i] >> (64 - b);
  }
}

std::vector<std::int64_t> from_bits(const Bits& bits, std::int64_t origin) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    std::uint64_t w = bits[i];
    while (w) {
      int t = std::countr_zero(w);
      out.push_back(origin + static_cast<std::int64_t>(i * 64 + static_cast<std::size_t>(t)));
      w &= w - 1;
    }
  }
  return out;
}

std::size_t popcount(const Bits& bits) {
  std::size_t c = 0;
  for (std::uint64_t w : bits) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

struct Span {
  std::int64_t origin;
  std::int64_t length;  // number of grid positions spanned by the result
};

Span result_span(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  std::int64_t lo = a.front() + b.front();
  std::int64_t hi = a.back() + b.back();
  return {lo, hi - lo + 1};
}

constexpr std::int64_t kMaxBitmap = std::int64_t{1} << 33;

Bits direct_bits(std::span<const std::int64_t> a, std::span<const std::int64_t> b, Span sp) {
  Bits bits(static_cast<std::size_t>(sp.length / 64 + 1), 0);
  for (std::int64_t x : a) {
    for (std::int64_t y : b) {
      auto p = static_cast<std::uint64_t>(x + y - sp.origin);
      bits[p >> 6] |= std::uint64_t{1} << (p & 63);
    }
  }
  return bits;
}

Bits shift_or_bits(std::span<const std::int64_t> a, std::span<const std::int64_t> b, Span sp) {
  auto small = a.size() <= b.size() ? a : b;
  auto big = a.size() <= b.size() ? b : a;
  std::int64_t big_len = big.back() - big.front() + 1;
  Bits src = to_bits(big, big.front(), static_cast<std::size_t>(big_len / 64 + 1));
  Bits dst(static_cast<std::size_t>(sp.length / 64 + 2) + src.size(), 0);
  for (std::int64_t s : small) shift_or(dst, src, static_cast<std::uint64_t>(s - small.front()));
  dst.resize(static_cast<std::size_t>(sp.length / 64 + 1));
  // clear any bits past the end of the span
  std::uint64_t tail = static_cast<std::uint64_t>(sp.length) & 63;
  if (tail) dst.back() &= (std::uint64_t{1} << tail) - 1;
  else dst.back() = 0;
  return dst;
}

Bits fft_bits(std::span<const std::int64_t> a, std::span<const std::int64_t> b, Span sp) {
  std::size_t m = std::bit_ceil(static_cast<std::size_t>(sp.length));
  if (m < 2) m = 2;
  std::size_t half = m / 2 + 1;
  double* xa = fftw_alloc_real(m);
  double* xb = fftw_alloc_real(m);
  fftw_complex* fa = fftw_alloc_complex(half);
  fftw_complex* fb = fftw_alloc_complex(half);
  std::fill(xa, xa + m, 0.0);
  std::fill(xb, xb + m, 0.0);
  for (std::int64_t x : a) xa[x - a.front()] = 1.0;
  for (std::int64_t y : b) xb[y - b.front()] = 1.0;
  fftw_plan pa, pb, pinv;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(m), xa, fa, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(m), xb, fb, FFTW_ESTIMATE);
    pinv = fftw_plan_dft_c2r_1d(static_cast<int>(m), fa, xa, FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < half; ++i) {
    double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re;
    fa[i][1] = im;
  }
  fftw_execute(pinv);
  Bits bits(static_cast<std::size_t>(sp.length / 64 + 1), 0);
  // counts are integers scaled by m; anything above half a count is a hit
  double threshold = 0.5 * static_cast<double>(m);
  for (std::int64_t p = 0; p < sp.length; ++p) {
    if (xa[p] > threshold) bits[static_cast<std::size_t>(p) >> 6] |= std::uint64_t{1} << (p & 63);
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pinv);
  }
  fftw_free(xa);
  fftw_free(xb);
  fftw_free(fa);
  fftw_free(fb);
  return bits;
}

Bits compute_bits(std::span<const std::int64_t> a, std::span<const std::int64_t> b, SumsetKernel kernel, Span sp) {
  if (sp.length > kMaxBitmap) throw std::length_error("sumset span too large for bitmap kernels");
  if (kernel == SumsetKernel::automatic) kernel = choose_kernel(a.size(), b.size(), sp.length);
  switch (kernel) {
    case SumsetKernel::direct:
      return direct_bits(a, b, sp);
    case SumsetKernel::bitset:
      return shift_or_bits(a, b, sp);
    case SumsetKernel::fft:
      return fft_bits(a, b, sp);
    case SumsetKernel::automatic:
      break;
  }
  throw std::logic_error("unreachable sumset kernel");
}

}  // namespace

SumsetKernel choose_kernel(std::size_t na, std::size_t nb, std::int64_t span) {
  double pairs = static_cast<double>(na) * static_cast<double>(nb);
  double words = static_cast<double>(span) / 64.0 + 1.0;
  double shift = static_cast<double>(std::min(na, nb)) * words * 0.5;
  double m = std::exp2(std::ceil(std::log2(static_cast<double>(span) + 1.0)));
  double fft = 12.0 * m * std::log2(m + 2.0) + 2.0e4;
  if (pairs <= shift && pairs <= fft) return SumsetKernel::direct;
  if (shift <= fft) return SumsetKernel::bitset;
  return SumsetKernel::fft;
}

std::vector<std::int64_t> integer_sumset(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                         SumsetKernel kernel) {
  if (a.empty() || b.empty()) return {};
  Span sp = result_span(a, b);
  if (sp.length > kMaxBitmap) {
    std::vector<std::int64_t> out;
    out.reserve(a.size() * b.size());
    for (std::int64_t x : a)
      for (std::int64_t y : b) out.push_back(x + y);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  return from_bits(compute_bits(a, b, kernel, sp), sp.origin);
}

std::size_t integer_sumset_size(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                SumsetKernel kernel) {
  if (a.empty() || b.empty()) return 0;
  Span sp = result_span(a, b);
  if (sp.length > kMaxBitmap) return integer_sumset(a, b, kernel).size();
  return popcount(compute_bits(a, b, kernel, sp));
}

}  // namespace sumprod
