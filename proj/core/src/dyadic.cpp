#include "sumprod/dyadic.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sumprod {

namespace {

using i128 = __int128;

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Dyadic::Dyadic(std::int64_t p, int q) : num_(p), exp_(q) {
  if (q < 0) {
    if (q < -62) throw std::overflow_error("dyadic exponent out of range");
    i128 v = static_cast<i128>(p) << (-q);
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("dyadic numerator overflow");
    num_ = static_cast<std::int64_t>(v);
    exp_ = 0;
  }
  if (exp_ > 62) throw std::overflow_error("dyadic exponent above 62");
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && (num_ % 2) == 0) {
    num_ /= 2;
    --exp_;
  }
}

Dyadic Dyadic::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty dyadic literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::int64_t p = parse_int(trim(s.substr(0, slash)));
    std::string_view den = trim(s.substr(slash + 1));
    int q = 0;
    if (den.rfind("2^", 0) == 0) {
      q = static_cast<int>(parse_int(den.substr(2)));
    } else {
      std::int64_t d = parse_int(den);
      if (d <= 0 || (d & (d - 1)) != 0) {
        throw std::invalid_argument("denominator is not a power of two: '" + std::string(text) + "'");
      }
      while (d > 1) {
        d >>= 1;
        ++q;
      }
    }
    return Dyadic(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    bool neg = !s.empty() && s.front() == '-';
    std::string_view ip = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    std::string_view fp = s.substr(dot + 1);
    if (fp.size() > 18) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
    std::int64_t whole = ip.empty() ? 0 : parse_int(ip);
    std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
    // frac / 10^d = frac / (2^d 5^d); dyadic iff 5^d divides frac.
    int d = static_cast<int>(fp.size());
    for (int i = 0; i < d; ++i) {
      if (frac % 5 != 0) throw std::invalid_argument("not a dyadic rational: '" + std::string(text) + "'");
      frac /= 5;
    }
    i128 p = (static_cast<i128>(whole) << d) + frac;
    if (neg) p = -p;
    if (p > INT64_MAX || p < INT64_MIN) throw std::overflow_error("dyadic literal too large");
    return Dyadic(static_cast<std::int64_t>(p), d);
  }
  return Dyadic(parse_int(s), 0);
}

double Dyadic::value() const { return std::ldexp(static_cast<double>(num_), -exp_); }

std::int64_t Dyadic::floor_mul(std::int64_t k) const {
  i128 v = static_cast<i128>(num_) * k;
  v >>= exp_;  // arithmetic shift is floor division by 2^exp
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("floor_mul overflow");
  return static_cast<std::int64_t>(v);
}

std::int64_t Dyadic::ceil_mul(std::int64_t k) const {
  i128 v = static_cast<i128>(num_) * k;
  i128 r = -((-v) >> exp_);
  if (r > INT64_MAX || r < INT64_MIN) throw std::overflow_error("ceil_mul overflow");
  return static_cast<std::int64_t>(r);
}

std::string Dyadic::str() const {
  if (exp_ == 0) return std::to_string(num_);
  return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
  i128 x = static_cast<i128>(a.num_) << (e - a.exp_);
  i128 y = static_cast<i128>(b.num_) << (e - b.exp_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace sumprod
