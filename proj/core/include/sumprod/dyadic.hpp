#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sumprod {

// Exact p / 2^q, kept in lowest terms (p odd unless q == 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(std::int64_t p, int q);  // NOLINT(google-explicit-constructor)

  static Dyadic integer(std::int64_t p) { return Dyadic(p, 0); }

  // Accepts "3/8", "3/2^3", "0.375", "-1". Throws std::invalid_argument if the
  // value is not a finite dyadic rational.
  static Dyadic parse(std::string_view text);

  std::int64_t num() const { return num_; }
  int exp() const { return exp_; }
  double value() const;
  bool is_zero() const { return num_ == 0; }
  bool negative() const { return num_ < 0; }

  // floor(c * k) and ceil(c * k), exact.
  std::int64_t floor_mul(std::int64_t k) const;
  std::int64_t ceil_mul(std::int64_t k) const;

  std::string str() const;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  std::int64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace sumprod
