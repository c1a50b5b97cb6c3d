#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sumprod {

// Deterministic generator. Bounded draws use Lemire's multiply-shift so the
// output does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t bound);             // uniform in [0, bound)
  std::int64_t between(std::int64_t lo, std::int64_t hi);  // uniform in [lo, hi]
  double uniform01();
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Named, counted sub-streams of one root seed: stream("tree_B", 3) is stable
// across runs and independent of how many other streams were drawn.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t root) : root_(root) {}
  std::uint64_t root() const { return root_; }
  std::uint64_t derive(std::string_view name, std::uint64_t counter = 0) const;
  Rng stream(std::string_view name, std::uint64_t counter = 0) const { return Rng(derive(name, counter)); }

 private:
  std::uint64_t root_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sumprod
