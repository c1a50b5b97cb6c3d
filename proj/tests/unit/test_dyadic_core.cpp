#include <set>
#include <sstream>

#include "doctest.h"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/rng.hpp"
#include "sumprod/sumset_kernel.hpp"

using namespace sumprod;

namespace {

// plain double loop over pairs
std::set<std::int64_t> brute_sumset(const DeltaSet& a, const Dyadic& c, const DeltaSet& b) {
  std::set<std::int64_t> out;
  for (auto x : a.indices())
    for (auto y : b.indices()) out.insert(x + c.floor_mul(y));
  return out;
}

DeltaSet random_set(Rng& rng, int n, std::size_t k) {
  std::vector<std::int64_t> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(static_cast<std::int64_t>(rng.below(std::uint64_t{1} << n)));
  return DeltaSet::from_unsorted(n, v);
}

}  // namespace

TEST_CASE("dyadic arithmetic") {
  Dyadic h(1, 1);
  CHECK(h == Dyadic(2, 2));
  CHECK(h == Dyadic::parse("0.5"));
  CHECK(Dyadic::parse("3/2^3") == Dyadic(3, 3));
  CHECK(Dyadic::parse("3/8") == Dyadic(3, 3));
  CHECK(Dyadic::parse("-1") == Dyadic::integer(-1));
  CHECK_THROWS_AS(Dyadic::parse("1/3"), std::invalid_argument);
  CHECK_THROWS_AS(Dyadic::parse("0.1"), std::invalid_argument);
  CHECK(Dyadic(3, 3).floor_mul(5) == 1);
  CHECK(Dyadic(3, 3).ceil_mul(5) == 2);
  CHECK(Dyadic(-3, 3).floor_mul(5) == -2);
  CHECK(Dyadic(-3, 3).ceil_mul(5) == -1);
  CHECK(Dyadic(1, 2) < Dyadic(3, 3));
  CHECK(Dyadic(5, 4).value() == doctest::Approx(0.3125));
}

TEST_CASE("delta set validation and text round trip") {
  CHECK_THROWS(DeltaSet(3, {2, 1}));
  CHECK_THROWS(DeltaSet(3, {0, 8}));
  DeltaSet w = DeltaSet::from_unsorted(3, {9, 1, 1, 4});
  CHECK(w.width() == 2);
  CHECK(w.size() == 3);
  std::stringstream s;
  write_set(s, w);
  CHECK(read_set(s) == w);
}

TEST_CASE("covering numbers") {
  std::vector<std::int64_t> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  DeltaSet full(4, all);
  CHECK(covering_number(full, 4) == 16);
  CHECK(covering_number(DeltaSet(6, {37}), 3) == 1);
  // 0, 0.3, 0.31 at n = 10
  CHECK(covering_number(DeltaSet(10, {0, 307, 317}), 2) == 2);
}

TEST_CASE("sumset examples") {
  DeltaSet a(4, {0, 1, 2, 3}), b(4, {0, 2});
  DeltaSet s = sumset(a, Dyadic(1, 1), b);
  CHECK(s.indices() == std::vector<std::int64_t>{0, 1, 2, 3, 4});
  DeltaSet z(4, {0, 1});
  CHECK(sumset(z, Dyadic::integer(1), z).size() == 3);
  CHECK(sumset(a, Dyadic(), b).indices() == a.indices());
  CHECK_THROWS(sumset(a, Dyadic(-1, 1), b));
  CHECK_THROWS(sumset(a, Dyadic(1, 5), b));
}

TEST_CASE("sumset kernels agree with the pair loop") {
  Rng rng(7);
  for (int t = 0; t < 60; ++t) {
    int n = 4 + static_cast<int>(rng.below(9));
    DeltaSet a = random_set(rng, n, 1 + rng.below(200));
    DeltaSet b = random_set(rng, n, 1 + rng.below(200));
    Dyadic c(static_cast<std::int64_t>(rng.below((std::uint64_t{1} << n) + 1)), n);
    auto want = brute_sumset(a, c, b);
    std::vector<std::int64_t> w(want.begin(), want.end());
    for (auto k : {SumsetKernel::direct, SumsetKernel::bitset, SumsetKernel::fft, SumsetKernel::automatic}) {
      CHECK(sumset(a, c, b, k).indices() == w);
      CHECK(sumset_size(a, c, b, k) == w.size());
    }
  }
}

TEST_CASE("translation invariance of sumset size") {
  Rng rng(11);
  DeltaSet a = random_set(rng, 10, 80), b = random_set(rng, 10, 50);
  Dyadic c(357, 10);
  std::vector<std::int64_t> shifted;
  for (auto x : a.indices()) shifted.push_back(x + 37);
  DeltaSet at = DeltaSet::from_unsorted(10, shifted);
  CHECK(sumset_size(a, c, b) == sumset_size(at, c, b));
}

TEST_CASE("iterated sums") {
  CHECK(iterated_sum(DeltaSet(5, {0}), 7).indices() == std::vector<std::int64_t>{0});
  std::vector<std::int64_t> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  DeltaSet twice = iterated_sum(DeltaSet(4, all), 2);
  CHECK(twice.size() == 31);
  CHECK(twice.width() == 2);
  CHECK_THROWS_AS(iterated_sum(DeltaSet(4, all), 8, 4), std::length_error);
}

TEST_CASE("frostman ratios") {
  std::vector<std::int64_t> all(256);
  for (int i = 0; i < 256; ++i) all[i] = i;
  FrostmanReport f = frostman_check(DeltaSet(8, all), 1.0, 8, 0);
  CHECK(f.worst_ratio <= 3);
  FrostmanReport p = frostman_check(DeltaSet(8, {5}), 0.5, 8, 8);
  CHECK(p.worst_ratio == doctest::Approx(16));
  CHECK_FALSE(p.holds(1));
  // step 2^-4 progression at n = 8
  FrostmanReport ap = frostman_check(gen_ap(8, 16, 16), 0.5, 8, 0);
  CHECK(ap.worst_ratio <= 3);
}

TEST_CASE("three-progression sets") {
  ThreeProgressions s16 = gen_example_form87(16);
  CHECK(s16.a.size() == 4);
  CHECK(s16.b.size() == 2);
  CHECK(s16.c.size() == 2);
  ThreeProgressions s256 = gen_example_form87(256);
  CHECK(s256.a.size() == 16);
  CHECK(s256.b.size() == 4);
  ThreeProgressions s1 = gen_example_form87(1);
  CHECK(s1.a.size() == 1);
  CHECK_THROWS(gen_example_form87(17));
}

TEST_CASE("uniform trees have the requested size") {
  CHECK(gen_uniform_tree(BranchingProfile(2, {1, 1, 1}), 1).size() == 1);
  CHECK(gen_uniform_tree(BranchingProfile(2, {2, 1, 2}), 1).size() == 4);
  // 2^5 on four of ten levels at m = 5
  std::vector<std::int64_t> r(10, 1);
  for (int s : {1, 4, 6, 9}) r[s] = 32;
  DeltaSet big = gen_uniform_tree(BranchingProfile(5, r), 3);
  CHECK(big.size() == (std::size_t{1} << 20));
  CHECK(big.n() == 50);
  CHECK(gen_uniform_tree(BranchingProfile(2, {3, 2}), 9) == gen_uniform_tree(BranchingProfile(2, {3, 2}), 9));
}
