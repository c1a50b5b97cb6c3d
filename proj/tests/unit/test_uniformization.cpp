#include <map>
#include <set>

#include "doctest.h"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/intervals.hpp"
#include "sumprod/rng.hpp"
#include "sumprod/uniformization.hpp"

using namespace sumprod;

namespace {

BranchingProfile random_profile(Rng& rng, int m, int levels) {
  std::vector<std::int64_t> r;
  for (int s = 0; s < levels; ++s) r.push_back(1 + static_cast<std::int64_t>(rng.below(std::uint64_t{1} << m)));
  return BranchingProfile(m, r);
}

// child counts straight from the definition: map parent -> set of children
std::map<std::int64_t, std::set<std::int64_t>> children(const DeltaSet& a, int m, int s) {
  std::map<std::int64_t, std::set<std::int64_t>> out;
  for (auto k : a.indices()) out[k >> (a.n() - m * s)].insert(k >> (a.n() - m * (s + 1)));
  return out;
}

// distinct level-s cells at distance < 2^-(m s), any pair
int brute_separation(const DeltaSet& b, int m, int N) {
  int bad = 0;
  for (int s = 1; s <= N; ++s) {
    auto cells = level_cells(b, m, s);
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size(); ++j)
        if (cells[j] - cells[i] < 2) ++bad;
  }
  return bad;
}

}  // namespace

TEST_CASE("is_uniform") {
  CHECK(is_uniform(DeltaSet(2, {0, 1, 3}), 1, 2) == std::nullopt);
  std::vector<std::int64_t> all(64);
  for (int i = 0; i < 64; ++i) all[i] = i;
  auto full = is_uniform(DeltaSet(6, all), 2, 3);
  REQUIRE(full);
  CHECK(full->R == std::vector<std::int64_t>{4, 4, 4});
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    BranchingProfile p = random_profile(rng, 2, 5);
    DeltaSet t_set = gen_uniform_tree(p, rng.next());
    for (int s = 0; s < 5; ++s)
      for (const auto& [parent, kids] : children(t_set, 2, s)) CHECK(static_cast<std::int64_t>(kids.size()) == p.at(s));
    auto got = is_uniform(t_set, 2, 5);
    REQUIRE(got);
    CHECK(*got == p);
  }
}

TEST_CASE("uniformize") {
  BranchingProfile p(2, {3, 1, 4, 2});
  DeltaSet u = gen_uniform_tree(p, 5);
  UniformPart same = uniformize(u, 2, 4);
  CHECK(same.set == u);
  CHECK(same.profile == p);

  // full grid minus one point at m = 1
  for (int N = 1; N <= 4; ++N) {
    std::vector<std::int64_t> v;
    for (int i = 1; i < (1 << N); ++i) v.push_back(i);
    DeltaSet a(N, v);
    UniformPart r = uniformize(a, 1, N);
    CHECK(r.set.size() * (std::size_t{1} << N) >= a.size());
    CHECK(is_uniform(r.set, 1, N));
  }

  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    std::set<std::int64_t> pts;
    while (pts.size() < 1500) pts.insert(static_cast<std::int64_t>(rng.below(1 << 12)));
    DeltaSet a(12, {pts.begin(), pts.end()});
    UniformPart r = uniformize(a, 2, 6);
    CHECK(r.set.size() * 4096 >= a.size());  // (2m)^N = 4^6
    auto prof = is_uniform(r.set, 2, 6);
    REQUIRE(prof);
    CHECK(*prof == r.profile);
    for (auto k : r.set.indices()) CHECK(pts.count(k) == 1);
  }
}

TEST_CASE("collapse cardinality") {
  BranchingProfile p(2, {4, 2, 4});
  DeltaSet a = gen_uniform_tree(p, 2);
  CHECK(collapse(a, p, {}).set == a);
  CHECK(collapse(a, p, {0, 1, 2}).set.size() == 1);
  UniformPart c = collapse(a, p, {1});
  CHECK(c.set.size() == 16);
  CHECK(c.profile.R == std::vector<std::int64_t>{4, 1, 4});
  CHECK(is_uniform(c.set, 2, 3) == c.profile);
  CHECK_THROWS(collapse(a, BranchingProfile(2, {4, 4, 2}), {1}));
}

TEST_CASE("first separation pruning") {
  // full grid at m = 1, N = 3: every other cell survives at each level
  std::vector<std::int64_t> all(8);
  for (int i = 0; i < 8; ++i) all[i] = i;
  UniformPart r = prune_separation_1(DeltaSet(3, all), 1, 3);
  CHECK(brute_separation(r.set, 1, 3) == 0);
  CHECK(r.set.size() * 8 >= 8);
  CHECK(r.profile.R == std::vector<std::int64_t>{1, 1, 1});

  // children already separated
  DeltaSet sep(4, {0, 2, 8, 10});
  CHECK(prune_separation_1(sep, 2, 2).set == sep);

  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    BranchingProfile p = random_profile(rng, 2, 5);
    DeltaSet b = gen_uniform_tree(p, rng.next());
    UniformPart q = prune_separation_1(b, 2, 5);
    CHECK(brute_separation(q.set, 2, 5) == 0);
    CHECK(separation_violations(q.set, 2, 5).empty());
    CHECK(q.set.size() * 32 >= b.size());
    for (int s = 0; s < 5; ++s) CHECK(q.profile.at(s) >= std::max<std::int64_t>(1, p.at(s) / 2));
  }
}

TEST_CASE("polarisation") {
  BranchingProfile ones(2, {1, 1, 1}), full(2, {4, 4, 4});
  CHECK(polarisation_check(ones, ones, 0.1).ok);
  CHECK(polarisation_check(full, full, 0).ok);
  BranchingProfile a(3, {8, 8, 2, 8}), b(3, {2, 1, 4, 8});
  auto r = polarisation_check(a, b, 0.1);
  CHECK_FALSE(r.ok);
  CHECK(r.violations == std::vector<int>{2});
  CHECK(polarisation_eta(a, b) == doctest::Approx(2.0 / 3));
}

TEST_CASE("trivial and lifted intervals") {
  IntervalFamily all = trivial_intervals(BranchingProfile(2, {1, 1, 1}));
  REQUIRE(all.intervals.size() == 1);
  CHECK(all.intervals[0] == Interval{0, 2, IntervalTag::N_B});

  IntervalFamily two = trivial_intervals(BranchingProfile(6, {64, 1, 1, 64, 1}));
  REQUIRE(two.intervals.size() == 2);
  CHECK(two.intervals[0].lo == 1);
  CHECK(two.intervals[0].hi == 2);
  CHECK(two.intervals[1].lo == 4);
  CHECK(two.intervals[1].hi == 4);

  IntervalFamily zero{{{0, 0, IntervalTag::N_B}}};
  IntervalFamily l3 = lift_intervals(zero, 3);
  CHECK(l3.intervals[0].lo == 0);
  CHECK(l3.intervals[0].hi == 2);
  IntervalFamily whole = lift_intervals(all, 4);
  CHECK(whole.intervals[0].hi == 11);

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    BranchingProfile fine = random_profile(rng, 2, 12);
    BranchingProfile coarse = fine.coarsen(3);
    for (int lo = 0; lo < 4; ++lo)
      for (int hi = lo; hi < 4; ++hi)
        CHECK(coarse.log2_range(lo, hi) == doctest::Approx(fine.log2_range(3 * lo, 3 * hi + 2)));
  }

  // polarised with beta_1 N full levels
  std::vector<std::int64_t> r(10, 1);
  for (int s : {0, 3, 7}) r[s] = 16;
  CHECK(trivial_intervals(BranchingProfile(4, r)).total_length() == 7);
}

TEST_CASE("extension") {
  BranchingProfile ones(3, {1, 1, 1, 1, 1, 1});
  IntervalFamily e = extend_intervals(ones, lift_intervals(trivial_intervals(ones.coarsen(2)), 2), 0.5, 2);
  REQUIRE(e.intervals.size() == 1);
  CHECK(e.intervals[0] == Interval{0, 5, IntervalTag::N_plus_case_b});

  // R = 2^m at level 0 only (ell N = 6, m = 3)
  BranchingProfile p(3, {8, 1, 1, 1, 1, 1});
  IntervalFamily lifted = lift_intervals(trivial_intervals(p.coarsen(3)), 3);
  CHECK(lifted.intervals[0].lo == 3);
  IntervalFamily b = extend_intervals(p, lifted, 1.0 / 3, 3);
  CHECK(b.intervals[0] == Interval{0, 5, IntervalTag::N_plus_case_b});
  // enough branching to stop at level 0 by case (a)
  BranchingProfile q(3, {8, 8, 1, 1, 1, 1});
  IntervalFamily a = extend_intervals(q, lift_intervals(trivial_intervals(q.coarsen(3)), 3), 1.0 / 3, 3);
  CHECK(a.intervals[0] == Interval{0, 5, IntervalTag::N_plus_case_a});
  // stops strictly inside
  BranchingProfile s(2, {4, 4, 4, 1, 1, 1});
  IntervalFamily st = extend_intervals(s, lift_intervals(trivial_intervals(s.coarsen(3)), 3), 1.0 / 3, 3);
  CHECK(st.intervals[0] == Interval{1, 5, IntervalTag::N_plus_case_a});

  CHECK_THROWS(extend_intervals(p, lifted, 0.25, 3));

  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::int64_t> rb;
    for (int i = 0; i < 12; ++i) rb.push_back(rng.below(3) == 0 ? 4 : 1);
    BranchingProfile fb(2, rb);
    auto fam = extend_intervals(fb, lift_intervals(trivial_intervals(fb.coarsen(3)), 3), 1.0 / 3, 3);
    CHECK(sandwich_violations(fb, fam, 1.0 / 3).empty());
  }
}

TEST_CASE("low and high") {
  IntervalFamily fam{{{0, 3, IntervalTag::N_plus_case_a}, {5, 7, IntervalTag::N_plus_case_a}}};
  auto low = classify_low_high(fam, BranchingProfile(2, std::vector<std::int64_t>(8, 1)), 0.01);
  CHECK(low.total_length(IntervalTag::low) == 7);
  auto high = classify_low_high(fam, BranchingProfile(2, std::vector<std::int64_t>(8, 4)), 0.99);
  CHECK(high.total_length(IntervalTag::high) == 7);
  auto part = low_partition(low, 9);
  REQUIRE(part.intervals.size() == 4);
  CHECK(part.intervals[1] == Interval{4, 4, IntervalTag::useless});
  CHECK(part.intervals[3] == Interval{8, 8, IntervalTag::useless});
  CHECK(part.total_length() == 9);
}

TEST_CASE("second separation pruning") {
  BranchingProfile p(2, {4, 3, 2, 4});
  DeltaSet b = gen_uniform_tree(p, 8);
  Dyadic xi(1, 2);
  CHECK(prune_separation_2(b, IntervalFamily{}, xi, p).set == b);

  // |J| = 4, xi = 1/4: one level kept at the bottom, the top three collapsed
  IntervalFamily one{{{0, 3, IntervalTag::N_plus_case_a}}};
  CHECK(xi_levels(one.intervals[0], Dyadic(1, 2)) == std::vector<int>{1, 2, 3});
  PruneTwoResult r = prune_separation_2(b, one, Dyadic(1, 2), p);
  CHECK(r.collapsed == std::vector<int>{1, 2, 3});
  CHECK(r.set.size() == 4);
  // |J| = 10, xi = 1/8: ceil(5 / 4) = 2 kept
  CHECK(xi_levels(Interval{0, 9, IntervalTag::N_plus_case_a}, Dyadic(1, 3)) == std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9});
  // xi = 1/2 keeps half
  CHECK(xi_levels(Interval{2, 5, IntervalTag::N_plus_case_a}, Dyadic(1, 1)) == std::vector<int>{4, 5});
  PruneTwoAudit a = audit_prune_separation_2(r.set, r.profile, one, Dyadic(1, 2), 0.5);
  CHECK(a.floor_violations == 0);
  CHECK(a.separation_violations == 0);

  CHECK_THROWS(prune_separation_2(b, IntervalFamily{{{0, 1, IntervalTag::N_plus_case_a}}}, Dyadic(1, 3), p));
}
