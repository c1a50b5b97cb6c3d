#include <cmath>
#include <map>

#include "doctest.h"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/entropy.hpp"
#include "sumprod/measure.hpp"
#include "sumprod/rng.hpp"

using namespace sumprod;

namespace {

DiscreteMeasure random_measure(Rng& rng, int dim, int n, std::size_t atoms, std::uint64_t max_mass = 20) {
  std::vector<Atom> v;
  const auto side = std::uint64_t{1} << n;
  for (std::size_t i = 0; i < atoms; ++i) {
    Atom a;
    a.x = static_cast<std::int64_t>(rng.below(side));
    a.y = dim == 2 ? static_cast<std::int64_t>(rng.below(side)) : 0;
    a.mass = 1 + rng.below(max_mass);
    v.push_back(a);
  }
  return DiscreteMeasure(dim, n, v);
}

// -sum p log2 p over level-j cells, from a map
double brute_entropy(const DiscreteMeasure& mu, int j) {
  std::map<std::pair<std::int64_t, std::int64_t>, double> cells;
  const int sh = mu.n() - j;
  for (const auto& a : mu.atoms()) cells[{a.x >> sh, a.y >> sh}] += mu.weight(a);
  double h = 0;
  for (const auto& [q, p] : cells) h -= p * std::log2(p);
  return h;
}

double brute_projected_entropy(const DiscreteMeasure& mu, const Dyadic& c, int k) {
  std::map<std::int64_t, double> cells;
  for (const auto& a : mu.atoms()) {
    // floor((x + c y) 2^-(n-k)) computed in long double
    long double v = (a.x + static_cast<long double>(c.value()) * a.y) / std::ldexp(1.0L, mu.n() - k);
    cells[static_cast<std::int64_t>(std::floor(v))] += mu.weight(a);
  }
  double h = 0;
  for (const auto& [q, p] : cells) h -= p * std::log2(p);
  return h;
}

}  // namespace

TEST_CASE("measure construction") {
  DiscreteMeasure m(1, 3, {{2, 0, 1}, {2, 0, 2}, {5, 0, 0}, {1, 0, 1}});
  CHECK(m.size() == 2);
  CHECK(m.total() == 4);
  CHECK(m.atoms()[1].mass == 3);
  CHECK_THROWS(DiscreteMeasure(1, 3, {{0, 0, 0}}));
  CHECK_THROWS(DiscreteMeasure(1, 3, {{0, 0, std::uint64_t{1} << 63}, {1, 0, 1}}));
  DiscreteMeasure p = point_mass(4, 3);
  CHECK(p.size() == 1);
  std::vector<std::int64_t> all(8);
  for (int i = 0; i < 8; ++i) all[i] = i;
  DiscreteMeasure u = counting_measure(DeltaSet(3, all));
  CHECK(u.total() == 8);
  // ||mu||_L2 = |A|^(-1/2) on the grid of A: ||mu^(n)||^2 = 2^n / |A|
  DiscreteMeasure a = counting_measure(DeltaSet(5, {1, 4, 9, 30}));
  CHECK(discretize_density_l2(a, 5).value() == doctest::Approx(32.0 / 4));
}

TEST_CASE("entropy values") {
  CHECK(entropy(point_mass(6, 17), 6) == 0);
  std::vector<std::int64_t> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  DiscreteMeasure u = counting_measure(DeltaSet(4, all));
  CHECK(entropy(u, 3) == doctest::Approx(3));
  DiscreteMeasure q(1, 2, {{0, 0, 2}, {1, 0, 1}, {3, 0, 1}});
  CHECK(entropy(q, 2) == doctest::Approx(1.5));
  CHECK(entropy_of_masses({2, 1, 1}) == doctest::Approx(1.5));
}

TEST_CASE("entropy against the map oracle and its bounds") {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    int dim = 1 + static_cast<int>(rng.below(2));
    int n = 1 + static_cast<int>(rng.below(10));
    DiscreteMeasure mu = random_measure(rng, dim, n, 1 + rng.below(60));
    for (int j = 0; j <= n; ++j) {
      double h = entropy(mu, j);
      CHECK(h == doctest::Approx(brute_entropy(mu, j)).epsilon(1e-12));
      CHECK(h >= 0);
      CHECK(h <= std::log2(static_cast<double>(coarsen(mu, j).size())) + 1e-12);
    }
  }
}

TEST_CASE("conditional entropy two ways") {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    int dim = 1 + static_cast<int>(rng.below(2));
    int n = 2 + static_cast<int>(rng.below(9));
    DiscreteMeasure mu = random_measure(rng, dim, n, 1 + rng.below(80));
    int jf = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    int jc = static_cast<int>(rng.below(static_cast<std::uint64_t>(jf) + 1));
    ConditionalEntropy ce = conditional_entropy(mu, jf, jc);
    CHECK(std::abs(ce.by_definition - ce.by_difference) <= std::ldexp(1.0, -40));
    CHECK(conditional_entropy(mu, jf, jf).by_definition == doctest::Approx(0));
  }
}

TEST_CASE("l2 density and the entropy gap") {
  DensityL2 p = discretize_density_l2(point_mass(8, 5), 6);
  CHECK(p.value() == doctest::Approx(64));
  std::vector<std::int64_t> all(64);
  for (int i = 0; i < 64; ++i) all[i] = i;
  CHECK(discretize_density_l2(counting_measure(DeltaSet(6, all)), 6).value() == doctest::Approx(1));
  DiscreteMeasure two(1, 5, {{0, 0, 1}, {31, 0, 1}});
  CHECK(discretize_density_l2(two, 5).value() == doctest::Approx(16));
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    int dim = 1 + static_cast<int>(rng.below(2));
    int n = 1 + static_cast<int>(rng.below(10));
    DiscreteMeasure mu = random_measure(rng, dim, n, 1 + rng.below(50));
    CHECK(l2_entropy_gap(mu, n) >= -1e-12);
  }
}

TEST_CASE("coarsen and renormalise") {
  DiscreteMeasure mu(2, 3, {{1, 2, 1}, {5, 6, 3}, {4, 7, 4}});
  DiscreteMeasure c = coarsen(mu, 1);
  CHECK(c.size() == 2);
  CHECK(c.n() == 1);
  CHECK(renormalize_cell(mu, 0, 0, 0) == mu);
  DiscreteMeasure q = renormalize_cell(mu, 1, 1, 1);
  CHECK(q.n() == 2);
  CHECK(q.total() == 7);
  CHECK(q.atoms()[0] == Atom{0, 3, 4});
  CHECK(renormalize_cell(point_mass(4, 11), 2, 2) == point_mass(2, 3));
}

TEST_CASE("projection") {
  DiscreteMeasure sq(2, 3, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  DiscreteMeasure p = project(sq, Dyadic::integer(1));
  REQUIRE(p.size() == 3);
  CHECK(p.atoms()[0] == Atom{0, 0, 1});
  CHECK(p.atoms()[1] == Atom{1, 0, 2});
  CHECK(p.atoms()[2] == Atom{2, 0, 1});
  CHECK(project(sq, Dyadic()) == DiscreteMeasure(1, 3, {{0, 0, 2}, {1, 0, 2}}));
  CHECK(project(point_mass(6, 10, 20, 2), Dyadic(3, 2)) == point_mass(6, 25));
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.below(8));
    DiscreteMeasure mu = random_measure(rng, 2, n, 1 + rng.below(40));
    Dyadic c(static_cast<std::int64_t>(rng.below(33)) - 16, 4);
    CHECK(project(mu, c).total() == mu.total());
    int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    CHECK(projected_entropy(mu, c, k) == doctest::Approx(brute_projected_entropy(mu, c, k)).epsilon(1e-12));
  }
}

TEST_CASE("symmetrisation and the ball audit") {
  CHECK(symmetrize(point_mass(5, 7)) == point_mass(5, 0));
  DiscreteMeasure two(1, 5, {{0, 0, 1}, {3, 0, 1}});
  DiscreteMeasure s = symmetrize(two);
  CHECK(s == DiscreteMeasure(1, 5, {{-3, 0, 1}, {0, 0, 2}, {3, 0, 1}}));
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    DiscreteMeasure nu = random_measure(rng, 1, 8, 1 + rng.below(30));
    BallAudit a = symmetric_ball_audit(symmetrize(nu), 8, 0);
    CHECK(a.violations == 0);
    CHECK(a.worst_ratio <= 4);
  }
}

TEST_CASE("concavity") {
  Rng rng(6);
  DiscreteMeasure mu = random_measure(rng, 1, 8, 30);
  ConcavityReport pm = concavity_check(mu, point_mass(8, 37), 5);
  CHECK(std::abs(pm.lhs - pm.rhs) <= 1e-12);
  CHECK(std::abs(entropy(translate(mu, 37), 5) - entropy(mu, 5)) <= 1 + 1e-12);
  std::vector<std::int64_t> all(256);
  for (int i = 0; i < 256; ++i) all[i] = i;
  DiscreteMeasure u = counting_measure(DeltaSet(8, all));
  // grid-aligned shifts: each translate has entropy 3, the mixture gains at most H(nu)
  DiscreteMeasure w(1, 8, {{0, 0, 1}, {32, 0, 3}});
  ConcavityReport al = concavity_check(u, w, 3);
  CHECK(al.rhs == doctest::Approx(3));
  CHECK(al.lhs >= al.rhs);
  CHECK(al.lhs <= al.rhs + entropy(w, 8) + 1e-12);
  for (int t = 0; t < 100; ++t) {
    ConcavityReport r = concavity_check(random_measure(rng, 1, 8, 20), random_measure(rng, 1, 8, 10), 4);
    CHECK(r.holds);
  }
}

TEST_CASE("entropy chain") {
  std::vector<std::int64_t> all(64);
  for (int i = 0; i < 64; ++i) all[i] = i;
  Rng rng(7);
  DiscreteMeasure mu = random_measure(rng, 2, 6, 40);
  EntropyChainReport one = entropy_chain(mu, Dyadic(1, 1), {0, 6});
  CHECK(one.blocks.size() == 1);
  CHECK(one.rhs_sum == doctest::Approx(one.lhs));
  CHECK(one.holds);
  CHECK_THROWS(entropy_chain(mu, Dyadic(1, 1), {0, 3}));

  // product of uniform trees, cuts at the levels: each block carries log2 R_A
  BranchingProfile pa(2, {4, 2, 3}), pb(2, {1, 4, 1});
  DiscreteMeasure prod = product_measure(counting_measure(gen_uniform_tree(pa, 1)),
                                         counting_measure(gen_uniform_tree(pb, 2)));
  EntropyChainReport z = entropy_chain(prod, Dyadic(), {0, 2, 4, 6});
  REQUIRE(z.blocks.size() == 3);
  for (int s = 0; s < 3; ++s) CHECK(z.blocks[s].weighted == doctest::Approx(log2_int(pa.at(s))));

  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.below(9));
    DiscreteMeasure m = random_measure(rng, 2, n, 1 + rng.below(60));
    std::vector<int> cuts{0};
    for (int j = 1; j < n; ++j)
      if (rng.coin()) cuts.push_back(j);
    cuts.push_back(n);
    Dyadic c(static_cast<std::int64_t>(rng.below(65)) - 32, 5);
    CHECK(entropy_chain(m, c, cuts).holds);
  }
}

TEST_CASE("uniform fibre bound") {
  BranchingProfile pa(2, {4, 3, 2, 4}), pb(2, {2, 1, 4, 1});
  DiscreteMeasure mu = product_measure(counting_measure(gen_uniform_tree(pa, 3)),
                                       counting_measure(gen_uniform_tree(pb, 4)));
  FiberBound z = uniform_fiber_entropy_bound(mu, pa, Dyadic(), 1, 2);
  CHECK(z.min_entropy == doctest::Approx(pa.log2_range(1, 2)));
  FiberBound trivial = uniform_fiber_entropy_bound(
      product_measure(counting_measure(gen_uniform_tree(BranchingProfile(2, {1, 1}), 1)),
                      counting_measure(gen_uniform_tree(BranchingProfile(2, {4, 4}), 1))),
      BranchingProfile(2, {1, 1}), Dyadic(1, 1), 0, 1);
  CHECK(trivial.bound == -1);
  CHECK(trivial.holds);
  for (int k = 0; k < 16; ++k) {
    for (int lo = 0; lo < 4; ++lo)
      for (int hi = lo; hi < 4; ++hi) CHECK(uniform_fiber_entropy_bound(mu, pa, Dyadic(k, 4), lo, hi).holds);
  }
}
