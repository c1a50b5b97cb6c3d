#include <cmath>
#include <map>

#include "doctest.h"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/entropy.hpp"
#include "sumprod/measure.hpp"
#include "sumprod/projection.hpp"
#include "sumprod/rng.hpp"

using namespace sumprod;

namespace {

// 2^n sum_I (pi_c mu)(I)^2 with I the level-n cells, via a map
double brute_l2(const DiscreteMeasure& mu, const Dyadic& c, int n) {
  std::map<std::int64_t, double> cells;
  for (const auto& a : mu.atoms()) {
    long double v = (a.x + static_cast<long double>(c.value()) * a.y) / std::ldexp(1.0L, mu.n() - n);
    cells[static_cast<std::int64_t>(std::floor(v))] += mu.weight(a);
  }
  double s = 0;
  for (const auto& [q, p] : cells) s += p * p;
  return std::ldexp(s, n);
}

DiscreteMeasure tree_product(int seed_a, int seed_b, int levels = 6) {
  BranchingProfile half(2, std::vector<std::int64_t>(static_cast<std::size_t>(levels), 2));
  return product_measure(counting_measure(gen_uniform_tree(half, seed_a)),
                         counting_measure(gen_uniform_tree(half, seed_b)));
}

// 3/4-regular: 8 children out of 16 at every 4-bit level
DiscreteMeasure three_quarter_nu(std::uint64_t seed, int levels = 3) {
  return counting_measure(
      gen_uniform_tree(BranchingProfile(4, std::vector<std::int64_t>(static_cast<std::size_t>(levels), 8)), seed));
}

}  // namespace

TEST_CASE("l2 of projections") {
  CHECK(l2_of_projection(point_mass(8, 3, 5, 2), Dyadic(1, 1), 8).pushforward.value() == doctest::Approx(256));
  // a row projects onto every cell once
  std::vector<Atom> row;
  for (int x = 0; x < 64; ++x) row.push_back({x, 0, 1});
  DiscreteMeasure r(2, 6, row);
  CHECK(l2_of_projection(r, Dyadic(3, 2), 6).pushforward.value() == doctest::Approx(1));
  // a column at c = 0 lands in one cell
  std::vector<Atom> col;
  for (int y = 0; y < 64; ++y) col.push_back({5, y, 1});
  CHECK(l2_of_projection(DiscreteMeasure(2, 6, col), Dyadic(), 6).pushforward.value() == doctest::Approx(64));

  DiscreteMeasure three(2, 3, {{0, 0, 1}, {1, 2, 2}, {3, 7, 1}});
  ProjectionL2 v = l2_of_projection(three, Dyadic(1, 1), 3);
  REQUIRE(v.pair_count);
  CHECK(v.paths_agree);
  CHECK(v.pushforward.value() == doctest::Approx(brute_l2(three, Dyadic(1, 1), 3)));

  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.below(8));
    std::vector<Atom> at;
    auto k = 1 + rng.below(50);
    for (std::uint64_t i = 0; i < k; ++i)
      at.push_back({static_cast<std::int64_t>(rng.below(std::uint64_t{1} << n)),
                    static_cast<std::int64_t>(rng.below(std::uint64_t{1} << n)), 1 + rng.below(9)});
    DiscreteMeasure mu(2, n, at);
    Dyadic c(static_cast<std::int64_t>(rng.below(65)) - 32, 5);
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    ProjectionL2 p = l2_of_projection(mu, c, j);
    CHECK(p.paths_agree);
    CHECK(p.pushforward.value() == doctest::Approx(brute_l2(mu, c, j)).epsilon(1e-12));
  }
}

TEST_CASE("averaged l2 on singletons") {
  ProjectionParams p;
  auto r = averaged_l2(point_mass(10, 0, 0, 2), point_mass(4, 0), 10, p);
  CHECK(r.average == doctest::Approx(1024));
  CHECK(r.fitted == doctest::Approx(1));
}

TEST_CASE("averaged l2 with a point mass nu is the marginal") {
  DeltaSet a = gen_uniform_tree(BranchingProfile(2, {2, 2, 2, 2, 2, 2}), 4);
  DiscreteMeasure mu = product_measure(counting_measure(a), counting_measure(gen_uniform_tree(BranchingProfile(2, {2, 2, 2, 2, 2, 2}), 5)));
  ProjectionParams p;
  p.exploratory = true;
  auto r = averaged_l2(mu, point_mass(6, 0), 12, p);
  CHECK(r.average == doctest::Approx(4096.0 / a.size()));
  CHECK(r.average == doctest::Approx(discretize_density_l2(counting_measure(a), 12).value()));
}

TEST_CASE("averaged l2 on regular trees") {
  ProjectionParams p;
  p.gamma = 0.75;
  p.exploratory = true;
  // n = 8 keeps the pair path cheap
  for (int s = 0; s < 4; ++s) {
    auto r = averaged_l2(tree_product(10 + s, 20 + s, 4), three_quarter_nu(30 + s, 2), 8, p);
    CHECK(r.audit.gamma_A == doctest::Approx(0.5));
    CHECK(r.audit.gamma_B == doctest::Approx(0.5));
    CHECK(r.paths_agree);
    CHECK(r.fitted <= 1024);
  }
  ProjectionParams fast = p;
  auto big = averaged_l2(tree_product(1, 2), three_quarter_nu(3), 12, fast);
  CHECK(big.fitted <= 1024);
  // the hypotheses fail on these (B is not separated), so strict mode refuses
  ProjectionParams strict;
  strict.gamma = 0.75;
  CHECK_THROWS_AS(averaged_l2(tree_product(1, 2), three_quarter_nu(3), 12, strict), HypothesisError);
}

TEST_CASE("averaged projection entropy") {
  ProjectionParams p;
  p.gamma = 0.75;
  p.exploratory = true;
  auto r = averaged_projection_entropy(tree_product(3, 4), three_quarter_nu(5), 12, p);
  CHECK(r.jensen_ok);
  CHECK(r.l2_entropy_ok);
  CHECK(r.holds);
  CHECK(r.entropies.size() == 512);
  for (double h : r.entropies) {
    CHECK(h >= 6 - 1e-9);  // x + floor(c y) with independent integer parts: never below H(A)
    CHECK(h <= 12 + 1e-9);
  }
}

TEST_CASE("geometry audits") {
  ProjectionParams p;
  p.gamma = 0.75;
  NearFarAudit nf = near_far_audit(tree_product(6, 7), three_quarter_nu(8), 12, p, 99);
  CHECK(nf.near_ok);
  CHECK(nf.far_pairs > 0);
  CHECK(nf.far_violations == 0);
  CHECK(nf.horizontal_violations == 0);

  TubeAudit t = tube_geometry_audit(8, 400, 3);
  CHECK(t.pairs > 300);
  CHECK(t.violations == 0);
  CHECK(t.worst_ratio <= 4);

  VerticalAudit v = vertical_separation_audit(6);
  CHECK(v.tube_pairs > 0);
  CHECK(v.violations == 0);
}
