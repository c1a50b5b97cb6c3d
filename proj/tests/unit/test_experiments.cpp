#include <cmath>
#include <set>

#include "doctest.h"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/experiments.hpp"
#include "sumprod/rng.hpp"
#include "sumprod/serialization.hpp"

using namespace sumprod;

namespace {

std::set<std::int64_t> pair_sum(const std::set<std::int64_t>& h, const Dyadic& c, const DeltaSet& b) {
  std::set<std::int64_t> out;
  for (auto x : h)
    for (auto y : b.indices()) out.insert(x + c.floor_mul(y));
  return out;
}

DeltaSet full_grid(int n) {
  std::vector<std::int64_t> v(std::size_t{1} << n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::int64_t>(i);
  return DeltaSet(n, v);
}

}  // namespace

TEST_CASE("sharpness rows") {
  auto rows = run_sharpness_form87({1, 16, 256, 4096});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].abc == 1);
  CHECK(rows[0].slope == 0);
  std::vector<std::size_t> want{1, 7, 31, 127};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].abc == want[i]);
    CHECK(rows[i].ratio < 2);
    CHECK(rows[i].max_single <= rows[i].abc);
  }
  CHECK(rows[1].slope > rows[2].slope);
  CHECK(rows[2].slope > rows[3].slope);

  // A + B C from the triple loop
  for (std::int64_t np : {16, 256}) {
    ThreeProgressions s = gen_example_form87(np);
    std::set<std::int64_t> all;
    std::size_t single = 0;
    for (auto ck : s.c.indices()) {
      Dyadic c(ck, s.c.n());
      std::set<std::int64_t> one = pair_sum({s.a.indices().begin(), s.a.indices().end()}, c, s.b);
      single = std::max(single, one.size());
      all.insert(one.begin(), one.end());
    }
    auto r = run_sharpness_form87({np});
    CHECK(r[0].abc == all.size());
    CHECK(r[0].max_single == single);
  }
  CHECK_THROWS(run_sharpness_form87({17}));
}

TEST_CASE("doubling ladder") {
  LadderResult one = run_doubling_ladder(DeltaSet(8, {0}), 4);
  CHECK(one.k == 1);
  for (auto s : one.sizes) CHECK(s == 1);
  CHECK(run_doubling_ladder(full_grid(6), 3).k == 1);

  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    int n = 4 + static_cast<int>(rng.below(6));
    std::vector<std::int64_t> v;
    auto k = 1 + rng.below(30);
    for (std::uint64_t i = 0; i < k; ++i) v.push_back(static_cast<std::int64_t>(rng.below(std::uint64_t{1} << n)));
    DeltaSet b = DeltaSet::from_unsorted(n, v);
    int steps = 1 + static_cast<int>(rng.below(5));
    LadderResult r = run_doubling_ladder(b, steps);
    REQUIRE(r.sizes.size() == static_cast<std::size_t>(steps) + 2);
    CHECK(r.found());
    for (int j = 0; j <= std::min(steps + 1, 3); ++j) CHECK(r.sizes[j] == iterated_sum(b, 1 << j).size());
    // first index wins
    for (int j = 1; j < r.k; ++j) CHECK(static_cast<double>(r.sizes[j + 1]) > r.factor * r.sizes[j]);
  }
}

TEST_CASE("greedy iterated sums") {
  GreedyResult z = run_greedy_iterated_sum(DeltaSet(8, {0}), DeltaSet(8, {0, 64, 200}), 4, 0.5, 0.5, 0);
  CHECK(z.exponent == 0);
  for (auto s : z.sizes) CHECK(s == 1);
  CHECK(z.target == doctest::Approx(0.75));

  // replay the choices against a pair loop
  DeltaSet b = gen_uniform_tree(regular_profile(2, 5, 0.5), 21, Placement::left_packed);
  DeltaSet c = gen_uniform_tree(regular_profile(2, 5, 0.5), 22, Placement::left_packed);
  GreedyResult g = run_greedy_iterated_sum(b, c, 5, 0.5, 0.5, 0.05);
  REQUIRE(g.sizes.size() == 5);
  CHECK(g.c_sequence.front() == Dyadic(c.indices().front(), 10));
  std::set<std::int64_t> h = pair_sum({0}, g.c_sequence.front(), b);
  CHECK(h.size() == g.sizes.front());
  for (std::size_t k = 1; k < g.sizes.size(); ++k) {
    std::size_t best = 0;
    for (auto ck : c.indices()) best = std::max(best, pair_sum(h, Dyadic(ck, 10), b).size());
    h = pair_sum(h, g.c_sequence[k], b);
    CHECK(h.size() == g.sizes[k]);
    CHECK(h.size() == best);
    CHECK(g.sizes[k] >= g.sizes[k - 1]);
  }
  CHECK(g.exponent >= 0.5);
  DeltaSet b16 = gen_uniform_tree(regular_profile(2, 8, 0.5), 23, Placement::left_packed);
  DeltaSet c16 = gen_uniform_tree(regular_profile(2, 8, 0.5), 24, Placement::left_packed);
  GreedyResult g16 = run_greedy_iterated_sum(b16, c16, 8, 0.5, 0.5, 0.05);
  CHECK(g16.exponent >= 0.5);
  CHECK(g16.n_star >= 0);
  CHECK_THROWS(run_greedy_iterated_sum(b, c, 1, 0.5, 0.5, 0));
}

TEST_CASE("expansion sweep") {
  ExperimentConfig cfg;
  cfg.deltas = {10};
  cfg.gammas = {0.5};
  cfg.max_atoms = 40;
  auto recs = run_expansion_sweep(cfg);
  REQUIRE(recs.size() == 1);
  const auto& r = recs[0];
  SweepInstance inst = build_sweep_instance(cfg, 10, 0.5);
  CHECK(r.size_a == inst.a.size());
  CHECK(r.c_values.size() == std::min<std::size_t>(40, inst.c.size()));
  CHECK(r.sampled == (inst.c.size() > 40));
  const double ab = log2_int(static_cast<std::int64_t>(inst.a.size())) / 10;
  for (std::size_t i = 0; i < r.c_values.size(); ++i) {
    std::size_t s = pair_sum({inst.a.indices().begin(), inst.a.indices().end()}, r.c_values[i], inst.b).size();
    CHECK(r.sizes[i] == s);
    CHECK(r.exponents[i] == doctest::Approx(std::log2(static_cast<double>(s)) / 10 - ab));
  }
  CHECK(r.median == doctest::Approx(median_of(r.exponents)));
  auto again = run_expansion_sweep(cfg);
  CHECK(again[0].sizes == r.sizes);

  CHECK(median_of({3, 1, 2}) == 2);
  CHECK(median_of({4, 1, 2, 3}) == 2.5);

  cfg.family = InstanceFamily::form87;
  cfg.deltas = {16};
  CHECK_NOTHROW(run_expansion_sweep(cfg));
  CHECK(parse_family("p1p2-tree") == InstanceFamily::p1p2_tree);
  CHECK_THROWS(parse_family("trees"));
}

TEST_CASE("numerology") {
  NumerologyReport r = numerology_scan(3, 4);
  CHECK(r.pairs > 0);
  CHECK(r.checks >= r.pairs);
  CHECK(r.exceptions == 0);
}

TEST_CASE("assembly on the hand-sized profile") {
  ParameterSet p = assembly_defaults();
  p.N = 2;
  // B branches on the first four levels only, A also on one more
  BranchingProfile a(2, {4, 4, 4, 4, 2, 1, 1, 1, 1, 1});
  BranchingProfile b(2, {4, 4, 4, 4, 1, 1, 1, 1, 1, 1});
  AssemblyOptions o;
  o.nu_bits = 4;
  o.b_placement = Placement::left_packed;
  AssemblyReport r = run_final_assembly(p, a, b, 1, o);
  CHECK(r.failure.empty());
  CHECK(r.ok());
  CHECK(r.has_low());
  CHECK(r.chain_failures == 0);
  CHECK(r.partition.total_length() == 10);
  CHECK(r.lhs_avg >= r.contributions - r.correction);
}

TEST_CASE("assembly on random instances") {
  ParameterSet p = assembly_defaults();
  AssemblyOptions o;
  o.nu_bits = 5;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    AssemblyReport r = run_final_assembly(p, seed, o);
    INFO("seed " << seed << ": " << r.failure);
    REQUIRE(r.failure.empty());
    CHECK(r.ok());
    CHECK(r.chain_failures == 0);
    if (!r.has_low()) {
      // every block is useless: the lower bounds telescope to log2 |A'| - h
      double h = static_cast<double>(r.blocks.size());
      CHECK(r.contributions == doctest::Approx(std::log2(static_cast<double>(r.size_a)) - h));
    }
  }
  ParameterSet bad = p;
  bad.m = 8;
  bad.ell = 8;
  CHECK_THROWS(run_final_assembly(bad, 1, o));
}

TEST_CASE("serialisation round trips") {
  BranchingProfile pr(2, {4, 1, 2});
  CHECK(profile_from_json(profile_to_json(pr)) == pr);
  IntervalFamily f{{{0, 3, IntervalTag::low}, {4, 5, IntervalTag::useless}}};
  CHECK(family_from_json(family_to_json(f)) == f);
  DiscreteMeasure mu(2, 5, {{1, 2, 3}, {4, 0, 1}});
  CHECK(measure_from_json(measure_to_json(mu)) == mu);
  ParameterSet p = assembly_defaults();
  ParameterSet q = params_from_json(params_to_json(p));
  CHECK(q.alpha == p.alpha);
  CHECK(q.m == p.m);
  CHECK(q.zeta == p.zeta);
  ExperimentConfig cfg;
  cfg.deltas = {8, 12};
  cfg.family = InstanceFamily::random_frostman;
  ExperimentConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.deltas == cfg.deltas);
  CHECK(back.family == cfg.family);
  CHECK(back.gammas == cfg.gammas);
  CHECK_THROWS(params_from_json("{\"alpha\": \"x\"}"));
}
