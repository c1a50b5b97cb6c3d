#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/entropy.hpp"
#include "sumprod/experiments.hpp"
#include "sumprod/intervals.hpp"
#include "sumprod/measure.hpp"
#include "sumprod/projection.hpp"
#include "sumprod/serialization.hpp"
#include "sumprod/uniformization.hpp"

using namespace sumprod;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string config;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

DeltaSet load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_set(in);
}

// Runs f on the --out stream (stdout when unset).
template <class F>
void emit(const Globals& g, F&& f) {
  if (g.out.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw std::runtime_error("cannot write " + g.out);
  f(out);
}

template <class R>
void emit_report(const Globals& g, const R& r) {
  emit(g, [&](std::ostream& o) {
    if (g.format == "csv") {
      write_csv(o, r);
    } else {
      o << to_json(r) << '\n';
    }
  });
}

void emit_json(const Globals& g, const std::string& text) {
  emit(g, [&](std::ostream& o) { o << text << '\n'; });
}

Placement parse_placement(const std::string& s) {
  if (s == "random") return Placement::random;
  if (s == "left") return Placement::left_packed;
  throw std::invalid_argument("placement must be random or left");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computation on delta-discretised sets and measures, plus sum-product experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Root seed for every random stream");
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "ExperimentConfig JSON (sweep)")->check(CLI::ExistingFile);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a delta-set");
  std::string gen_kind = "tree", gen_profile, gen_placement = "random", gen_which = "a";
  int gen_n = 12, gen_m = 2, gen_levels = 6;
  double gen_dim = 0.5;
  std::int64_t gen_size = 16, gen_step = 0, gen_start = 0, gen_np = 16;
  gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"ap", "tree", "form87"}));
  gen->add_option("--n", gen_n, "Resolution exponent (ap)");
  gen->add_option("--size", gen_size);
  gen->add_option("--step", gen_step);
  gen->add_option("--start", gen_start);
  gen->add_option("--profile", gen_profile, "Profile JSON file (tree)")->check(CLI::ExistingFile);
  gen->add_option("--m", gen_m);
  gen->add_option("--levels", gen_levels);
  gen->add_option("--dim", gen_dim, "Dimension of the regular profile when no --profile is given");
  gen->add_option("--placement", gen_placement)->check(CLI::IsMember({"random", "left"}));
  gen->add_option("--n-param", gen_np, "Fourth power n of the three-progression example");
  gen->add_option("--which", gen_which)->check(CLI::IsMember({"a", "b", "c"}));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Covering numbers, Frostman ratio, branching profile");
  std::string an_set;
  double an_kappa = 0.5;
  int an_m = 0, an_N = 0;
  analyze->add_option("set", an_set)->required()->check(CLI::ExistingFile);
  analyze->add_option("--kappa", an_kappa);
  analyze->add_option("--m", an_m, "With --N: test (m, N)-uniformity");
  analyze->add_option("--N", an_N);

  // uniformize
  auto* unif = app.add_subcommand("uniformize", "Largest-bucket uniform subset");
  std::string un_set;
  int un_m = 1, un_N = 1;
  unif->add_option("set", un_set)->required()->check(CLI::ExistingFile);
  unif->add_option("--m", un_m)->required();
  unif->add_option("--N", un_N)->required();

  // prune
  auto* prune = app.add_subcommand("prune", "Separation pruning (stage 1) or xi-collapse (stage 2)");
  std::string pr_set, pr_family, pr_xi = "1/8";
  int pr_m = 1, pr_N = 1, pr_stage = 1;
  double pr_zeta = 0.5;
  prune->add_option("set", pr_set)->required()->check(CLI::ExistingFile);
  prune->add_option("--m", pr_m)->required();
  prune->add_option("--N", pr_N)->required();
  prune->add_option("--stage", pr_stage)->check(CLI::IsMember({1, 2}));
  prune->add_option("--family", pr_family, "Interval family JSON (stage 2)")->check(CLI::ExistingFile);
  prune->add_option("--xi", pr_xi, "Dyadic xi (stage 2)");
  prune->add_option("--zeta", pr_zeta, "For the stage 2 audit");

  // extend
  auto* extend = app.add_subcommand("extend", "Trivial intervals, extension and low/high classification");
  std::string ex_profile, ex_profile_a;
  int ex_ell = 2;
  double ex_zeta = 0.5, ex_Gamma = 0.5;
  extend->add_option("--profile", ex_profile, "Fine profile of B")->required()->check(CLI::ExistingFile);
  extend->add_option("--ell", ex_ell)->required();
  extend->add_option("--zeta", ex_zeta);
  extend->add_option("--profile-a", ex_profile_a, "Fine profile of A; enables classification")
      ->check(CLI::ExistingFile);
  extend->add_option("--Gamma", ex_Gamma);

  // entropy
  auto* ent = app.add_subcommand("entropy", "Dyadic entropy of a measure, or the projected chain");
  std::string en_measure, en_c;
  int en_level = -1;
  std::vector<int> en_cuts;
  ent->add_option("measure", en_measure)->required()->check(CLI::ExistingFile);
  ent->add_option("--level", en_level, "Partition level (default n)");
  ent->add_option("--c", en_c, "Projection parameter for the chain");
  ent->add_option("--cuts", en_cuts, "Chain cut points 0 < ... < n")->delimiter(',');

  // project-avg
  auto* proj = app.add_subcommand("project-avg", "Averaged L2 norm or entropy of projections");
  std::string pj_mu, pj_nu;
  int pj_n = 0;
  ProjectionParams pj;
  bool pj_entropy = false;
  proj->add_option("mu", pj_mu)->required()->check(CLI::ExistingFile);
  proj->add_option("nu", pj_nu)->required()->check(CLI::ExistingFile);
  proj->add_option("--n", pj_n)->required();
  proj->add_option("--gamma", pj.gamma);
  proj->add_option("--xi", pj.xi);
  proj->add_option("--C", pj.C, "Hypothesis constant (measured when <= 0)");
  proj->add_option("--C0", pj.C0);
  proj->add_flag("--exploratory", pj.exploratory, "Report failed hypotheses instead of refusing");
  proj->add_flag("--entropy", pj_entropy, "Averaged entropy instead of L2");

  // ladder
  auto* ladder = app.add_subcommand("ladder", "First k with |2^(k+1) B| <= 2 delta^(-1/n) |2^k B|");
  std::string ld_set;
  int ld_steps = 6;
  ladder->add_option("set", ld_set)->required()->check(CLI::ExistingFile);
  ladder->add_option("--steps", ld_steps);

  // greedy
  auto* greedy = app.add_subcommand("greedy", "Greedy iterated sums c_1 B + ... + c_N B");
  std::string gr_b, gr_c;
  int gr_steps = 8;
  double gr_beta = 0.5, gr_gamma = 0.5, gr_eta = 0;
  greedy->add_option("B", gr_b)->required()->check(CLI::ExistingFile);
  greedy->add_option("C", gr_c)->required()->check(CLI::ExistingFile);
  greedy->add_option("--steps", gr_steps);
  greedy->add_option("--beta", gr_beta);
  greedy->add_option("--gamma", gr_gamma);
  greedy->add_option("--eta", gr_eta);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Expansion exponents of |A + cB| over c in C");
  bool sw_per_c = false;
  std::string sw_family;
  std::vector<int> sw_deltas;
  std::vector<double> sw_gammas;
  sweep->add_flag("--per-c", sw_per_c, "One CSV row per c");
  sweep->add_option("--family", sw_family)
      ->check(CLI::IsMember({"form87", "uniform-tree", "random-frostman", "p1p2-tree"}));
  sweep->add_option("--deltas", sw_deltas, "delta exponents")->delimiter(',');
  sweep->add_option("--gammas", sw_gammas)->delimiter(',');

  // sharpness
  auto* sharp = app.add_subcommand("sharpness", "|A + BC| for the three-progression example");
  std::vector<std::int64_t> sh_n{1, 16, 256, 4096};
  sharp->add_option("--n", sh_n, "Fourth powers")->delimiter(',');

  // numerology
  auto* numer = app.add_subcommand("numerology", "Exhaustive profile-pair scan");
  int nu_m = 3, nu_N = 6;
  numer->add_option("--m-max", nu_m);
  numer->add_option("--N-max", nu_N);

  // assemble
  auto* assemble = app.add_subcommand("assemble", "Multiscale assembly on generated instances");
  std::string as_params;
  AssemblyOptions as_opt;
  int as_instances = 1;
  assemble->add_option("--params", as_params, "ParameterSet JSON (defaults sized for exact evaluation)")
      ->check(CLI::ExistingFile);
  assemble->add_option("--nu-bits", as_opt.nu_bits);
  assemble->add_option("--attempts", as_opt.max_attempts);
  assemble->add_option("--max-atoms", as_opt.max_atoms);
  assemble->add_option("--instances", as_instances, "Consecutive seeds starting at --seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      DeltaSet s;
      if (gen_kind == "ap") {
        s = gen_ap(gen_n, gen_size, gen_step, gen_start);
      } else if (gen_kind == "form87") {
        ThreeProgressions f = gen_example_form87(gen_np);
        s = gen_which == "a" ? f.a : gen_which == "b" ? f.b : f.c;
      } else {
        BranchingProfile p =
            gen_profile.empty() ? regular_profile(gen_m, gen_levels, gen_dim) : profile_from_json(slurp(gen_profile));
        s = gen_uniform_tree(p, g.seed, parse_placement(gen_placement));
      }
      emit(g, [&](std::ostream& o) { write_set(o, s); });
    } else if (*analyze) {
      DeltaSet s = load_set(an_set);
      std::ostringstream js;
      if (g.format == "csv") {
        emit(g, [&](std::ostream& o) {
          o << "level,covering\n";
          for (int j = 0; j <= s.n(); ++j) o << j << ',' << covering_number(s, j) << '\n';
        });
      } else {
        FrostmanReport fr = frostman_check(s, an_kappa, s.n(), 0);
        js << "{\"n\": " << s.n() << ", \"size\": " << s.size() << ", \"covering\": [";
        for (int j = 0; j <= s.n(); ++j) js << (j ? ", " : "") << covering_number(s, j);
        js << "], \"frostman\": {\"kappa\": " << fmt(an_kappa) << ", \"worst_ratio\": " << fmt(fr.worst_ratio)
           << ", \"witness_index\": " << fr.witness_index << ", \"witness_r_exp\": " << fr.witness_r_exp << "}";
        if (an_m > 0 && an_N > 0) {
          auto p = is_uniform(s, an_m, an_N);
          js << ", \"profile\": " << (p ? profile_to_json(*p) : std::string("null"));
        }
        js << "}";
        emit_json(g, js.str());
      }
    } else if (*unif) {
      UniformPart u = uniformize(load_set(un_set), un_m, un_N);
      std::cerr << "profile " << profile_to_json(u.profile) << '\n';
      emit(g, [&](std::ostream& o) { write_set(o, u.set); });
    } else if (*prune) {
      DeltaSet s = load_set(pr_set);
      if (pr_stage == 1) {
        UniformPart u = prune_separation_1(s, pr_m, pr_N);
        std::cerr << "profile " << profile_to_json(u.profile) << '\n';
        emit(g, [&](std::ostream& o) { write_set(o, u.set); });
      } else {
        if (pr_family.empty()) throw std::invalid_argument("stage 2 needs --family");
        auto prof = is_uniform(s, pr_m, pr_N);
        if (!prof) throw std::invalid_argument("stage 2 needs an (m, N)-uniform set");
        IntervalFamily fam = family_from_json(slurp(pr_family));
        Dyadic xi = Dyadic::parse(pr_xi);
        PruneTwoResult r = prune_separation_2(s, fam, xi, *prof);
        PruneTwoAudit au = audit_prune_separation_2(r.set, r.profile, fam, xi, pr_zeta);
        std::cerr << "profile " << profile_to_json(r.profile) << " floor_violations " << au.floor_violations
                  << " separation_violations " << au.separation_violations << '\n';
        emit(g, [&](std::ostream& o) { write_set(o, r.set); });
      }
    } else if (*extend) {
      BranchingProfile pb = profile_from_json(slurp(ex_profile));
      IntervalFamily lifted = lift_intervals(trivial_intervals(pb.coarsen(ex_ell)), ex_ell);
      IntervalFamily fam = extend_intervals(pb, lifted, ex_zeta, ex_ell);
      if (!ex_profile_a.empty()) fam = classify_low_high(fam, profile_from_json(slurp(ex_profile_a)), ex_Gamma);
      emit_json(g, family_to_json(fam));
    } else if (*ent) {
      DiscreteMeasure mu = measure_from_json(slurp(en_measure));
      if (!en_c.empty()) {
        std::vector<int> cuts{0};
        for (int c : en_cuts) cuts.push_back(c);
        if (cuts.back() != mu.n()) cuts.push_back(mu.n());
        emit_json(g, to_json(entropy_chain(mu, Dyadic::parse(en_c), cuts)));
      } else {
        int j = en_level < 0 ? mu.n() : en_level;
        std::ostringstream js;
        js << "{\"level\": " << j << ", \"entropy\": " << fmt(entropy(mu, j))
           << ", \"l2_gap\": " << fmt(l2_entropy_gap(mu, j)) << "}";
        emit_json(g, js.str());
      }
    } else if (*proj) {
      DiscreteMeasure mu = measure_from_json(slurp(pj_mu));
      DiscreteMeasure nu = measure_from_json(slurp(pj_nu));
      if (pj_entropy) {
        emit_report(g, averaged_projection_entropy(mu, nu, pj_n, pj));
      } else {
        emit_report(g, averaged_l2(mu, nu, pj_n, pj));
      }
    } else if (*ladder) {
      LadderResult r = run_doubling_ladder(load_set(ld_set), ld_steps);
      emit_report(g, r);
      if (!r.found()) return 3;
    } else if (*greedy) {
      emit_report(g, run_greedy_iterated_sum(load_set(gr_b), load_set(gr_c), gr_steps, gr_beta, gr_gamma, gr_eta));
    } else if (*sweep) {
      ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : config_from_json(slurp(g.config));
      if (!sw_family.empty()) cfg.family = parse_family(sw_family);
      if (!sw_deltas.empty()) cfg.deltas = sw_deltas;
      if (!sw_gammas.empty()) cfg.gammas = sw_gammas;
      if (app.get_option("--seed")->count()) cfg.seed = g.seed;
      if (g.out.empty()) g.out = cfg.out_path;
      if (!app.get_option("--format")->count() && !g.config.empty()) g.format = cfg.format;
      auto recs = run_expansion_sweep(cfg);
      emit(g, [&](std::ostream& o) {
        if (g.format == "json") {
          o << to_json(recs) << '\n';
        } else if (sw_per_c) {
          write_csv_per_c(o, recs);
        } else {
          write_csv(o, recs);
        }
      });
    } else if (*sharp) {
      emit_report(g, run_sharpness_form87(sh_n));
    } else if (*numer) {
      NumerologyReport r = numerology_scan(nu_m, nu_N);
      std::ostringstream js;
      js << "{\"pairs\": " << r.pairs << ", \"checks\": " << r.checks << ", \"exceptions\": " << r.exceptions
         << ", \"first_exception\": \"" << r.first_exception << "\"}";
      emit_json(g, js.str());
      if (r.exceptions) return 3;
    } else if (*assemble) {
      ParameterSet p = as_params.empty() ? assembly_defaults() : params_from_json(slurp(as_params));
      std::ostringstream all;
      bool ok = true;
      for (int i = 0; i < as_instances; ++i) {
        AssemblyReport r = run_final_assembly(p, g.seed + static_cast<std::uint64_t>(i), as_opt);
        ok = ok && r.ok();
        if (g.format == "csv") {
          all << "# seed " << r.seed << " attempts " << r.attempts << " ok " << r.ok() << " lhs_avg "
              << fmt(r.lhs_avg) << " contributions " << fmt(r.contributions) << " best " << fmt(r.best_entropy)
              << " target " << fmt(r.rate_target) << '\n';
          write_csv(all, r);
        } else {
          all << to_json(r) << '\n';
        }
      }
      emit(g, [&](std::ostream& o) { o << all.str(); });
      if (!ok) return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
