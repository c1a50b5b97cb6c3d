#include "sumprod/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace sumprod {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

// JSON numbers rounded to what fmt prints
double r12(double x) { return std::isfinite(x) ? std::stod(fmt(x)) : x; }

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(r12(x));
  return a;
}

json dyadic_json(const Dyadic& d) { return d.str(); }

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

json profile_j(const BranchingProfile& p) { return {{"m", p.m}, {"R", p.R}}; }

json family_j(const IntervalFamily& f) {
  json a = json::array();
  for (const auto& i : f.intervals) a.push_back({{"lo", i.lo}, {"hi", i.hi}, {"tag", std::string(tag_name(i.tag))}});
  return {{"intervals", a}};
}

json params_j(const ParameterSet& p) {
  return {{"alpha", p.alpha},       {"beta", p.beta},         {"gamma", p.gamma},     {"kappa", p.kappa},
          {"eta", p.eta},           {"zeta", p.zeta},         {"alpha_bar", p.alpha_bar},
          {"beta_1", p.beta_1},     {"epsilon", p.epsilon},   {"epsilon_0", p.epsilon_0},
          {"epsilon_B", p.epsilon_B}, {"m", p.m},             {"ell", p.ell},         {"N", p.N}};
}

ParameterSet params_from(const json& j) {
  ParameterSet p;
  auto get = [&](const char* k, auto& v) {
    if (j.contains(k)) j.at(k).get_to(v);
  };
  get("alpha", p.alpha);
  get("beta", p.beta);
  get("gamma", p.gamma);
  get("kappa", p.kappa);
  get("eta", p.eta);
  get("zeta", p.zeta);
  get("alpha_bar", p.alpha_bar);
  get("beta_1", p.beta_1);
  get("epsilon", p.epsilon);
  get("epsilon_0", p.epsilon_0);
  get("epsilon_B", p.epsilon_B);
  get("m", p.m);
  get("ell", p.ell);
  get("N", p.N);
  return p;
}

json audit_j(const HypothesisAudit& a) {
  return {{"n", a.n},           {"a_cells", a.a_cells},   {"b_cells", a.b_cells},   {"gamma_A", r12(a.gamma_A)},
          {"gamma_B", r12(a.gamma_B)}, {"C_mu", r12(a.C_mu)}, {"C_nu", r12(a.C_nu)}, {"min_b_gap", a.min_b_gap},
          {"C_used", r12(a.C_used)}, {"failures", a.failures}};
}

}  // namespace

std::string profile_to_json(const BranchingProfile& p) { return profile_j(p).dump(); }

BranchingProfile profile_from_json(const std::string& text) {
  json j = parse(text, "profile");
  try {
    BranchingProfile p(j.at("m").get<int>(), j.at("R").get<std::vector<std::int64_t>>());
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("profile: ") + e.what());
  }
}

std::string family_to_json(const IntervalFamily& f) { return family_j(f).dump(); }

IntervalFamily family_from_json(const std::string& text) {
  json j = parse(text, "interval family");
  IntervalFamily f;
  try {
    for (const auto& i : j.at("intervals")) {
      f.intervals.push_back({i.at("lo").get<int>(), i.at("hi").get<int>(),
                             parse_tag(i.value("tag", std::string(tag_name(IntervalTag::N_B))))});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("interval family: ") + e.what());
  }
  f.validate();
  return f;
}

std::string measure_to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    json idx = mu.dim() == 2 ? json::array({a.x, a.y}) : json::array({a.x});
    atoms.push_back(json::array({idx, r12(mu.weight(a)), a.mass}));
  }
  return json{{"dim", mu.dim()}, {"n", mu.n()}, {"atoms", atoms}}.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
  json j = parse(text, "measure");
  try {
    const int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw std::invalid_argument("measure: dim must be 1 or 2");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      const auto& idx = a.at(0);
      if (idx.size() != static_cast<std::size_t>(dim)) throw std::invalid_argument("measure: index arity != dim");
      Atom at;
      at.x = idx.at(0).get<std::int64_t>();
      if (dim == 2) at.y = idx.at(1).get<std::int64_t>();
      if (a.size() >= 3) {
        at.mass = a.at(2).get<std::uint64_t>();
      } else {
        double w = a.at(1).get<double>();
        if (!(w >= 0)) throw std::invalid_argument("measure: negative weight");
        at.mass = static_cast<std::uint64_t>(std::llround(std::ldexp(w, 40)));
      }
      atoms.push_back(at);
    }
    return DiscreteMeasure(dim, j.at("n").get<int>(), std::move(atoms));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("measure: ") + e.what());
  }
}

std::string params_to_json(const ParameterSet& p) { return params_j(p).dump(); }

ParameterSet params_from_json(const std::string& text) { return params_from(parse(text, "parameters")); }

std::string config_to_json(const ExperimentConfig& c) {
  return json{{"params", params_j(c.params)}, {"family", family_name(c.family)}, {"deltas", c.deltas},
              {"gammas", c.gammas},           {"max_atoms", c.max_atoms},        {"seed", c.seed},
              {"out", c.out_path},            {"format", c.format}}
      .dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j = parse(text, "config");
  ExperimentConfig c;
  try {
    if (j.contains("params")) c.params = params_from(j.at("params"));
    if (j.contains("family")) c.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<int>>();
    if (j.contains("gammas")) c.gammas = j.at("gammas").get<std::vector<double>>();
    if (j.contains("max_atoms")) c.max_atoms = j.at("max_atoms").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string to_json(const EntropyChainReport& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"lo", b.lo}, {"hi", b.hi}, {"cells", b.cells}, {"weighted", r12(b.weighted)}});
  }
  return json{{"cuts", r.cuts},   {"blocks", blocks},           {"lhs", r12(r.lhs)},
              {"rhs_sum", r12(r.rhs_sum)}, {"correction", r12(r.correction)}, {"slack", r12(r.slack())},
              {"holds", r.holds}}
      .dump(2);
}

std::string to_json(const ProjectionAverageReport& r) {
  return json{{"audit", audit_j(r.audit)},
              {"c", num_array(r.c_values)},
              {"weight", num_array(r.weights)},
              {"l2", num_array(r.l2)},
              {"paths_agree", r.paths_agree},
              {"pair_checked", r.pair_checked},
              {"average", r12(r.average)},
              {"bound_term", r12(r.bound_term)},
              {"fitted", r12(r.fitted)}}
      .dump(2);
}

std::string to_json(const ProjectionEntropyReport& r) {
  return json{{"audit", audit_j(r.audit)},
              {"entropy", num_array(r.entropies)},
              {"average", r12(r.average)},
              {"lower_bound", r12(r.lower_bound)},
              {"slack", r12(r.slack())},
              {"jensen_lhs", r12(r.jensen_lhs)},
              {"jensen_rhs", r12(r.jensen_rhs)},
              {"jensen_ok", r.jensen_ok},
              {"l2_entropy_ok", r.l2_entropy_ok},
              {"holds", r.holds}}
      .dump(2);
}

std::string to_json(const LadderResult& r) {
  return json{{"sizes", r.sizes}, {"factor", r12(r.factor)}, {"k", r.k}, {"found", r.found()}}.dump(2);
}

std::string to_json(const GreedyResult& r) {
  json cs = json::array();
  for (const auto& c : r.c_sequence) cs.push_back(dyadic_json(c));
  return json{{"sizes", r.sizes},           {"c_sequence", cs},         {"n_star", r.n_star},
              {"exponent", r12(r.exponent)}, {"target", r12(r.target)}, {"final_width", r.final_width}}
      .dump(2);
}

std::string to_json(const std::vector<SharpnessRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"n", r.n_param},
                 {"size_a", r.size_a},
                 {"size_b", r.size_b},
                 {"size_c", r.size_c},
                 {"abc", r.abc},
                 {"max_single", r.max_single},
                 {"ratio", r12(r.ratio)},
                 {"slope", r12(r.slope)},
                 {"exact", r.exact}});
  }
  return a.dump(2);
}

std::string to_json(const std::vector<ExpansionRecord>& recs) {
  json a = json::array();
  for (const auto& r : recs) {
    json cs = json::array();
    for (const auto& c : r.c_values) cs.push_back(dyadic_json(c));
    a.push_back({{"delta_exp", r.n},
                 {"gamma", r12(r.gamma)},
                 {"alpha_bar", r12(r.alpha_bar)},
                 {"size_a", r.size_a},
                 {"size_b", r.size_b},
                 {"size_c", r.size_c},
                 {"sampled", r.sampled},
                 {"a_family", r.a_family},
                 {"c", cs},
                 {"size_sum", r.sizes},
                 {"exponent", num_array(r.exponents)},
                 {"median", r12(r.median)},
                 {"mean", r12(r.mean)},
                 {"best_c", dyadic_json(r.best_c)},
                 {"best_exponent", r12(r.best_exponent)}});
  }
  return a.dump(2);
}

std::string to_json(const AssemblyReport& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"lo", b.lo},
                      {"hi", b.hi},
                      {"tag", std::string(tag_name(b.tag))},
                      {"log2_RA", r12(b.log2_RA)},
                      {"cells", b.cells},
                      {"weighted", r12(b.weighted)},
                      {"min_cell_avg", r12(b.min_cell_avg)},
                      {"lower", r12(b.lower)},
                      {"C_block", r12(b.C_block)},
                      {"bound_ok", b.bound_ok},
                      {"fiber_ok", b.fiber_ok},
                      {"min_collapse_ok", b.min_collapse_ok}});
  }
  json cs = json::array();
  for (const auto& c : r.c_values) cs.push_back(dyadic_json(c));
  return json{{"params", params_j(r.params)},
              {"seed", r.seed},
              {"attempts", r.attempts},
              {"failure", r.failure},
              {"ok", r.ok()},
              {"profile_a", profile_j(r.profile_a)},
              {"profile_b", profile_j(r.profile_b)},
              {"profile_b_pruned", profile_j(r.profile_b_pruned)},
              {"extended", family_j(r.extended)},
              {"classified", family_j(r.classified)},
              {"partition", family_j(r.partition)},
              {"collapsed", r.collapsed},
              {"size_a", r.size_a},
              {"size_b", r.size_b},
              {"alpha_bar", r12(r.alpha_bar)},
              {"beta_1", r12(r.beta_1)},
              {"eta_measured", r12(r.eta_measured)},
              {"blocks", blocks},
              {"c", cs},
              {"lhs", num_array(r.lhs_per_c)},
              {"chain_failures", r.chain_failures},
              {"lhs_avg", r12(r.lhs_avg)},
              {"chain_rhs_avg", r12(r.chain_rhs_avg)},
              {"correction", r12(r.correction)},
              {"contributions", r12(r.contributions)},
              {"chain_ok", r.chain_ok},
              {"assembly_ok", r.assembly_ok},
              {"best_entropy", r12(r.best_entropy)},
              {"best_c", dyadic_json(r.best_c)},
              {"target", r12(r.rate_target)},
              {"target_reached", r.rate_target_reached},
              {"low_length", r12(r.low_length)},
              {"low_length_bound", r12(r.low_length_bound)}}
      .dump(2);
}

void write_csv(std::ostream& out, const std::vector<SharpnessRow>& rows) {
  out << "n,size_a,size_b,size_c,abc,max_single,ratio,slope,exact\n";
  for (const auto& r : rows) {
    out << r.n_param << ',' << r.size_a << ',' << r.size_b << ',' << r.size_c << ',' << r.abc << ','
        << r.max_single << ',' << fmt(r.ratio) << ',' << fmt(r.slope) << ',' << (r.exact ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const LadderResult& r) {
  out << "k,size,satisfies\n";
  for (std::size_t k = 0; k < r.sizes.size(); ++k) {
    bool sat = k >= 1 && k + 1 < r.sizes.size() &&
               static_cast<double>(r.sizes[k + 1]) <= r.factor * static_cast<double>(r.sizes[k]);
    out << k << ',' << r.sizes[k] << ',' << (sat ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const GreedyResult& r) {
  out << "step,c,size,n_star\n";
  for (std::size_t i = 0; i < r.sizes.size(); ++i) {
    out << i + 1 << ',' << r.c_sequence[i].str() << ',' << r.sizes[i] << ','
        << (static_cast<int>(i + 1) == r.n_star ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<ExpansionRecord>& recs) {
  out << "delta_exp,gamma,alpha_bar,size_a,size_b,size_c,count,sampled,median,mean,best_c,best_exponent\n";
  for (const auto& r : recs) {
    out << r.n << ',' << fmt(r.gamma) << ',' << fmt(r.alpha_bar) << ',' << r.size_a << ',' << r.size_b << ','
        << r.size_c << ',' << r.exponents.size() << ',' << (r.sampled ? 1 : 0) << ',' << fmt(r.median) << ','
        << fmt(r.mean) << ',' << r.best_c.str() << ',' << fmt(r.best_exponent) << '\n';
  }
}

void write_csv_per_c(std::ostream& out, const std::vector<ExpansionRecord>& recs) {
  out << "delta_exp,gamma,c,size_sum,exponent\n";
  for (const auto& r : recs) {
    for (std::size_t i = 0; i < r.c_values.size(); ++i) {
      out << r.n << ',' << fmt(r.gamma) << ',' << r.c_values[i].str() << ',' << r.sizes[i] << ','
          << fmt(r.exponents[i]) << '\n';
    }
  }
}

void write_csv(std::ostream& out, const ProjectionAverageReport& r) {
  out << "c,weight,l2\n";
  for (std::size_t i = 0; i < r.c_values.size(); ++i) {
    out << fmt(r.c_values[i]) << ',' << fmt(r.weights[i]) << ',' << fmt(r.l2[i]) << '\n';
  }
}

void write_csv(std::ostream& out, const ProjectionEntropyReport& r) {
  out << "atom,entropy\n";
  for (std::size_t i = 0; i < r.entropies.size(); ++i) out << i << ',' << fmt(r.entropies[i]) << '\n';
}

void write_csv(std::ostream& out, const AssemblyReport& r) {
  out << "lo,hi,tag,log2_RA,cells,weighted,min_cell_avg,lower,C_block,bound_ok,fiber_ok,min_collapse_ok\n";
  for (const auto& b : r.blocks) {
    out << b.lo << ',' << b.hi << ',' << tag_name(b.tag) << ',' << fmt(b.log2_RA) << ',' << b.cells << ','
        << fmt(b.weighted) << ',' << fmt(b.min_cell_avg) << ',' << fmt(b.lower) << ',' << fmt(b.C_block) << ','
        << b.bound_ok << ',' << b.fiber_ok << ',' << b.min_collapse_ok << '\n';
  }
}

}  // namespace sumprod
