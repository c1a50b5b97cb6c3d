#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sumprod/branching.hpp"
#include "sumprod/delta_set.hpp"
#include "sumprod/dyadic.hpp"
#include "sumprod/dyadic_core.hpp"
#include "sumprod/intervals.hpp"
#include "sumprod/parameters.hpp"

namespace sumprod {

// R(s) = 2^(b_s) with sum b_s = round(dim * m * levels) spread evenly, b_s <= m.
BranchingProfile regular_profile(int m, int levels, double dim);

// ---- sharpness of the three-progression example -------------------------

struct SharpnessRow {
  std::int64_t n_param = 1;
  std::size_t size_a = 0, size_b = 0, size_c = 0;
  std::size_t abc = 0;         // |A + B C|_delta
  std::size_t max_single = 0;  // max_c |A + c B|_delta
  double ratio = 1;            // |A + B C| / |A|
  double slope = 0;            // log ratio / log n_param (0 for n_param = 1)
  bool exact = true;
};

// Each n must be a fourth power <= 2^24.
std::vector<SharpnessRow> run_sharpness_form87(const std::vector<std::int64_t>& n_params);

// ---- doubling ladder --------------------------------------------------------

struct LadderResult {
  std::vector<std::size_t> sizes;  // |2^k B| for k = 0..n_steps + 1
  double factor = 0;               // 2 delta^(-1/n_steps)
  int k = 0;                       // first k in [1, n_steps] with |2^(k+1) B| <= factor |2^k B|; 0 if none
  bool found() const { return k > 0; }
};

LadderResult run_doubling_ladder(const DeltaSet& b, int n_steps);

// ---- greedy iterated sums ---------------------------------------------------

struct GreedyResult {
  std::vector<std::size_t> sizes;  // |H_1|, ..., |H_N|
  std::vector<Dyadic> c_sequence;  // c_1, ..., c_N
  int n_star = 0;                  // first n with |H_{n+1}| <= 2 delta^(-1/(N-1)) |H_n|; 0 if none
  double exponent = 0;             // log2 |H_N| / n
  double target = 0;               // beta + gamma (1 - beta) - eta
  std::int64_t final_width = 1;
};

// H_1 = c_1 B with c_1 = min C; H_{k+1} = H_k + c B for the c in C
// maximising the size (ties: smallest c).
GreedyResult run_greedy_iterated_sum(const DeltaSet& b, const DeltaSet& c, int n_steps, double beta, double gamma,
                                     double eta);

// ---- expansion sweep --------------------------------------------------------

enum class InstanceFamily { form87, uniform_tree, random_frostman, p1p2_tree };

std::string family_name(InstanceFamily f);
InstanceFamily parse_family(const std::string& s);

struct ExperimentConfig {
  ParameterSet params;
  InstanceFamily family = InstanceFamily::uniform_tree;
  std::vector<int> deltas{18};  // delta = 2^-n
  std::vector<double> gammas{0.2, 0.5, 0.8};
  std::size_t max_atoms = 10000;  // above this many c, a seeded sample of this size
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";

  void validate() const;
};

struct ExpansionRecord {
  int n = 0;
  double gamma = 0;
  double alpha_bar = 0;
  std::size_t size_a = 0, size_b = 0, size_c = 0;
  bool sampled = false;
  std::vector<Dyadic> c_values;
  std::vector<std::size_t> sizes;   // |A + c B|_delta per c
  std::vector<double> exponents;    // log2 |A + c B| / n - alpha_bar
  double median = 0;
  double mean = 0;
  Dyadic best_c;
  double best_exponent = 0;
  std::string a_family = "arithmetic progression";
};

struct SweepInstance {
  DeltaSet a, b, c;
};

// The sets used for one (n, gamma) point of the sweep.
SweepInstance build_sweep_instance(const ExperimentConfig& cfg, int n, double gamma);

std::vector<ExpansionRecord> run_expansion_sweep(const ExperimentConfig& cfg);

double median_of(std::vector<double> v);

// ---- numerology ---------------------------------------------------------------

struct NumerologyReport {
  std::int64_t pairs = 0;       // admissible (R_A, R_B) pairs
  std::int64_t checks = 0;      // (pair, Gamma) combinations
  std::int64_t exceptions = 0;  // no level with R_B = 1 and R_A <= 2^(Gamma m)
  std::string first_exception;
};

// All profile pairs with R_B(s) in {1, 2^m}, R_A(s) = 2^m where R_B(s) > 1,
// at least one level with R_B(s) = 1, for 1 <= m <= m_max and 1 <= N <= N_max;
// Gamma over multiples of gamma_step in (threshold, 1].
NumerologyReport numerology_scan(int m_max, int N_max, double gamma_step = 0.125);

// ---- final assembly -----------------------------------------------------------

struct AssemblyOptions {
  int nu_bits = 6;                  // C is the full grid at resolution 2^-nu_bits
  std::size_t max_atoms = 1 << 16;  // cap on |A'| |B''|
  int max_attempts = 400;
  int xi_bits = 10;
  double C0 = 1024;
  // left_packed with R = 1 on the last fine level of every coarse block keeps
  // B' separated, so the first pruning leaves it alone
  Placement b_placement = Placement::random;
};

struct AssemblyBlock {
  int lo = 0, hi = 0;
  IntervalTag tag = IntervalTag::useless;
  double log2_RA = 0;
  std::size_t cells = 0;
  double weighted = 0;      // sum_Q mu(Q) int H(pi_c mu^Q, D_{m|J|}) dnu
  double min_cell_avg = 0;  // min_Q int H(pi_c mu^Q, D_{m|J|}) dnu
  double lower = 0;         // per-cell lower bound used in the assembly
  double C_block = 1;       // measured constant for nu at scale 2^-(m|J|)
  bool bound_ok = false;    // low: averaged bound; useless: per-c fiber bound
  bool fiber_ok = false;    // H(pi_c mu^Q, D_{m|J|}) >= log2 R_A(J) - 1 for every c and Q
  bool min_collapse_ok = true;
};

struct AssemblyReport {
  ParameterSet params;
  std::uint64_t seed = 0;
  int attempts = 0;
  std::string failure;  // empty on success

  BranchingProfile profile_a, profile_b, profile_b_pruned;
  IntervalFamily extended, classified, partition;
  std::vector<int> collapsed;
  std::size_t size_a = 0, size_b = 0;
  double alpha_bar = 0, beta_1 = 0, eta_measured = 0;
  std::int64_t sandwich_violations = 0, prune2_floor_violations = 0, prune2_separation_violations = 0;
  std::int64_t separation1_violations = 0;

  std::vector<AssemblyBlock> blocks;
  std::vector<Dyadic> c_values;
  std::vector<double> lhs_per_c;    // H(pi_c mu, D_{l m N})
  std::int64_t chain_failures = 0;  // c with lhs < chain rhs - h log2 3
  double lhs_avg = 0;
  double chain_rhs_avg = 0;
  double correction = 0;  // h log2 3
  double contributions = 0;
  bool chain_ok = false;
  bool assembly_ok = false;  // lhs_avg >= contributions - correction
  double best_entropy = 0;
  Dyadic best_c;
  double rate_target = 0;  // (assembly_rate) l m N - h (log2 40 + log2 C0)
  bool rate_target_reached = false;
  double low_length = 0, low_length_bound = 0;

  bool has_low() const;
  bool ok() const { return failure.empty() && chain_ok && assembly_ok && all_blocks_ok(); }
  bool all_blocks_ok() const;
};

// Random polarised instance on (m, ell, N) from params.
AssemblyReport run_final_assembly(const ParameterSet& params, std::uint64_t seed, const AssemblyOptions& opt = {});

// Fixed fine profiles (levels ell N, m bits); B' is pruned before use.
AssemblyReport run_final_assembly(const ParameterSet& params, const BranchingProfile& profile_a,
                                  const BranchingProfile& profile_b, std::uint64_t seed,
                                  const AssemblyOptions& opt = {});

}  // namespace sumprod
