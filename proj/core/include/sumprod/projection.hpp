#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumprod/dyadic.hpp"
#include "sumprod/measure.hpp"

namespace sumprod {

inline constexpr std::size_t kPairCountLimit = 10000;

struct ProjectionL2 {
  DensityL2 pushforward;                // ||(pi_c mu)^(n)||_2^2 from the projected cell masses
  std::optional<DensityL2> pair_count;  // same quantity from (mu x mu) pairs sharing a tube
  bool paths_agree = true;
};

// mu2 lives on a grid of resolution >= n. The pair path is skipped above
// kPairCountLimit atoms (and when pair_path is false).
ProjectionL2 l2_of_projection(const DiscreteMeasure& mu2, const Dyadic& c, int n, bool pair_path = true);

// The atom x of a 1-d measure at resolution e read as c = x / 2^e.
inline Dyadic atom_value(const Atom& a, int e) { return Dyadic(a.x, e); }

struct ProjectionParams {
  double gamma = 1;
  double xi = 0.125;
  double C = 0;     // hypothesis constant; <= 0 means "use the measured one"
  double C0 = 1024; // budget for the absolute constant of the averaged bound
  bool exploratory = false;
};

struct HypothesisAudit {
  int n = 0;
  std::int64_t a_cells = 0, b_cells = 0;
  double gamma_A = 0, gamma_B = 0;  // |A| = Delta^-gamma_A etc., measured
  double C_mu = 0;                  // max_Q mu(Q) / Delta^(gamma_A + gamma_B)
  double C_nu = 0;                  // max_I nu(I) / Delta^gamma
  std::int64_t min_b_gap = -1;      // empty Delta-cells between consecutive B-cells (-1: single cell)
  double C_used = 1;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

HypothesisAudit audit_hypotheses(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n,
                                 const ProjectionParams& p);

struct HypothesisError : std::runtime_error {
  HypothesisAudit audit;
  explicit HypothesisError(HypothesisAudit a);
};

struct ProjectionAverageReport {
  HypothesisAudit audit;
  std::vector<double> c_values;
  std::vector<double> weights;
  std::vector<double> l2;  // per atom of nu
  bool paths_agree = true;
  std::size_t pair_checked = 0;
  double average = 0;
  double bound_term = 0;  // max{Delta^(gA + gB - 1), Delta^(gamma - 1 - xi)}
  double fitted = 0;      // average / bound_term
};

// Throws HypothesisError when the audit fails and p.exploratory is false.
ProjectionAverageReport averaged_l2(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n,
                                    const ProjectionParams& p);

struct ProjectionEntropyReport {
  HypothesisAudit audit;
  std::vector<double> entropies;  // H(pi_c mu, D_n) per atom of nu
  double average = 0;
  double lower_bound = 0;         // n min{gA + gB, gamma - xi} - log2 C - log2 C0
  double jensen_lhs = 0;          // -sum nu log2 ||.||^2
  double jensen_rhs = 0;          // -log2 sum nu ||.||^2
  bool jensen_ok = false;
  bool l2_entropy_ok = false;     // H >= n - log2 ||.||^2 for every c
  bool holds = false;
  double slack() const { return average - lower_bound; }
};

ProjectionEntropyReport averaged_projection_entropy(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n,
                                                    const ProjectionParams& p);

struct NearFarAudit {
  double near_mass = 0;   // (mu x mu){|p - q| < 10 Delta}
  double near_bound = 0;  // 361 C_mu Delta^(gA + gB)
  bool near_ok = false;
  std::int64_t far_pairs = 0;
  std::int64_t far_violations = 0;  // nu(I(p, q)) > (4 / (|dy| Delta) + 2) C_nu Delta^gamma
  std::int64_t horizontal_violations = 0;  // far pair sharing a tube with |dy| < 2 Delta
  double worst_far_ratio = 0;
};

// mu2 must live on the n-grid. Far pairs are sampled (seeded).
NearFarAudit near_far_audit(const DiscreteMeasure& mu2, const DiscreteMeasure& nu, int n, const ProjectionParams& p,
                            std::uint64_t seed, std::int64_t max_far_pairs = 2000);

struct TubeAudit {
  std::int64_t pairs = 0;
  std::int64_t violations = 0;
  double worst_ratio = 0;  // diameter * |dy| / Delta, frozen bound 4
};

// Pairs of n-grid points sharing a tube for some dyadic c; the set of
// c = k / 2^n in [-1, 1] giving a common tube has diameter <= 4 Delta / |p_y - q_y|.
TubeAudit tube_geometry_audit(int n, std::int64_t pairs, std::uint64_t seed);

struct VerticalAudit {
  std::int64_t tube_pairs = 0;   // (y1, y2, c) combinations producing a far pair in a common tube
  std::int64_t violations = 0;   // of which |y1 - y2| < 2
};

// Exhaustive over y1, y2 in [0, 2^n) and c = k / 2^n in [-1, 1].
VerticalAudit vertical_separation_audit(int n);

}  // namespace sumprod
