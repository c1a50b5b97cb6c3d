#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sumprod/branching.hpp"
#include "sumprod/dyadic.hpp"
#include "sumprod/measure.hpp"

namespace sumprod {

// Shannon entropy in bits of the distribution masses / sum(masses).
double entropy_of_masses(const std::vector<std::uint64_t>& masses);

// H(mu, D_j), bits.
double entropy(const DiscreteMeasure& mu, int j);

struct ConditionalEntropy {
  double by_definition = 0;  // sum_E mu(E) H(mu_E, D_fine)
  double by_difference = 0;  // H(mu, D_fine) - H(mu, D_coarse)
};

ConditionalEntropy conditional_entropy(const DiscreteMeasure& mu, int j_fine, int j_coarse);

// H(mu, D_j) - (d j - log2 ||mu^(j)||_2^2); never negative.
double l2_entropy_gap(const DiscreteMeasure& mu, int j);

struct ConcavityReport {
  double lhs = 0;  // H(mu * nu, D_j)
  double rhs = 0;  // sum_x nu(x) H(mu translated by x, D_j)
  bool holds = false;
};

ConcavityReport concavity_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int j);

// H(pi_c mu, D_k) for a planar measure, 0 <= k <= n.
double projected_entropy(const DiscreteMeasure& mu2, const Dyadic& c, int k);

struct CellEntropy {
  std::int64_t qx = 0, qy = 0;
  std::uint64_t mass = 0;  // mu(Q) * total
  double entropy = 0;      // H(pi_c mu^Q, D_k)
};

// One entry per level-j0 cell Q with mu(Q) > 0. Needs k <= n - j0.
std::vector<CellEntropy> cell_projected_entropies(const DiscreteMeasure& mu2, const Dyadic& c, int j0, int k);

inline const double kChainCorrection = std::log2(3.0);

struct ChainBlock {
  int lo = 0, hi = 0;     // cut points n_j, n_{j+1}
  std::size_t cells = 0;  // cells of D_{n_j} with positive mass
  double weighted = 0;    // sum_Q mu(Q) H(pi_c mu^Q, D_{n_{j+1} - n_j})
};

struct EntropyChainReport {
  std::vector<int> cuts;
  std::vector<ChainBlock> blocks;
  double lhs = 0;         // H(pi_c mu, D_n)
  double rhs_sum = 0;     // sum of block terms
  double correction = 0;  // h * log2(3)
  bool holds = false;
  double slack() const { return lhs - (rhs_sum - correction); }
};

// cuts: 0 = n_0 < n_1 < ... < n_h = n.
EntropyChainReport entropy_chain(const DiscreteMeasure& mu2, const Dyadic& c, const std::vector<int>& cuts);

struct FiberBound {
  double min_entropy = 0;  // min over Q0 of H(pi_c mu^Q0, D_{m |J|})
  double bound = 0;        // log2 R_A(J) - 1
  std::size_t cells = 0;
  bool holds = false;
};

// mu2 = mu_A x mu_B for (m, levels)-uniform A (profile_a) and any B at the
// same resolution m * levels; J = {lo, ..., hi}.
FiberBound uniform_fiber_entropy_bound(const DiscreteMeasure& mu2, const BranchingProfile& profile_a,
                                       const Dyadic& c, int lo, int hi);

}  // namespace sumprod
