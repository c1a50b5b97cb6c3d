#pragma once

#include <string>
#include <vector>

#include "sumprod/dyadic.hpp"

namespace sumprod {

struct ParameterSet {
  double alpha = 0.7;
  double beta = 0.4;
  double gamma = 0.8;
  double kappa = 0.4;
  double eta = 0.05;
  double zeta = 0.5;
  // measured on an instance (|A| = delta^-alpha_bar, |B| = delta^-beta_1); 0 when unknown
  double alpha_bar = 0;
  double beta_1 = 0;
  double epsilon = 0;
  double epsilon_0 = 0;
  double epsilon_B = 0;
  int m = 2;
  int ell = 2;
  int N = 5;

  // (alpha - beta) / (1 - beta)
  double threshold() const;
  // Gamma = (alpha - beta) / (2 (1 - beta)) + gamma / 2
  double Gamma() const;
  // xi = (gamma - Gamma) / 4
  double xi() const;
  // xi rounded down to a multiple of 2^-bits, so the collapsed levels can be
  // computed exactly.
  Dyadic xi_dyadic(int bits = 10) const;
  // max(ceil(1 / zeta), ceil(4 / (gamma - Gamma)))
  int ell_min() const;
  // 1/2 [(1 - beta) - (alpha - beta) / Gamma]: guaranteed fraction of low levels
  double low_fraction() const;
  // alpha_bar + xi zeta low_fraction() - 2 eta
  double assembly_rate() const;
  int n() const { return ell * m * N; }

  // Every violated invariant, in words; empty when the set is admissible.
  std::vector<std::string> validate() const;
  // Same, minus the ell >= ell_min() requirement (desk-scale runs cannot meet it).
  std::vector<std::string> validate_desk_scale() const;
};

// alpha = 0.45, beta = 0.4, gamma = 1, zeta = 1/5 on (m, ell, N) = (2, 5, 2):
// small enough for exact evaluation, with xi |J| >= 1 reachable on the 10 fine levels.
ParameterSet assembly_defaults();

}  // namespace sumprod
