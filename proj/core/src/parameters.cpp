#include "sumprod/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace sumprod {

double ParameterSet::threshold() const { return (alpha - beta) / (1 - beta); }

double ParameterSet::Gamma() const { return 0.5 * threshold() + 0.5 * gamma; }

double ParameterSet::xi() const { return (gamma - Gamma()) / 4; }

Dyadic ParameterSet::xi_dyadic(int bits) const {
  double x = xi();
  if (!(x > 0)) throw std::domain_error("xi_dyadic: xi is not positive (need gamma > threshold)");
  auto k = static_cast<std::int64_t>(std::floor(std::ldexp(x, bits)));
  if (k < 1) throw std::domain_error("xi_dyadic: xi below 2^-bits");
  return Dyadic(k, bits);
}

int ParameterSet::ell_min() const {
  double g = gamma - Gamma();
  int a = static_cast<int>(std::ceil(1 / zeta - 1e-12));
  int b = g > 0 ? static_cast<int>(std::ceil(4 / g - 1e-12)) : INT32_MAX;
  return std::max(a, b);
}

double ParameterSet::low_fraction() const { return 0.5 * ((1 - beta) - (alpha - beta) / Gamma()); }

double ParameterSet::assembly_rate() const { return alpha_bar + xi() * zeta * low_fraction() - 2 * eta; }

std::vector<std::string> ParameterSet::validate_desk_scale() const {
  std::vector<std::string> out;
  auto unit = [&](const char* name, double v) {
    if (!(v > 0 && v <= 1)) out.push_back(std::string(name) + " must lie in (0, 1]");
  };
  unit("alpha", alpha);
  unit("beta", beta);
  unit("gamma", gamma);
  unit("kappa", kappa);
  unit("eta", eta);
  unit("zeta", zeta);
  if (!(beta <= alpha)) out.push_back("need beta <= alpha");
  if (!(alpha < 1)) out.push_back("need alpha < 1");
  if (beta < 1 && !(gamma > threshold())) {
    std::ostringstream s;
    s << "need gamma > (alpha - beta)/(1 - beta) = " << threshold();
    out.push_back(s.str());
  }
  if (m < 1 || ell < 1 || N < 1) out.push_back("m, ell, N must be >= 1");
  return out;
}

std::vector<std::string> ParameterSet::validate() const {
  auto out = validate_desk_scale();
  if (out.empty() && ell < ell_min()) {
    out.push_back("need ell >= max(ceil(1/zeta), ceil(4/(gamma - Gamma))) = " + std::to_string(ell_min()));
  }
  return out;
}

ParameterSet assembly_defaults() {
  ParameterSet p;
  p.alpha = 0.45;
  p.beta = 0.4;
  p.gamma = 1.0;
  p.kappa = 0.4;
  p.eta = 0.05;
  p.zeta = 0.2;
  p.m = 2;
  p.ell = 5;
  p.N = 2;
  return p;
}

}  // namespace sumprod
