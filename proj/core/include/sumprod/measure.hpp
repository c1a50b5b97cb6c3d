#pragma once

#include <cstdint>
#include <vector>

#include "sumprod/delta_set.hpp"
#include "sumprod/dyadic.hpp"

namespace sumprod {

using u128 = unsigned __int128;

// Point mass at (x, y) * 2^-n; y is 0 for one-dimensional measures.
struct Atom {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::uint64_t mass = 0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Probability measure with integer masses; the weight of an atom is
// mass / total(). Keeping masses integral makes every renormalisation,
// projection and L2 comparison exact.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  // Merges atoms on the same point and drops zero masses. Throws if the
  // total is zero or exceeds 2^63.
  DiscreteMeasure(int dim, int n, std::vector<Atom> atoms);

  int dim() const { return dim_; }
  int n() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }  // sorted by (x, y)
  std::size_t size() const { return atoms_.size(); }
  std::uint64_t total() const { return total_; }
  double weight(const Atom& a) const { return static_cast<double>(a.mass) / static_cast<double>(total_); }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  int dim_ = 1;
  int n_ = 0;
  std::vector<Atom> atoms_;
  std::uint64_t total_ = 0;
};

DiscreteMeasure counting_measure(const DeltaSet& a);
DiscreteMeasure point_mass(int n, std::int64_t x, std::int64_t y = 0, int dim = 1);
// mu_A x mu_B on the plane; both one-dimensional at the same resolution.
DiscreteMeasure product_measure(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Masses of the dyadic cells of level j (0 <= j <= n), as a measure at resolution j.
DiscreteMeasure coarsen(const DiscreteMeasure& mu, int j);

// Push-forward under (x, y) -> x + c y with floor-cell assignment, same resolution.
DiscreteMeasure project(const DiscreteMeasure& mu2, const Dyadic& c);
// Cell index of x + c y at resolution n.
inline std::int64_t project_index(std::int64_t x, std::int64_t y, const Dyadic& c) { return x + c.floor_mul(y); }

DiscreteMeasure convolve(const DiscreteMeasure& a, const DiscreteMeasure& b);
DiscreteMeasure reflect(const DiscreteMeasure& a);
DiscreteMeasure translate(const DiscreteMeasure& a, std::int64_t dx, std::int64_t dy = 0);
// nu * (-nu)
DiscreteMeasure symmetrize(const DiscreteMeasure& nu);

// mu^Q for the level-j cell Q with lower corner (qx, qy) * 2^-j: restricted,
// renormalised and rescaled to the unit cube; resolution becomes n - j.
DiscreteMeasure renormalize_cell(const DiscreteMeasure& mu, int j, std::int64_t qx, std::int64_t qy = 0);

// ||mu^(j)||_2^2 = 2^(d j) sum_Q mu(Q)^2 kept as the exact triple
// (sum of squared masses, total, d j).
struct DensityL2 {
  u128 sum_sq = 0;
  std::uint64_t total = 1;
  int log_scale = 0;  // d * j
  long double value() const;
  double log2_value() const;
  friend bool operator==(const DensityL2&, const DensityL2&) = default;
};

DensityL2 discretize_density_l2(const DiscreteMeasure& mu, int j);

struct BallAudit {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  double worst_ratio = 0;  // max nu(B(x, r)) / nu(B(0, r))
  std::int64_t witness_x = 0;
  int witness_r_exp = 0;
};

// nu(B(x, r)) <= constant * nu(B(0, r)) over closed balls, x at atoms of nu,
// r = 2^-j for r_max_exp <= j <= r_min_exp.
BallAudit symmetric_ball_audit(const DiscreteMeasure& nu, int r_min_exp, int r_max_exp, double constant = 4);

}  // namespace sumprod
