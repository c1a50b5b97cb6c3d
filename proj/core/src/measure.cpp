#include "sumprod/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sumprod {

namespace {

constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 63;

bool atom_less(const Atom& a, const Atom& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  u128 p = static_cast<u128>(a) * b;
  if (p > kMaxTotal) throw std::overflow_error("measure mass product exceeds 2^63");
  return static_cast<std::uint64_t>(p);
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dim, int n, std::vector<Atom> atoms) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("DiscreteMeasure: dim must be 1 or 2");
  if (n < 0 || n > 62) throw std::invalid_argument("DiscreteMeasure: resolution out of range");
  std::sort(atoms.begin(), atoms.end(), atom_less);
  u128 total = 0;
  for (const auto& a : atoms) {
    if (a.mass == 0) continue;
    if (dim == 1 && a.y != 0) throw std::invalid_argument("DiscreteMeasure: 1-d atom with y != 0");
    if (!atoms_.empty() && atoms_.back().x == a.x && atoms_.back().y == a.y) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
    total += a.mass;
    if (total > kMaxTotal) throw std::overflow_error("DiscreteMeasure: total mass exceeds 2^63");
  }
  if (total == 0) throw std::invalid_argument("DiscreteMeasure: zero total mass");
  total_ = static_cast<std::uint64_t>(total);
}

DiscreteMeasure counting_measure(const DeltaSet& a) {
  if (a.empty()) throw std::invalid_argument("counting_measure: empty set");
  std::vector<Atom> atoms;
  atoms.reserve(a.size());
  for (std::int64_t k : a.indices()) atoms.push_back({k, 0, 1});
  return DiscreteMeasure(1, a.n(), std::move(atoms));
}

DiscreteMeasure point_mass(int n, std::int64_t x, std::int64_t y, int dim) {
  return DiscreteMeasure(dim, n, {{x, dim == 2 ? y : 0, 1}});
}

DiscreteMeasure product_measure(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != 1 || b.dim() != 1) throw std::invalid_argument("product_measure: factors must be 1-d");
  if (a.n() != b.n()) throw std::invalid_argument("product_measure: resolution mismatch");
  checked_mul(a.total(), b.total());
  std::vector<Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (const auto& p : a.atoms()) {
    for (const auto& q : b.atoms()) atoms.push_back({p.x, q.x, p.mass * q.mass});
  }
  return DiscreteMeasure(2, a.n(), std::move(atoms));
}

DiscreteMeasure coarsen(const DiscreteMeasure& mu, int j) {
  if (j < 0 || j > mu.n()) throw std::out_of_range("coarsen: level " + std::to_string(j) + " outside [0, n]");
  const int sh = mu.n() - j;
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) atoms.push_back({a.x >> sh, a.y >> sh, a.mass});
  return DiscreteMeasure(mu.dim(), j, std::move(atoms));
}

DiscreteMeasure project(const DiscreteMeasure& mu2, const Dyadic& c) {
  if (mu2.dim() != 2) throw std::invalid_argument("project: measure must be 2-d");
  if (c > Dyadic::integer(1) || c < Dyadic::integer(-1)) throw std::invalid_argument("project: need |c| <= 1");
  std::vector<Atom> atoms;
  atoms.reserve(mu2.size());
  for (const auto& a : mu2.atoms()) atoms.push_back({project_index(a.x, a.y, c), 0, a.mass});
  return DiscreteMeasure(1, mu2.n(), std::move(atoms));
}

DiscreteMeasure convolve(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != 1 || b.dim() != 1) throw std::invalid_argument("convolve: measures must be 1-d");
  if (a.n() != b.n()) throw std::invalid_argument("convolve: resolution mismatch");
  checked_mul(a.total(), b.total());
  std::vector<Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (const auto& p : a.atoms()) {
    for (const auto& q : b.atoms()) atoms.push_back({p.x + q.x, 0, p.mass * q.mass});
  }
  return DiscreteMeasure(1, a.n(), std::move(atoms));
}

DiscreteMeasure reflect(const DiscreteMeasure& a) {
  std::vector<Atom> atoms = a.atoms();
  for (auto& p : atoms) {
    p.x = -p.x;
    p.y = -p.y;
  }
  return DiscreteMeasure(a.dim(), a.n(), std::move(atoms));
}

DiscreteMeasure translate(const DiscreteMeasure& a, std::int64_t dx, std::int64_t dy) {
  if (a.dim() == 1 && dy != 0) throw std::invalid_argument("translate: dy given for a 1-d measure");
  std::vector<Atom> atoms = a.atoms();
  for (auto& p : atoms) {
    p.x += dx;
    p.y += dy;
  }
  return DiscreteMeasure(a.dim(), a.n(), std::move(atoms));
}

DiscreteMeasure symmetrize(const DiscreteMeasure& nu) { return convolve(nu, reflect(nu)); }

DiscreteMeasure renormalize_cell(const DiscreteMeasure& mu, int j, std::int64_t qx, std::int64_t qy) {
  if (j < 0 || j > mu.n()) throw std::out_of_range("renormalize_cell: level outside [0, n]");
  if (mu.dim() == 1 && qy != 0) throw std::invalid_argument("renormalize_cell: qy given for a 1-d measure");
  const int sh = mu.n() - j;
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) {
    if ((a.x >> sh) == qx && (a.y >> sh) == qy) atoms.push_back({a.x - (qx << sh), a.y - (qy << sh), a.mass});
  }
  if (atoms.empty()) throw std::invalid_argument("renormalize_cell: cell has zero mass");
  return DiscreteMeasure(mu.dim(), sh, std::move(atoms));
}

long double DensityL2::value() const {
  long double t = static_cast<long double>(total);
  return std::ldexp(static_cast<long double>(sum_sq) / (t * t), log_scale);
}

double DensityL2::log2_value() const {
  long double t = static_cast<long double>(total);
  return static_cast<double>(std::log2(static_cast<long double>(sum_sq)) - 2 * std::log2(t) + log_scale);
}

DensityL2 discretize_density_l2(const DiscreteMeasure& mu, int j) {
  DiscreteMeasure c = coarsen(mu, j);
  DensityL2 out;
  out.total = c.total();
  out.log_scale = mu.dim() * j;
  for (const auto& a : c.atoms()) out.sum_sq += static_cast<u128>(a.mass) * a.mass;
  return out;
}

BallAudit symmetric_ball_audit(const DiscreteMeasure& nu, int r_min_exp, int r_max_exp, double constant) {
  if (nu.dim() != 1) throw std::invalid_argument("symmetric_ball_audit: measure must be 1-d");
  if (r_min_exp < r_max_exp || r_max_exp < 0) throw std::invalid_argument("symmetric_ball_audit: bad radius range");
  const auto& at = nu.atoms();
  std::vector<std::int64_t> xs;
  std::vector<u128> prefix{0};
  for (const auto& a : at) {
    xs.push_back(a.x);
    prefix.push_back(prefix.back() + a.mass);
  }
  auto mass_in = [&](std::int64_t lo, std::int64_t hi) {
    auto l = std::lower_bound(xs.begin(), xs.end(), lo) - xs.begin();
    auto r = std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin();
    return prefix[static_cast<std::size_t>(r)] - prefix[static_cast<std::size_t>(l)];
  };
  BallAudit audit;
  for (int j = r_max_exp; j <= r_min_exp; ++j) {
    const std::int64_t h = j <= nu.n() ? (std::int64_t{1} << (nu.n() - j)) : 0;
    const u128 at_zero = mass_in(-h, h);
    for (std::int64_t x : xs) {
      const u128 here = mass_in(x - h, x + h);
      ++audit.checked;
      long double ratio = at_zero == 0 ? std::numeric_limits<long double>::infinity()
                                       : static_cast<long double>(here) / static_cast<long double>(at_zero);
      if (ratio > audit.worst_ratio) {
        audit.worst_ratio = static_cast<double>(ratio);
        audit.witness_x = x;
        audit.witness_r_exp = j;
      }
      if (ratio > static_cast<long double>(constant)) ++audit.violations;
    }
  }
  return audit;
}

}  // namespace sumprod
