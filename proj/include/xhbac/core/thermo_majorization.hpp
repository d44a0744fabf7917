// Copyright 2026 The xhbac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xhbac/core/spectrum.hpp"
#include "xhbac/core/tolerance.hpp"

namespace xhbac {

/// A permutation of {0..d-1}. Entry i is the energy level placed at
/// position i of the ordering.
class BetaOrder {
 public:
  BetaOrder() = default;

  explicit BetaOrder(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    std::vector<bool> seen(perm_.size(), false);
    for (std::size_t v : perm_) {
      if (v >= perm_.size() || seen[v]) throw std::invalid_argument("BetaOrder: not a permutation");
      seen[v] = true;
    }
  }

  BetaOrder(std::initializer_list<std::size_t> perm) : BetaOrder(std::vector<std::size_t>(perm)) {}

  static BetaOrder identity(std::size_t d) {
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    return BetaOrder(std::move(perm));
  }

  std::size_t size() const { return perm_.size(); }
  std::size_t operator[](std::size_t position) const { return perm_[position]; }
  std::span<const std::size_t> values() const { return perm_; }

  /// position_of(level) = position of that level in the ordering.
  std::vector<std::size_t> inverse() const {
    std::vector<std::size_t> inv(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) inv[perm_[i]] = i;
    return inv;
  }

  friend bool operator==(const BetaOrder&, const BetaOrder&) = default;

 private:
  std::vector<std::size_t> perm_;
};

namespace detail {

inline void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

/// Boltzmann weights usable as curve widths: finite and strictly positive.
inline std::vector<double> curve_weights(const EnergySpectrum& spectrum, const char* where) {
  auto w = spectrum.boltzmann_weights();
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::domain_error(std::string(where) + ": Boltzmann weight underflow or overflow");
    }
  }
  return w;
}

// Rescaled populations compared in log space; relative ties within this
// margin keep their original index order.
inline constexpr double kOrderTieMargin = 1e-12;

}  // namespace detail

/// beta-order of p: positions sorted by non-increasing p_i e^{beta E_i}.
/// Ties (within a 1e-12 relative margin) keep the lower index first.
inline BetaOrder beta_order(const PopulationVector& p, const EnergySpectrum& spectrum) {
  detail::require_same_dim(p.size(), spectrum.dim(), "beta_order");
  const std::size_t d = p.size();
  std::vector<double> key(d);
  for (std::size_t i = 0; i < d; ++i) {
    key[i] = p[i] > 0.0 ? std::log(p[i]) + spectrum.beta() * spectrum.level(i)
                        : -std::numeric_limits<double>::infinity();
  }
  auto strictly_greater = [&](std::size_t a, std::size_t b) {
    if (std::isinf(key[b]) && key[b] < 0.0) return !(std::isinf(key[a]) && key[a] < 0.0);
    return key[a] > key[b] + detail::kOrderTieMargin * std::max(1.0, std::abs(key[b]));
  };
  // Insertion keeps the ordering well defined under the tie margin.
  std::vector<std::size_t> order;
  order.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto pos = std::find_if(order.begin(), order.end(),
                            [&](std::size_t e) { return strictly_greater(i, e); });
    order.insert(pos, i);
  }
  return BetaOrder(std::move(order));
}

/// Elbow points of a thermo-majorization curve.
struct ThermoCurve {
  struct Point {
    double x;
    double y;
  };
  std::vector<Point> points;

  double partition_sum() const { return points.back().x; }
};

inline ThermoCurve thermo_curve(const PopulationVector& p, const EnergySpectrum& spectrum) {
  detail::require_same_dim(p.size(), spectrum.dim(), "thermo_curve");
  const auto w = detail::curve_weights(spectrum, "thermo_curve");
  const BetaOrder order = beta_order(p, spectrum);
  ThermoCurve curve;
  curve.points.reserve(p.size() + 1);
  curve.points.push_back({0.0, 0.0});
  double x = 0.0;
  double y = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    x += w[order[i]];
    y += p[order[i]];
    curve.points.push_back({x, y});
  }
  return curve;
}

/// Height c_p(x) of the piecewise-linear curve; x must lie in [0, Z].
inline double curve_height(const ThermoCurve& curve, double x) {
  const auto& pts = curve.points;
  if (pts.size() < 2) throw std::invalid_argument("curve_height: degenerate curve");
  const double z = pts.back().x;
  const double slack = 1e-12 * std::max(1.0, z);
  if (!(x >= -slack && x <= z + slack)) {
    throw std::out_of_range("curve_height: x outside [0, Z]");
  }
  x = std::clamp(x, 0.0, z);
  auto it = std::lower_bound(pts.begin() + 1, pts.end(), x,
                             [](const ThermoCurve::Point& p, double v) { return p.x < v; });
  if (it == pts.end()) return pts.back().y;
  const auto& right = *it;
  const auto& left = *(it - 1);
  const double width = right.x - left.x;
  if (width <= 0.0) return right.y;
  return left.y + (right.y - left.y) * (x - left.x) / width;
}

/// True iff the curve of p is nowhere below the curve of q. Checking the
/// elbows of both curves suffices because both are piecewise linear.
inline bool thermo_majorizes(const PopulationVector& p, const PopulationVector& q,
                             const EnergySpectrum& spectrum, const Tolerance& tol = Tolerance{}) {
  detail::require_same_dim(p.size(), q.size(), "thermo_majorizes");
  const ThermoCurve cp = thermo_curve(p, spectrum);
  const ThermoCurve cq = thermo_curve(q, spectrum);
  const double z = std::min(cp.partition_sum(), cq.partition_sum());
  auto check = [&](double x) {
    x = std::min(x, z);
    const double hq = curve_height(cq, x);
    return tol.leq(hq, curve_height(cp, x));
  };
  for (const auto& pt : cp.points) {
    if (!check(pt.x)) return false;
  }
  for (const auto& pt : cq.points) {
    if (!check(pt.x)) return false;
  }
  return true;
}

/// Classical majorization: descending partial sums of p dominate those of q.
inline bool majorizes(std::span<const double> p, std::span<const double> q,
                      const Tolerance& tol = Tolerance{}) {
  detail::require_same_dim(p.size(), q.size(), "majorizes");
  std::vector<double> a(p.begin(), p.end());
  std::vector<double> b(q.begin(), q.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (!tol.leq(sb, sa)) return false;
  }
  return true;
}

/// Highest-energy arrangement of the eigenvalues: ascending eigenvalues on
/// ascending energies. Equal energies are filled in index order.
inline PopulationVector maximally_active(const PopulationVector& eigenvalues,
                                         const EnergySpectrum& spectrum) {
  detail::require_same_dim(eigenvalues.size(), spectrum.dim(), "maximally_active");
  std::vector<double> lam(eigenvalues.begin(), eigenvalues.end());
  std::sort(lam.begin(), lam.end());
  std::vector<std::size_t> by_energy(spectrum.dim());
  std::iota(by_energy.begin(), by_energy.end(), std::size_t{0});
  std::stable_sort(by_energy.begin(), by_energy.end(),
                   [&](std::size_t a, std::size_t b) { return spectrum.level(a) < spectrum.level(b); });
  std::vector<double> out(lam.size());
  for (std::size_t k = 0; k < lam.size(); ++k) out[by_energy[k]] = lam[k];
  return PopulationVector(std::move(out));
}

}  // namespace xhbac
