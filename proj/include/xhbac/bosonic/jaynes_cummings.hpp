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


// Resonant Jaynes-Cummings coupling of a qubit to a thermal mode, used as an
// approximate beta-swap. Interaction times are quoted as s = g t.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "xhbac/bosonic/fock.hpp"

namespace xhbac::bosonic {

/// Probability that an excited qubit meeting a thermal mode leaves in its
/// ground state after time s, as a weighted sum of Rabi oscillations.
class DeexcitationSeries {
 public:
  DeexcitationSeries(double beta_gap, const FockTruncation& trunc) : tail_(fock_boltzmann(beta_gap, double(trunc.n_max))) {
    const double ground = 1.0 - fock_boltzmann(beta_gap, 1.0);
    for (std::size_t n = 1; n <= trunc.n_max; ++n) {
      const double w = ground * fock_boltzmann(beta_gap, static_cast<double>(n - 1));
      if (w == 0.0) break;
      weight_.push_back(w);
      root_.push_back(std::sqrt(static_cast<double>(n)));
    }
  }

  double operator()(double s) const {
    double g = 0.0;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
      const double x = std::sin(s * root_[i]);
      g += weight_[i] * x * x;
    }
    return g;
  }

  /// Weight of the neglected terms; the true value exceeds operator() by at
  /// most this much.
  double tail_bound() const { return tail_; }

  /// Evaluates on s_lo + i*h for i < count, calling visit(i, value). Phases
  /// advance by complex rotation and are re-seeded periodically.
  template <class Visit>
  void scan(double s_lo, double h, std::size_t count, Visit&& visit) const {
    constexpr std::size_t kReseed = 1024;
    const std::size_t m = weight_.size();
    std::vector<std::complex<double>> z(m);
    std::vector<std::complex<double>> step(m);
    for (std::size_t j = 0; j < m; ++j) step[j] = std::polar(1.0, 2.0 * h * root_[j]);
    for (std::size_t i = 0; i < count; ++i) {
      if (i % kReseed == 0) {
        const double s = s_lo + h * static_cast<double>(i);
        for (std::size_t j = 0; j < m; ++j) z[j] = std::polar(1.0, 2.0 * s * root_[j]);
      }
      double g = 0.0;
      for (std::size_t j = 0; j < m; ++j) g += weight_[j] * (1.0 - z[j].real());
      visit(i, 0.5 * g);
      for (std::size_t j = 0; j < m; ++j) z[j] *= step[j];
    }
  }

 private:
  double tail_;
  std::vector<double> weight_;
  std::vector<double> root_;
};

inline double jc_deexcitation(double s, double beta_gap, const FockTruncation& trunc) {
  if (s < 0.0) throw std::invalid_argument("jc_deexcitation: s must be non-negative");
  return DeexcitationSeries(beta_gap, trunc)(s);
}

struct InteractionOptimum {
  double s = 0.0;
  double deexcitation = 0.0;
};

/// Global maximum of the de-excitation probability on [s_lo, s_hi]: a grid
/// scan at spacing `step` followed by golden-section refinement around the
/// best grid point.
inline InteractionOptimum optimize_interaction_time(double beta_gap, double s_lo, double s_hi,
                                                    const FockTruncation& trunc, double step = 1e-3) {
  if (!(s_lo < s_hi) || s_lo < 0.0) throw std::invalid_argument("optimize_interaction_time: need 0 <= s_lo < s_hi");
  if (!(step > 0.0)) throw std::invalid_argument("optimize_interaction_time: step must be positive");
  const DeexcitationSeries g(beta_gap, trunc);
  const auto count = static_cast<std::size_t>(std::floor((s_hi - s_lo) / step)) + 1;
  std::size_t best_i = 0;
  double best = -1.0;
  g.scan(s_lo, step, count, [&](std::size_t i, double v) {
    if (v > best) {
      best = v;
      best_i = i;
    }
  });
  const double centre = s_lo + step * static_cast<double>(best_i);
  double a = std::max(s_lo, centre - step);
  double b = std::min(s_hi, centre + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, b); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  InteractionOptimum out{centre, g(centre)};
  const double refined = 0.5 * (a + b);
  if (const double v = g(refined); v > out.deexcitation) out = {refined, v};
  return out;
}

/// Smallest de-excitation probability when the interaction time lands
/// anywhere in [s - delta, s + delta], sampled at spacing `step`.
inline double worst_case_deexcitation(double s, double delta, double beta_gap, const FockTruncation& trunc,
                                      double step = 1e-3) {
  if (delta < 0.0 || delta > s) throw std::invalid_argument("worst_case_deexcitation: need 0 <= delta <= s");
  const DeexcitationSeries g(beta_gap, trunc);
  if (delta == 0.0) return g(s);
  const auto count = static_cast<std::size_t>(std::ceil(2.0 * delta / step));
  const double h = 2.0 * delta / static_cast<double>(count);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= count; ++i) worst = std::min(worst, g(s - delta + h * static_cast<double>(i)));
  return worst;
}

/// Where the two branches of the de-excitation bound meet.
inline double bound_branch_point() { return std::log(4.0) / 3.0; }

/// Branch of the bound used at and above the branch-point temperature.
inline double bound_hot_branch(double beta_bar) {
  return (8.0 * std::exp(-beta_bar) - std::exp(2.0 * beta_bar) + std::exp(3.0 * beta_bar) + 8.0) / 16.0;
}

/// Branch used below it.
inline double bound_cold_branch(double beta_bar) {
  return std::exp(-4.0 * beta_bar) - std::exp(-3.0 * beta_bar) + 1.0;
}

/// Temperature-dependent upper bound on the de-excitation probability over
/// all interaction times; beta_bar is beta times the gap.
inline double upper_bound_G(double beta_bar) {
  if (!(beta_bar >= 0.0)) throw std::invalid_argument("upper_bound_G: beta_bar must be non-negative");
  if (std::isinf(beta_bar)) return 1.0;
  return beta_bar <= bound_branch_point() ? bound_hot_branch(beta_bar) : bound_cold_branch(beta_bar);
}

/// Matching bound on the asymptotic ground population.
inline double asymptotic_upper_bound(double beta_bar) {
  if (!(beta_bar >= 0.0)) throw std::invalid_argument("asymptotic_upper_bound: beta_bar must be non-negative");
  if (std::isinf(beta_bar)) return 1.0;
  const double e1 = std::exp(beta_bar);
  if (beta_bar <= bound_branch_point()) {
    const double e2 = e1 * e1;
    const double e3 = e2 * e1;
    return 1.0 / (e1 + 16.0 * e2 / (-16.0 * e1 + e3 - 8.0) + 1.0);
  }
  return 1.0 / (e1 / (std::exp(4.0 * beta_bar) + 1.0) + 1.0);
}

namespace detail {

// Rotates every block {|0,n>, |1,n-1>} by angle(n). The excited top level
// pairs with |0,n_max+1>, taken as empty; what it sends there is lost.
template <class Angle>
JointDiagState rotate_blocks(const JointDiagState& state, Angle&& angle) {
  state.validate();
  const std::size_t top = state.n_max();
  JointDiagState out = state;
  for (std::size_t n = 1; n <= top; ++n) {
    const double c = std::cos(angle(n));
    const double cos2 = c * c;
    const double sin2 = 1.0 - cos2;
    out.ground[n] = cos2 * state.ground[n] + sin2 * state.excited[n - 1];
    out.excited[n - 1] = sin2 * state.ground[n] + cos2 * state.excited[n - 1];
  }
  const double c = std::cos(angle(top + 1));
  out.excited[top] = c * c * state.excited[top];
  out.lost += (1.0 - c * c) * state.excited[top];
  return out;
}

}  // namespace detail

/// Populations after the resonant coupling acts for time t_int at rate g.
inline JointDiagState jc_round(const JointDiagState& state, double g, double t_int) {
  if (g < 0.0 || t_int < 0.0) throw std::invalid_argument("jc_round: g and t_int must be non-negative");
  const double s = g * t_int;
  return detail::rotate_blocks(state, [s](std::size_t n) { return s * std::sqrt(static_cast<double>(n)); });
}

/// Populations after the intensity-dependent coupling: every block turns by
/// the same angle s, so s = pi/2 is an exact exchange.
inline JointDiagState intensity_dependent_jc_round(const JointDiagState& state, double s) {
  if (s < 0.0) throw std::invalid_argument("intensity_dependent_jc_round: s must be non-negative");
  return detail::rotate_blocks(state, [s](std::size_t) { return s; });
}

}  // namespace xhbac::bosonic
