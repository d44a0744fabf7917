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
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xhbac/core/gibbs_matrix.hpp"
#include "xhbac/core/spectrum.hpp"
#include "xhbac/core/thermo_majorization.hpp"
#include "xhbac/protocols/trace.hpp"

namespace xhbac::protocols {

/// e^{-beta * delta} for delta >= 0, with the beta = inf limit taken exactly.
inline double decay_factor(double beta, double delta) {
  if (delta == 0.0) return 1.0;
  if (std::isinf(beta)) return 0.0;
  return std::exp(-beta * delta);
}

/// Gap E_1 - E_0 of a two-level spectrum.
inline double qubit_gap(const EnergySpectrum& spectrum) {
  if (spectrum.dim() != 2) throw std::invalid_argument("qubit_gap: spectrum is not a qubit");
  return spectrum.level(1) - spectrum.level(0);
}

// ---------------------------------------------------------------------------
// Swaps and ladders.

/// beta-swap on the pair (i, j): full de-excitation j -> i and excitation
/// probability e^{-beta (E_j - E_i)}; identity on the other levels.
inline GibbsMatrix beta_swap_matrix(std::size_t i, std::size_t j, const EnergySpectrum& spectrum) {
  const std::size_t d = spectrum.dim();
  if (i >= j) throw std::invalid_argument("beta_swap_matrix: need i < j");
  if (j >= d) throw std::out_of_range("beta_swap_matrix: level out of range");
  const double up = decay_factor(spectrum.beta(), spectrum.level(j) - spectrum.level(i));
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(a, a) = 1.0 - up;
  m(a, b) = 1.0;
  m(b, a) = up;
  m(b, b) = 0.0;
  return GibbsMatrix(std::move(m), spectrum);
}

/// Permutation matrix exchanging levels i and j. Not Gibbs-stochastic unless
/// the levels are degenerate; it models a unitary, not a thermalization.
inline Eigen::MatrixXd transposition_matrix(std::size_t i, std::size_t j, std::size_t d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.row(static_cast<Eigen::Index>(i)).swap(m.row(static_cast<Eigen::Index>(j)));
  return m;
}

/// Adjacent beta-swaps beta_{0,1} beta_{1,2} ... beta_{d-2,d-1}; the top pair
/// acts first, so population cascades down one level per swap.
inline GibbsMatrix ladder_thermalization(const EnergySpectrum& spectrum) {
  const std::size_t d = spectrum.dim();
  if (d < 2) throw std::invalid_argument("ladder_thermalization: need d >= 2");
  GibbsMatrix g = GibbsMatrix::identity(spectrum);
  for (std::size_t i = d - 1; i-- > 0;) g = beta_swap_matrix(i, i + 1, spectrum) * g;
  return g;
}

/// One ladder round as a single matrix: swap 0 <-> d-1, then the ladder.
inline Eigen::MatrixXd ladder_round_matrix(const EnergySpectrum& spectrum) {
  return ladder_thermalization(spectrum).entries() * transposition_matrix(0, spectrum.dim() - 1, spectrum.dim());
}

inline PopulationVector qudit_ladder_round(const PopulationVector& p, const EnergySpectrum& spectrum) {
  xhbac::detail::require_same_dim(p.size(), spectrum.dim(), "qudit_ladder_round");
  std::vector<double> swapped(p.begin(), p.end());
  std::swap(swapped.front(), swapped.back());
  return ladder_thermalization(spectrum).apply(PopulationVector(std::move(swapped)));
}

inline ProtocolTrace run_ladder_protocol(const PopulationVector& initial, const EnergySpectrum& spectrum,
                                         std::size_t rounds) {
  ProtocolTrace trace("ladder", CompositeSpec(spectrum));
  trace.push(initial);
  PopulationVector p = initial;
  for (std::size_t k = 0; k < rounds; ++k) {
    p = qudit_ladder_round(p, spectrum);
    trace.push(p);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Closed forms.

/// Qubit beta-swap protocol: p_0 after k rounds.
inline double qubit_cooling_closed_form(double p0, double beta_gap, std::size_t k) {
  return 1.0 - std::exp(-static_cast<double>(k) * beta_gap) * (1.0 - p0);
}

/// Ladder protocol sampled every d-1 rounds: p_0 after k blocks, with
/// beta_omega = beta (E_{d-1} - E_0).
inline double ladder_cooling_closed_form(double p0, double beta_omega, std::size_t blocks) {
  return 1.0 - std::exp(-static_cast<double>(blocks) * beta_omega) * (1.0 - p0);
}

/// Largest de-excitation deficit for which the noisy beta-swap stays optimal.
inline double noise_validity_bound(double beta_gap) {
  return 1.0 / (1.0 + std::exp(beta_gap) + std::exp(2.0 * beta_gap));
}

inline double noisy_asymptote(double epsilon, double beta_gap) {
  const double z = 1.0 + std::exp(-beta_gap);
  return 1.0 - epsilon / (2.0 - (1.0 - epsilon) * z);
}

inline double noisy_cooling_closed_form(double p0, double epsilon, double beta_gap, std::size_t k) {
  const double z = 1.0 + std::exp(-beta_gap);
  const double limit = noisy_asymptote(epsilon, beta_gap);
  return limit - std::pow((1.0 - epsilon) * z - 1.0, static_cast<double>(k)) * (limit - p0);
}

// ---------------------------------------------------------------------------
// Noisy beta-swap.

struct NoiseSpec {
  double epsilon = 0.0;
  bool within_bound = true;  // epsilon <= noise_validity_bound(beta E)

  NoiseSpec(double eps, double beta_gap) : epsilon(eps), within_bound(eps <= noise_validity_bound(beta_gap)) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("NoiseSpec: epsilon must lie in [0, 1]");
  }
};

struct NoisyTrace {
  std::vector<double> ground;         // p_0 for rounds 0..k
  bool optimality_guaranteed = true;  // false above the validity bound
};

/// Pauli X followed by the noisy beta-swap with de-excitation 1 - epsilon,
/// iterated k times on the ground population.
inline NoisyTrace epsilon_noisy_trace(double p0, const NoiseSpec& noise, const EnergySpectrum& spectrum,
                                      std::size_t k) {
  const double up = decay_factor(spectrum.beta(), qubit_gap(spectrum));
  const double lambda = 1.0 - noise.epsilon;
  NoisyTrace out;
  out.optimality_guaranteed = noise.within_bound;
  out.ground.reserve(k + 1);
  out.ground.push_back(p0);
  double p = p0;
  for (std::size_t round = 0; round < k; ++round) {
    p = (1.0 - lambda * up) * (1.0 - p) + lambda * p;
    out.ground.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Qubit thermal operations.

/// Thermal operation on a qubit: population transfer lambda and coherence
/// retention c, bounded by complete positivity.
class QubitThermalOp {
 public:
  QubitThermalOp(double lambda, double c, const EnergySpectrum& spectrum)
      : lambda_(lambda), c_(c), up_(decay_factor(spectrum.beta(), qubit_gap(spectrum))) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("QubitThermalOp: lambda outside [0, 1]");
    if (!(c >= 0.0 && c <= max_coherence(lambda, up_) + 1e-15)) {
      throw std::invalid_argument("QubitThermalOp: coherence retention exceeds complete-positivity bound");
    }
  }

  static double max_coherence(double lambda, double up) { return std::sqrt((1.0 - lambda * up) * (1.0 - lambda)); }

  double lambda() const { return lambda_; }
  double c() const { return c_; }

  Eigen::Matrix2d population_matrix() const {
    Eigen::Matrix2d g;
    g << 1.0 - lambda_ * up_, lambda_, lambda_ * up_, 1.0 - lambda_;
    return g;
  }

  Eigen::Matrix2cd apply(const Eigen::Matrix2cd& rho) const {
    Eigen::Matrix2cd out;
    const double p0 = rho(0, 0).real();
    const double p1 = rho(1, 1).real();
    out(0, 0) = (1.0 - lambda_ * up_) * p0 + lambda_ * p1;
    out(1, 1) = lambda_ * up_ * p0 + (1.0 - lambda_) * p1;
    out(0, 1) = c_ * rho(0, 1);
    out(1, 0) = c_ * rho(1, 0);
    return out;
  }

 private:
  double lambda_;
  double c_;
  double up_;
};

/// Determinant of the qubit state after a unitary reaching ground population
/// q from a diagonal state (p, 1-p), followed by the thermal operation with
/// transfer lambda and maximal coherence retention. Smaller is colder.
inline double determinant_function(double p, double q, double lambda, double beta_gap) {
  const double up = std::exp(-beta_gap);
  const double s = (1.0 - lambda * up) * q + lambda * (1.0 - q);
  const double coherence_sq = q * (1.0 - q) - p * (1.0 - p);
  return s * (1.0 - s) - (1.0 - lambda * up) * (1.0 - lambda) * coherence_sq;
}

struct DeterminantScan {
  double q = 0.0;
  double lambda = 0.0;
  double value = 0.0;
  bool boundary_claim_applies = false;  // lambda_max above the optimality threshold
  bool boundary_claim_holds = false;    // minimiser found at (1 - p, lambda_max)
};

inline constexpr double kDeterminantGridStep = 1e-3;

/// Grid scan of determinant_function over q in [1-p, p] and lambda in
/// [0, lambda_max], refined 10x around the coarse minimiser.
inline DeterminantScan to_determinant_scan(double p, double lambda_max, double beta_gap,
                                           double step = kDeterminantGridStep) {
  if (p < 0.5 || p > 1.0) throw std::invalid_argument("to_determinant_scan: need 1/2 <= p <= 1");
  if (!(lambda_max >= 0.0 && lambda_max <= 1.0)) {
    throw std::invalid_argument("to_determinant_scan: lambda_max outside [0, 1]");
  }
  const double q_lo = 1.0 - p;
  const double q_hi = p;

  DeterminantScan best;
  best.value = INFINITY;
  auto scan = [&](double qa, double qb, double la, double lb, double h) {
    const auto nq = static_cast<std::size_t>(std::max(1.0, std::ceil((qb - qa) / h)));
    const auto nl = static_cast<std::size_t>(std::max(1.0, std::ceil((lb - la) / h)));
    for (std::size_t i = 0; i <= nq; ++i) {
      const double q = i == nq ? qb : qa + (qb - qa) * static_cast<double>(i) / static_cast<double>(nq);
      for (std::size_t j = 0; j <= nl; ++j) {
        const double l = j == nl ? lb : la + (lb - la) * static_cast<double>(j) / static_cast<double>(nl);
        const double f = determinant_function(p, q, l, beta_gap);
        if (f < best.value) best = {q, l, f, false, false};
      }
    }
  };
  scan(q_lo, q_hi, 0.0, lambda_max, step);
  scan(std::max(q_lo, best.q - step), std::min(q_hi, best.q + step), std::max(0.0, best.lambda - step),
       std::min(lambda_max, best.lambda + step), step / 10.0);

  best.boundary_claim_applies = lambda_max > 1.0 - noise_validity_bound(beta_gap);
  best.boundary_claim_holds =
      std::abs(best.q - q_lo) <= step / 10.0 && std::abs(best.lambda - lambda_max) <= step / 10.0;
  return best;
}

/// Best ground population reachable by one Markovian round: a unitary to
/// ground population q in [1-p, p] (taking p >= 1/2 after relabelling), then
/// partial thermalization with lambda <= 1/(1 + e^{-beta E}).
inline double markovian_best(double p, const EnergySpectrum& spectrum, std::size_t lambda_grid = 10000) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("markovian_best: p outside [0, 1]");
  if (lambda_grid < 1) throw std::invalid_argument("markovian_best: empty lambda grid");
  const double up = decay_factor(spectrum.beta(), qubit_gap(spectrum));
  const double lambda_cap = 1.0 / (1.0 + up);
  const double hi = std::max(p, 1.0 - p);
  const double lo = 1.0 - hi;
  double best = hi;
  for (std::size_t j = 0; j <= lambda_grid; ++j) {
    const double lambda =
        j == lambda_grid ? lambda_cap : lambda_cap * static_cast<double>(j) / static_cast<double>(lambda_grid);
    for (double q : {lo, hi}) best = std::max(best, (1.0 - lambda * up) * q + lambda * (1.0 - q));
  }
  return best;
}

}  // namespace xhbac::protocols
