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


// Full qubit-mode density matrix, for protocols where the same qubit meets
// the same mode repeatedly and inter-sector coherences can return to the
// populations after a Pauli X. Works in the interaction picture of the free
// Hamiltonian: the resonant coupling is unchanged and free phases are dropped.
// Mode operators are truncated at n_max, so the coupling leaves |1,n_max>
// untouched and the relaxation conserves trace exactly.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "xhbac/bosonic/fock.hpp"

namespace xhbac::bosonic {

/// Exact propagator of the cavity dissipator over a fixed duration. Entries
/// rho_{m,n} on one diagonal band m - n = const evolve among themselves, so
/// each band is exponentiated separately.
class ModeRelaxation {
 public:
  ModeRelaxation(const CavityParams& params, std::size_t n_max, double duration) : levels_(n_max + 1) {
    params.validate();
    if (duration < 0.0) throw std::invalid_argument("ModeRelaxation: duration must be non-negative");
    const auto n = static_cast<Eigen::Index>(levels_);
    const double down = params.loss_rate * (params.mean_quanta + 1.0);
    const double up = params.loss_rate * params.mean_quanta;
    // (a a^dagger)_{mm} with the truncated a.
    auto raised = [n](Eigen::Index m) { return m + 1 < n ? static_cast<double>(m + 1) : 0.0; };
    for (Eigen::Index d = 0; d < n; ++d) {
      const Eigen::Index len = n - d;
      Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(len, len);
      for (Eigen::Index k = 0; k < len; ++k) {
        const Eigen::Index m = k + d;
        const auto md = static_cast<double>(m);
        const auto kd = static_cast<double>(k);
        gen(k, k) = -0.5 * up * (raised(m) + raised(k)) - 0.5 * down * (md + kd);
        if (k > 0) gen(k, k - 1) = up * std::sqrt(md * kd);
        if (k + 1 < len) gen(k, k + 1) = down * std::sqrt((md + 1.0) * (kd + 1.0));
      }
      band_.push_back((gen * duration).exp());
    }
  }

  std::size_t levels() const { return levels_; }

  /// Applies the propagator to every qubit block of a (2N x 2N) matrix.
  void apply(Eigen::MatrixXcd& rho) const {
    const auto n = static_cast<Eigen::Index>(levels_);
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) {
        for (Eigen::Index d = 0; d < n; ++d) {
          const Eigen::MatrixXd& p = band_[static_cast<std::size_t>(d)];
          const Eigen::Index len = n - d;
          Eigen::VectorXcd lower(len);
          Eigen::VectorXcd upper(len);
          for (Eigen::Index k = 0; k < len; ++k) {
            lower(k) = rho(i * n + k + d, j * n + k);
            upper(k) = rho(i * n + k, j * n + k + d);
          }
          lower = p.cast<std::complex<double>>() * lower;
          upper = p.cast<std::complex<double>>() * upper;
          for (Eigen::Index k = 0; k < len; ++k) {
            rho(i * n + k + d, j * n + k) = lower(k);
            if (d > 0) rho(i * n + k, j * n + k + d) = upper(k);
          }
        }
      }
    }
  }

 private:
  std::size_t levels_;
  std::vector<Eigen::MatrixXd> band_;
};

/// Density matrix on qubit x mode, basis index i * (n_max+1) + n.
class JointDensity {
 public:
  static JointDensity product(double qubit_ground, const ModePopulations& mode) {
    JointDensity s;
    s.levels_ = mode.t.size();
    const auto n = static_cast<Eigen::Index>(s.levels_);
    s.rho_ = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (Eigen::Index m = 0; m < n; ++m) {
      s.rho_(m, m) = qubit_ground * mode.t[static_cast<std::size_t>(m)];
      s.rho_(n + m, n + m) = (1.0 - qubit_ground) * mode.t[static_cast<std::size_t>(m)];
    }
    return s;
  }

  std::size_t n_max() const { return levels_ - 1; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

  /// Pauli X on the qubit.
  void flip_qubit() {
    const auto n = static_cast<Eigen::Index>(levels_);
    Eigen::MatrixXcd out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = rho_.bottomRightCorner(n, n);
    out.bottomRightCorner(n, n) = rho_.topLeftCorner(n, n);
    out.topRightCorner(n, n) = rho_.bottomLeftCorner(n, n);
    out.bottomLeftCorner(n, n) = rho_.topRightCorner(n, n);
    rho_ = std::move(out);
  }

  /// Resonant coupling for normalised time s: each pair {|0,n>, |1,n-1>}
  /// rotates by s*sqrt(n).
  void couple(double s) {
    const Eigen::MatrixXcd u = coupling_unitary(s);
    rho_ = u * rho_ * u.adjoint();
  }

  void relax(const ModeRelaxation& relaxation) {
    if (relaxation.levels() != levels_) throw std::invalid_argument("JointDensity: cutoff mismatch");
    relaxation.apply(rho_);
  }

  /// Replaces the mode by `mode`, keeping the qubit marginal.
  void reset_mode(const ModePopulations& mode) {
    if (mode.t.size() != levels_) throw std::invalid_argument("JointDensity: cutoff mismatch");
    const Eigen::Matrix2cd q = qubit_state();
    const auto n = static_cast<Eigen::Index>(levels_);
    rho_.setZero();
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) {
        for (Eigen::Index m = 0; m < n; ++m) rho_(i * n + m, j * n + m) = q(i, j) * mode.t[static_cast<std::size_t>(m)];
      }
    }
  }

  Eigen::Matrix2cd qubit_state() const {
    const auto n = static_cast<Eigen::Index>(levels_);
    Eigen::Matrix2cd q;
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) q(i, j) = rho_.block(i * n, j * n, n, n).trace();
    }
    return q;
  }

  double qubit_ground() const { return qubit_state()(0, 0).real(); }

  /// Mode state with the qubit traced out.
  Eigen::MatrixXcd mode_state() const {
    const auto n = static_cast<Eigen::Index>(levels_);
    return rho_.topLeftCorner(n, n) + rho_.bottomRightCorner(n, n);
  }

  std::vector<double> mode_diagonal() const {
    const Eigen::MatrixXcd m = mode_state();
    std::vector<double> t(levels_);
    for (std::size_t k = 0; k < levels_; ++k) t[k] = m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
    return t;
  }

  double trace() const { return rho_.trace().real(); }

 private:
  Eigen::MatrixXcd coupling_unitary(double s) const {
    const auto n = static_cast<Eigen::Index>(levels_);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    const std::complex<double> minus_i(0.0, -1.0);
    for (Eigen::Index k = 1; k < n; ++k) {
      const double angle = s * std::sqrt(static_cast<double>(k));
      const Eigen::Index g = k;            // |0,k>
      const Eigen::Index e = n + k - 1;    // |1,k-1>
      u(g, g) = std::cos(angle);
      u(e, e) = std::cos(angle);
      u(g, e) = minus_i * std::sin(angle);
      u(e, g) = minus_i * std::sin(angle);
    }
    return u;
  }

  std::size_t levels_ = 0;
  Eigen::MatrixXcd rho_;
};

/// Ground population of one qubit over repeated rounds of Pauli X, coupling
/// for s, and relaxation of the shared mode for t_th (infinite: full reset;
/// zero: no relaxation).
inline std::vector<double> partial_rethermalization_trace(double beta_gap, double s, const CavityParams& params,
                                                          double t_th, std::size_t rounds,
                                                          const FockTruncation& trunc) {
  if (t_th < 0.0) throw std::invalid_argument("partial_rethermalization_trace: t_th must be non-negative");
  const ModePopulations thermal = ModePopulations::thermal(trunc, beta_gap);
  const double p0 = 1.0 / (1.0 + fock_boltzmann(beta_gap, 1.0));
  JointDensity state = JointDensity::product(p0, thermal);
  const bool reset = std::isinf(t_th);
  const ModeRelaxation relaxation(params, trunc.n_max, reset ? 0.0 : t_th);
  std::vector<double> out{p0};
  out.reserve(rounds + 1);
  for (std::size_t k = 0; k < rounds; ++k) {
    state.flip_qubit();
    state.couple(s);
    out.push_back(state.qubit_ground());
    if (reset) {
      state.reset_mode(thermal);
    } else if (t_th > 0.0) {
      state.relax(relaxation);
    }
  }
  return out;
}

}  // namespace xhbac::bosonic
