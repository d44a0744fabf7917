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


// Dense reference models of the qubit-mode system built from operator
// algebra: Kronecker products, matrix exponentials and vectorised Lindblad
// generators. Only suitable for small cutoffs.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace xhbac::testing {

using Cplx = std::complex<double>;

inline Eigen::MatrixXcd annihilation(std::size_t levels) {
  const auto n = static_cast<Eigen::Index>(levels);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

/// exp(-i s (sigma_+ a + sigma_- a^dagger)) on qubit x mode (qubit index major).
inline Eigen::MatrixXcd jc_unitary(double s, std::size_t levels) {
  Eigen::Matrix2cd raise = Eigen::Matrix2cd::Zero();
  raise(1, 0) = 1.0;  // |1><0|
  const Eigen::MatrixXcd a = annihilation(levels);
  const Eigen::MatrixXcd h = Eigen::kroneckerProduct(Eigen::MatrixXcd(raise), a).eval() +
                             Eigen::kroneckerProduct(Eigen::MatrixXcd(raise.adjoint()), Eigen::MatrixXcd(a.adjoint())).eval();
  return (Cplx(0.0, -s) * h).exp();
}

inline Eigen::MatrixXcd pauli_x_joint(std::size_t levels) {
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  return Eigen::kroneckerProduct(Eigen::MatrixXcd(x),
                                 Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(levels),
                                                            static_cast<Eigen::Index>(levels)))
      .eval();
}

inline Eigen::MatrixXcd diag_product(double qubit_ground, const std::vector<double>& mode) {
  const auto n = static_cast<Eigen::Index>(mode.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index m = 0; m < n; ++m) {
    rho(m, m) = qubit_ground * mode[static_cast<std::size_t>(m)];
    rho(n + m, n + m) = (1.0 - qubit_ground) * mode[static_cast<std::size_t>(m)];
  }
  return rho;
}

/// Column-stacking vec: vec(A X B) = (B^T kron A) vec(X).
inline Eigen::MatrixXcd lindblad_superoperator(double loss_rate, double mean_quanta, std::size_t levels) {
  const auto n = static_cast<Eigen::Index>(levels);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd a = annihilation(levels);
  auto dissipator = [&](const Eigen::MatrixXcd& l) {
    const Eigen::MatrixXcd ldl = l.adjoint() * l;
    return Eigen::MatrixXcd(Eigen::kroneckerProduct(Eigen::MatrixXcd(l.conjugate()), l).eval() -
                            0.5 * Eigen::kroneckerProduct(id, ldl).eval() -
                            0.5 * Eigen::kroneckerProduct(Eigen::MatrixXcd(ldl.transpose()), id).eval());
  };
  return loss_rate * (mean_quanta + 1.0) * dissipator(a) + loss_rate * mean_quanta * dissipator(a.adjoint());
}

/// Relaxes an n x n mode matrix for time t with the dense generator.
inline Eigen::MatrixXcd relax_dense(const Eigen::MatrixXcd& rho, double loss_rate, double mean_quanta, double t) {
  const auto n = rho.rows();
  const Eigen::MatrixXcd gen = lindblad_superoperator(loss_rate, mean_quanta, static_cast<std::size_t>(n));
  const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), n * n);
  const Eigen::VectorXcd out = (gen * t).exp() * v;
  return Eigen::Map<const Eigen::MatrixXcd>(out.data(), n, n);
}

/// Thermal Fock populations normalised on 0..n_max.
inline std::vector<double> normalised_thermal(double beta_gap, std::size_t levels) {
  std::vector<double> t(levels);
  double z = 0.0;
  for (std::size_t n = 0; n < levels; ++n) z += t[n] = std::exp(-beta_gap * static_cast<double>(n));
  for (auto& x : t) x /= z;
  return t;
}

}  // namespace xhbac::testing
