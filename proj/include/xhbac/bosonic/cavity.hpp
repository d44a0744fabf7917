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


// Lossy cavity relaxation and the two-cavity atom stream.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhbac/bosonic/fock.hpp"
#include "xhbac/bosonic/jaynes_cummings.hpp"

namespace xhbac::bosonic {

/// Largest value of dt * A * (nbar+1) * n_max accepted by the integrator.
inline constexpr double kRelaxationStepGuard = 0.1;

namespace detail {

// Diagonal rate equation of the damped mode. The cutoff is reflecting:
// level n_max neither gains from nor loses to levels above it.
inline void relaxation_rates(const std::vector<double>& t, const CavityParams& p, std::vector<double>& dt) {
  const std::size_t top = t.size() - 1;
  const double down = p.loss_rate * (p.mean_quanta + 1.0);
  const double up = p.loss_rate * p.mean_quanta;
  for (std::size_t n = 0; n <= top; ++n) {
    const double nd = static_cast<double>(n);
    const double out_up = n < top ? (nd + 1.0) * t[n] : 0.0;
    const double in_down = n < top ? (nd + 1.0) * t[n + 1] : 0.0;
    const double in_up = n > 0 ? nd * t[n - 1] : 0.0;
    dt[n] = down * (in_down - nd * t[n]) + up * (in_up - out_up);
  }
}

}  // namespace detail

/// Integrates the mode populations for `duration` with fixed-step RK4.
inline ModePopulations rethermalize_mode(const ModePopulations& mode, const CavityParams& params, double duration,
                                         double dt) {
  params.validate();
  if (duration < 0.0) throw std::invalid_argument("rethermalize_mode: duration must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("rethermalize_mode: dt must be positive");
  const double stiffness = dt * params.loss_rate * (params.mean_quanta + 1.0) * static_cast<double>(mode.n_max());
  if (stiffness >= kRelaxationStepGuard) {
    throw std::invalid_argument("rethermalize_mode: dt too large for stable integration (guard " +
                                std::to_string(stiffness) + ")");
  }
  ModePopulations out = mode;
  if (duration == 0.0 || params.loss_rate == 0.0) return out;
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt));
  const double h = duration / static_cast<double>(steps);
  const std::size_t n = out.t.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto& y = out.t;
  for (std::size_t s = 0; s < steps; ++s) {
    detail::relaxation_rates(y, params, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    detail::relaxation_rates(tmp, params, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    detail::relaxation_rates(tmp, params, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    detail::relaxation_rates(tmp, params, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

/// Step size at half the stability guard.
inline double default_relaxation_step(const CavityParams& params, std::size_t n_max) {
  const double scale = params.loss_rate * (params.mean_quanta + 1.0) * static_cast<double>(n_max);
  return scale > 0.0 ? 0.5 * kRelaxationStepGuard / scale : 1.0;
}

inline ModePopulations rethermalize_mode(const ModePopulations& mode, const CavityParams& params, double duration) {
  return rethermalize_mode(mode, params, duration, default_relaxation_step(params, mode.n_max()));
}

struct AtomStreamResult {
  std::vector<double> ground;  // final p_0 of each atom
  double lost = 0.0;           // weight pushed above the cutoff in either cavity
  double peak_top_occupation = 0.0;
};

namespace detail {

// One pass: the atom (ground population q) meets the mode for angle s*sqrt(n).
inline double pass_through(double q, ModePopulations& mode, double s, double& lost) {
  JointDiagState joint = JointDiagState::product(q, mode);
  joint = rotate_blocks(joint, [s](std::size_t n) { return s * std::sqrt(static_cast<double>(n)); });
  lost += joint.lost;
  mode.t = joint.mode_marginal();
  return joint.qubit_ground();
}

}  // namespace detail

/// Atoms start thermal at the same beta*E as the cavities. Each atom gets a
/// Pauli X, couples to cavity 1 for t_int, gets a second Pauli X and couples
/// to cavity 2 for t_int. Both cavities then relax for 1/r before the next
/// atom; r = 0 stands for complete rethermalisation. Throws when either
/// cavity heats past the cutoff (top occupation or lost weight above
/// trunc_tol).
inline AtomStreamResult atom_stream_sim(const CavityParams& params, std::size_t n_atoms, double t_int,
                                        const FockTruncation& trunc, double beta_gap, double trunc_tol = 1e-9) {
  params.validate();
  if (n_atoms < 1) throw std::invalid_argument("atom_stream_sim: need at least one atom");
  if (t_int < 0.0) throw std::invalid_argument("atom_stream_sim: t_int must be non-negative");
  const ModePopulations thermal = ModePopulations::thermal(trunc, beta_gap);
  const double atom_ground = 1.0 / (1.0 + fock_boltzmann(beta_gap, 1.0));
  const double s = params.coupling * t_int;
  const double wait = params.rethermalization_time();
  const double dt = default_relaxation_step(params, trunc.n_max);

  ModePopulations first = thermal;
  ModePopulations second = thermal;
  AtomStreamResult out;
  out.ground.reserve(n_atoms);
  for (std::size_t atom = 0; atom < n_atoms; ++atom) {
    double q = 1.0 - atom_ground;  // after the first Pauli X
    q = detail::pass_through(q, first, s, out.lost);
    q = detail::pass_through(1.0 - q, second, s, out.lost);
    out.ground.push_back(q);
    for (auto* mode : {&first, &second}) {
      out.peak_top_occupation = std::max(out.peak_top_occupation, mode->t.back());
      if (std::isinf(wait)) {
        *mode = thermal;
      } else {
        *mode = rethermalize_mode(*mode, params, wait, dt);
      }
    }
    if (out.peak_top_occupation > trunc_tol || out.lost > trunc_tol) {
      throw std::runtime_error("atom_stream_sim: cavity occupation reached the Fock cutoff at atom " +
                               std::to_string(atom + 1));
    }
  }
  return out;
}

}  // namespace xhbac::bosonic
