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
#include <stdexcept>
#include <utility>
#include <vector>

#include "xhbac/bosonic/fock.hpp"

namespace xhbac::bosonic {

/// Exchanges |1,n-1> and |0,n> for n >= 1; |0,0> is fixed. The partner of
/// |1,n_max> lies above the cutoff, so its weight moves to `lost`.
inline JointDiagState u_beta_apply(const JointDiagState& state) {
  state.validate();
  const std::size_t top = state.n_max();
  JointDiagState out = state;
  out.ground[0] = state.ground[0];
  for (std::size_t n = 1; n <= top; ++n) {
    out.ground[n] = state.excited[n - 1];
    out.excited[n - 1] = state.ground[n];
  }
  out.excited[top] = 0.0;
  out.lost += state.excited[top];
  return out;
}

/// One round of the reuse protocol: Pauli X on the qubit, then the exchange.
inline JointDiagState reuse_round(JointDiagState state) {
  state.flip_qubit();
  return u_beta_apply(state);
}

struct ReuseTrace {
  std::vector<double> ground;  // p_0 for rounds 0..k
  double lost = 0.0;
  double tail_bound = 0.0;     // thermal weight that can reach the qubit within k rounds
};

/// Qubit ground population when a single thermal mode is used for every
/// round and never refreshed.
inline ReuseTrace reuse_protocol_trace(double p0, const FockTruncation& trunc, double beta_gap, std::size_t rounds,
                                       double tol = 1e-10) {
  if (rounds > trunc.n_max) {
    throw std::length_error("reuse_protocol_trace: more rounds than Fock levels");
  }
  ReuseTrace trace;
  trace.tail_bound = fock_boltzmann(beta_gap, static_cast<double>(trunc.n_max + 1 - rounds));
  if (trace.tail_bound > tol) {
    throw std::length_error("reuse_protocol_trace: truncation tail exceeds tolerance for this many rounds");
  }
  JointDiagState state = JointDiagState::product(p0, ModePopulations::thermal(trunc, beta_gap));
  trace.ground.reserve(rounds + 1);
  trace.ground.push_back(p0);
  for (std::size_t k = 0; k < rounds; ++k) {
    state = reuse_round(state);
    trace.ground.push_back(state.qubit_ground());
  }
  trace.lost = state.lost;
  return trace;
}

/// Level energies (in units of the harmonic gap) when the gap between n and
/// n+1 shrinks as 1-(n+1)tau^2. Level 0 sits at zero.
inline std::vector<double> anharmonic_levels(double tau, std::size_t n_max) {
  if (tau < 0.0) throw std::invalid_argument("anharmonic_levels: tau must be non-negative");
  std::vector<double> levels(n_max + 1, 0.0);
  for (std::size_t n = 0; n < n_max; ++n) {
    const double gap = 1.0 - static_cast<double>(n + 1) * tau * tau;
    if (gap <= 0.0) throw std::domain_error("anharmonic_levels: level gaps turn non-positive below the cutoff");
    levels[n + 1] = levels[n] + gap;
  }
  return levels;
}

/// Thermal mode on the anharmonic ladder, normalised over 0..n_max.
inline ModePopulations anharmonic_thermal(double tau, const FockTruncation& trunc, double beta_gap) {
  ModePopulations mode;
  mode.beta_gap = beta_gap;
  mode.levels = anharmonic_levels(tau, trunc.n_max);
  mode.t.resize(trunc.levels());
  double z = 0.0;
  for (std::size_t n = 0; n < mode.t.size(); ++n) {
    mode.t[n] = fock_boltzmann(beta_gap, mode.levels[n]);
    z += mode.t[n];
  }
  for (auto& x : mode.t) x /= z;
  return mode;
}

/// Cumulative thermal weight of the lowest k levels: first for the
/// anharmonic ladder, second for the harmonic one (exact infinite sum).
inline std::pair<double, double> anharmonic_cooling_sums(double tau, const FockTruncation& trunc, double beta_gap,
                                                         std::size_t k) {
  if (k > trunc.levels()) throw std::length_error("anharmonic_cooling_sums: k exceeds the cutoff");
  const ModePopulations mode = anharmonic_thermal(tau, trunc, beta_gap);
  double anharmonic = 0.0;
  for (std::size_t n = 0; n < k; ++n) anharmonic += mode.t[n];
  const double harmonic = 1.0 - fock_boltzmann(beta_gap, static_cast<double>(k));
  return {anharmonic, harmonic};
}

struct AnharmonicDeviation {
  double peak = 0.0;      // max_k |anharmonic/harmonic - 1|
  std::size_t at_k = 0;
};

/// Largest relative gap between the two cumulative sums over k = 1..n_max+1.
inline AnharmonicDeviation anharmonic_peak_deviation(double tau, const FockTruncation& trunc, double beta_gap) {
  const ModePopulations mode = anharmonic_thermal(tau, trunc, beta_gap);
  AnharmonicDeviation out;
  double anharmonic = 0.0;
  for (std::size_t k = 1; k <= trunc.levels(); ++k) {
    anharmonic += mode.t[k - 1];
    const double harmonic = 1.0 - fock_boltzmann(beta_gap, static_cast<double>(k));
    const double dev = std::abs(anharmonic / harmonic - 1.0);
    if (dev > out.peak) {
      out.peak = dev;
      out.at_k = k;
    }
  }
  return out;
}

}  // namespace xhbac::bosonic
