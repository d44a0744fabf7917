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
#include <bit>
#include <functional>
#include <string>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "xhbac/core/spectrum.hpp"
#include "xhbac/protocols/qubit.hpp"
#include "xhbac/protocols/trace.hpp"

namespace xhbac::protocols {

inline constexpr std::size_t kPpaMaxAncillas = 3;

/// n reset qubits of equal gap, levels enumerated with the first qubit most
/// significant. Levels are Hamming weight times the gap, so not sorted.
inline EnergySpectrum reset_register_spectrum(std::size_t n_ancillas, double gap, double beta) {
  std::vector<double> levels(std::size_t{1} << n_ancillas);
  for (std::size_t a = 0; a < levels.size(); ++a) {
    levels[a] = gap * static_cast<double>(std::popcount(a));
  }
  return EnergySpectrum::unordered(std::move(levels), beta);
}

inline CompositeSpec ppa_spec(std::size_t n_ancillas, const EnergySpectrum& system) {
  if (n_ancillas == 0) return CompositeSpec(system);
  return CompositeSpec(system, reset_register_spectrum(n_ancillas, qubit_gap(system), system.beta()));
}

/// One partner-pairing round: sort the joint populations in descending order
/// onto the joint basis in lexicographic order (target qubit most
/// significant), so the largest entries fill the target's ground block, then
/// reset the register to its thermal state.
inline PopulationVector ppa_round(const PopulationVector& system_state, const CompositeSpec& spec) {
  const PopulationVector joint = spec.tensor(system_state);
  std::vector<double> sorted(joint.begin(), joint.end());
  // Ties keep the lower joint index first; equal values make this moot for
  // the marginal, but it pins the arrangement.
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  return spec.system_marginal(PopulationVector(std::move(sorted)));
}

inline ProtocolTrace ppa_trace(const PopulationVector& initial, std::size_t n_ancillas,
                               const EnergySpectrum& system, std::size_t rounds) {
  if (system.dim() != 2) throw std::invalid_argument("ppa_trace: target must be a qubit");
  if (n_ancillas > kPpaMaxAncillas) throw std::invalid_argument("ppa_trace: at most 3 reset qubits");
  const CompositeSpec spec = ppa_spec(n_ancillas, system);
  ProtocolTrace trace("ppa-" + std::to_string(n_ancillas), spec);
  trace.push(initial);
  PopulationVector p = initial;
  for (std::size_t k = 0; k < rounds; ++k) {
    p = ppa_round(p, spec);
    trace.push(p);
  }
  return trace;
}

}  // namespace xhbac::protocols
