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


// Truncated Fock-space carriers for a single bosonic mode and a qubit coupled
// to it. Only populations are stored; see joint_density.hpp for the full
// matrix used when coherences must be followed.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace xhbac::bosonic {

/// Thermal weight e^{-b n} for b = beta*E, with b = inf meaning vacuum.
inline double fock_boltzmann(double beta_gap, double n) {
  if (n == 0.0) return 1.0;
  if (std::isinf(beta_gap)) return 0.0;
  return std::exp(-beta_gap * n);
}

/// Mean thermal occupation 1/(e^{b}-1).
inline double mean_occupation(double beta_gap) {
  if (!(beta_gap > 0.0)) throw std::invalid_argument("mean_occupation: beta*E must be positive");
  if (std::isinf(beta_gap)) return 0.0;
  return 1.0 / std::expm1(beta_gap);
}

/// Fock cutoff n_max and the thermal weight above it.
struct FockTruncation {
  std::size_t n_max = 0;
  double tail_bound = 0.0;  // sum_{n > n_max} t_n for the thermal mode

  FockTruncation() = default;

  FockTruncation(std::size_t cutoff, double beta_gap) : n_max(cutoff) {
    if (cutoff < 1) throw std::invalid_argument("FockTruncation: n_max must be at least 1");
    if (!(beta_gap > 0.0)) throw std::invalid_argument("FockTruncation: beta*E must be positive");
    tail_bound = fock_boltzmann(beta_gap, static_cast<double>(cutoff + 1));
  }

  std::size_t levels() const { return n_max + 1; }

  /// Smallest cutoff whose thermal tail stays below tol after the mode has
  /// been shifted up by `rounds` levels.
  static FockTruncation for_rounds(double beta_gap, std::size_t rounds, double tol = 1e-10) {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("FockTruncation: tolerance must lie in (0,1)");
    if (!(beta_gap > 0.0)) throw std::invalid_argument("FockTruncation: beta*E must be positive");
    const double headroom = std::isinf(beta_gap) ? 0.0 : std::ceil(-std::log(tol) / beta_gap);
    const auto cutoff = static_cast<std::size_t>(headroom) + rounds;
    return FockTruncation(std::max<std::size_t>(cutoff, 1), beta_gap);
  }
};

/// Diagonal of the mode state on levels 0..n_max. For an anharmonic mode
/// `levels` holds the energies in units of the harmonic gap; empty means
/// harmonic (level n at n).
struct ModePopulations {
  std::vector<double> t;
  double beta_gap = 1.0;  // beta times the harmonic gap
  std::vector<double> levels;

  std::size_t n_max() const { return t.size() - 1; }
  double total() const { return std::accumulate(t.begin(), t.end(), 0.0); }
  double deficit() const { return 1.0 - total(); }
  double level(std::size_t n) const { return levels.empty() ? static_cast<double>(n) : levels[n]; }

  /// Truncated harmonic thermal state t_n = (1-e^{-b}) e^{-b n}, not
  /// renormalised: the missing weight equals the truncation tail.
  static ModePopulations thermal(const FockTruncation& trunc, double beta_gap) {
    ModePopulations mode;
    mode.beta_gap = beta_gap;
    mode.t.resize(trunc.levels());
    const double ground = 1.0 - fock_boltzmann(beta_gap, 1.0);
    for (std::size_t n = 0; n < mode.t.size(); ++n) {
      mode.t[n] = ground * fock_boltzmann(beta_gap, static_cast<double>(n));
    }
    return mode;
  }
};

/// Populations p_{i,n} of a qubit (i = 0 ground, 1 excited) and the mode.
/// Weight pushed above n_max accumulates in `lost`.
struct JointDiagState {
  std::vector<double> ground;   // p_{0,n}
  std::vector<double> excited;  // p_{1,n}
  double lost = 0.0;

  std::size_t n_max() const { return ground.size() - 1; }

  static JointDiagState product(double qubit_ground, const ModePopulations& mode) {
    if (qubit_ground < 0.0 || qubit_ground > 1.0) {
      throw std::invalid_argument("JointDiagState: qubit ground population outside [0,1]");
    }
    JointDiagState s;
    s.ground.resize(mode.t.size());
    s.excited.resize(mode.t.size());
    for (std::size_t n = 0; n < mode.t.size(); ++n) {
      s.ground[n] = qubit_ground * mode.t[n];
      s.excited[n] = (1.0 - qubit_ground) * mode.t[n];
    }
    return s;
  }

  double qubit_ground() const { return std::accumulate(ground.begin(), ground.end(), 0.0); }
  double qubit_excited() const { return std::accumulate(excited.begin(), excited.end(), 0.0); }
  double total() const { return qubit_ground() + qubit_excited(); }

  std::vector<double> mode_marginal() const {
    std::vector<double> t(ground.size());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = ground[n] + excited[n];
    return t;
  }

  /// Pauli X on the qubit.
  void flip_qubit() { ground.swap(excited); }

  void validate() const {
    if (ground.size() != excited.size() || ground.size() < 2) {
      throw std::invalid_argument("JointDiagState: inconsistent level count");
    }
    for (std::size_t n = 0; n < ground.size(); ++n) {
      if (ground[n] < -1e-14 || excited[n] < -1e-14) {
        throw std::invalid_argument("JointDiagState: negative population at n=" + std::to_string(n));
      }
    }
  }
};

/// Rates of a lossy cavity in contact with a reservoir.
struct CavityParams {
  double coupling = 1.0;     // g
  double loss_rate = 1.0;    // A
  double mean_quanta = 0.0;  // reservoir nbar
  double firing_rate = 0.0;  // r; zero: full rethermalisation between atoms, inf: none

  static CavityParams from_beta(double coupling, double loss_rate, double beta_gap, double firing_rate) {
    CavityParams p{coupling, loss_rate, mean_occupation(beta_gap), firing_rate};
    p.validate();
    return p;
  }

  /// Time the cavity spends relaxing between atoms, 1/r.
  double rethermalization_time() const {
    if (std::isinf(firing_rate)) return 0.0;
    return firing_rate > 0.0 ? 1.0 / firing_rate : std::numeric_limits<double>::infinity();
  }

  bool consistent_with(double beta_gap, double tol = 1e-12) const {
    return std::abs(mean_quanta - mean_occupation(beta_gap)) <= tol * std::max(1.0, mean_quanta);
  }

  void validate() const {
    for (double v : {coupling, loss_rate, mean_quanta}) {
      if (!(v >= 0.0) || std::isinf(v)) throw std::invalid_argument("CavityParams: rates must be finite and non-negative");
    }
    if (!(firing_rate >= 0.0)) throw std::invalid_argument("CavityParams: firing rate must be non-negative");
  }
};

}  // namespace xhbac::bosonic
