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
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xhbac {

/// Energy levels of a finite system together with the bath inverse
/// temperature. Levels of a system spectrum are non-decreasing; joint
/// spectra of composite systems (enumerated in pair order) are not.
class EnergySpectrum {
 public:
  EnergySpectrum(std::vector<double> levels, double beta)
      : EnergySpectrum(std::move(levels), beta, true) {}

  /// Spectrum whose levels need not be sorted (joint system+ancilla levels).
  static EnergySpectrum unordered(std::vector<double> levels, double beta) {
    return EnergySpectrum(std::move(levels), beta, false);
  }

  /// Two-level system with levels (0, gap).
  static EnergySpectrum qubit(double gap, double beta) {
    return EnergySpectrum({0.0, gap}, beta);
  }

  std::size_t dim() const { return levels_.size(); }
  double beta() const { return beta_; }
  double level(std::size_t i) const { return levels_.at(i); }
  std::span<const double> levels() const { return levels_; }

  bool is_ordered() const { return std::is_sorted(levels_.begin(), levels_.end()); }

  /// Largest minus smallest level.
  double omega() const {
    const auto [lo, hi] = std::minmax_element(levels_.begin(), levels_.end());
    return *hi - *lo;
  }

  /// Unnormalised Boltzmann weights e^{-beta E_i}.
  std::vector<double> boltzmann_weights() const {
    std::vector<double> w(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i) w[i] = boltzmann(levels_[i]);
    return w;
  }

  double partition_sum() const {
    const auto w = boltzmann_weights();
    return std::accumulate(w.begin(), w.end(), 0.0);
  }

  /// Spectrum with the same levels at another inverse temperature.
  EnergySpectrum with_beta(double beta) const {
    return EnergySpectrum(levels_, beta, ordered_required_);
  }

 private:
  EnergySpectrum(std::vector<double> levels, double beta, bool ordered)
      : levels_(std::move(levels)), beta_(beta), ordered_required_(ordered) {
    if (levels_.empty()) throw std::invalid_argument("EnergySpectrum: no levels");
    if (std::isnan(beta_) || beta_ < 0.0) {
      throw std::invalid_argument("EnergySpectrum: beta must be non-negative");
    }
    for (double e : levels_) {
      if (!std::isfinite(e)) throw std::invalid_argument("EnergySpectrum: non-finite level");
    }
    if (ordered && !is_ordered()) {
      throw std::invalid_argument("EnergySpectrum: levels must be non-decreasing");
    }
  }

  double boltzmann(double e) const {
    if (std::isinf(beta_)) {
      if (e == 0.0) return 1.0;
      return e > 0.0 ? 0.0 : INFINITY;
    }
    return std::exp(-beta_ * e);
  }

  std::vector<double> levels_;
  double beta_;
  bool ordered_required_;
};

/// Probability distribution over energy eigenstates.
class PopulationVector {
 public:
  static constexpr double kSumTolerance = 1e-9;
  static constexpr double kNegativityTolerance = 1e-12;

  PopulationVector() = default;

  explicit PopulationVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("PopulationVector: empty");
    double total = 0.0;
    for (double& x : p_) {
      if (!std::isfinite(x) || x < -kNegativityTolerance) {
        throw std::invalid_argument("PopulationVector: negative or non-finite entry");
      }
      if (x < 0.0) x = 0.0;
      total += x;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
      throw std::invalid_argument("PopulationVector: entries sum to " + std::to_string(total));
    }
  }

  PopulationVector(std::initializer_list<double> p) : PopulationVector(std::vector<double>(p)) {}

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  double at(std::size_t i) const { return p_.at(i); }
  std::span<const double> values() const { return p_; }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

  friend bool operator==(const PopulationVector&, const PopulationVector&) = default;

 private:
  std::vector<double> p_;
};

/// Normalised Gibbs populations e^{-beta E_i} / Z. Infinite beta gives the
/// ground-state projector (uniform over a degenerate ground space).
inline PopulationVector gibbs_state(const EnergySpectrum& spectrum) {
  const auto levels = spectrum.levels();
  const double ground = *std::min_element(levels.begin(), levels.end());
  std::vector<double> w(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double gap = levels[i] - ground;
    w[i] = gap == 0.0 ? 1.0 : std::exp(-spectrum.beta() * gap);
  }
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= z;
  return PopulationVector(std::move(w));
}

/// A target system S plus an optional ancilla A held in a fixed state.
/// Joint levels E_i + E_a are enumerated lexicographically, (i, a) -> i*r + a.
class CompositeSpec {
 public:
  struct Pair {
    std::size_t system;
    std::size_t ancilla;
    friend bool operator==(const Pair&, const Pair&) = default;
  };

  /// System alone (r = 1).
  explicit CompositeSpec(EnergySpectrum system)
      : CompositeSpec(system, EnergySpectrum({0.0}, system.beta()), PopulationVector{1.0}) {}

  /// System with an ancilla in its thermal state.
  CompositeSpec(EnergySpectrum system, EnergySpectrum ancilla)
      : CompositeSpec(system, ancilla, gibbs_state(ancilla)) {}

  CompositeSpec(EnergySpectrum system, EnergySpectrum ancilla, PopulationVector ancilla_state)
      : system_(std::move(system)),
        ancilla_(std::move(ancilla)),
        ancilla_state_(std::move(ancilla_state)) {
    if (system_.dim() < 2) throw std::invalid_argument("CompositeSpec: system needs d >= 2");
    if (!system_.is_ordered()) {
      throw std::invalid_argument("CompositeSpec: system levels must be non-decreasing");
    }
    if (ancilla_state_.size() != ancilla_.dim()) {
      throw std::invalid_argument("CompositeSpec: ancilla state dimension mismatch");
    }
    if (ancilla_.beta() != system_.beta()) {
      throw std::invalid_argument("CompositeSpec: system and ancilla beta differ");
    }
  }

  const EnergySpectrum& system() const { return system_; }
  const EnergySpectrum& ancilla() const { return ancilla_; }
  const PopulationVector& ancilla_state() const { return ancilla_state_; }

  std::size_t d() const { return system_.dim(); }
  std::size_t r() const { return ancilla_.dim(); }
  std::size_t joint_dim() const { return d() * r(); }
  double beta() const { return system_.beta(); }

  std::size_t index(std::size_t system_level, std::size_t ancilla_level) const {
    if (system_level >= d() || ancilla_level >= r()) {
      throw std::out_of_range("CompositeSpec::index: level out of range");
    }
    return system_level * r() + ancilla_level;
  }

  Pair pair(std::size_t joint_index) const {
    if (joint_index >= joint_dim()) throw std::out_of_range("CompositeSpec::pair");
    return {joint_index / r(), joint_index % r()};
  }

  EnergySpectrum joint_spectrum() const {
    std::vector<double> levels(joint_dim());
    for (std::size_t i = 0; i < d(); ++i) {
      for (std::size_t a = 0; a < r(); ++a) levels[index(i, a)] = system_.level(i) + ancilla_.level(a);
    }
    return EnergySpectrum::unordered(std::move(levels), beta());
  }

  /// p_S (x) rho_A.
  PopulationVector tensor(const PopulationVector& system_state) const {
    if (system_state.size() != d()) throw std::invalid_argument("CompositeSpec::tensor: dimension mismatch");
    std::vector<double> joint(joint_dim());
    for (std::size_t i = 0; i < d(); ++i) {
      for (std::size_t a = 0; a < r(); ++a) joint[index(i, a)] = system_state[i] * ancilla_state_[a];
    }
    return PopulationVector(std::move(joint));
  }

  PopulationVector system_marginal(const PopulationVector& joint) const {
    if (joint.size() != joint_dim()) {
      throw std::invalid_argument("CompositeSpec::system_marginal: dimension mismatch");
    }
    std::vector<double> p(d(), 0.0);
    for (std::size_t m = 0; m < joint_dim(); ++m) p[m / r()] += joint[m];
    return PopulationVector(std::move(p));
  }

 private:
  EnergySpectrum system_;
  EnergySpectrum ancilla_;
  PopulationVector ancilla_state_;
};

}  // namespace xhbac
