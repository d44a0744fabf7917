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
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhbac/core/gibbs_matrix.hpp"
#include "xhbac/core/spectrum.hpp"
#include "xhbac/core/thermo_majorization.hpp"
#include "xhbac/protocols/trace.hpp"

namespace xhbac::protocols {

/// Output order of the optimal beta-permutation on the joint space:
/// (0,r-1), (0,r-2), ..., (0,0), (1,r-1), ..., (d-1,0), as joint indices.
inline BetaOrder beta_opt_alpha(std::size_t d, std::size_t r) {
  if (d < 2 || r < 1) throw std::invalid_argument("beta_opt_alpha: need d >= 2 and r >= 1");
  std::vector<std::size_t> alpha;
  alpha.reserve(d * r);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t a = r; a-- > 0;) alpha.push_back(i * r + a);
  }
  return BetaOrder(std::move(alpha));
}

inline BetaOrder beta_opt_alpha(const CompositeSpec& spec) { return beta_opt_alpha(spec.d(), spec.r()); }

/// Joint state after the unitary stage and the optimal thermalization.
inline PopulationVector optimal_round_joint(const PopulationVector& system_state, const CompositeSpec& spec) {
  const EnergySpectrum joint_spectrum = spec.joint_spectrum();
  const PopulationVector active = maximally_active(spec.tensor(system_state), joint_spectrum);
  const BetaOrder pi = beta_order(active, joint_spectrum);
  return beta_permutation(pi, beta_opt_alpha(spec), joint_spectrum).apply(active);
}

/// One optimal cooling round: tensor with the ancilla, rotate to the
/// maximally active state, apply beta^opt, discard the ancilla.
inline PopulationVector optimal_round(const PopulationVector& system_state, const CompositeSpec& spec) {
  return spec.system_marginal(optimal_round_joint(system_state, spec));
}

inline ProtocolTrace run_optimal_protocol(const PopulationVector& initial, const CompositeSpec& spec,
                                          std::size_t rounds) {
  ProtocolTrace trace("optimal", spec);
  trace.push(initial);
  PopulationVector p = initial;
  for (std::size_t k = 0; k < rounds; ++k) {
    p = optimal_round(p, spec);
    trace.push(p);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Brute-force verification oracle.

enum class OracleMethod { kAutomatic, kExhaustive, kSubsetSearch };

struct OracleResult {
  PopulationVector best;                  // candidate with the largest ground population
  std::vector<double> best_partial_sums;  // max over candidates of the l+1 largest entries
  std::size_t arrangements = 0;           // distinct permutations of the joint populations
  OracleMethod method = OracleMethod::kAutomatic;
};

inline constexpr std::size_t kOracleDimLimit = 8;
inline constexpr std::size_t kOracleExhaustiveLimit = 4;

namespace detail {

inline std::vector<double> descending_partial_sums(std::span<const double> p) {
  std::vector<double> v(p.begin(), p.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  std::partial_sum(v.begin(), v.end(), v.begin());
  return v;
}

// Max over all output orders alpha of the population that P^{(pi,alpha)} x
// places on `targets`. Uses the curve characterisation of beta-permutations:
// the level at position i receives c_x(X_i) - c_x(X_{i-1}), where X_i are the
// cumulative Boltzmann weights along alpha. That depends only on the set of
// levels already placed, so a DP over subsets covers every alpha.
class SubsetSearch {
 public:
  static constexpr std::size_t kMaxLevels = 8;
  static constexpr std::size_t kMaxSubsets = std::size_t{1} << kMaxLevels;

  explicit SubsetSearch(std::vector<double> weights) : weights_(std::move(weights)), n_(weights_.size()) {
    if (n_ > kMaxLevels) throw std::length_error("SubsetSearch: too many levels");
    const std::size_t count = std::size_t{1} << n_;
    width_[0] = 0.0;
    for (std::size_t s = 1; s < count; ++s) {
      const auto low = static_cast<std::size_t>(std::countr_zero(s));
      width_[s] = width_[s & (s - 1)] + weights_[low];
    }
    by_width_.resize(count);
    std::iota(by_width_.begin(), by_width_.end(), std::size_t{0});
    std::sort(by_width_.begin(), by_width_.end(), [&](std::size_t a, std::size_t b) { return width_[a] < width_[b]; });
  }

  /// Tabulates c_x on every subset width for the arrangement x. The curve is
  /// walked once against the subsets sorted by width.
  void load(std::span<const double> x) {
    std::array<std::size_t, kMaxLevels> order{};
    std::iota(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_), std::size_t{0});
    std::stable_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_), [&](std::size_t a, std::size_t b) {
      return x[a] * weights_[b] > x[b] * weights_[a];
    });
    std::array<double, kMaxLevels + 1> ex{};
    std::array<double, kMaxLevels + 1> ey{};
    for (std::size_t i = 0; i < n_; ++i) {
      ex[i + 1] = ex[i] + weights_[order[i]];
      ey[i + 1] = ey[i] + x[order[i]];
    }
    std::size_t seg = 1;
    for (std::size_t s : by_width_) {
      const double w = width_[s];
      while (seg < n_ && ex[seg] < w) ++seg;
      const double span = ex[seg] - ex[seg - 1];
      const double t = span > 0.0 ? std::clamp((w - ex[seg - 1]) / span, 0.0, 1.0) : 1.0;
      height_[s] = ey[seg - 1] + (ey[seg] - ey[seg - 1]) * t;
    }
  }

  /// Curve height at the combined width of a set of levels. Because the curve
  /// is concave, placing the targets first is optimal, so this equals best().
  double height(std::uint32_t targets) const { return height_[targets]; }

  /// Best value for the target mask over levels; fills `order` with a
  /// maximising alpha when requested.
  double best(std::uint32_t targets, std::vector<std::size_t>* order = nullptr) {
    const std::size_t full = (std::size_t{1} << n_) - 1;
    value_[0] = 0.0;
    for (std::size_t s = 1; s <= full; ++s) value_[s] = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < full; ++s) {
      const double base = value_[s];
      for (std::size_t m = 0; m < n_; ++m) {
        if (s >> m & 1U) continue;
        const std::size_t t = s | (std::size_t{1} << m);
        const double v = (targets >> m & 1U) ? base + height_[t] - height_[s] : base;
        if (v > value_[t]) {
          value_[t] = v;
          last_[t] = static_cast<std::uint8_t>(m);
        }
      }
    }
    if (order != nullptr) {
      order->clear();
      for (std::size_t s = full; s != 0; s &= ~(std::size_t{1} << last_[s])) order->push_back(last_[s]);
      std::reverse(order->begin(), order->end());
    }
    return value_[full];
  }

 private:
  std::vector<double> weights_;
  std::size_t n_;
  std::vector<std::size_t> by_width_;
  std::array<double, kMaxSubsets> width_{};
  std::array<double, kMaxSubsets> height_{};
  std::array<double, kMaxSubsets> value_{};
  std::array<std::uint8_t, kMaxSubsets> last_{};
};

}  // namespace detail

/// Exhaustive maximisation of the ground population over every permutation
/// of the joint populations followed by every extremal beta-permutation.
/// Joint dimension up to 4 enumerates all alpha explicitly by default; larger
/// instances search the alpha orders through the subset recursion.
inline OracleResult oracle_optimal_round(const PopulationVector& system_state, const CompositeSpec& spec,
                                         OracleMethod method = OracleMethod::kAutomatic) {
  const std::size_t n = spec.joint_dim();
  if (n > kOracleDimLimit) {
    throw std::length_error("oracle_optimal_round: joint dimension " + std::to_string(n) +
                            " exceeds limit " + std::to_string(kOracleDimLimit));
  }
  if (method == OracleMethod::kAutomatic) {
    method = n <= kOracleExhaustiveLimit ? OracleMethod::kExhaustive : OracleMethod::kSubsetSearch;
  }
  const std::size_t d = spec.d();
  const EnergySpectrum joint_spectrum = spec.joint_spectrum();
  const PopulationVector joint = spec.tensor(system_state);

  OracleResult result;
  result.method = method;
  result.best_partial_sums.assign(d, -std::numeric_limits<double>::infinity());
  double best_ground = -std::numeric_limits<double>::infinity();

  auto consider = [&](const PopulationVector& marginal) {
    if (marginal[0] > best_ground) {
      best_ground = marginal[0];
      result.best = marginal;
    }
    const auto sums = detail::descending_partial_sums(marginal.values());
    for (std::size_t l = 0; l < d; ++l) result.best_partial_sums[l] = std::max(result.best_partial_sums[l], sums[l]);
  };

  // Target masks over joint levels: every non-empty subset of system levels.
  std::vector<std::uint32_t> masks;
  std::vector<std::size_t> mask_size;
  std::uint32_t ground_mask = 0;
  for (std::size_t m = 0; m < n; ++m) {
    if (spec.pair(m).system == 0) ground_mask |= std::uint32_t{1} << m;
  }
  if (method == OracleMethod::kSubsetSearch) {
    for (std::size_t sys = 1; sys < (std::size_t{1} << d); ++sys) {
      std::uint32_t mask = 0;
      for (std::size_t m = 0; m < n; ++m) {
        if (sys >> spec.pair(m).system & 1U) mask |= std::uint32_t{1} << m;
      }
      masks.push_back(mask);
      mask_size.push_back(static_cast<std::size_t>(std::popcount(sys)));
    }
  }

  detail::SubsetSearch search(joint_spectrum.boltzmann_weights());
  std::vector<double> values(joint.begin(), joint.end());
  std::sort(values.begin(), values.end());
  std::vector<std::size_t> alpha(n);
  do {
    ++result.arrangements;
    if (method == OracleMethod::kExhaustive) {
      const PopulationVector x(values);
      const BetaOrder pi = beta_order(x, joint_spectrum);
      std::iota(alpha.begin(), alpha.end(), std::size_t{0});
      do {
        consider(spec.system_marginal(beta_permutation(pi, BetaOrder(alpha), joint_spectrum).apply(x)));
      } while (std::next_permutation(alpha.begin(), alpha.end()));
      continue;
    }
    search.load(values);
    if (search.height(ground_mask) > best_ground) {
      search.best(ground_mask, &alpha);
      const PopulationVector x(values);
      const BetaOrder pi = beta_order(x, joint_spectrum);
      const PopulationVector candidate =
          spec.system_marginal(beta_permutation(pi, BetaOrder(alpha), joint_spectrum).apply(x));
      best_ground = candidate[0];
      result.best = candidate;
    }
    for (std::size_t s = 0; s < masks.size(); ++s) {
      auto& slot = result.best_partial_sums[mask_size[s] - 1];
      slot = std::max(slot, search.height(masks[s]));
    }
  } while (std::next_permutation(values.begin(), values.end()));
  return result;
}

}  // namespace xhbac::protocols
