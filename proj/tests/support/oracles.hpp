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

// Independent reference implementations used only by the tests. None of
// these reuse the library's construction code paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "support/lp.hpp"
#include "xhbac/core/spectrum.hpp"
#include "xhbac/core/thermo_majorization.hpp"

namespace xhbac::testing {

// ---------------------------------------------------------------------------
// Random instances.

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  for (auto& x : v) x = e(rng);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= s;
  return v;
}

inline PopulationVector random_population(std::mt19937_64& rng, std::size_t d) {
  return PopulationVector(random_simplex(rng, d));
}

/// Sorted random levels starting at 0 with gaps in (0, max_gap).
inline std::vector<double> random_levels(std::mt19937_64& rng, std::size_t d, double max_gap = 2.0) {
  std::uniform_real_distribution<double> u(0.05, max_gap);
  std::vector<double> levels(d, 0.0);
  for (std::size_t i = 1; i < d; ++i) levels[i] = levels[i - 1] + u(rng);
  return levels;
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t d) {
  std::vector<std::size_t> v(d);
  std::iota(v.begin(), v.end(), std::size_t{0});
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

// ---------------------------------------------------------------------------
// Row-by-row construction of P^{(pi,alpha)} with running indices k_m.
// The first row starts at column 0 when the first alpha weight fits inside the
// first pi weight. A row whose cumulative alpha weight reaches the current
// column boundary exactly is filled with the remaining fraction of that
// column, and the scan advances.

inline Eigen::MatrixXd row_rule_beta_permutation(const std::vector<std::size_t>& pi,
                                                 const std::vector<std::size_t>& alpha,
                                                 const std::vector<double>& weights) {
  const std::size_t d = weights.size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  auto wp = [&](std::size_t j) { return weights[pi[j]]; };
  auto wa = [&](std::size_t i) { return weights[alpha[i]]; };
  auto cum_pi = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += wp(j);
    return s;
  };
  auto cum_alpha = [&](std::size_t m) {
    double s = 0.0;
    for (std::size_t i = 0; i <= m; ++i) s += wa(i);
    return s;
  };
  // Cumulative sums along pi and alpha are accumulated in different orders;
  // boundaries that coincide mathematically are compared with a small slack.
  const double slack = 1e-12 * cum_pi(d - 1);
  auto smallest_covering = [&](double target) {
    std::size_t k = 0;
    while (k + 1 < d && cum_pi(k) < target - slack) ++k;
    return k;
  };

  std::size_t k_prev = 0;
  // Row 0.
  if (wa(0) < wp(0) - slack) {
    k_prev = 0;
    g(0, 0) = wa(0) / wp(0);
  } else {
    const std::size_t k0 = smallest_covering(wa(0));
    for (std::size_t j = 0; j < k0; ++j) g(0, static_cast<Eigen::Index>(j)) = 1.0;
    const double before = k0 == 0 ? 0.0 : cum_pi(k0 - 1);
    g(0, static_cast<Eigen::Index>(k0)) = (wa(0) - before) / wp(k0);
    k_prev = k0;
  }
  // Rows m >= 1.
  for (std::size_t m = 1; m < d; ++m) {
    const auto row = static_cast<Eigen::Index>(m);
    const double reach = cum_alpha(m);
    if (reach <= cum_pi(k_prev) + slack) {
      g(row, static_cast<Eigen::Index>(k_prev)) = wa(m) / wp(k_prev);
      continue;
    }
    const std::size_t km = smallest_covering(reach);
    double used = 0.0;
    for (std::size_t i = 0; i < m; ++i) used += g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k_prev));
    g(row, static_cast<Eigen::Index>(k_prev)) = 1.0 - used;
    for (std::size_t j = k_prev + 1; j < km; ++j) g(row, static_cast<Eigen::Index>(j)) = 1.0;
    g(row, static_cast<Eigen::Index>(km)) = (reach - cum_pi(km - 1)) / wp(km);
    k_prev = km;
  }
  // Back to the natural basis.
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      p(static_cast<Eigen::Index>(alpha[i]), static_cast<Eigen::Index>(pi[j])) =
          g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Linear-programming view of the thermal polytope: variables are the d*d
// entries of a Gibbs-stochastic matrix G (column-major, G(j,i) at i*d + j).

inline LinearProgram gibbs_stochastic_program(const std::vector<double>& gibbs, std::size_t d) {
  LinearProgram lp;
  const std::size_t n = d * d;
  lp.c.assign(n, 0.0);
  for (std::size_t i = 0; i < d; ++i) {  // column sums
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < d; ++j) row[i * d + j] = 1.0;
    lp.a.push_back(std::move(row));
    lp.b.push_back(1.0);
  }
  for (std::size_t j = 0; j < d; ++j) {  // G g = g
    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < d; ++i) row[i * d + j] = gibbs[i];
    lp.a.push_back(std::move(row));
    lp.b.push_back(gibbs[j]);
  }
  return lp;
}

/// True iff some Gibbs-stochastic G maps p to q.
inline bool lp_reachable(const PopulationVector& p, const PopulationVector& q, const EnergySpectrum& spectrum) {
  const std::size_t d = p.size();
  const PopulationVector g = gibbs_state(spectrum);
  LinearProgram lp = gibbs_stochastic_program(std::vector<double>(g.begin(), g.end()), d);
  for (std::size_t j = 0; j < d; ++j) {  // G p = q
    std::vector<double> row(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) row[i * d + j] = p[i];
    lp.a.push_back(std::move(row));
    lp.b.push_back(q[j]);
  }
  return solve_lp(lp, 1e-10).has_value();
}

/// Max of sum_{j in targets} (G p)_j over Gibbs-stochastic G.
inline double lp_max_population(const PopulationVector& p, const EnergySpectrum& spectrum,
                                const std::vector<bool>& targets) {
  const std::size_t d = p.size();
  const PopulationVector g = gibbs_state(spectrum);
  LinearProgram lp = gibbs_stochastic_program(std::vector<double>(g.begin(), g.end()), d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (targets[j]) lp.c[i * d + j] = p[i];
    }
  }
  const auto sol = solve_lp(lp);
  return sol ? sol->objective : -1.0;
}

/// Smallest gap between the curves of p and q over the interior elbows (both
/// curves meet at the ends); negative when q's curve rises above p's.
inline double curve_margin(const PopulationVector& p, const PopulationVector& q, const EnergySpectrum& spectrum) {
  const ThermoCurve cp = thermo_curve(p, spectrum);
  const ThermoCurve cq = thermo_curve(q, spectrum);
  const double z = std::min(cp.partition_sum(), cq.partition_sum());
  double margin = INFINITY;
  for (const auto* c : {&cp, &cq}) {
    for (std::size_t i = 1; i + 1 < c->points.size(); ++i) {
      const double x = std::min(c->points[i].x, z);
      margin = std::min(margin, curve_height(cp, x) - curve_height(cq, x));
    }
  }
  return margin;
}

}  // namespace xhbac::testing
