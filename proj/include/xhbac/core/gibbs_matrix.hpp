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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xhbac/core/spectrum.hpp"
#include "xhbac/core/thermo_majorization.hpp"

namespace xhbac {

/// Column-stochastic transition matrix G_{j|i} = entries(j, i) acting on
/// population vectors relative to a spectrum. The constructor does not
/// check Gibbs-stochasticity; use verify_gibbs_stochastic for that.
class GibbsMatrix {
 public:
  GibbsMatrix(Eigen::MatrixXd entries, EnergySpectrum spectrum)
      : entries_(std::move(entries)), spectrum_(std::move(spectrum)) {
    if (entries_.rows() != entries_.cols() ||
        static_cast<std::size_t>(entries_.rows()) != spectrum_.dim()) {
      throw std::invalid_argument("GibbsMatrix: shape does not match spectrum");
    }
  }

  static GibbsMatrix identity(const EnergySpectrum& spectrum) {
    const auto d = static_cast<Eigen::Index>(spectrum.dim());
    return GibbsMatrix(Eigen::MatrixXd::Identity(d, d), spectrum);
  }

  std::size_t dim() const { return spectrum_.dim(); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const EnergySpectrum& spectrum() const { return spectrum_; }
  double operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  PopulationVector apply(const PopulationVector& p) const {
    detail::require_same_dim(p.size(), dim(), "GibbsMatrix::apply");
    Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) v(static_cast<Eigen::Index>(i)) = p[i];
    const Eigen::VectorXd out = entries_ * v;
    return PopulationVector(std::vector<double>(out.data(), out.data() + out.size()));
  }

  /// (this * other): apply other first.
  GibbsMatrix operator*(const GibbsMatrix& other) const {
    detail::require_same_dim(dim(), other.dim(), "GibbsMatrix::operator*");
    return GibbsMatrix(entries_ * other.entries_, spectrum_);
  }

 private:
  Eigen::MatrixXd entries_;
  EnergySpectrum spectrum_;
};

/// Outcome of a Gibbs-stochasticity check, with the worst violation of each
/// defining condition.
struct GibbsCheck {
  bool ok = false;
  double negativity = 0.0;       // max(0, -min entry)
  double column_sum_error = 0.0; // max |sum_j G_{ji} - 1|
  double gibbs_error = 0.0;      // max |(G g)_j - g_j| on the normalised Gibbs vector
  std::string worst;             // which condition is violated most

  double violation() const { return std::max({negativity, column_sum_error, gibbs_error}); }
};

inline GibbsCheck verify_gibbs_stochastic(const GibbsMatrix& g, double threshold = 1e-12) {
  GibbsCheck check;
  const auto& m = g.entries();
  check.negativity = std::max(0.0, -m.minCoeff());
  check.column_sum_error = (m.colwise().sum().array() - 1.0).abs().maxCoeff();
  const PopulationVector gibbs = gibbs_state(g.spectrum());
  Eigen::VectorXd gv(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) gv(i) = gibbs[static_cast<std::size_t>(i)];
  check.gibbs_error = (m * gv - gv).cwiseAbs().maxCoeff();
  if (check.negativity >= check.column_sum_error && check.negativity >= check.gibbs_error) {
    check.worst = "non-negativity";
  } else if (check.column_sum_error >= check.gibbs_error) {
    check.worst = "column sums";
  } else {
    check.worst = "Gibbs preservation";
  }
  check.ok = check.violation() < threshold;
  return check;
}

/// The beta-permutation P^{(pi, alpha)}: maps any state of beta-order pi to
/// the maximal state of beta-order alpha in its thermal polytope.
///
/// Lay the Boltzmann weights of the levels in pi-order and in alpha-order as
/// consecutive intervals of [0, Z]. Level alpha(i) receives from level pi(j)
/// the fraction of pi(j)'s interval that overlaps alpha(i)'s interval. This
/// fills the matrix row by row in alpha-order, exactly as the greedy transfer
/// construction does, and is stored in the natural basis.
inline GibbsMatrix beta_permutation(const BetaOrder& pi, const BetaOrder& alpha,
                                    const EnergySpectrum& spectrum) {
  const std::size_t d = spectrum.dim();
  if (pi.size() != d || alpha.size() != d) {
    throw std::invalid_argument("beta_permutation: permutation dimension mismatch");
  }
  const auto w = detail::curve_weights(spectrum, "beta_permutation");

  std::vector<double> col_edge(d + 1, 0.0);
  std::vector<double> row_edge(d + 1, 0.0);
  for (std::size_t j = 0; j < d; ++j) col_edge[j + 1] = col_edge[j] + w[pi[j]];
  for (std::size_t i = 0; i < d; ++i) row_edge[i + 1] = row_edge[i] + w[alpha[i]];
  // Same total up to rounding; pin both ends so the last overlap is exact.
  row_edge[d] = col_edge[d];

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < d && j < d) {
    const double lo = std::max(row_edge[i], col_edge[j]);
    const double hi = std::min(row_edge[i + 1], col_edge[j + 1]);
    if (hi > lo) {
      p(static_cast<Eigen::Index>(alpha[i]), static_cast<Eigen::Index>(pi[j])) += (hi - lo) / w[pi[j]];
    }
    if (row_edge[i + 1] < col_edge[j + 1]) {
      ++i;
    } else if (col_edge[j + 1] < row_edge[i + 1]) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  // Column sums equal 1 up to rounding in the interval arithmetic; the
  // fraction of the final overlap in each column absorbs it.
  for (std::size_t c = 0; c < d; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    const double total = p.col(col).sum();
    if (total > 0.0) p.col(col) /= total;
  }
  return GibbsMatrix(std::move(p), spectrum);
}

/// Candidate extremal points of the thermal polytope of p.
struct ExtremalPoints {
  std::vector<PopulationVector> points;  // deduplicated
  std::size_t candidate_count = 0;       // number of alpha orders scanned (d!)
  std::size_t distinct_count = 0;        // after deduplication
};

inline constexpr std::size_t kDefaultExtremalDimLimit = 8;
inline constexpr double kExtremalDedupDistance = 1e-10;

/// {P^{(pi_p, alpha)} p : alpha over all d! orders}, deduplicated in max-norm.
/// A superset of the polytope's vertices; refused above max_dim levels.
inline ExtremalPoints extremal_points(const PopulationVector& p, const EnergySpectrum& spectrum,
                                      std::size_t max_dim = kDefaultExtremalDimLimit) {
  detail::require_same_dim(p.size(), spectrum.dim(), "extremal_points");
  if (p.size() > max_dim) {
    throw std::length_error("extremal_points: dimension " + std::to_string(p.size()) +
                            " exceeds enumeration limit " + std::to_string(max_dim));
  }
  const BetaOrder pi = beta_order(p, spectrum);
  std::vector<std::size_t> alpha(p.size());
  std::iota(alpha.begin(), alpha.end(), std::size_t{0});
  ExtremalPoints out;
  do {
    ++out.candidate_count;
    PopulationVector q = beta_permutation(pi, BetaOrder(alpha), spectrum).apply(p);
    const bool seen = std::any_of(out.points.begin(), out.points.end(), [&](const PopulationVector& e) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        if (std::abs(e[k] - q[k]) >= kExtremalDedupDistance) return false;
      }
      return true;
    });
    if (!seen) out.points.push_back(std::move(q));
  } while (std::next_permutation(alpha.begin(), alpha.end()));
  out.distinct_count = out.points.size();
  return out;
}

}  // namespace xhbac
