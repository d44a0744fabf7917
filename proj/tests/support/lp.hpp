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

// Dense two-phase simplex for small test-only linear programs:
//   maximise c.x  subject to  A x = b, x >= 0.
// Bland's rule avoids cycling; sizes here are a few dozen variables.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace xhbac::testing {

struct LinearProgram {
  std::vector<std::vector<double>> a;  // m rows of n coefficients
  std::vector<double> b;               // m right-hand sides
  std::vector<double> c;               // n objective coefficients
};

struct LpSolution {
  double objective = 0.0;
  std::vector<double> x;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& obj(std::size_t c) { return at(m_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double pv = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= pv;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
    }
  }

  // Minimises the objective row over the allowed columns. Returns false if
  // unbounded.
  bool run(std::vector<std::size_t>& basis, std::size_t allowed_cols, double eps) {
    for (;;) {
      std::size_t pc = n_;
      for (std::size_t c = 0; c < allowed_cols; ++c) {
        if (obj(c) < -eps) {
          pc = c;
          break;
        }
      }
      if (pc == n_) return true;
      std::size_t pr = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        if (at(r, pc) > eps) {
          const double ratio = rhs(r) / at(r, pc);
          if (ratio < best - eps || (std::abs(ratio - best) <= eps && pr < m_ && basis[r] < basis[pr])) {
            best = ratio;
            pr = r;
          }
        }
      }
      if (pr == m_) return false;
      pivot(pr, pc);
      basis[pr] = pc;
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> t_;
};

}  // namespace detail

/// Returns the optimum, or nullopt when infeasible (phase-one residual above
/// feasibility_tol) or unbounded.
inline std::optional<LpSolution> solve_lp(const LinearProgram& lp, double feasibility_tol = 1e-9) {
  constexpr double kEps = 1e-12;
  const std::size_t m = lp.b.size();
  const std::size_t n = lp.c.size();
  detail::Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * lp.a[r][c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * lp.b[r];
    basis[r] = n + r;
  }
  // Phase one: minimise the sum of artificials.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.obj(c) -= t.at(r, c);
    t.obj(n + m) -= t.rhs(r);
  }
  t.run(basis, n + m, kEps);
  if (-t.obj(n + m) > feasibility_tol) return std::nullopt;
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        t.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }
  // Phase two on the original columns: minimise -c.x.
  for (std::size_t c = 0; c <= n + m; ++c) t.obj(c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.obj(c) = -lp.c[c];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t bc = basis[r];
    if (bc >= n) continue;
    const double f = t.obj(bc);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= n + m; ++c) t.obj(c) -= f * t.at(r, c);
  }
  if (!t.run(basis, n, kEps)) return std::nullopt;
  LpSolution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = t.rhs(r);
  }
  for (std::size_t c = 0; c < n; ++c) sol.objective += lp.c[c] * sol.x[c];
  return sol;
}

}  // namespace xhbac::testing
