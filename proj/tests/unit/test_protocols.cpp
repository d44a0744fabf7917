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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "xhbac/protocols/optimal.hpp"
#include "xhbac/protocols/ppa.hpp"
#include "xhbac/protocols/qubit.hpp"

using Catch::Approx;
using namespace xhbac;
using namespace xhbac::protocols;
namespace xt = xhbac::testing;

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Reference evaluation of the qubit closed form in extended precision.
double exponential_approach(double p0, double rate, std::size_t k) {
  return static_cast<double>(1.0L - std::exp(-static_cast<long double>(k) * rate) * (1.0L - p0));
}

// Best ground population over every arrangement of the joint populations
// followed by any Gibbs-stochastic matrix, each solved as a linear program.
double lp_best_ground(const PopulationVector& p, const CompositeSpec& spec) {
  const auto joint_spectrum = spec.joint_spectrum();
  const auto joint = spec.tensor(p);
  std::vector<bool> ground(spec.joint_dim());
  for (std::size_t m = 0; m < spec.joint_dim(); ++m) ground[m] = spec.pair(m).system == 0;
  std::vector<double> v(joint.begin(), joint.end());
  std::sort(v.begin(), v.end());
  double best = 0.0;
  do {
    best = std::max(best, xt::lp_max_population(PopulationVector(v), joint_spectrum, ground));
  } while (std::next_permutation(v.begin(), v.end()));
  return best;
}

std::vector<double> sorted_partial_sums(const PopulationVector& p) {
  std::vector<double> v(p.begin(), p.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  for (std::size_t i = 1; i < v.size(); ++i) v[i] += v[i - 1];
  return v;
}

}  // namespace

TEST_CASE("optimal output order", "[alpha]") {
  CHECK(beta_opt_alpha(2, 1) == BetaOrder{0, 1});
  CHECK(beta_opt_alpha(3, 1) == BetaOrder{0, 1, 2});
  // (0,1),(0,0),(1,1),(1,0) with (i,a) -> 2i + a.
  CHECK(beta_opt_alpha(2, 2) == BetaOrder{1, 0, 3, 2});
  CHECK_THROWS_AS(beta_opt_alpha(1, 2), std::invalid_argument);
}

TEST_CASE("single optimal round", "[optimal]") {
  const CompositeSpec qubit(EnergySpectrum::qubit(1.0, 1.0));
  const auto out = optimal_round(PopulationVector{0.5, 0.5}, qubit);
  CHECK(out[0] == Approx(1.0 - 0.5 * std::exp(-1.0)).epsilon(1e-14));

  const CompositeSpec qutrit(EnergySpectrum({0.0, 1.0, 1.7}, 1.0), EnergySpectrum({0.0, 0.4}, 1.0));
  const auto ground = optimal_round(PopulationVector{1.0, 0.0, 0.0}, qutrit);
  CHECK(ground[0] == Approx(1.0).epsilon(1e-14));
  CHECK(oracle_optimal_round(PopulationVector{1.0, 0.0, 0.0}, qutrit).best[0] == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("optimal round matches the exhaustive oracle", "[optimal][oracle]") {
  std::mt19937_64 rng(41);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3},
                                                                 {4, 1}, {4, 2}, {2, 4}, {6, 1}, {8, 1}};
  for (int t = 0; t < 100; ++t) {
    const auto [d, r] = shapes[static_cast<std::size_t>(t) % shapes.size()];
    const EnergySpectrum system(xt::random_levels(rng, d, 1.5), 1.0);
    const CompositeSpec spec = r == 1 ? CompositeSpec(system)
                                      : CompositeSpec(system, EnergySpectrum(xt::random_levels(rng, r, 1.5), 1.0));
    const auto p = xt::random_population(rng, d);
    const auto out = optimal_round(p, spec);
    const auto oracle = oracle_optimal_round(p, spec);
    CHECK(std::abs(out[0] - oracle.best[0]) < 1e-10);
    const auto sums = sorted_partial_sums(out);
    for (std::size_t l = 0; l < d; ++l) CHECK(sums[l] >= oracle.best_partial_sums[l] - 1e-10);
  }
}

TEST_CASE("oracle search strategies agree", "[oracle]") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 12; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
    const EnergySpectrum system(xt::random_levels(rng, d, 1.5), 0.8);
    const CompositeSpec spec(system, EnergySpectrum::qubit(0.6, 0.8));
    const auto p = xt::random_population(rng, d);
    const auto a = oracle_optimal_round(p, spec, OracleMethod::kExhaustive);
    const auto b = oracle_optimal_round(p, spec, OracleMethod::kSubsetSearch);
    CHECK(a.best[0] == Approx(b.best[0]).margin(1e-12));
    for (std::size_t l = 0; l < d; ++l) CHECK(a.best_partial_sums[l] == Approx(b.best_partial_sums[l]).margin(1e-12));
  }
  const CompositeSpec big(EnergySpectrum({0.0, 1.0, 2.0}, 1.0), EnergySpectrum({0.0, 1.0, 2.0}, 1.0));
  CHECK_THROWS_AS(oracle_optimal_round(PopulationVector{0.4, 0.3, 0.3}, big), std::length_error);
}

TEST_CASE("subset recursion agrees with the curve height", "[oracle][property]") {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 6);
    const EnergySpectrum levels(xt::random_levels(rng, n, 1.2), 1.0);
    protocols::detail::SubsetSearch search(levels.boltzmann_weights());
    const auto x = xt::random_simplex(rng, n);
    search.load(x);
    std::uniform_int_distribution<std::uint32_t> pick(1, (std::uint32_t{1} << n) - 1);
    for (int k = 0; k < 8; ++k) {
      const std::uint32_t mask = pick(rng);
      std::vector<std::size_t> order;
      const double via_recursion = search.best(mask, &order);
      CHECK(via_recursion == Approx(search.height(mask)).margin(1e-12));
      CHECK(order.size() == n);
    }
  }
}

TEST_CASE("optimal round matches a linear-programming search", "[optimal][lp]") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 6; ++t) {
    const bool with_ancilla = t % 2 == 1;
    const std::size_t d = with_ancilla ? 2 : 3;
    const EnergySpectrum system(xt::random_levels(rng, d, 1.5), 1.0);
    const CompositeSpec spec = with_ancilla ? CompositeSpec(system, EnergySpectrum({0.0, 0.3, 0.9}, 1.0))
                                            : CompositeSpec(system);
    const auto p = xt::random_population(rng, d);
    CHECK(optimal_round(p, spec)[0] == Approx(lp_best_ground(p, spec)).margin(1e-9));
  }
}

TEST_CASE("infinite temperature oracle only sorts", "[oracle]") {
  const CompositeSpec spec(EnergySpectrum({0.0, 1.0, 2.0}, 0.0), EnergySpectrum({0.0, 1.0}, 0.0));
  const PopulationVector p{0.2, 0.5, 0.3};
  // Uniform ancilla: the two largest joint entries are both 0.25.
  CHECK(oracle_optimal_round(p, spec).best[0] == Approx(0.5).epsilon(1e-14));
  CHECK(optimal_round(p, spec)[0] == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("qubit protocol closed form", "[closed-form]") {
  for (double be : {0.1, 1.0, 10.0}) {
    for (double p0 : {0.5, 0.7, 0.9}) {
      const CompositeSpec spec(EnergySpectrum::qubit(1.0, be));
      const auto trace = run_optimal_protocol(PopulationVector{p0, 1 - p0}, spec, 50);
      REQUIRE(trace.size() == 51);
      for (std::size_t k = 0; k <= 50; ++k) {
        CHECK(std::abs(trace[k].ground - exponential_approach(p0, be, k)) < 1e-12);
        CHECK(std::abs(qubit_cooling_closed_form(p0, be, k) - exponential_approach(p0, be, k)) < 1e-15);
        CHECK(trace[k].index == k);
      }
    }
  }
  const auto empty = run_optimal_protocol(PopulationVector{0.6, 0.4}, CompositeSpec(EnergySpectrum::qubit(1, 1)), 0);
  CHECK(empty.size() == 1);
}

TEST_CASE("trace ground population is monotone", "[optimal][property]") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 20; ++t) {
    const EnergySpectrum system(xt::random_levels(rng, 3), 1.0);
    const CompositeSpec spec(system, EnergySpectrum::qubit(0.5, 1.0));
    const auto trace = run_optimal_protocol(xt::random_population(rng, 3), spec, 10);
    for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k].ground >= trace[k - 1].ground - 1e-14);
  }
  // Ordering of qubit ground populations survives an optimal round.
  const CompositeSpec qubit(EnergySpectrum::qubit(0.7, 1.0), EnergySpectrum::qubit(0.4, 1.0));
  for (double a = 0.5; a < 1.0; a += 0.05) {
    const double b = a + 0.03;
    CHECK(optimal_round(PopulationVector{a, 1 - a}, qubit)[0] <=
          optimal_round(PopulationVector{std::min(b, 1.0), 1 - std::min(b, 1.0)}, qubit)[0] + 1e-15);
  }
}

TEST_CASE("beta-swap matrix", "[beta-swap]") {
  const EnergySpectrum q1 = EnergySpectrum::qubit(1.0, 1.0);
  const auto g = beta_swap_matrix(0, 1, q1);
  const double e = std::exp(-1.0);
  CHECK(g(0, 0) == Approx(1 - e));
  CHECK(g(0, 1) == 1.0);
  CHECK(g(1, 0) == Approx(e));
  CHECK(g(1, 1) == 0.0);
  CHECK(verify_gibbs_stochastic(g).ok);

  const auto hot = beta_swap_matrix(0, 2, EnergySpectrum({0.0, 1.0, 2.0}, 0.0));
  CHECK(hot.entries().isApprox(transposition_matrix(0, 2, 3)));
  const auto cold = beta_swap_matrix(0, 1, EnergySpectrum::qubit(1.0, kInfinity));
  CHECK(cold(0, 0) == 1.0);
  CHECK(cold(0, 1) == 1.0);
  CHECK(cold(1, 0) == 0.0);
  CHECK_THROWS_AS(beta_swap_matrix(1, 1, q1), std::invalid_argument);
}

TEST_CASE("qudit ladder", "[ladder]") {
  std::mt19937_64 rng(61);
  for (std::size_t d : {3u, 4u, 5u}) {
    const EnergySpectrum sp(xt::random_levels(rng, d), 1.0);
    const Eigen::MatrixXd c = ladder_round_matrix(sp);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k + 1 < d; ++k) power = c * power;
    const double decay = std::exp(-sp.omega());
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    expected(0) = 1 - decay;
    expected(1) = decay;
    CHECK((power.col(1) - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(verify_gibbs_stochastic(ladder_thermalization(sp)).ok);

    const auto p0 = xt::random_population(rng, d);
    const auto trace = run_ladder_protocol(p0, sp, 10 * (d - 1));
    for (std::size_t k = 0; k <= 10; ++k) {
      CHECK(std::abs(trace[k * (d - 1)].ground - exponential_approach(p0[0], sp.omega(), k)) < 1e-12);
    }
  }
  // The optimal protocol without ancillas is never behind the ladder.
  for (std::size_t d : {3u, 4u}) {
    const EnergySpectrum sp(xt::random_levels(rng, d, 1.0), 1.0);
    const auto p0 = xt::random_population(rng, d);
    const auto ladder = run_ladder_protocol(p0, sp, 6 * (d - 1));
    const auto best = run_optimal_protocol(p0, CompositeSpec(sp), 6 * (d - 1));
    for (std::size_t k = 0; k <= 6 * (d - 1); ++k) CHECK(best[k].ground >= ladder[k].ground - 1e-12);
  }
  // Two levels: Pauli X followed by the beta-swap.
  const EnergySpectrum q1 = EnergySpectrum::qubit(0.8, 1.0);
  const PopulationVector p{0.3, 0.7};
  const auto ladder = qudit_ladder_round(p, q1);
  const auto direct = beta_swap_matrix(0, 1, q1).apply(PopulationVector{0.7, 0.3});
  CHECK(ladder[0] == Approx(direct[0]).epsilon(1e-15));
}

TEST_CASE("noisy beta-swap", "[noise]") {
  const EnergySpectrum q1 = EnergySpectrum::qubit(1.0, 1.0);
  const auto exact = epsilon_noisy_trace(0.6, NoiseSpec(0.0, 1.0), q1, 30);
  for (std::size_t k = 0; k <= 30; ++k) CHECK(exact.ground[k] == Approx(exponential_approach(0.6, 1.0, k)).margin(1e-13));

  const double z = 1 + std::exp(-1.0);
  CHECK(noisy_asymptote(0.1, 1.0) == Approx(1 - 0.1 / (2 - 0.9 * z)));
  CHECK(noisy_asymptote(0.1, 1.0) == Approx(0.8699).margin(5e-5));

  for (double eps : {0.01, 0.05, 0.2}) {
    for (double be : {0.3, 1.0, 2.5}) {
      const NoiseSpec noise(eps, be);
      CHECK(noise.within_bound == (eps <= 1 / (1 + std::exp(be) + std::exp(2 * be))));
      const auto tr = epsilon_noisy_trace(0.55, noise, EnergySpectrum::qubit(1.0, be), 40);
      CHECK(tr.optimality_guaranteed == noise.within_bound);
      for (std::size_t k = 0; k <= 40; ++k) {
        CHECK(std::abs(tr.ground[k] - noisy_cooling_closed_form(0.55, eps, be, k)) < 1e-12);
      }
      CHECK(tr.ground.back() == Approx(noisy_asymptote(eps, be)).margin(1e-6));
    }
  }
  CHECK_THROWS_AS(NoiseSpec(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("qubit thermal operations", "[thermal-op]") {
  const EnergySpectrum q1 = EnergySpectrum::qubit(1.0, 1.0);
  CHECK_THROWS_AS(QubitThermalOp(0.5, 1.0, q1), std::invalid_argument);
  const double cmax = QubitThermalOp::max_coherence(0.5, std::exp(-1.0));
  const QubitThermalOp op(0.5, cmax, q1);
  Eigen::Matrix2cd rho;
  rho << 0.6, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.4;
  const auto out = op.apply(rho);
  CHECK(out.trace().real() == Approx(1.0));
  CHECK(std::abs(out(0, 1)) == Approx(cmax * std::abs(rho(0, 1))));
  // The output stays positive semidefinite at the coherence bound.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(out);
  CHECK(es.eigenvalues().minCoeff() >= -1e-14);

  // Determinant function against the explicit density matrix.
  const double p = 0.7;
  const double q = 0.45;
  const double lambda = 0.8;
  const double a = std::sqrt(q * (1 - q) - p * (1 - p));
  Eigen::Matrix2cd rq;
  rq << q, a, a, 1 - q;
  const QubitThermalOp best(lambda, QubitThermalOp::max_coherence(lambda, std::exp(-1.0)), q1);
  CHECK(determinant_function(p, q, lambda, 1.0) == Approx(best.apply(rq).determinant().real()).epsilon(1e-12));
}

TEST_CASE("determinant scan", "[determinant]") {
  const auto scan = to_determinant_scan(0.7, 1.0, 1.0);
  CHECK(scan.q == Approx(0.3).margin(1e-4));
  CHECK(scan.lambda == Approx(1.0).margin(1e-4));
  CHECK(scan.boundary_claim_applies);
  CHECK(scan.boundary_claim_holds);

  // No thermal operation leaves the determinant at p(1-p).
  for (double q : {0.3, 0.4, 0.5, 0.6, 0.7}) CHECK(determinant_function(0.7, q, 0.0, 1.0) == Approx(0.21));
  // Endpoint difference f(p) - f(1-p) at fixed lambda; it vanishes at p = 1/2.
  for (double p : {0.5, 0.6, 0.85}) {
    for (double l : {0.2, 0.9, 1.0}) {
      const double e = std::exp(-1.0);
      const double expected = l * (1 - e) * (l * (1 + e) - 1) * (2 * p - 1);
      CHECK(determinant_function(p, p, l, 1.0) - determinant_function(p, 1 - p, l, 1.0) ==
            Approx(expected).margin(1e-14));
    }
  }
  CHECK_THROWS_AS(to_determinant_scan(0.4, 1.0, 1.0), std::invalid_argument);

  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double be = 0.2 + 2.8 * u(rng);
    const double threshold = 1 - noise_validity_bound(be);
    const double lambda_max = threshold + (1 - threshold) * (0.05 + 0.95 * u(rng));
    const double top = noisy_asymptote(1 - lambda_max, be);
    const double p = 0.5 + (top - 0.5) * 0.95 * u(rng);
    const auto s = to_determinant_scan(p, lambda_max, be);
    CHECK(s.boundary_claim_applies);
    CHECK(s.boundary_claim_holds);
  }
}

TEST_CASE("Markovian bound", "[markov]") {
  const EnergySpectrum q1 = EnergySpectrum::qubit(1.0, 1.0);
  const double thermal = 1 / (1 + std::exp(-1.0));
  CHECK(markovian_best(0.5, q1) == Approx(thermal).epsilon(1e-14));
  CHECK(markovian_best(0.9, q1) == 0.9);
  CHECK(markovian_best(0.3, EnergySpectrum::qubit(1.0, 0.0)) == Approx(0.7));
  CHECK(markovian_best(0.5, EnergySpectrum::qubit(1.0, 0.0)) == Approx(0.5));
  // Thermal or hotter inputs never cool past the thermal value.
  for (double p = 1 - thermal; p <= thermal; p += 0.01) CHECK(markovian_best(p, q1) <= thermal + 1e-12);
}

TEST_CASE("partner pairing baseline", "[ppa]") {
  const EnergySpectrum q1 = EnergySpectrum::qubit(1.0, 1.0);
  const auto thermal = gibbs_state(q1);
  const auto none = ppa_trace(thermal, 0, q1, 5);
  for (std::size_t k = 1; k <= 5; ++k) CHECK(none[k].ground == Approx(thermal[0]));
  const auto flat = ppa_trace(PopulationVector{0.5, 0.5}, 2, EnergySpectrum::qubit(1.0, 0.0), 5);
  for (std::size_t k = 0; k <= 5; ++k) CHECK(flat[k].ground == Approx(0.5));

  const auto two = ppa_trace(thermal, 2, q1, 200);
  // Fixed point from a one-step contraction; value independent of the start.
  CHECK(two[1].ground == Approx(0.821920).margin(1e-6));
  const double fixed = two[200].ground;
  CHECK(fixed == Approx(0.5 * (1 + std::tanh(2.0 * 0.5))).margin(1e-9));
  CHECK(fixed < 1.0);
  CHECK(two[10].ground == Approx(0.880784).margin(1e-6));
  for (std::size_t k = 1; k <= 200; ++k) CHECK(two[k].ground >= two[k - 1].ground - 1e-15);
  CHECK_THROWS_AS(ppa_trace(thermal, 4, q1, 1), std::invalid_argument);
}
