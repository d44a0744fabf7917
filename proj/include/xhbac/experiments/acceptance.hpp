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


// Acceptance criteria, grouped into named suites. Each criterion runs at a
// pinned tolerance and a runtime budget; exceeding either fails it.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xhbac/bosonic/cavity.hpp"
#include "xhbac/bosonic/jaynes_cummings.hpp"
#include "xhbac/bosonic/mode_reuse.hpp"
#include "xhbac/core/gibbs_matrix.hpp"
#include "xhbac/core/thermo_majorization.hpp"
#include "xhbac/experiments/config.hpp"
#include "xhbac/experiments/parallel.hpp"
#include "xhbac/protocols/optimal.hpp"
#include "xhbac/protocols/ppa.hpp"
#include "xhbac/protocols/qubit.hpp"

namespace xhbac::experiments {

/// Deliberate defects used to check that a suite notices them.
enum class Fault { kNone, kBetaSwapSign };

inline Fault parse_fault(const std::string& name) {
  if (name.empty() || name == "none") return Fault::kNone;
  if (name == "beta-swap-sign") return Fault::kBetaSwapSign;
  throw ConfigError("unknown fault '" + name + "'");
}

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Fault fault = Fault::kNone;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured quantities, or the first violated invariant
  double seconds = 0.0;
  double budget = 0.0;
};

struct AcceptanceReport {
  std::string suite;
  std::vector<CriterionResult> criteria;
  std::vector<std::string> notes;  // extra per-suite diagnostics

  bool passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
  }

  /// One line per criterion, then the notes.
  std::string lines() const {
    std::ostringstream out;
    for (const auto& c : criteria) {
      char time[64];
      std::snprintf(time, sizeof time, "%.3f s of %g s", c.seconds, c.budget);
      out << (c.passed ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << time << "): " << c.detail
          << '\n';
    }
    for (const auto& n : notes) out << "note: " << n << '\n';
    out << (passed() ? "suite " + suite + " passed" : "suite " + suite + " FAILED") << '\n';
    return out.str();
  }
};

namespace detail {

// Records the first violated invariant and the worst deviation of each
// named quantity.
class Checker {
 public:
  void expect(bool ok, const std::string& invariant) {
    if (!ok && failure_.empty()) failure_ = invariant;
  }

  /// |value| <= limit, tracking the largest |value| under this name.
  void within(const std::string& name, double value, double limit) {
    auto it = std::find_if(worst_.begin(), worst_.end(), [&](const auto& w) { return w.first == name; });
    if (it == worst_.end()) {
      worst_.emplace_back(name, 0.0);
      it = worst_.end() - 1;
    }
    it->second = std::max(it->second, std::abs(value));
    expect(std::abs(value) <= limit, name + " exceeds " + format_real(limit) + " (" + format_real(value) + ")");
  }

  void note(const std::string& text) { notes_.push_back(text); }

  bool ok() const { return failure_.empty(); }

  std::string summary() const {
    std::ostringstream out;
    if (!failure_.empty()) out << "violated: " << failure_;
    bool first = failure_.empty();
    for (const auto& [name, value] : worst_) {
      out << (first ? "" : "; ") << "max " << name << " = " << format_real(value);
      first = false;
    }
    for (const auto& n : notes_) {
      out << (first ? "" : "; ") << n;
      first = false;
    }
    return out.str();
  }

 private:
  std::string failure_;
  std::vector<std::pair<std::string, double>> worst_;
  std::vector<std::string> notes_;
};

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) s += (x = e(rng));
  for (auto& x : v) x /= s;
  return v;
}

inline std::vector<double> random_levels(std::mt19937_64& rng, std::size_t d, double max_gap) {
  std::uniform_real_distribution<double> u(0.05, max_gap);
  std::vector<double> levels(d, 0.0);
  for (std::size_t i = 1; i < d; ++i) levels[i] = levels[i - 1] + u(rng);
  return levels;
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t d) {
  std::vector<std::size_t> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = i;
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

inline double thermal_ground(double beta_gap) { return 1.0 / (1.0 + std::exp(-beta_gap)); }

inline std::mt19937_64 rng_for(const AcceptanceOptions& o, int criterion) {
  std::seed_seq seq{o.seed, static_cast<std::uint64_t>(criterion)};
  return std::mt19937_64(seq);
}

// ---------------------------------------------------------------------------

inline void closed_form_qubit(Checker& ck, const AcceptanceOptions&) {
  for (double be : {0.1, 1.0, 10.0}) {
    const CompositeSpec spec(EnergySpectrum::qubit(1.0, be));
    for (double p0 : {0.5, 0.7, 0.9}) {
      const auto trace = protocols::run_optimal_protocol(PopulationVector{p0, 1.0 - p0}, spec, 50);
      for (std::size_t k = 0; k <= 50; ++k) {
        ck.within("|simulated - closed form|", trace[k].ground - protocols::qubit_cooling_closed_form(p0, be, k),
                  1e-12);
      }
    }
  }
}

inline void closed_form_ladder(Checker& ck, const AcceptanceOptions& o) {
  auto rng = rng_for(o, 2);
  for (std::size_t d : {3u, 4u, 5u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const EnergySpectrum sp(random_levels(rng, d, 2.0), 1.0);
      const PopulationVector p0(random_simplex(rng, d));
      const std::size_t blocks = 20;
      const auto trace = protocols::run_ladder_protocol(p0, sp, blocks * (d - 1));
      for (std::size_t k = 0; k <= blocks; ++k) {
        ck.within("|sampled ladder - closed form|",
                  trace[k * (d - 1)].ground - protocols::ladder_cooling_closed_form(p0[0], sp.beta() * sp.omega(), k),
                  1e-12);
      }
    }
  }
}

inline GibbsMatrix beta_swap_under_test(std::size_t i, std::size_t j, const EnergySpectrum& sp, Fault fault) {
  GibbsMatrix g = protocols::beta_swap_matrix(i, j, sp);
  if (fault != Fault::kBetaSwapSign) return g;
  Eigen::MatrixXd m = g.entries();
  const double wrong = std::exp(sp.beta() * (sp.level(j) - sp.level(i)));
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  m(a, a) = 1.0 - wrong;
  m(b, a) = wrong;
  return GibbsMatrix(std::move(m), sp);
}

inline void polytope(Checker& ck, const AcceptanceOptions& o) {
  auto rng = rng_for(o, 3);
  std::uniform_real_distribution<double> beta(0.1, 3.0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 5);
    const EnergySpectrum sp(random_levels(rng, d, 2.0), beta(rng));
    const PopulationVector p(random_simplex(rng, d));
    const BetaOrder pi = beta_order(p, sp);
    const BetaOrder alpha(random_permutation(rng, d));
    const GibbsMatrix g = beta_permutation(pi, alpha, sp);
    const auto check = verify_gibbs_stochastic(g);
    ck.within("beta-permutation Gibbs-stochastic violation", check.violation(), 1e-12);

    const auto q = g.apply(p);
    const auto w = sp.boltzmann_weights();
    const auto cp = thermo_curve(p, sp);
    double x = 0.0;
    double y = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      x += w[alpha[i]];
      y += q[alpha[i]];
      ck.within("curve-touching gap", y - curve_height(cp, std::min(x, cp.partition_sum())), 1e-10);
    }

    // The two-level swap on a random pair is itself Gibbs-stochastic.
    auto pair = random_permutation(rng, d);
    const std::size_t lo = std::min(pair[0], pair[1]);
    const std::size_t hi = std::max(pair[0], pair[1]);
    const auto swap = verify_gibbs_stochastic(beta_swap_under_test(lo, hi, sp, o.fault));
    ck.expect(swap.ok, "beta-swap matrix is Gibbs-stochastic (" + swap.worst + " off by " +
                           format_real(swap.violation()) + ")");
  }
}

inline void oracle(Checker& ck, const AcceptanceOptions& o) {
  auto rng = rng_for(o, 4);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3},
                                                                 {4, 1}, {4, 2}, {2, 4}, {6, 1}, {8, 1}};
  for (std::size_t t = 0; t < 100; ++t) {
    const auto [d, r] = shapes[t % shapes.size()];
    const EnergySpectrum system(random_levels(rng, d, 1.5), 1.0);
    const CompositeSpec spec =
        r == 1 ? CompositeSpec(system)
               : CompositeSpec(system, EnergySpectrum(random_levels(rng, r, 1.5), 1.0));
    const PopulationVector p(random_simplex(rng, d));
    const auto out = protocols::optimal_round(p, spec);
    const auto best = protocols::oracle_optimal_round(p, spec);
    ck.within("|ground - oracle maximum|", out[0] - best.best[0], 1e-10);
    const auto sums = protocols::detail::descending_partial_sums(std::span<const double>(out.begin(), out.end()));
    for (std::size_t l = 0; l < d; ++l) {
      ck.expect(sums[l] >= best.best_partial_sums[l] - 1e-10, "partial sums dominate every oracle candidate");
    }
  }
}

inline void mode_reuse(Checker& ck, const AcceptanceOptions& o) {
  const bosonic::FockTruncation trunc(60, 1.0);
  for (double p0 : {0.5, thermal_ground(1.0), 0.9}) {
    const auto trace = bosonic::reuse_protocol_trace(p0, trunc, 1.0, 20);
    ck.within("truncation tail bound", trace.tail_bound, 1e-10);
    for (std::size_t k = 0; k <= 20; ++k) {
      // A few ulps of rounding on top of the neglected weight.
      ck.within("|reuse - closed form| beyond tail bound",
                std::max(0.0, std::abs(trace.ground[k] - protocols::qubit_cooling_closed_form(p0, 1.0, k)) -
                                  trace.tail_bound),
                1e-15);
    }
  }
  auto rng = rng_for(o, 5);
  for (int trial = 0; trial < 20; ++trial) {
    bosonic::JointDiagState s;
    auto flat = random_simplex(rng, 2 * 61);
    s.ground.assign(flat.begin(), flat.begin() + 61);
    s.excited.assign(flat.begin() + 61, flat.end());
    const auto next = bosonic::reuse_round(s);
    bool exact = next.ground[0] == s.excited[0];
    for (std::size_t n = 1; n <= 60; ++n) exact = exact && next.ground[n] == s.ground[n - 1];
    for (std::size_t n = 0; n < 60; ++n) exact = exact && next.excited[n] == s.excited[n + 1];
    ck.expect(exact, "occupations circulate exactly along the ladder");
  }
}

inline void anharmonic(Checker& ck, const AcceptanceOptions&) {
  const auto dev = bosonic::anharmonic_peak_deviation(0.05, bosonic::FockTruncation(60, 1.0), 1.0);
  ck.note("peak at k = " + std::to_string(dev.at_k));
  ck.within("relative deviation of the cooling sum", dev.peak, 5e-5);
}

inline void jc_window(Checker& ck, const AcceptanceOptions&) {
  const bosonic::FockTruncation trunc(60, 1.0);
  const auto wide = bosonic::optimize_interaction_time(1.0, 0.0, 5000.0, trunc);
  const double limit = protocols::noisy_asymptote(1.0 - wide.deexcitation, 1.0);
  ck.note("s* = " + format_real(wide.s) + ", asymptote = " + format_real(limit));
  ck.expect(limit >= 0.9401 && limit <= 0.9534, "asymptote inside [0.9401, 0.9534]");
  const auto narrow = bosonic::optimize_interaction_time(1.0, 0.0, 10.0, trunc);
  ck.within("|s* - 7.87| on [0, 10]", narrow.s - 7.87, 0.05);
}

inline void upper_bound(Checker& ck, const AcceptanceOptions&) {
  for (int i = 0; i < 100; ++i) {
    const double b = 0.05 + 0.05 * i;
    const bosonic::DeexcitationSeries g(b, bosonic::FockTruncation::for_rounds(b, 1, 1e-13));
    const double bound = bosonic::upper_bound_G(b);
    for (int j = 0; j < 100; ++j) {
      const double s = 0.5 * j;
      ck.within("excess of G over its bound", std::max(0.0, g(s) - bound), 0.0);
    }
  }
  const double split = bosonic::bound_branch_point();
  ck.within("|branch difference| at the split", bosonic::bound_hot_branch(split) - bosonic::bound_cold_branch(split),
            1e-12);
}

inline void master_equation(Checker& ck, const AcceptanceOptions& o) {
  auto rng = rng_for(o, 9);
  for (double b : {0.5, 1.0, 2.0}) {
    const bosonic::FockTruncation trunc(60, b);
    const auto params = bosonic::CavityParams::from_beta(1.0, 1.0, b, 0.0);
    const auto thermal = bosonic::ModePopulations::thermal(trunc, b);
    const auto kept = bosonic::rethermalize_mode(thermal, params, 10.0 / params.loss_rate);
    double drift = 0.0;
    for (std::size_t n = 0; n <= 60; ++n) drift = std::max(drift, std::abs(kept.t[n] - thermal.t[n]));
    ck.within("thermal drift", drift, 1e-10);

    std::vector<double> target = thermal.t;
    const double z = thermal.total();
    for (auto& x : target) x /= z;
    std::vector<std::vector<double>> starts;
    for (int i = 0; i < 4; ++i) starts.push_back(random_simplex(rng, 61));
    starts.emplace_back(61, 0.0);
    starts.back()[0] = 1.0;
    starts.emplace_back(61, 0.0);
    starts.back()[60] = 1.0;
    for (const auto& start : starts) {
      bosonic::ModePopulations mode = thermal;
      mode.t = start;
      const auto end = bosonic::rethermalize_mode(mode, params, 50.0 / params.loss_rate);
      double tv = 0.0;
      for (std::size_t n = 0; n <= 60; ++n) tv += 0.5 * std::abs(end.t[n] - target[n]);
      ck.within("total variation to thermal", tv, 1e-8);
    }
  }
}

inline void markov(Checker& ck, const AcceptanceOptions&) {
  for (double be : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const auto q1 = EnergySpectrum::qubit(1.0, be);
    const double thermal = thermal_ground(be);
    for (int i = 0; i <= 200; ++i) {
      const double p = (1.0 - thermal) + (2.0 * thermal - 1.0) * i / 200.0;
      ck.within("excess over the thermal ground population",
                std::max(0.0, protocols::markovian_best(p, q1, 10000) - thermal), 1e-12);
    }
  }
}

inline void noise(Checker& ck, const AcceptanceOptions& o) {
  for (double eps : {0.0, 0.01, 0.05, 0.2, 0.5}) {
    for (double be : {0.1, 1.0, 3.0}) {
      for (double p0 : {0.5, 0.7}) {
        const auto tr = protocols::epsilon_noisy_trace(p0, protocols::NoiseSpec(eps, be), EnergySpectrum::qubit(1.0, be), 50);
        for (std::size_t k = 0; k <= 50; ++k) {
          ck.within("|noisy simulation - closed form|", tr.ground[k] - protocols::noisy_cooling_closed_form(p0, eps, be, k),
                    1e-12);
        }
      }
    }
  }
  auto rng = rng_for(o, 11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int applied = 0;
  for (int t = 0; t < 50; ++t) {
    // Above the noisy asymptote the channel can only heat, so the claim is
    // checked on the populations the noisy protocol reaches.
    const double be = 0.1 + 2.9 * u(rng);
    const double threshold = 1.0 - protocols::noise_validity_bound(be);
    const double lambda_max = threshold + (1.0 - threshold) * u(rng);
    const double p = 0.5 + (protocols::noisy_asymptote(1.0 - lambda_max, be) - 0.5) * u(rng);
    const auto scan = protocols::to_determinant_scan(p, lambda_max, be);
    if (!scan.boundary_claim_applies) continue;
    ++applied;
    ck.expect(scan.boundary_claim_holds, "determinant minimiser at (1 - p, lambda_max) for p = " + format_real(p) +
                                             ", beta E = " + format_real(be));
  }
  ck.note(std::to_string(applied) + " scans above the threshold");
}

inline void baseline(Checker& ck, const AcceptanceOptions&) {
  const auto q1 = EnergySpectrum::qubit(1.0, 1.0);
  const PopulationVector thermal = gibbs_state(q1);
  const auto ppa = protocols::ppa_trace(thermal, 2, q1, 400);
  const double fixed = ppa[400].ground;
  const auto ideal = protocols::run_optimal_protocol(thermal, CompositeSpec(q1), 60);
  ck.note("PPA-2 fixed point = " + format_real(fixed) + ", ideal at k = 60 = " + format_real(ideal[60].ground));
  ck.expect(fixed < 1.0 && ideal[60].ground > fixed, "ideal asymptote exceeds the PPA-2 fixed point");
  const auto best = bosonic::optimize_interaction_time(1.0, 0.0, 5000.0, bosonic::FockTruncation(60, 1.0));
  const auto jc = protocols::epsilon_noisy_trace(thermal[0], protocols::NoiseSpec(1.0 - best.deexcitation, 1.0), q1, 10);
  ck.note("k = 10: JC lower bound = " + format_real(jc.ground[10]) + ", PPA-2 = " + format_real(ppa[10].ground));
  ck.expect(jc.ground[10] > ppa[10].ground, "JC lower bound exceeds PPA-2 at k = 10");
}

inline void stream(Checker& ck, const AcceptanceOptions& o) {
  const double b = 1.0;
  const bosonic::FockTruncation trunc(60, b);
  const double t_int = 98.92;
  const double eps = 1.0 - bosonic::jc_deexcitation(t_int, b, trunc);
  const double expected = protocols::noisy_cooling_closed_form(thermal_ground(b), eps, b, 2);
  const auto reset = bosonic::atom_stream_sim(bosonic::CavityParams::from_beta(1.0, 1.0, b, 0.0), 60, t_int, trunc, b);
  for (double p : reset.ground) ck.within("|full relaxation - closed form|", p - expected, 1e-8);

  const std::vector<double> ratios{0.2, 0.5, 1.0, 5.0};
  const std::size_t atoms = 100;
  std::vector<std::vector<double>> runs(ratios.size());
  parallel_for(ratios.size(), o.threads, [&](std::size_t i) {
    const auto params = bosonic::CavityParams::from_beta(1.0, 1.0, b, 1.0 / ratios[i]);
    runs[i] = bosonic::atom_stream_sim(params, atoms, t_int, trunc, b).ground;
  });
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const auto& g = runs[i];
    double spread = 0.0;
    for (std::size_t n = 49; n < atoms; ++n) spread = std::max(spread, std::abs(g[n] - g.back()));
    ck.within("variation after atom 50", spread, 1e-6);
  }
}

struct CriterionSpec {
  int id;
  const char* title;
  double budget;
  void (*run)(Checker&, const AcceptanceOptions&);
};

inline const std::vector<CriterionSpec>& criteria() {
  static const std::vector<CriterionSpec> all{
      {1, "qubit protocol closed form", 1.0, closed_form_qubit},
      {2, "qudit ladder closed form", 1.0, closed_form_ladder},
      {3, "beta-permutation validity", 10.0, polytope},
      {4, "optimal round against the brute-force oracle", 60.0, oracle},
      {5, "mode reuse", 5.0, mode_reuse},
      {6, "JC realisation window", 30.0, jc_window},
      {7, "de-excitation upper bound", 10.0, upper_bound},
      {8, "anharmonic deviation", 1.0, anharmonic},
      {9, "cavity master equation", 10.0, master_equation},
      {10, "Markovian no-go", 1.0, markov},
      {11, "noise robustness", 30.0, noise},
      {12, "baseline separation", 10.0, baseline},
      {13, "two-cavity atom stream", 120.0, stream},
  };
  return all;
}

inline std::vector<std::string> jc_grid_notes(const AcceptanceOptions& o) {
  const std::vector<double> grid{0.5, 1.0, 2.0};
  std::vector<std::string> notes(grid.size());
  parallel_for(grid.size(), o.threads, [&](std::size_t i) {
    const double b = grid[i];
    const auto best = bosonic::optimize_interaction_time(b, 0.0, 5000.0, bosonic::FockTruncation::for_rounds(b, 1));
    notes[i] = "beta E = " + format_real(b) + ": s* = " + format_real(best.s) +
               ", epsilon = " + format_real(1.0 - best.deexcitation);
  });
  return notes;
}

}  // namespace detail

/// Suite names mapped to criterion ids.
inline const std::map<std::string, std::vector<int>>& acceptance_suites() {
  static const std::map<std::string, std::vector<int>> suites{
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}},
      {"closed-forms", {1, 2}},
      {"polytope", {3}},
      {"oracle", {4}},
      {"mode", {5, 8}},
      {"jc", {6, 7}},
      {"master", {9}},
      {"markov", {10}},
      {"noise", {11}},
      {"baseline", {12}},
      {"stream", {13}},
  };
  return suites;
}

inline CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  const auto& all = detail::criteria();
  const auto it = std::find_if(all.begin(), all.end(), [id](const auto& c) { return c.id == id; });
  if (it == all.end()) throw ConfigError("unknown criterion " + std::to_string(id));
  CriterionResult r{it->id, it->title, false, "", 0.0, it->budget};
  detail::Checker ck;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->run(ck, options);
  } catch (const std::exception& e) {
    ck.expect(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ck.expect(r.seconds < r.budget, "runtime budget");
  r.passed = ck.ok();
  r.detail = ck.summary();
  return r;
}

inline AcceptanceReport run_acceptance(const std::string& suite, const AcceptanceOptions& options = {}) {
  const auto& suites = acceptance_suites();
  const auto it = suites.find(suite);
  if (it == suites.end()) throw ConfigError("unknown suite '" + suite + "'");
  AcceptanceReport report;
  report.suite = suite;
  for (int id : it->second) report.criteria.push_back(run_criterion(id, options));
  if (suite == "jc") report.notes = detail::jc_grid_notes(options);
  return report;
}

}  // namespace xhbac::experiments
