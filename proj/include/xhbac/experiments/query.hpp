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


// Single-shot evaluation of library operations, printed as one-row tables.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xhbac/bosonic/jaynes_cummings.hpp"
#include "xhbac/bosonic/mode_reuse.hpp"
#include "xhbac/core/gibbs_matrix.hpp"
#include "xhbac/core/thermo_majorization.hpp"
#include "xhbac/experiments/config.hpp"
#include "xhbac/experiments/result_table.hpp"
#include "xhbac/protocols/optimal.hpp"
#include "xhbac/protocols/ppa.hpp"
#include "xhbac/protocols/qubit.hpp"

namespace xhbac::experiments {

/// "--name value" pairs. Every supplied argument must be consumed by the
/// operation; leftovers are reported as unknown.
class QueryArgs {
 public:
  static QueryArgs parse(const std::vector<std::string>& tokens) {
    QueryArgs args;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& t = tokens[i];
      if (t.rfind("--", 0) != 0 || t.size() == 2) throw ConfigError("expected --name, got '" + t + "'");
      std::string name = t.substr(2);
      std::string value;
      if (const auto eq = name.find('='); eq != std::string::npos) {
        value = name.substr(eq + 1);
        name = name.substr(0, eq);
      } else {
        if (i + 1 >= tokens.size()) throw ConfigError("missing value for --" + name);
        value = tokens[++i];
      }
      if (!args.values_.emplace(name, value).second) throw ConfigError("duplicate argument --" + name);
    }
    return args;
  }

  bool has(const std::string& name) const { return values_.count(name) != 0; }

  const std::string& text(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end()) throw ConfigError("missing argument --" + name);
    used_.insert(name);
    return it->second;
  }

  double real(const std::string& name) const { return parse_real(text(name), name); }

  double real_or(const std::string& name, double fallback) const { return has(name) ? real(name) : fallback; }

  std::size_t count(const std::string& name) const {
    const std::string& s = text(name);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') throw ConfigError("--" + name + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::size_t count_or(const std::string& name, std::size_t fallback) const {
    return has(name) ? count(name) : fallback;
  }

  std::vector<double> reals(const std::string& name) const {
    std::vector<double> out;
    std::stringstream ss(text(name));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item, name));
    if (out.empty()) throw ConfigError("--" + name + " is empty");
    return out;
  }

  std::vector<std::size_t> counts(const std::string& name) const {
    std::vector<std::size_t> out;
    for (double v : reals(name)) {
      if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("--" + name + " must list non-negative integers");
      out.push_back(static_cast<std::size_t>(v));
    }
    return out;
  }

  void require_all_used() const {
    for (const auto& [name, value] : values_) {
      if (!used_.count(name)) throw ConfigError("unknown argument --" + name);
    }
  }

  Json echo() const {
    Json j = Json::object();
    for (const auto& [name, value] : values_) j[name] = value;
    return j;
  }

 private:
  static double parse_real(const std::string& s, const std::string& name) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("--" + name + ": '" + s + "' is not a number");
    return v;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

struct QueryContext {
  std::size_t n_max = 60;
  double tol = default_tolerance().relative;
};

namespace detail {

inline EnergySpectrum query_spectrum(const QueryArgs& a) {
  if (a.has("betaE")) {
    return EnergySpectrum::qubit(1.0, a.real("betaE"));
  }
  return EnergySpectrum(a.reals("E"), a.real("beta"));
}

inline double query_beta_gap(const QueryArgs& a) { return a.real("betaE"); }

inline bosonic::FockTruncation query_truncation(const QueryContext& ctx, double beta_gap) {
  const bosonic::FockTruncation t(ctx.n_max, beta_gap);
  if (t.tail_bound > ctx.tol) {
    throw ConfigError("infeasible truncation: tail " + format_real(t.tail_bound) + " above tol " + format_real(ctx.tol));
  }
  return t;
}

inline std::string pair_text(std::size_t i, std::size_t a) {
  return "(" + std::to_string(i) + "," + std::to_string(a) + ")";
}

// One row whose columns are prefix0, prefix1, ...
inline ResultTable vector_row(const std::string& prefix, const std::vector<double>& values) {
  std::vector<std::string> cols;
  std::vector<Cell> row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    cols.push_back(prefix + std::to_string(i));
    row.emplace_back(values[i]);
  }
  ResultTable t(cols);
  t.add_row(std::move(row));
  return t;
}

inline ResultTable named_row(const std::vector<std::pair<std::string, Cell>>& fields) {
  std::vector<std::string> cols;
  std::vector<Cell> row;
  for (const auto& [name, value] : fields) {
    cols.push_back(name);
    row.push_back(value);
  }
  ResultTable t(cols);
  t.add_row(std::move(row));
  return t;
}

// Entries G_{j|i} as g<j><i>, row by row.
inline ResultTable matrix_row(const Eigen::MatrixXd& m) {
  std::vector<std::string> cols;
  std::vector<Cell> row;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
      cols.push_back("g" + std::to_string(j) + "_" + std::to_string(i));
      row.emplace_back(m(j, i));
    }
  }
  ResultTable t(cols);
  t.add_row(std::move(row));
  return t;
}

inline std::vector<double> as_vector(const PopulationVector& p) { return {p.begin(), p.end()}; }

inline CompositeSpec query_composite(const QueryArgs& a) {
  const EnergySpectrum system = query_spectrum(a);
  if (!a.has("ancilla")) return CompositeSpec(system);
  return CompositeSpec(system, EnergySpectrum(a.reals("ancilla"), system.beta()));
}

struct QueryOp {
  const char* usage;
  std::function<ResultTable(const QueryArgs&, const QueryContext&)> run;
};

inline const std::map<std::string, QueryOp>& query_ops() {
  using A = const QueryArgs&;
  using C = const QueryContext&;
  static const std::map<std::string, QueryOp> ops{
      {"gibbs", {"--E levels --beta b | --betaE x", [](A a, C) { return vector_row("p", as_vector(gibbs_state(query_spectrum(a)))); }}},
      {"beta-order",
       {"--p pops (--E levels --beta b | --betaE x)",
        [](A a, C) {
          const PopulationVector p(a.reals("p"));
          const auto order = beta_order(p, query_spectrum(a));
          std::vector<double> v(order.values().begin(), order.values().end());
          return vector_row("pos", v);
        }}},
      {"thermo-majorizes",
       {"--p pops --q pops (--E levels --beta b | --betaE x)",
        [](A a, C ctx) {
          const PopulationVector p(a.reals("p"));
          const PopulationVector q(a.reals("q"));
          const bool r = thermo_majorizes(p, q, query_spectrum(a), Tolerance{ctx.tol, 1e-12});
          return named_row({{"majorizes", static_cast<std::int64_t>(r)}});
        }}},
      {"curve-height",
       {"--p pops --x position (--E levels --beta b | --betaE x)",
        [](A a, C) {
          const auto c = thermo_curve(PopulationVector(a.reals("p")), query_spectrum(a));
          return named_row({{"height", curve_height(c, a.real("x"))}});
        }}},
      {"maximally-active",
       {"--p eigenvalues (--E levels --beta b | --betaE x)",
        [](A a, C) { return vector_row("p", as_vector(maximally_active(PopulationVector(a.reals("p")), query_spectrum(a)))); }}},
      {"beta-swap-matrix",
       {"--betaE x | --E levels --beta b [--i i --j j]",
        [](A a, C) {
          const auto sp = query_spectrum(a);
          return matrix_row(protocols::beta_swap_matrix(a.count_or("i", 0), a.count_or("j", 1), sp).entries());
        }}},
      {"beta-permutation",
       {"--pi order --alpha order (--E levels --beta b | --betaE x)",
        [](A a, C) {
          const auto sp = query_spectrum(a);
          return matrix_row(beta_permutation(BetaOrder(a.counts("pi")), BetaOrder(a.counts("alpha")), sp).entries());
        }}},
      {"extremal-count",
       {"--p pops (--E levels --beta b | --betaE x)",
        [](A a, C) {
          const auto e = extremal_points(PopulationVector(a.reals("p")), query_spectrum(a));
          return named_row({{"candidates", static_cast<std::int64_t>(e.candidate_count)},
                            {"distinct", static_cast<std::int64_t>(e.distinct_count)}});
        }}},
      {"alpha-opt",
       {"--d d --r r",
        [](A a, C) {
          const std::size_t r = a.count("r");
          const auto alpha = protocols::beta_opt_alpha(a.count("d"), r);
          std::vector<std::string> cols;
          std::vector<Cell> row;
          for (std::size_t k = 0; k < alpha.size(); ++k) {
            cols.push_back("pos" + std::to_string(k));
            row.emplace_back(pair_text(alpha[k] / r, alpha[k] % r));
          }
          ResultTable t(cols);
          t.add_row(std::move(row));
          return t;
        }}},
      {"optimal-round",
       {"--p pops (--E levels --beta b | --betaE x) [--ancilla levels]",
        [](A a, C) { return vector_row("p", as_vector(protocols::optimal_round(PopulationVector(a.reals("p")), query_composite(a)))); }}},
      {"optimal-protocol",
       {"--p pops --k rounds (--E levels --beta b | --betaE x) [--ancilla levels]",
        [](A a, C) {
          const auto trace = protocols::run_optimal_protocol(PopulationVector(a.reals("p")), query_composite(a), a.count("k"));
          return vector_row("p", as_vector(trace[trace.size() - 1].populations));
        }}},
      {"ladder-protocol",
       {"--p pops --k rounds --E levels --beta b",
        [](A a, C) {
          const auto trace = protocols::run_ladder_protocol(PopulationVector(a.reals("p")), query_spectrum(a), a.count("k"));
          return vector_row("p", as_vector(trace[trace.size() - 1].populations));
        }}},
      {"qubit-closed-form",
       {"--p0 p --betaE x --k rounds",
        [](A a, C) { return named_row({{"p0", protocols::qubit_cooling_closed_form(a.real("p0"), query_beta_gap(a), a.count("k"))}}); }}},
      {"noisy-closed-form",
       {"--p0 p --eps e --betaE x --k rounds",
        [](A a, C) {
          return named_row({{"p0", protocols::noisy_cooling_closed_form(a.real("p0"), a.real("eps"), query_beta_gap(a), a.count("k"))}});
        }}},
      {"noisy-asymptote",
       {"--eps e --betaE x",
        [](A a, C) {
          const double b = query_beta_gap(a);
          return named_row({{"p0", protocols::noisy_asymptote(a.real("eps"), b)},
                            {"eps_bound", protocols::noise_validity_bound(b)}});
        }}},
      {"determinant-scan",
       {"--p p --lambda-max l --betaE x",
        [](A a, C) {
          const auto s = protocols::to_determinant_scan(a.real("p"), a.real("lambda-max"), query_beta_gap(a));
          return named_row({{"q", s.q},
                            {"lambda", s.lambda},
                            {"value", s.value},
                            {"claim_applies", static_cast<std::int64_t>(s.boundary_claim_applies)},
                            {"claim_holds", static_cast<std::int64_t>(s.boundary_claim_holds)}});
        }}},
      {"markov-best",
       {"--p p --betaE x [--grid n]",
        [](A a, C) {
          return named_row({{"p0", protocols::markovian_best(a.real("p"), query_spectrum(a), a.count_or("grid", 10000))}});
        }}},
      {"ppa",
       {"--p0 p --betaE x --ancillas n --k rounds",
        [](A a, C) {
          const double p0 = a.real("p0");
          const auto trace =
              protocols::ppa_trace(PopulationVector{p0, 1.0 - p0}, a.count("ancillas"), query_spectrum(a), a.count("k"));
          return named_row({{"p0", trace[trace.size() - 1].ground}});
        }}},
      {"jc-deexcitation",
       {"--s s --betaE x",
        [](A a, C ctx) {
          const double b = query_beta_gap(a);
          return named_row({{"G", bosonic::jc_deexcitation(a.real("s"), b, query_truncation(ctx, b))}});
        }}},
      {"optimize-s",
       {"--betaE x --s-max s [--s-min s] [--step h]",
        [](A a, C ctx) {
          const double b = query_beta_gap(a);
          const auto best = bosonic::optimize_interaction_time(b, a.real_or("s-min", 0.0), a.real("s-max"),
                                                               query_truncation(ctx, b), a.real_or("step", 1e-3));
          return named_row({{"s_star", best.s},
                            {"G", best.deexcitation},
                            {"epsilon", 1.0 - best.deexcitation},
                            {"asymptote", protocols::noisy_asymptote(1.0 - best.deexcitation, b)}});
        }}},
      {"upper-bound-G",
       {"--betaE x",
        [](A a, C) {
          const double b = query_beta_gap(a);
          return named_row({{"G", bosonic::upper_bound_G(b)}, {"asymptote", bosonic::asymptotic_upper_bound(b)}});
        }}},
      {"mode-reuse",
       {"--p0 p --betaE x --k rounds",
        [](A a, C ctx) {
          const double b = query_beta_gap(a);
          const auto trace = bosonic::reuse_protocol_trace(a.real("p0"), query_truncation(ctx, b), b, a.count("k"));
          return named_row({{"p0", trace.ground.back()}, {"tail_bound", trace.tail_bound}});
        }}},
      {"anharmonic-deviation",
       {"--tau t --betaE x",
        [](A a, C ctx) {
          const double b = query_beta_gap(a);
          const auto dev = bosonic::anharmonic_peak_deviation(a.real("tau"), query_truncation(ctx, b), b);
          return named_row({{"peak", dev.peak}, {"at_k", static_cast<std::int64_t>(dev.at_k)}});
        }}},
  };
  return ops;
}

}  // namespace detail

inline std::vector<std::string> query_names() {
  std::vector<std::string> names;
  for (const auto& [name, op] : detail::query_ops()) names.push_back(name);
  return names;
}

inline std::string query_usage(const std::string& op) {
  const auto& ops = detail::query_ops();
  const auto it = ops.find(op);
  if (it == ops.end()) throw ConfigError("unknown query '" + op + "'");
  return op + " " + it->second.usage;
}

/// Evaluates one operation. Usage problems raise ConfigError.
inline ResultTable run_query(const std::string& op, const QueryArgs& args, const QueryContext& ctx = {}) {
  const auto& ops = detail::query_ops();
  const auto it = ops.find(op);
  if (it == ops.end()) throw ConfigError("unknown query '" + op + "'");
  ResultTable table = it->second.run(args, ctx);
  args.require_all_used();
  table.metadata()["query"] = op;
  table.metadata()["args"] = args.echo();
  return table;
}

}  // namespace xhbac::experiments
