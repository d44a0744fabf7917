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


// Figure configuration: per-figure defaults, JSON loading with strict key
// checking, and an echo that reproduces the run when loaded again.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhbac/core/tolerance.hpp"
#include "xhbac/experiments/result_table.hpp"

namespace xhbac::experiments {

/// Raised for malformed or inconsistent configuration; maps to a usage error.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig3", "fig5", "fig7", "fig8", "fig9"};
  return ids;
}

struct ExperimentConfig {
  std::string experiment;
  double beta_gap = 1.0;
  std::size_t n_max = 60;
  std::uint64_t seed = 0;
  double tol = default_tolerance().relative;  // bound on neglected Fock weight
  unsigned threads = 1;

  std::size_t rounds = 30;
  std::size_t atoms = 100;
  std::size_t ppa_ancillas = 2;
  double coupling = 1.0;           // g
  double interaction_time = 98.92; // t, so s = g t
  double s_max = 5000.0;           // interaction-time search window [0, s_max]
  double s_step = 1e-3;
  std::vector<double> timing_errors{0.1, 0.2, 0.3};
  double loss_rate = 1.0;          // A
  std::vector<double> ratios{0.2, 0.5, 1.0, 5.0, std::numeric_limits<double>::infinity()};  // A/r
  std::vector<double> rethermalization_times{0.0, 0.25, 0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};
  std::string out;                 // not part of the echo

  /// Keys meaningful for this experiment, in echo order.
  std::vector<std::string> keys() const {
    std::vector<std::string> k{"experiment", "beta_gap", "n_max", "seed", "tol", "threads"};
    auto add = [&k](std::initializer_list<const char*> more) { k.insert(k.end(), more.begin(), more.end()); };
    if (experiment == "fig3") add({"rounds", "s_max", "s_step", "ppa_ancillas"});
    if (experiment == "fig5") add({"atoms", "coupling", "interaction_time", "loss_rate", "ratios"});
    if (experiment == "fig7") add({"rounds", "s_max", "s_step", "timing_errors", "ppa_ancillas"});
    if (experiment == "fig8") add({"rounds", "coupling", "interaction_time", "loss_rate", "rethermalization_times"});
    if (experiment == "fig9") add({"atoms", "coupling", "interaction_time", "loss_rate", "rethermalization_times"});
    return k;
  }

  /// Defaults for a figure id.
  static ExperimentConfig defaults_for(const std::string& id) {
    if (std::find(figure_ids().begin(), figure_ids().end(), id) == figure_ids().end()) {
      throw ConfigError("unknown experiment '" + id + "'");
    }
    ExperimentConfig c;
    c.experiment = id;
    if (id == "fig7") {
      c.s_max = 10.0;
      c.rounds = 20;
    }
    if (id == "fig5" || id == "fig9") c.atoms = 60;
    return c;
  }

  void validate() const {
    auto positive = [](double v, const char* what) {
      if (!(v > 0.0) || std::isnan(v)) throw ConfigError(std::string(what) + " must be positive");
    };
    auto non_negative = [](double v, const char* what) {
      if (!(v >= 0.0)) throw ConfigError(std::string(what) + " must be non-negative");
    };
    positive(beta_gap, "beta_gap");
    if (std::isinf(beta_gap)) throw ConfigError("beta_gap must be finite");
    if (n_max < 2) throw ConfigError("n_max must be at least 2");
    if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    positive(coupling, "coupling");
    non_negative(interaction_time, "interaction_time");
    positive(s_max, "s_max");
    positive(s_step, "s_step");
    non_negative(loss_rate, "loss_rate");
    if (ppa_ancillas > 3) throw ConfigError("ppa_ancillas must be at most 3");
    for (double e : timing_errors) non_negative(e, "timing_errors entries");
    for (double r : ratios) non_negative(r, "ratios entries");
    for (double t : rethermalization_times) non_negative(t, "rethermalization_times entries");
    if (atoms < 1) throw ConfigError("atoms must be at least 1");
  }
};

namespace detail {

inline double real_from_json(const Json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
  }
  throw ConfigError("'" + key + "' must be a number or \"inf\"");
}

inline Json real_to_json(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

template <class Int>
Int count_from_json(const Json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("'" + key + "' must be a non-negative integer");
  return static_cast<Int>(v.get<long long>());
}

inline std::vector<double> reals_from_json(const Json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(real_from_json(x, key));
  return out;
}

inline Json reals_to_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real_to_json(x));
  return a;
}

}  // namespace detail

/// Applies the keys of `j` on top of `base`. Keys outside the schema, or not
/// used by the selected experiment, are rejected.
inline ExperimentConfig apply_json(ExperimentConfig base, const Json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("'experiment' must be a string");
    const auto id = j["experiment"].get<std::string>();
    if (!base.experiment.empty() && id != base.experiment) {
      throw ConfigError("configuration is for '" + id + "' but '" + base.experiment + "' was requested");
    }
    const ExperimentConfig defaults = ExperimentConfig::defaults_for(id);
    if (base.experiment.empty()) base = defaults;
  }
  const auto allowed_list = base.keys();
  const std::set<std::string> allowed(allowed_list.begin(), allowed_list.end());
  using detail::count_from_json;
  using detail::real_from_json;
  using detail::reals_from_json;
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") continue;
    if (key == "out") {
      if (!v.is_string()) throw ConfigError("'out' must be a string");
      base.out = v.get<std::string>();
      continue;
    }
    if (!allowed.count(key)) {
      throw ConfigError("unknown configuration key '" + key + "'" +
                        (base.experiment.empty() ? "" : " for " + base.experiment));
    }
    if (key == "beta_gap") base.beta_gap = real_from_json(v, key);
    else if (key == "n_max") base.n_max = count_from_json<std::size_t>(v, key);
    else if (key == "seed") base.seed = count_from_json<std::uint64_t>(v, key);
    else if (key == "tol") base.tol = real_from_json(v, key);
    else if (key == "threads") base.threads = count_from_json<unsigned>(v, key);
    else if (key == "rounds") base.rounds = count_from_json<std::size_t>(v, key);
    else if (key == "atoms") base.atoms = count_from_json<std::size_t>(v, key);
    else if (key == "ppa_ancillas") base.ppa_ancillas = count_from_json<std::size_t>(v, key);
    else if (key == "coupling") base.coupling = real_from_json(v, key);
    else if (key == "interaction_time") base.interaction_time = real_from_json(v, key);
    else if (key == "s_max") base.s_max = real_from_json(v, key);
    else if (key == "s_step") base.s_step = real_from_json(v, key);
    else if (key == "timing_errors") base.timing_errors = reals_from_json(v, key);
    else if (key == "loss_rate") base.loss_rate = real_from_json(v, key);
    else if (key == "ratios") base.ratios = reals_from_json(v, key);
    else if (key == "rethermalization_times") base.rethermalization_times = reals_from_json(v, key);
  }
  return base;
}

/// The configuration as JSON, restricted to the keys this experiment uses.
inline Json to_json(const ExperimentConfig& c) {
  using detail::real_to_json;
  using detail::reals_to_json;
  Json j = Json::object();
  for (const auto& key : c.keys()) {
    if (key == "experiment") j[key] = c.experiment;
    else if (key == "beta_gap") j[key] = real_to_json(c.beta_gap);
    else if (key == "n_max") j[key] = c.n_max;
    else if (key == "seed") j[key] = c.seed;
    else if (key == "tol") j[key] = real_to_json(c.tol);
    else if (key == "threads") j[key] = c.threads;
    else if (key == "rounds") j[key] = c.rounds;
    else if (key == "atoms") j[key] = c.atoms;
    else if (key == "ppa_ancillas") j[key] = c.ppa_ancillas;
    else if (key == "coupling") j[key] = real_to_json(c.coupling);
    else if (key == "interaction_time") j[key] = real_to_json(c.interaction_time);
    else if (key == "s_max") j[key] = real_to_json(c.s_max);
    else if (key == "s_step") j[key] = real_to_json(c.s_step);
    else if (key == "timing_errors") j[key] = reals_to_json(c.timing_errors);
    else if (key == "loss_rate") j[key] = real_to_json(c.loss_rate);
    else if (key == "ratios") j[key] = reals_to_json(c.ratios);
    else if (key == "rethermalization_times") j[key] = reals_to_json(c.rethermalization_times);
  }
  return j;
}

/// Accepts either a bare configuration object or a metadata object holding
/// the echo under "config".
inline Json unwrap_config(const Json& j) {
  if (j.is_object() && j.contains("config") && j.contains("tool")) return j["config"];
  return j;
}

/// Reads a configuration file. A previous result file works too: its leading
/// '#' metadata line carries the configuration echo.
inline Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (!text.empty() && text.front() == '#') text = text.substr(1, text.find('\n') - 1);
  try {
    return unwrap_config(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw ConfigError("configuration file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace xhbac::experiments
