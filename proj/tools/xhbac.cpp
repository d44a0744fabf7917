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


// Command-line front end.
//
//   xhbac figure <id> [--config path] [--out path]
//   xhbac accept <suite> [--inject-fault name]
//   xhbac query <op> [--name value ...]
//
// Global flags: --nmax, --tol, --seed, --threads. Exit status is 0 on
// success, 1 when an invariant or acceptance criterion fails, and 2 for
// usage errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "xhbac/experiments/acceptance.hpp"
#include "xhbac/experiments/figures.hpp"
#include "xhbac/experiments/query.hpp"

namespace {

namespace ex = xhbac::experiments;

constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  std::optional<std::size_t> n_max;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

void write_table(const ex::ResultTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ex::ConfigError("cannot write '" + path + "'");
  table.write(out);
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

int run_figure(const std::string& id, const std::string& config_path, const std::string& out_path,
               const GlobalFlags& flags) {
  ex::ExperimentConfig config = ex::ExperimentConfig::defaults_for(id);
  if (!config_path.empty()) config = ex::apply_json(config, ex::read_config_file(config_path));
  if (flags.n_max) config.n_max = *flags.n_max;
  if (flags.tol) config.tol = *flags.tol;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.threads) config.threads = *flags.threads;
  if (!out_path.empty()) config.out = out_path;
  write_table(ex::run_figure(config), config.out);
  return 0;
}

int run_accept(const std::string& suite, const std::string& fault, const GlobalFlags& flags) {
  ex::AcceptanceOptions options;
  options.fault = ex::parse_fault(fault);
  if (flags.seed) options.seed = *flags.seed;
  if (flags.threads) options.threads = *flags.threads;
  const auto report = ex::run_acceptance(suite, options);
  std::cout << report.lines();
  return report.passed() ? 0 : kExitInvariant;
}

int run_query(const std::string& op, const std::vector<std::string>& tokens, const GlobalFlags& flags) {
  if (op == "list" && tokens.empty()) {
    for (const auto& name : ex::query_names()) std::cout << ex::query_usage(name) << '\n';
    return 0;
  }
  ex::QueryContext ctx;
  if (flags.n_max) ctx.n_max = *flags.n_max;
  if (flags.tol) ctx.tol = *flags.tol;
  write_table(ex::run_query(op, ex::QueryArgs::parse(tokens), ctx), "");
  return 0;
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string query_help(const std::string& op) {
  try {
    return "usage: xhbac query " + ex::query_usage(op);
  } catch (const ex::ConfigError&) {
    return "known queries: " + joined(ex::query_names());
  }
}

// Global flags may also follow the query name; the rest belongs to the query.
std::vector<std::string> split_global_flags(const std::vector<std::string>& rest, GlobalFlags& flags) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& name = rest[i];
    if (name != "--nmax" && name != "--tol" && name != "--seed" && name != "--threads") {
      tokens.push_back(name);
      continue;
    }
    if (i + 1 >= rest.size()) throw ex::ConfigError(name + " needs a value");
    const std::string& v = rest[++i];
    std::size_t used = 0;
    try {
      if (name == "--nmax") flags.n_max = std::stoul(v, &used);
      else if (name == "--tol") flags.tol = std::stod(v, &used);
      else if (name == "--seed") flags.seed = std::stoull(v, &used);
      else flags.threads = static_cast<unsigned>(std::stoul(v, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) throw ex::ConfigError(name + ": invalid value '" + v + "'");
  }
  return tokens;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-bath algorithmic cooling toolkit"};
  app.require_subcommand(1);

  GlobalFlags flags;
  auto add_globals = [&flags](CLI::App* cmd) {
    cmd->add_option("--nmax", flags.n_max, "Fock cutoff n_max")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", flags.tol, "tolerance on neglected weight (default from XHBAC_TOL)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  add_globals(&app);

  std::string figure_id;
  std::string config_path;
  std::string out_path;
  auto* figure = app.add_subcommand("figure", "tabulate the data behind a figure");
  figure->add_option("id", figure_id, "one of " + joined(ex::figure_ids()))->required();
  figure->add_option("--config", config_path, "JSON configuration, or a previous result file");
  figure->add_option("--out", out_path, "output path (default stdout)");
  add_globals(figure);

  std::string suite;
  std::string fault;
  auto* accept = app.add_subcommand("accept", "run an acceptance suite");
  std::vector<std::string> suite_names;
  for (const auto& [name, ids] : ex::acceptance_suites()) suite_names.push_back(name);
  accept->add_option("suite", suite, "one of " + joined(suite_names))->required();
  accept->add_option("--inject-fault", fault, "deliberate defect: beta-swap-sign");
  add_globals(accept);

  std::string op;
  auto* query = app.add_subcommand("query", "evaluate one library operation");
  query->add_option("op", op, "one of " + joined(ex::query_names()))->required();
  query->prefix_command();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*figure) return run_figure(figure_id, config_path, out_path, flags);
    if (*accept) return run_accept(suite, fault, flags);
    return run_query(op, split_global_flags(query->remaining(), flags), flags);
  } catch (const std::logic_error& e) {
    // Bad arguments, unknown ids, unusable configurations.
    std::cerr << "xhbac: " << e.what() << '\n';
    if (*query) std::cerr << query_help(op) << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "xhbac: " << e.what() << '\n';
    return kExitInvariant;
  }
}
