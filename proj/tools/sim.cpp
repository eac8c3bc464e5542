// SPDX-License-Identifier: Apache-2.0
//
// riscf: RIS-assisted cell-free massive MIMO uplink simulator
// Copyright (C) 2026 The riscf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "riscf/experiments.hpp"
#include "riscf/phase.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("--ptilde-grid is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted cell-free massive MIMO uplink experiments"};
  app.set_help_all_flag("--help-all");

  std::string experiment;
  std::string config;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t draws = 0;
  std::string phase;
  std::string correlation;
  std::string grid;
  double tolerance = 0.03;
  bool force = false;
  bool dump = false;

  app.add_option("experiment", experiment,
                 "validate | sweep-ptilde | cdf | phase-compare | asymptotic")
      ->required()
      ->check(CLI::IsMember({"validate", "sweep-ptilde", "cdf", "phase-compare", "asymptotic"}));
  app.add_option("--config", config, "scenario JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--trials", trials, "Monte-Carlo trial count override");
  app.add_option("--draws", draws, "scenario draws override");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--phase", phase, "equal:<radians> | random:<seed> | file:<path>");
  app.add_option("--correlation", correlation, "correlated | independent")
      ->check(CLI::IsMember({"correlated", "independent"}));
  app.add_option("--ptilde-grid", grid, "comma-separated unblocked probabilities");
  app.add_option("--tolerance", tolerance, "validate: max relative SINR gap")->capture_default_str();
  app.add_flag("--force", force, "run even if the last validate failed");
  app.add_flag("--dump", dump, "validate: also dump R and estimator statistics as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    riscf::ExperimentSpec spec;
    spec.kind = riscf::parse_experiment_kind(experiment);
    spec.config_path = config;
    spec.out_dir = out_dir;
    if (app.count("--seed")) spec.seed = seed;
    if (app.count("--trials")) spec.trials = trials;
    if (app.count("--draws")) spec.draws = draws;
    if (app.count("--phase")) spec.phase = phase;
    if (app.count("--correlation")) {
      spec.correlation = correlation == "correlated" ? riscf::CorrelationKind::correlated
                                                     : riscf::CorrelationKind::independent;
    }
    if (app.count("--ptilde-grid")) spec.p_tilde_grid = parse_grid(grid);
    spec.tolerance = tolerance;
    spec.force = force;
    spec.dump = dump;

    const riscf::ExperimentOutcome outcome = riscf::run_experiment(spec);
    for (const auto& p : outcome.outputs) std::cout << "wrote " << p.string() << '\n';
    if (!outcome.message.empty()) {
      (outcome.exit_code == 0 ? std::cout : std::cerr) << experiment << ": " << outcome.message << '\n';
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
