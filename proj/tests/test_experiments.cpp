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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "riscf/experiments.hpp"
#include "riscf/phase.hpp"
#include "riscf/scenario.hpp"

using namespace riscf;
namespace fs = std::filesystem;

namespace {

// Small enough for sub-second runs, large enough to exercise every code path.
const char* kTinyConfig = R"({
  "aps": 8, "users": 3, "ris_elements_h": 2, "ris_elements_v": 2,
  "tau_c": 200, "tau_p": 2, "p_tilde": 0.5, "ris_gain_db": 70,
  "master_seed": 31, "trials": 20000, "scenario_draws": 6,
  "p_tilde_grid": [0, 0.5, 1],
  "asymptotic_aps": [4, 8], "asymptotic_ris_side": [1, 2],
  "asymptotic_trials": 1000, "asymptotic_draws": 2
})";

struct Workspace {
  fs::path dir;
  fs::path config;
  explicit Workspace(const std::string& name) {
    dir = fs::temp_directory_path() / ("riscf_exp_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    config = dir / "tiny.json";
    std::ofstream(config) << kTinyConfig;
  }
  ~Workspace() { fs::remove_all(dir); }
  ExperimentSpec spec(ExperimentKind kind, const std::string& out) const {
    ExperimentSpec s;
    s.kind = kind;
    s.config_path = config;
    s.out_dir = dir / out;
    return s;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RISCF_SIM_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("experiment names round trip") {
  for (auto k : {ExperimentKind::validate, ExperimentKind::sweep_ptilde, ExperimentKind::cdf,
                 ExperimentKind::phase_compare, ExperimentKind::asymptotic}) {
    CHECK(parse_experiment_kind(experiment_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_experiment_kind("render"), std::invalid_argument);
}

TEST_CASE("validate: schema, pass marker, byte-identical reruns") {
  const Workspace ws("validate");
  auto spec = ws.spec(ExperimentKind::validate, "a");
  spec.dump = true;
  // Few trials here; the 0.03 gate at full trial counts runs in the acceptance suite.
  spec.tolerance = 0.15;
  const auto out = run_experiment(spec);
  CHECK(out.exit_code == 0);
  const auto rows = lines(spec.out_dir / "validate.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "k,sinr_closed,rate_closed_mbps,sinr_mc,sinr_mc_stderr,rate_mc_mbps,rel_gap");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 7);
    CHECK(std::stoul(f[0]) == i);
    const double closed = std::stod(f[1]), mc = std::stod(f[3]), se = std::stod(f[4]);
    CHECK(std::abs(closed - mc) <= 3.0 * se);
    CHECK(std::stod(f[6]) == doctest::Approx(std::abs(closed - mc) / mc).epsilon(1e-9));
  }
  CHECK(slurp(spec.out_dir / "validate.status") == "pass\n");
  CHECK(lines(spec.out_dir / "correlation_matrix.csv").size() == 4);
  CHECK(lines(spec.out_dir / "estimation_stats.csv")[0] == "m,k,c,gamma,err_var,nmse");
  CHECK(lines(spec.out_dir / "estimation_stats.csv").size() == 1 + 8 * 3);

  const auto manifest = nlohmann::json::parse(slurp(spec.out_dir / "validate.manifest.json"));
  CHECK(manifest["experiment"] == "validate");
  CHECK(manifest["master_seed"] == 31);
  CHECK(manifest["config_fnv1a64"].get<std::string>().size() == 16);
  CHECK(manifest.contains("versions"));

  auto again = ws.spec(ExperimentKind::validate, "b");
  again.dump = true;
  again.tolerance = spec.tolerance;
  run_experiment(again);
  for (const char* f : {"validate.csv", "validate.manifest.json", "estimation_stats.csv"}) {
    CHECK(slurp(spec.out_dir / f) == slurp(again.out_dir / f));
  }
}

TEST_CASE("validate: too few trials fails the gate") {
  const Workspace ws("gate");
  auto spec = ws.spec(ExperimentKind::validate, "out");
  spec.trials = 10;
  const auto out = run_experiment(spec);
  CHECK(out.exit_code == 2);
  CHECK(out.message.find("stderr too large") != std::string::npos);
  CHECK(slurp(spec.out_dir / "validate.status") == "fail\n");

  auto sweep = ws.spec(ExperimentKind::sweep_ptilde, "out");
  CHECK_THROWS_AS(run_experiment(sweep), GateError);
  sweep.force = true;
  CHECK(run_experiment(sweep).exit_code == 0);
}

TEST_CASE("validate: tight tolerance is a breach") {
  const Workspace ws("breach");
  auto spec = ws.spec(ExperimentKind::validate, "out");
  spec.tolerance = 1e-9;
  const auto out = run_experiment(spec);
  CHECK(out.exit_code == 2);
  CHECK(out.message.find("worst user k=") != std::string::npos);
}

TEST_CASE("sweep-ptilde: schema and trends") {
  const Workspace ws("sweep");
  const auto spec = ws.spec(ExperimentKind::sweep_ptilde, "out");
  run_experiment(spec);
  const auto rows = lines(spec.out_dir / "sweep-ptilde.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "p_tilde,ris_cellfree,cellfree,ris_cellfree_nolos");
  double nolos = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 4);
    const double ris = std::stod(f[1]), cf = std::stod(f[2]), nl = std::stod(f[3]);
    CHECK(ris >= cf);
    if (i == 1) CHECK(cf == 0.0);
    if (nolos < 0.0) nolos = nl;
    CHECK(nl == nolos);
  }
}

TEST_CASE("cdf: schema, sorted samples, ordinates to one") {
  const Workspace ws("cdf");
  auto spec = ws.spec(ExperimentKind::cdf, "out");
  spec.draws = 100;
  run_experiment(spec);
  const auto rows = lines(spec.out_dir / "cdf.csv");
  CHECK(rows[0] == "system,rank,sum_rate_mbps,cdf");
  REQUIRE(rows.size() == 1 + 3 * 100);
  std::string system;
  double prev_rate = 0.0, prev_cdf = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 4);
    if (f[0] != system) {
      system = f[0];
      prev_rate = -1.0;
      prev_cdf = 0.0;
    }
    const double rate = std::stod(f[2]), c = std::stod(f[3]);
    CHECK(rate >= prev_rate);
    CHECK(c > prev_cdf);
    prev_rate = rate;
    prev_cdf = c;
    if (std::stoul(f[1]) == 100) CHECK(c == 1.0);
  }
  spec.draws = 50;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("phase-compare: four cells") {
  const Workspace ws("phase");
  const auto spec = ws.spec(ExperimentKind::phase_compare, "out");
  run_experiment(spec);
  const auto rows = lines(spec.out_dir / "phase-compare.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "phase,correlation,mean_sum_rate_mbps,stderr_mbps");
  std::vector<std::string> cells;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 4);
    cells.push_back(f[0] + "/" + f[1]);
    CHECK(std::stod(f[2]) > 0.0);
    CHECK(std::stod(f[3]) >= 0.0);
  }
  CHECK(cells == std::vector<std::string>{"equal/correlated", "random/correlated",
                                          "equal/independent", "random/independent"});
}

TEST_CASE("asymptotic: schema") {
  const Workspace ws("asym");
  const auto spec = ws.spec(ExperimentKind::asymptotic, "out");
  run_experiment(spec);
  const auto rows = lines(spec.out_dir / "asymptotic.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "regime,aps,elements,rms_deviation,rms_stderr,limit_rms,relative_deviation");
  CHECK(split(rows[1])[0] == "fixed_elements");
  CHECK(split(rows[3])[0] == "joint");
  CHECK(split(rows[3])[2] == "1");
  CHECK(split(rows[4])[2] == "4");
}

TEST_CASE("scenario variants share draws") {
  SystemConfig cfg = config_from_json(nlohmann::json::parse(kTinyConfig));
  const auto shape = make_correlation_shape(cfg, false);
  const Scenario ris = build_scenario(cfg, shape, 2, 0.5, SystemVariant::ris_cell_free);
  const Scenario cf = build_scenario(cfg, shape, 2, 0.5, SystemVariant::cell_free);
  const Scenario nl = build_scenario(cfg, shape, 2, 0.5, SystemVariant::ris_no_los);
  CHECK(ris.large_scale.beta == cf.large_scale.beta);
  CHECK(nl.large_scale.beta.isZero());
  CHECK(nl.correlation.alpha() == ris.correlation.alpha());
  for (double a : cf.correlation.alpha()) CHECK(a == 0.0);
  CHECK(variant_name(SystemVariant::ris_no_los) == "ris_cellfree_nolos");
}

TEST_CASE("restrict_aps keeps a nested prefix") {
  SystemConfig cfg = config_from_json(nlohmann::json::parse(kTinyConfig));
  const auto shape = make_correlation_shape(cfg, false);
  const Scenario full = build_scenario(cfg, shape, 0);
  const Scenario part = restrict_aps(full, 3);
  CHECK(part.cfg.num_aps == 3);
  CHECK(part.large_scale.num_aps() == 3);
  CHECK(part.large_scale.beta == full.large_scale.beta.topRows(3));
  CHECK(part.correlation.alpha().size() == 3);
  CHECK(part.correlation.alpha()[2] == full.correlation.alpha()[2]);
  CHECK(part.correlation.alpha_tilde() == full.correlation.alpha_tilde());
  CHECK_THROWS_AS(restrict_aps(full, 0), std::invalid_argument);
  CHECK_THROWS_AS(restrict_aps(full, 9), std::invalid_argument);
}

TEST_CASE("cli: exit codes") {
  const Workspace ws("cli");
  const std::string cfg = "--config " + ws.config.string();
  const std::string out = " --out " + (ws.dir / "cli").string();
  CHECK(run_cli("validate " + cfg + out + " --tolerance 0.15") == 0);
  CHECK(run_cli("validate " + cfg + out + " --trials 10") == 2);
  CHECK(run_cli("sweep-ptilde " + cfg + out) == 1);
  CHECK(run_cli("sweep-ptilde " + cfg + out + " --force") == 0);
  CHECK(run_cli("bogus " + cfg) == 1);
  CHECK(run_cli("validate --config /nonexistent.json") == 1);
  CHECK(run_cli("sweep-ptilde " + cfg + out + " --force --ptilde-grid 0,2") == 1);
}
