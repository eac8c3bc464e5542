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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riscf/channel.hpp"
#include "riscf/config.hpp"
#include "riscf/estimation.hpp"
#include "riscf/montecarlo.hpp"
#include "riscf/scenario.hpp"

namespace riscf {

enum class ExperimentKind { validate, sweep_ptilde, cdf, phase_compare, asymptotic };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_name(ExperimentKind kind);

/// One CLI invocation. Unset overrides fall back to the config file.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::validate;
  std::filesystem::path config_path;
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> draws;
  std::optional<std::vector<double>> p_tilde_grid;
  std::optional<std::string> phase;
  std::optional<CorrelationKind> correlation;
  double tolerance = 0.03;  // validate: max relative closed-form vs MC gap
  bool force = false;       // ignore a failed validation marker
  bool dump = false;        // validate: also write R and estimator statistics
};

/// Raised when a runner refuses to run because the last validate failed.
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentOutcome {
  int exit_code = 0;  // 0 ok, 2 tolerance breach
  std::string message;
  std::vector<std::filesystem::path> outputs;
};

/// Loads the config, applies overrides, runs, writes CSV + manifest.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

SystemConfig resolve_config(const ExperimentSpec& spec);

// ---- computations behind the runners (no I/O) ---------------------------

struct ValidationRow {
  std::size_t k = 0;
  double sinr_closed = 0.0;
  double rate_closed_mbps = 0.0;
  double sinr_mc = 0.0;
  double sinr_mc_stderr = 0.0;
  double rate_mc_mbps = 0.0;
  double rel_gap = 0.0;
};

std::vector<ValidationRow> validate_scenario(const Scenario& sc, const PhaseShifts& phi,
                                             const McOptions& opt);

struct SweepRow {
  double p_tilde = 0.0;
  double ris_cell_free = 0.0;  // mean over draws of the sum net throughput, Mbps
  double cell_free = 0.0;
  double ris_no_los = 0.0;
};

/// Closed-form sum throughput averaged over `draws` scenario draws per p_tilde.
std::vector<SweepRow> sweep_ptilde(const SystemConfig& cfg, const std::vector<double>& grid,
                                   std::size_t draws, const PhaseShifts& phi);

struct CdfPoint {
  SystemVariant system = SystemVariant::ris_cell_free;
  std::size_t rank = 0;
  double sum_rate_mbps = 0.0;
  double cdf = 0.0;
};

/// Per-draw sum throughput of each system at cfg.p_tilde, sorted, with empirical
/// CDF ordinates rank/draws.
std::vector<CdfPoint> sum_rate_cdf(const SystemConfig& cfg, std::size_t draws,
                                   const PhaseShifts& phi);

struct PhaseCompareRow {
  std::string phase;        // "equal" or "random"
  CorrelationKind correlation = CorrelationKind::correlated;
  double mean_sum_rate_mbps = 0.0;
  double stderr_mbps = 0.0;
};

/// {equal(theta_bar), random} x {correlated, independent} at cfg.p_tilde. Random
/// designs are redrawn per scenario draw.
std::vector<PhaseCompareRow> phase_compare(const SystemConfig& cfg, std::size_t draws,
                                           double theta_bar);

struct AsymptoticRow {
  AsymptoticRegime regime = AsymptoticRegime::fixed_elements;
  std::size_t aps = 0;
  std::size_t elements = 0;
  double rms_deviation = 0.0;
  double rms_stderr = 0.0;
  double limit_rms = 0.0;
  double relative_deviation() const { return limit_rms > 0.0 ? rms_deviation / limit_rms : 0.0; }
};

/// Fixed-N sweep over cfg.asymptotic_aps, then a joint sweep pairing each M with
/// the matching entry of cfg.asymptotic_ris_side (N = side^2).
/// Nested AP sets: each draw is built at the largest M and restricted to prefixes.
/// The RMS is pooled over `draws` scenario draws; the stderr is the Monte-Carlo part only.
std::vector<AsymptoticRow> asymptotic_sweep(const SystemConfig& cfg, const McOptions& opt,
                                            std::size_t draws);

// ---- CSV ----------------------------------------------------------------

std::string format_number(double v);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
void write_stats_csv(const std::filesystem::path& path, const EstimationStats& stats);

}  // namespace riscf
