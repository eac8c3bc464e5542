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

#include <vector>

#include <Eigen/Dense>

#include "riscf/config.hpp"
#include "riscf/correlation.hpp"
#include "riscf/path_loss.hpp"
#include "riscf/rng.hpp"

namespace riscf {

/// Linear large-scale gain of the three-slope law at distance `d_km`. Flat below
/// d0, then mid/far exponents, continuous at both breakpoints.
double three_slope_gain(double d_km, const PathLossParams& params, double reference_loss_db);
double three_slope_gain_db(double d_km, const PathLossParams& params, double reference_loss_db);

/// i.i.d. Bernoulli(p_tilde) unblocked-link indicators, M x K.
Eigen::MatrixXd draw_blocking(double p_tilde, RngStream& rng, std::size_t num_aps,
                              std::size_t num_users);

struct PilotAssignment {
  std::vector<std::size_t> pilot_of;              // 0-based pilot index per user
  std::vector<std::vector<std::size_t>> sharing;  // users on the same pilot, k included
};

/// Round-robin: user k gets pilot k mod tau_p.
PilotAssignment assign_pilots(std::size_t num_users, std::size_t tau_p);

struct LargeScaleState {
  Eigen::MatrixXd beta_bar;  // unblocked direct-link gain, M x K
  Eigen::MatrixXd blocking;  // a_mk in {0, 1}
  Eigen::MatrixXd beta;      // a_mk * beta_bar_mk
  std::vector<double> alpha;        // AP-RIS
  std::vector<double> alpha_tilde;  // RIS-user
  PilotAssignment pilots;

  std::size_t num_aps() const { return static_cast<std::size_t>(beta.rows()); }
  std::size_t num_users() const { return static_cast<std::size_t>(beta.cols()); }
  const std::vector<std::size_t>& sharing(std::size_t k) const { return pilots.sharing[k]; }

  /// Copy with a replaced blocking pattern (beta recomputed).
  LargeScaleState with_blocking(const Eigen::MatrixXd& a) const;
};

/// Direct gains from AP-user wrap distances, RIS scalars from AP-RIS and RIS-user
/// distances (plus cfg.ris_gain_db per hop), blocking drawn with p_tilde.
LargeScaleState large_scale_all(const Geometry& geometry, const SystemConfig& cfg, RngStream& rng);
LargeScaleState large_scale_all(const Geometry& geometry, const SystemConfig& cfg, double p_tilde,
                                RngStream& rng);

/// Binds the scenario's RIS scalars to a shared correlation shape.
CorrelationModel correlation_model(const LargeScaleState& ls,
                                   std::shared_ptr<const CorrelationShape> shape);

}  // namespace riscf
