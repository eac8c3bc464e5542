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

#include <Eigen/Dense>

#include "riscf/channel.hpp"
#include "riscf/config.hpp"
#include "riscf/propagation.hpp"

namespace riscf {

/// Statistics of the linear MMSE aggregated-channel estimator. All M x K and
/// functions of large-scale statistics and Phi only.
struct EstimationStats {
  Eigen::MatrixXd c;        // MMSE scaling
  Eigen::MatrixXd gamma;    // E|u_hat|^2
  Eigen::MatrixXd err_var;  // E|u - u_hat|^2
  Eigen::MatrixXd delta;    // E|u|^2
  Eigen::MatrixXd nmse;
};

/// c_mk = sqrt(p tau_p) delta_mk / (p tau_p sum_{k' in P_k} delta_mk' + 1).
double mmse_coefficient(const LargeScaleState& ls, const Eigen::MatrixXd& delta, double pilot_gain,
                        std::size_t m, std::size_t k);

/// Denominator p tau_p sum_{k' in P_k} delta_mk' + 1.
double pilot_energy(const LargeScaleState& ls, const Eigen::MatrixXd& delta, double pilot_gain,
                    std::size_t m, std::size_t k);

EstimationStats estimator_stats(const LargeScaleState& ls, const CorrelationModel& corr,
                                const TraceProducts& tp, const SystemConfig& cfg);
EstimationStats estimator_stats(const LargeScaleState& ls, const CorrelationModel& corr,
                                const PhaseShifts& phi, const SystemConfig& cfg);

/// Projected pilot signals y_p[m][k] and the per-pilot noise that produced them.
struct PilotObservation {
  Eigen::MatrixXcd projected;  // M x K
  Eigen::MatrixXcd noise;      // M x tau_p, CN(0, 1)
};

/// y_p[m][k] = sqrt(p tau_p) sum_{k' in P_k} u_mk' + w[m][pilot(k)]. Users on one
/// pilot see the same noise sample.
PilotObservation project_pilots(const ChannelRealization& chan, const LargeScaleState& ls,
                                const SystemConfig& cfg, RngStream& rng);
PilotObservation project_pilots(const Eigen::MatrixXcd& aggregated, const LargeScaleState& ls,
                                double pilot_gain, Eigen::MatrixXcd noise);

/// u_hat_mk = c_mk y_p[m][k].
cplx estimate_channel(const PilotObservation& obs, const EstimationStats& stats, std::size_t m,
                      std::size_t k);
Eigen::MatrixXcd estimate_all(const PilotObservation& obs, const EstimationStats& stats);

}  // namespace riscf
