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

#include "riscf/channel.hpp"
#include "riscf/config.hpp"
#include "riscf/estimation.hpp"
#include "riscf/propagation.hpp"

namespace riscf {

/// Received data-phase samples y_m = sqrt(rho) sum_k sqrt(eta_k) u_mk s_k + w_m.
Eigen::VectorXcd uplink_receive(const Eigen::MatrixXcd& aggregated, const SystemConfig& cfg,
                                const Eigen::VectorXcd& symbols, const Eigen::VectorXcd& noise);
Eigen::VectorXcd uplink_receive(const ChannelRealization& chan, const SystemConfig& cfg,
                                const Eigen::VectorXcd& symbols, RngStream& rng);

/// r_k = sum_m conj(u_hat_mk) y_m.
cplx mrc_decision(const Eigen::VectorXcd& received, const Eigen::MatrixXcd& estimates,
                  std::size_t k);

/// Pieces of the closed-form SINR of user k.
struct SinrTerms {
  double numerator = 0.0;        // rho eta_k (sum_m gamma_mk)^2
  double interference = 0.0;     // rho sum_k' sum_m eta_k' gamma_mk delta_mk'
  double own_pilot_theta = 0.0;  // p tau_p rho sum_{k' in P_k} sum_m eta_k' c_mk^2 tr(Theta_mk'^2)
  double cross_theta = 0.0;      // p tau_p rho sum_k' sum_{k'' in P_k} sum_{m,m'} ... tr(Theta Theta)
  double contamination = 0.0;    // p tau_p rho sum_{k' in P_k \ k} eta_k' (sum_m c_mk delta_mk')^2
  double noise = 0.0;            // sum_m gamma_mk

  double mutual_interference() const {
    return interference + own_pilot_theta + cross_theta + contamination;
  }
  double sinr() const {
    const double den = mutual_interference() + noise;
    return den > 0.0 ? numerator / den : 0.0;
  }
};

SinrTerms closed_form_terms(const LargeScaleState& ls, const CorrelationModel& corr,
                            const TraceProducts& tp, const SystemConfig& cfg,
                            const EstimationStats& stats, std::size_t k);

/// Closed-form MRC uplink SINR of user k, O(MK) given the trace cache.
double closed_form_sinr(const LargeScaleState& ls, const CorrelationModel& corr,
                        const TraceProducts& tp, const SystemConfig& cfg,
                        const EstimationStats& stats, std::size_t k);

/// B nu (1 - tau_p/tau_c) log2(1 + sinr), Mbps.
double net_throughput(double sinr, const SystemConfig& cfg);

struct ThroughputReport {
  std::vector<double> sinr;
  std::vector<double> rate_mbps;
  double sum_rate_mbps = 0.0;
  std::vector<double> mc_sinr;
  std::vector<double> mc_sinr_stderr;
  std::vector<double> mc_rate_mbps;
  std::vector<double> rel_gap;
};

/// Closed-form SINR and rate for every user (MC columns left empty).
ThroughputReport closed_form_report(const LargeScaleState& ls, const CorrelationModel& corr,
                                    const TraceProducts& tp, const SystemConfig& cfg);
ThroughputReport closed_form_report(const LargeScaleState& ls, const CorrelationModel& corr,
                                    const PhaseShifts& phi, const SystemConfig& cfg);

enum class AsymptoticRegime {
  fixed_elements,  // M -> inf, normalize by 1/M, keeps beta
  joint,           // M, N -> inf, normalize by 1/(MN), RIS traces only
};

/// Deterministic limit of the normalized MRC statistic of user k for the given
/// transmitted symbols.
cplx asymptotic_limit(const LargeScaleState& ls, const CorrelationModel& corr,
                      const TraceProducts& tp, const SystemConfig& cfg,
                      const EstimationStats& stats, std::size_t k, const Eigen::VectorXcd& symbols,
                      AsymptoticRegime regime);

}  // namespace riscf
