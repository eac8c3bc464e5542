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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "riscf/correlation.hpp"
#include "riscf/propagation.hpp"
#include "riscf/rng.hpp"

namespace riscf {

using cplx = std::complex<double>;

/// RIS phase configuration Phi = diag(exp(j theta_n)).
struct PhaseShifts {
  std::vector<double> theta;

  std::size_t size() const { return theta.size(); }
  Eigen::VectorXcd diagonal() const;
};

/// Cached traces of the shared-R products for one phase configuration.
///
/// With A = Phi^H (s R) Phi (s R), s = d_H d_V, every Theta_mk = Phi^H R_m Phi R~_k
/// equals alpha_m alpha~_k A, so
///   tr(Theta_mk)               = alpha_m alpha~_k tr(A)
///   tr(Theta_mk Theta_m'k')    = alpha_m alpha~_k alpha_m' alpha~_k' tr(A^2).
/// Both traces are real: A is similar to a PSD matrix.
struct TraceProducts {
  double tr_a = 0.0;
  double tr_a2 = 0.0;
};

TraceProducts trace_products(const CorrelationModel& corr, const PhaseShifts& phi);

/// tr(Phi^H R_m Phi R~_k) from the cache.
inline double theta_trace(const CorrelationModel& corr, const TraceProducts& tp, std::size_t m,
                          std::size_t k) {
  return corr.alpha()[m] * corr.alpha_tilde()[k] * tp.tr_a;
}

/// tr(Theta_mk Theta_m'k') from the cache.
inline double theta_pair_trace(const CorrelationModel& corr, const TraceProducts& tp,
                               std::size_t m, std::size_t k, std::size_t m2, std::size_t k2) {
  return corr.alpha()[m] * corr.alpha_tilde()[k] * corr.alpha()[m2] * corr.alpha_tilde()[k2] *
         tp.tr_a2;
}

/// One coherence-interval draw of every channel.
struct ChannelRealization {
  Eigen::MatrixXcd direct;      // g, M x K
  Eigen::MatrixXcd ap_ris;      // h_m in column m, N x M
  Eigen::MatrixXcd ris_user;    // z_k in column k, N x K
  Eigen::MatrixXcd aggregated;  // u = g + h^H Phi z, M x K
};

/// g_mk ~ CN(0, beta_mk), h_m = sqrt(alpha_m s) F w, z_k = sqrt(alpha~_k s) F w',
/// w, w' ~ CN(0, I). Requires a shape built with its factor.
ChannelRealization sample_channels(const LargeScaleState& ls, const CorrelationModel& corr,
                                   const PhaseShifts& phi, RngStream& rng);

/// Same draw order as above, writing into `out` and reusing its storage.
void sample_channels(const LargeScaleState& ls, const CorrelationModel& corr,
                     const Eigen::VectorXcd& phi_diag, RngStream& rng, ChannelRealization& out);

/// g + h^H Phi z.
cplx aggregated_channel(cplx g, const Eigen::VectorXcd& h, const Eigen::VectorXcd& z,
                        const PhaseShifts& phi);

/// Recomputes u for every (m, k) from the stored g, h, z.
Eigen::MatrixXcd aggregate(const Eigen::MatrixXcd& direct, const Eigen::MatrixXcd& ap_ris,
                           const Eigen::MatrixXcd& ris_user, const Eigen::VectorXcd& phi_diag);

/// delta_mk = beta_mk + tr(Phi^H R_m Phi R~_k).
double aggregate_variance(const LargeScaleState& ls, const CorrelationModel& corr,
                          const TraceProducts& tp, std::size_t m, std::size_t k);
double aggregate_variance(const LargeScaleState& ls, const CorrelationModel& corr,
                          const PhaseShifts& phi, std::size_t m, std::size_t k);

/// All delta_mk at once, M x K.
Eigen::MatrixXd aggregate_variances(const LargeScaleState& ls, const CorrelationModel& corr,
                                    const TraceProducts& tp);

}  // namespace riscf
