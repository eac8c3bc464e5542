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

#include "riscf/estimation.hpp"

#include <cmath>

namespace riscf {

double pilot_energy(const LargeScaleState& ls, const Eigen::MatrixXd& delta, double pilot_gain,
                    std::size_t m, std::size_t k) {
  double sum = 0.0;
  for (std::size_t j : ls.sharing(k)) {
    sum += delta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
  }
  return pilot_gain * sum + 1.0;
}

double mmse_coefficient(const LargeScaleState& ls, const Eigen::MatrixXd& delta, double pilot_gain,
                        std::size_t m, std::size_t k) {
  return std::sqrt(pilot_gain) * delta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) /
         pilot_energy(ls, delta, pilot_gain, m, k);
}

EstimationStats estimator_stats(const LargeScaleState& ls, const CorrelationModel& corr,
                                const TraceProducts& tp, const SystemConfig& cfg) {
  const double pg = cfg.pilot_gain();
  const double root = std::sqrt(pg);
  EstimationStats st;
  st.delta = aggregate_variances(ls, corr, tp);
  const auto M = st.delta.rows();
  const auto K = st.delta.cols();
  st.c.resize(M, K);
  st.gamma.resize(M, K);
  st.err_var.resize(M, K);
  st.nmse.resize(M, K);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto mu = static_cast<std::size_t>(m);
      const auto ku = static_cast<std::size_t>(k);
      const double denom = pilot_energy(ls, st.delta, pg, mu, ku);
      const double d = st.delta(m, k);
      st.c(m, k) = root * d / denom;
      st.gamma(m, k) = root * d * st.c(m, k);
      st.err_var(m, k) = d - st.gamma(m, k);
      st.nmse(m, k) = 1.0 - pg * d / denom;
    }
  }
  return st;
}

EstimationStats estimator_stats(const LargeScaleState& ls, const CorrelationModel& corr,
                                const PhaseShifts& phi, const SystemConfig& cfg) {
  return estimator_stats(ls, corr, trace_products(corr, phi), cfg);
}

PilotObservation project_pilots(const Eigen::MatrixXcd& aggregated, const LargeScaleState& ls,
                                double pilot_gain, Eigen::MatrixXcd noise) {
  const auto M = aggregated.rows();
  const auto K = aggregated.cols();
  const double root = std::sqrt(pilot_gain);
  PilotObservation obs;
  obs.projected.resize(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(M);
    for (std::size_t j : ls.sharing(ku)) sum += aggregated.col(static_cast<Eigen::Index>(j));
    obs.projected.col(k) =
        root * sum + noise.col(static_cast<Eigen::Index>(ls.pilots.pilot_of[ku]));
  }
  obs.noise = std::move(noise);
  return obs;
}

PilotObservation project_pilots(const ChannelRealization& chan, const LargeScaleState& ls,
                                const SystemConfig& cfg, RngStream& rng) {
  const auto M = chan.aggregated.rows();
  const auto tau_p = static_cast<Eigen::Index>(cfg.tau_p);
  Eigen::MatrixXcd noise(M, tau_p);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index t = 0; t < tau_p; ++t) noise(m, t) = rng.complex_normal();
  }
  return project_pilots(chan.aggregated, ls, cfg.pilot_gain(), std::move(noise));
}

cplx estimate_channel(const PilotObservation& obs, const EstimationStats& stats, std::size_t m,
                      std::size_t k) {
  const auto mi = static_cast<Eigen::Index>(m);
  const auto ki = static_cast<Eigen::Index>(k);
  return stats.c(mi, ki) * obs.projected(mi, ki);
}

Eigen::MatrixXcd estimate_all(const PilotObservation& obs, const EstimationStats& stats) {
  return stats.c.cast<cplx>().cwiseProduct(obs.projected);
}

}  // namespace riscf
