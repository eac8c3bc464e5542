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

#include "riscf/performance.hpp"

#include <cmath>

namespace riscf {

Eigen::VectorXcd uplink_receive(const Eigen::MatrixXcd& aggregated, const SystemConfig& cfg,
                                const Eigen::VectorXcd& symbols, const Eigen::VectorXcd& noise) {
  const auto K = aggregated.cols();
  Eigen::VectorXcd weighted(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    weighted[k] = std::sqrt(cfg.eta[static_cast<std::size_t>(k)]) * symbols[k];
  }
  return std::sqrt(cfg.data_snr) * (aggregated * weighted) + noise;
}

Eigen::VectorXcd uplink_receive(const ChannelRealization& chan, const SystemConfig& cfg,
                                const Eigen::VectorXcd& symbols, RngStream& rng) {
  Eigen::VectorXcd noise(chan.aggregated.rows());
  for (auto& w : noise) w = rng.complex_normal();
  return uplink_receive(chan.aggregated, cfg, symbols, noise);
}

cplx mrc_decision(const Eigen::VectorXcd& received, const Eigen::MatrixXcd& estimates,
                  std::size_t k) {
  return estimates.col(static_cast<Eigen::Index>(k)).dot(received);
}

SinrTerms closed_form_terms(const LargeScaleState& ls, const CorrelationModel& corr,
                            const TraceProducts& tp, const SystemConfig& cfg,
                            const EstimationStats& stats, std::size_t k) {
  const auto M = stats.c.rows();
  const auto K = stats.c.cols();
  const auto ki = static_cast<Eigen::Index>(k);
  const double rho = cfg.data_snr;
  const double pg = cfg.pilot_gain();
  const auto& alpha = corr.alpha();
  const auto& alpha_t = corr.alpha_tilde();
  const auto& sharing = ls.sharing(k);

  SinrTerms t;
  const double sum_gamma = stats.gamma.col(ki).sum();
  t.numerator = rho * cfg.eta[k] * sum_gamma * sum_gamma;
  t.noise = sum_gamma;

  for (Eigen::Index j = 0; j < K; ++j) {
    t.interference += cfg.eta[static_cast<std::size_t>(j)] * stats.gamma.col(ki).dot(stats.delta.col(j));
  }
  t.interference *= rho;

  // tr(Theta_mk' Theta_m'k'') = alpha_m alpha_m' alpha~_k' alpha~_k'' tr(A^2); every
  // sum below factorizes over that product.
  double c2a2 = 0.0;  // sum_m c_mk^2 alpha_m^2
  double ca = 0.0;    // sum_m c_mk alpha_m
  for (Eigen::Index m = 0; m < M; ++m) {
    const double c = stats.c(m, ki);
    const double a = alpha[static_cast<std::size_t>(m)];
    c2a2 += c * c * a * a;
    ca += c * a;
  }
  double own = 0.0;
  double shared_alpha_t = 0.0;
  for (std::size_t j : sharing) {
    own += cfg.eta[j] * alpha_t[j] * alpha_t[j];
    shared_alpha_t += alpha_t[j];
  }
  double all_eta_alpha_t = 0.0;
  for (Eigen::Index j = 0; j < K; ++j) {
    all_eta_alpha_t += cfg.eta[static_cast<std::size_t>(j)] * alpha_t[static_cast<std::size_t>(j)];
  }
  t.own_pilot_theta = pg * rho * own * c2a2 * tp.tr_a2;
  t.cross_theta = pg * rho * all_eta_alpha_t * shared_alpha_t * ca * ca * tp.tr_a2;

  for (std::size_t j : sharing) {
    if (j == k) continue;
    const double s = stats.c.col(ki).dot(stats.delta.col(static_cast<Eigen::Index>(j)));
    t.contamination += cfg.eta[j] * s * s;
  }
  t.contamination *= pg * rho;
  return t;
}

double closed_form_sinr(const LargeScaleState& ls, const CorrelationModel& corr,
                        const TraceProducts& tp, const SystemConfig& cfg,
                        const EstimationStats& stats, std::size_t k) {
  return closed_form_terms(ls, corr, tp, cfg, stats, k).sinr();
}

double net_throughput(double sinr, const SystemConfig& cfg) {
  return cfg.prelog() * std::log2(1.0 + sinr);
}

ThroughputReport closed_form_report(const LargeScaleState& ls, const CorrelationModel& corr,
                                    const PhaseShifts& phi, const SystemConfig& cfg) {
  return closed_form_report(ls, corr, trace_products(corr, phi), cfg);
}

ThroughputReport closed_form_report(const LargeScaleState& ls, const CorrelationModel& corr,
                                    const TraceProducts& tp, const SystemConfig& cfg) {
  const EstimationStats stats = estimator_stats(ls, corr, tp, cfg);
  ThroughputReport rep;
  for (std::size_t k = 0; k < ls.num_users(); ++k) {
    const double s = closed_form_sinr(ls, corr, tp, cfg, stats, k);
    rep.sinr.push_back(s);
    rep.rate_mbps.push_back(net_throughput(s, cfg));
    rep.sum_rate_mbps += rep.rate_mbps.back();
  }
  return rep;
}

cplx asymptotic_limit(const LargeScaleState& ls, const CorrelationModel& corr,
                      const TraceProducts& tp, const SystemConfig& cfg,
                      const EstimationStats& stats, std::size_t k, const Eigen::VectorXcd& symbols,
                      AsymptoticRegime regime) {
  const std::size_t M = ls.num_aps();
  const double scale = std::sqrt(cfg.pilot_gain() * cfg.data_snr);
  cplx sum = 0.0;
  for (std::size_t j : ls.sharing(k)) {
    double acc = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double c = stats.c(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
      const double strength = regime == AsymptoticRegime::fixed_elements
                                  ? aggregate_variance(ls, corr, tp, m, j)
                                  : theta_trace(corr, tp, m, j);
      acc += c * strength;
    }
    sum += std::sqrt(cfg.eta[j]) * scale * acc * symbols[static_cast<Eigen::Index>(j)];
  }
  double norm = static_cast<double>(M);
  if (regime == AsymptoticRegime::joint) norm *= static_cast<double>(corr.num_elements());
  return sum / norm;
}

}  // namespace riscf
