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

#include "riscf/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace riscf {

double cost231_reference_loss_db(double carrier_mhz, double base_height_m, double mobile_height_m) {
  const double lf = std::log10(carrier_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(base_height_m) -
         (1.1 * lf - 0.7) * mobile_height_m + (1.56 * lf - 0.8);
}

double three_slope_gain_db(double d_km, const PathLossParams& params, double reference_loss_db) {
  const double d0 = params.d0_km;
  const double d1 = params.d1_km;
  const double n_mid = params.mid_exponent;
  const double n_far = params.far_exponent;
  const double d = std::max(d_km, d0);
  if (d > d1) return -reference_loss_db - 10.0 * n_far * std::log10(d);
  // Offset keeps the law continuous at d1.
  return -reference_loss_db - 10.0 * (n_far - n_mid) * std::log10(d1) - 10.0 * n_mid * std::log10(d);
}

double three_slope_gain(double d_km, const PathLossParams& params, double reference_loss_db) {
  return std::pow(10.0, three_slope_gain_db(d_km, params, reference_loss_db) / 10.0);
}

Eigen::MatrixXd draw_blocking(double p_tilde, RngStream& rng, std::size_t num_aps,
                              std::size_t num_users) {
  Eigen::MatrixXd a(num_aps, num_users);
  for (std::size_t m = 0; m < num_aps; ++m) {
    // One uniform per link regardless of p_tilde, so equal seeds give nested
    // unblocked sets across a p_tilde sweep.
    for (std::size_t k = 0; k < num_users; ++k) a(m, k) = rng.uniform(0.0, 1.0) < p_tilde ? 1.0 : 0.0;
  }
  return a;
}

PilotAssignment assign_pilots(std::size_t num_users, std::size_t tau_p) {
  PilotAssignment out;
  out.pilot_of.resize(num_users);
  std::vector<std::vector<std::size_t>> by_pilot(tau_p);
  for (std::size_t k = 0; k < num_users; ++k) {
    out.pilot_of[k] = k % tau_p;
    by_pilot[out.pilot_of[k]].push_back(k);
  }
  out.sharing.resize(num_users);
  for (std::size_t k = 0; k < num_users; ++k) out.sharing[k] = by_pilot[out.pilot_of[k]];
  return out;
}

LargeScaleState LargeScaleState::with_blocking(const Eigen::MatrixXd& a) const {
  LargeScaleState out = *this;
  out.blocking = a;
  out.beta = a.cwiseProduct(beta_bar);
  return out;
}

namespace {

// The taller endpoint plays the base station in the reference-loss formula.
double link_reference_loss(const SystemConfig& cfg, double h1, double h2) {
  if (cfg.path_loss.reference_loss_db) return *cfg.path_loss.reference_loss_db;
  return cost231_reference_loss_db(cfg.path_loss.carrier_mhz, std::max(h1, h2), std::min(h1, h2));
}

}  // namespace

LargeScaleState large_scale_all(const Geometry& geometry, const SystemConfig& cfg, double p_tilde,
                                RngStream& rng) {
  const std::size_t M = geometry.ap_positions.size();
  const std::size_t K = geometry.user_positions.size();
  const double side = cfg.area_side_km;
  const double ris_gain = std::pow(10.0, cfg.ris_gain_db / 10.0);

  const double l_direct = link_reference_loss(cfg, geometry.ap_height_m, geometry.user_height_m);
  const double l_ap_ris = link_reference_loss(cfg, geometry.ap_height_m, geometry.ris_height_m);
  const double l_ris_user = link_reference_loss(cfg, geometry.ris_height_m, geometry.user_height_m);

  LargeScaleState ls;
  ls.beta_bar.resize(M, K);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t k = 0; k < K; ++k) {
      const double d = wrap_distance(geometry.ap_positions[m], geometry.user_positions[k], side);
      ls.beta_bar(m, k) = three_slope_gain(d, cfg.path_loss, l_direct);
    }
  }
  ls.alpha.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double d = wrap_distance(geometry.ap_positions[m], geometry.ris_position, side);
    ls.alpha[m] = ris_gain * three_slope_gain(d, cfg.path_loss, l_ap_ris);
  }
  ls.alpha_tilde.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double d = wrap_distance(geometry.ris_position, geometry.user_positions[k], side);
    ls.alpha_tilde[k] = ris_gain * three_slope_gain(d, cfg.path_loss, l_ris_user);
  }
  ls.blocking = draw_blocking(p_tilde, rng, M, K);
  ls.beta = ls.blocking.cwiseProduct(ls.beta_bar);
  ls.pilots = assign_pilots(K, cfg.tau_p);
  return ls;
}

LargeScaleState large_scale_all(const Geometry& geometry, const SystemConfig& cfg, RngStream& rng) {
  return large_scale_all(geometry, cfg, cfg.p_tilde, rng);
}

CorrelationModel correlation_model(const LargeScaleState& ls,
                                   std::shared_ptr<const CorrelationShape> shape) {
  return {std::move(shape), ls.alpha, ls.alpha_tilde};
}

}  // namespace riscf
