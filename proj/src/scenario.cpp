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

#include "riscf/scenario.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace riscf {

std::string_view variant_name(SystemVariant v) {
  switch (v) {
    case SystemVariant::ris_cell_free:
      return "ris_cellfree";
    case SystemVariant::cell_free:
      return "cellfree";
    case SystemVariant::ris_no_los:
      return "ris_cellfree_nolos";
  }
  return "unknown";
}

Scenario build_scenario(const SystemConfig& cfg, std::shared_ptr<const CorrelationShape> shape,
                        std::uint64_t draw_index, double p_tilde, SystemVariant variant) {
  Scenario sc;
  sc.cfg = cfg;
  sc.cfg.p_tilde = p_tilde;
  RngStream geo_rng(cfg.master_seed, StreamTag::geometry, draw_index);
  sc.geometry = generate_geometry(cfg, geo_rng);
  RngStream block_rng(cfg.master_seed, StreamTag::blocking, draw_index);
  sc.large_scale = large_scale_all(sc.geometry, cfg, p_tilde, block_rng);
  sc.correlation = correlation_model(sc.large_scale, std::move(shape));

  switch (variant) {
    case SystemVariant::ris_cell_free:
      break;
    case SystemVariant::cell_free:
      sc.correlation = sc.correlation.without_ris();
      sc.large_scale.alpha.assign(sc.large_scale.alpha.size(), 0.0);
      sc.large_scale.alpha_tilde.assign(sc.large_scale.alpha_tilde.size(), 0.0);
      break;
    case SystemVariant::ris_no_los:
      sc.large_scale = sc.large_scale.with_blocking(
          Eigen::MatrixXd::Zero(sc.large_scale.beta.rows(), sc.large_scale.beta.cols()));
      break;
  }
  return sc;
}

Scenario build_scenario(const SystemConfig& cfg, std::shared_ptr<const CorrelationShape> shape,
                        std::uint64_t draw_index) {
  return build_scenario(cfg, std::move(shape), draw_index, cfg.p_tilde,
                        SystemVariant::ris_cell_free);
}

Scenario restrict_aps(const Scenario& sc, std::size_t num_aps) {
  if (num_aps == 0 || num_aps > sc.large_scale.num_aps()) {
    throw std::invalid_argument("restrict_aps: 0 < num_aps <= M violated");
  }
  Scenario out = sc;
  const auto m = static_cast<Eigen::Index>(num_aps);
  out.cfg.num_aps = num_aps;
  out.geometry.ap_positions.resize(num_aps);
  LargeScaleState& ls = out.large_scale;
  ls.beta_bar = sc.large_scale.beta_bar.topRows(m);
  ls.blocking = sc.large_scale.blocking.topRows(m);
  ls.beta = sc.large_scale.beta.topRows(m);
  ls.alpha.resize(num_aps);
  std::vector<double> alpha(sc.correlation.alpha().begin(),
                            sc.correlation.alpha().begin() + static_cast<std::ptrdiff_t>(num_aps));
  out.correlation =
      CorrelationModel(sc.correlation.shared_shape(), std::move(alpha), sc.correlation.alpha_tilde());
  return out;
}

}  // namespace riscf
