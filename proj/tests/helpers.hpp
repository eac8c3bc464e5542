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

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "riscf/channel.hpp"
#include "riscf/config.hpp"
#include "riscf/correlation.hpp"
#include "riscf/propagation.hpp"

namespace riscf::testing {

/// Small hand-built system: every input is explicit, nothing drawn from geometry.
struct Toy {
  SystemConfig cfg;
  LargeScaleState ls;
  CorrelationModel corr;
};

inline SystemConfig toy_config(std::size_t aps, std::size_t users, std::size_t tau_p,
                               double pilot_snr, double data_snr) {
  SystemConfig cfg;
  cfg.num_aps = aps;
  cfg.num_users = users;
  cfg.tau_p = tau_p;
  cfg.tau_c = 200;
  cfg.pilot_snr = pilot_snr;
  cfg.data_snr = data_snr;
  cfg.eta.assign(users, 1.0);
  return cfg;
}

inline LargeScaleState toy_state(const Eigen::MatrixXd& beta, std::vector<double> alpha,
                                 std::vector<double> alpha_tilde, std::size_t tau_p) {
  LargeScaleState ls;
  ls.beta_bar = beta;
  ls.blocking = (beta.array() > 0.0).cast<double>().matrix();
  ls.beta = beta;
  ls.alpha = std::move(alpha);
  ls.alpha_tilde = std::move(alpha_tilde);
  ls.pilots = assign_pilots(static_cast<std::size_t>(beta.cols()), tau_p);
  return ls;
}

/// Sinc-correlated (or identity) RIS with `side` x `side` elements at the given spacing.
inline std::shared_ptr<const CorrelationShape> toy_shape(std::size_t side, double spacing,
                                                         double wavelength,
                                                         CorrelationKind kind) {
  return make_correlation_shape(element_positions(side, side, spacing, spacing), wavelength, kind,
                                true);
}

inline Toy make_toy(const SystemConfig& cfg, const Eigen::MatrixXd& beta, std::vector<double> alpha,
                    std::vector<double> alpha_tilde, std::shared_ptr<const CorrelationShape> shape) {
  Toy t;
  t.cfg = cfg;
  t.ls = toy_state(beta, std::move(alpha), std::move(alpha_tilde), cfg.tau_p);
  t.corr = correlation_model(t.ls, std::move(shape));
  return t;
}

inline PhaseShifts phases(std::vector<double> theta) { return PhaseShifts{std::move(theta)}; }

inline double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace riscf::testing
