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
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "riscf/channel.hpp"
#include "riscf/config.hpp"
#include "riscf/estimation.hpp"
#include "riscf/performance.hpp"
#include "riscf/propagation.hpp"

namespace riscf {

class InsufficientTrials : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a Monte-Carlo worker reads. Statistics are computed once here and
/// shared read-only; the referenced objects must outlive the problem.
struct McProblem {
  McProblem(const LargeScaleState& ls, const CorrelationModel& corr, const PhaseShifts& phi,
            const SystemConfig& cfg);

  const LargeScaleState& ls;
  const CorrelationModel& corr;
  const SystemConfig& cfg;
  Eigen::VectorXcd phi_diag;
  TraceProducts traces;
  EstimationStats stats;
};

struct McOptions {
  std::size_t trials = 100000;
  std::size_t batches = 50;  // fixed batch -> sub-stream map; independent of thread count
  std::uint64_t seed = 1;
  double max_rel_stderr = 0.0;  // 0 disables the cap
};

/// Trial count of batch b when `trials` are split over `batches`.
std::size_t batch_size(std::size_t trials, std::size_t batches, std::size_t b);

/// Running sums of the use-and-then-forget moments for every user:
/// a_k = sum_m conj(u_hat_mk) u_mk, b_kk' = sum_m conj(u_hat_mk) u_mk',
/// n_k = sum_m |u_hat_mk|^2.
struct SinrAccumulator {
  Eigen::VectorXcd sum_a;
  Eigen::MatrixXd sum_b2;  // |b_kk'|^2, row k
  Eigen::VectorXd sum_n;
  std::size_t count = 0;

  explicit SinrAccumulator(std::size_t num_users = 0);
  void merge(const SinrAccumulator& other);
  /// Plug-in SINR of user k from the accumulated means.
  double sinr(const SystemConfig& cfg, std::size_t k) const;
};

/// Kernel: draws `trials` fresh channel + pilot-noise realizations from the
/// sub-stream of `batch` and accumulates the moments.
SinrAccumulator sinr_batch(const McProblem& problem, std::uint64_t seed, std::size_t batch,
                           std::size_t trials);

struct McSinrEstimate {
  std::vector<double> sinr;
  std::vector<double> stderr_;  // batch-means standard error
  std::size_t trials = 0;
  std::size_t batches = 0;

  double max_rel_stderr() const;
};

/// OpenMP over batches. Bit-identical to the serial reference for any thread count.
McSinrEstimate monte_carlo_sinr(const McProblem& problem, const McOptions& opt);
/// Serial reference: same kernel, batches in order on the calling thread.
McSinrEstimate monte_carlo_sinr_serial(const McProblem& problem, const McOptions& opt);

/// Empirical estimator moments of one (m, k) pair.
struct EstimatorMoments {
  std::size_t m = 0;
  std::size_t k = 0;
  double est_power = 0.0;  // E|u_hat|^2
  double est_power_se = 0.0;
  double err_power = 0.0;  // E|u - u_hat|^2
  double err_power_se = 0.0;
  cplx cross = 0.0;  // E{e conj(u_hat)}
  double cross_se = 0.0;
  double slope = 0.0;  // least-squares slope of u on y_p (real part)
  double slope_se = 0.0;
  double est_var_of_u = 0.0;  // E|u|^2
};

std::vector<EstimatorMoments> estimator_moments(
    const McProblem& problem, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    const McOptions& opt);

/// RMS over users and trials of |r_k / norm - limit_k|, with r_k the MRC
/// statistic and the limit from asymptotic_limit for the same symbols.
struct DeviationEstimate {
  double rms = 0.0;
  double rms_stderr = 0.0;
  double limit_rms = 0.0;  // RMS magnitude of the deterministic limit
};

DeviationEstimate asymptotic_deviation(const McProblem& problem, AsymptoticRegime regime,
                                       const McOptions& opt);

}  // namespace riscf
