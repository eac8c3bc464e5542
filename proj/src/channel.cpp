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

#include "riscf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace riscf {

Eigen::VectorXcd PhaseShifts::diagonal() const {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t n = 0; n < theta.size(); ++n) d[n] = std::polar(1.0, theta[n]);
  return d;
}

TraceProducts trace_products(const CorrelationModel& corr, const PhaseShifts& phi) {
  const Eigen::MatrixXd& r = corr.r();
  if (static_cast<std::size_t>(r.rows()) != phi.size()) {
    throw std::invalid_argument("phase vector length does not match the RIS size");
  }
  const double s = corr.element_area();
  const Eigen::VectorXcd d = phi.diagonal();
  // Phi^H R Phi has entries conj(d_l) R_lt d_t.
  const Eigen::MatrixXcd b = d.conjugate().asDiagonal() * r.cast<cplx>() * d.asDiagonal();
  const Eigen::MatrixXcd a = (s * s) * (b * r);
  TraceProducts tp;
  tp.tr_a = a.trace().real();
  // tr(A^2) = sum_ij A_ij A_ji without forming A^2.
  tp.tr_a2 = a.cwiseProduct(a.transpose()).sum().real();
  return tp;
}

void sample_channels(const LargeScaleState& ls, const CorrelationModel& corr,
                     const Eigen::VectorXcd& phi_diag, RngStream& rng, ChannelRealization& out) {
  const CorrelationShape& shape = corr.shape();
  if (!shape.can_sample()) throw std::logic_error("correlation shape was built without a factor");
  const auto M = static_cast<Eigen::Index>(ls.num_aps());
  const auto K = static_cast<Eigen::Index>(ls.num_users());
  const auto N = static_cast<Eigen::Index>(shape.size());
  const double s = shape.element_area;

  out.direct.resize(M, K);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index k = 0; k < K; ++k) out.direct(m, k) = rng.complex_normal(ls.beta(m, k));
  }

  // Whitened draws first, then colour and scale in place.
  out.ap_ris.resize(N, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index n = 0; n < N; ++n) out.ap_ris(n, m) = rng.complex_normal();
  }
  out.ris_user.resize(N, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index n = 0; n < N; ++n) out.ris_user(n, k) = rng.complex_normal();
  }
  out.ap_ris = shape.factor * out.ap_ris;
  out.ris_user = shape.factor * out.ris_user;
  for (Eigen::Index m = 0; m < M; ++m) {
    out.ap_ris.col(m) *= std::sqrt(corr.alpha()[static_cast<std::size_t>(m)] * s);
  }
  for (Eigen::Index k = 0; k < K; ++k) {
    out.ris_user.col(k) *= std::sqrt(corr.alpha_tilde()[static_cast<std::size_t>(k)] * s);
  }

  out.aggregated.resize(M, K);
  out.aggregated.noalias() = out.ap_ris.adjoint() * (phi_diag.asDiagonal() * out.ris_user);
  out.aggregated += out.direct;
}

ChannelRealization sample_channels(const LargeScaleState& ls, const CorrelationModel& corr,
                                   const PhaseShifts& phi, RngStream& rng) {
  ChannelRealization out;
  sample_channels(ls, corr, phi.diagonal(), rng, out);
  return out;
}

cplx aggregated_channel(cplx g, const Eigen::VectorXcd& h, const Eigen::VectorXcd& z,
                        const PhaseShifts& phi) {
  if (h.size() != z.size() || static_cast<std::size_t>(h.size()) != phi.size()) {
    throw std::invalid_argument("aggregated_channel: dimension mismatch");
  }
  return g + h.dot(phi.diagonal().cwiseProduct(z));  // dot conjugates h
}

Eigen::MatrixXcd aggregate(const Eigen::MatrixXcd& direct, const Eigen::MatrixXcd& ap_ris,
                           const Eigen::MatrixXcd& ris_user, const Eigen::VectorXcd& phi_diag) {
  return direct + ap_ris.adjoint() * (phi_diag.asDiagonal() * ris_user);
}

double aggregate_variance(const LargeScaleState& ls, const CorrelationModel& corr,
                          const TraceProducts& tp, std::size_t m, std::size_t k) {
  return ls.beta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) +
         theta_trace(corr, tp, m, k);
}

double aggregate_variance(const LargeScaleState& ls, const CorrelationModel& corr,
                          const PhaseShifts& phi, std::size_t m, std::size_t k) {
  return aggregate_variance(ls, corr, trace_products(corr, phi), m, k);
}

Eigen::MatrixXd aggregate_variances(const LargeScaleState& ls, const CorrelationModel& corr,
                                    const TraceProducts& tp) {
  Eigen::MatrixXd delta = ls.beta;
  for (Eigen::Index m = 0; m < delta.rows(); ++m) {
    for (Eigen::Index k = 0; k < delta.cols(); ++k) {
      delta(m, k) += theta_trace(corr, tp, static_cast<std::size_t>(m), static_cast<std::size_t>(k));
    }
  }
  return delta;
}

}  // namespace riscf
