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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "riscf/channel.hpp"
#include "riscf/rng.hpp"

using namespace riscf;
using namespace riscf::testing;

namespace {

// Dense tr(Phi^H R_m Phi R~_k), built from explicit matrices.
double dense_theta_trace(const CorrelationModel& corr, const PhaseShifts& phi, std::size_t m,
                         std::size_t k) {
  const Eigen::MatrixXcd p = phi.diagonal().asDiagonal();
  const Eigen::MatrixXcd rm = corr.ap_covariance(m).dense().cast<cplx>();
  const Eigen::MatrixXcd rk = corr.user_covariance(k).dense().cast<cplx>();
  return (p.adjoint() * rm * p * rk).trace().real();
}

PhaseShifts random_phases(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> t(n);
  for (auto& x : t) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return phases(t);
}

}  // namespace

TEST_CASE("aggregated_channel: unit vectors, no RIS path, phase periodicity") {
  const Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(3, 0);
  CHECK(aggregated_channel(0.0, e1, e1, phases({0, 0, 0})) == cplx(1.0, 0.0));
  CHECK(aggregated_channel(cplx(0.3, -0.2), e1, Eigen::VectorXcd::Zero(3), phases({1, 2, 3})) ==
        cplx(0.3, -0.2));

  RngStream rng(2);
  Eigen::VectorXcd h(5), z(5);
  for (auto& x : h) x = rng.complex_normal();
  for (auto& x : z) x = rng.complex_normal();
  const PhaseShifts phi = random_phases(5, 8);
  PhaseShifts shifted = phi;
  for (auto& t : shifted.theta) t += 2.0 * std::numbers::pi;
  const cplx a = aggregated_channel(0.1, h, z, phi);
  const cplx b = aggregated_channel(0.1, h, z, shifted);
  CHECK(std::abs(a - b) < 1e-13);
  // g + h^H Phi z evaluated by hand.
  cplx hand = 0.1;
  for (Eigen::Index n = 0; n < 5; ++n) hand += std::conj(h[n]) * std::polar(1.0, phi.theta[n]) * z[n];
  CHECK(std::abs(a - hand) < 1e-13);

  CHECK_THROWS_AS(aggregated_channel(0.0, h, Eigen::VectorXcd::Zero(4), phi), std::invalid_argument);
}

TEST_CASE("aggregate_variance: identity statistics and no RIS") {
  const auto shape = toy_shape(3, 1.0, 1.0, CorrelationKind::independent);
  const auto cfg = toy_config(2, 2, 2, 1.0, 1.0);
  Eigen::MatrixXd beta(2, 2);
  beta << 0.5, 0.0, 1.5, 2.0;
  const Toy t = make_toy(cfg, beta, {1.0, 1.0}, {1.0, 1.0}, shape);
  const PhaseShifts phi = random_phases(9, 3);
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(aggregate_variance(t.ls, t.corr, phi, m, k) == doctest::Approx(beta(m, k) + 9.0));
      CHECK(aggregate_variance(t.ls, t.corr.without_ris(), phi, m, k) == beta(m, k));
    }
  }
}

TEST_CASE("trace products: cached reduction equals dense evaluation") {
  const double lambda = 0.2;
  const auto shape = toy_shape(3, lambda / 4, lambda, CorrelationKind::correlated);
  const auto cfg = toy_config(3, 2, 1, 1.0, 1.0);
  const Toy t = make_toy(cfg, Eigen::MatrixXd::Zero(3, 2), {0.7, 1.3, 2.1}, {0.4, 1.9}, shape);
  const PhaseShifts phi = random_phases(9, 17);
  const TraceProducts tp = trace_products(t.corr, phi);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(rel_err(theta_trace(t.corr, tp, m, k), dense_theta_trace(t.corr, phi, m, k)) <= 1e-12);
    }
  }

  // Phi = I, R = I: tr(A^2) = N s^4.
  const double s = 0.3;
  const auto eye = make_correlation_shape(element_positions(2, 4, s, s), 1.0,
                                          CorrelationKind::independent, false);
  const CorrelationModel unit(eye, {1.0}, {1.0});
  const TraceProducts ti = trace_products(unit, phases(std::vector<double>(8, 0.0)));
  CHECK(ti.tr_a2 == doctest::Approx(8.0 * std::pow(s * s, 4)).epsilon(1e-13));
  CHECK(ti.tr_a == doctest::Approx(8.0 * std::pow(s * s, 2)).epsilon(1e-13));

  // Equal phases: tr(A) = s^2 tr(R R).
  const TraceProducts te = trace_products(t.corr, phases(std::vector<double>(9, 0.4)));
  const Eigen::MatrixXd r = shape->r;
  const double area = shape->element_area;
  CHECK(rel_err(te.tr_a, area * area * (r * r).trace()) <= 1e-12);

  CHECK_THROWS_AS(trace_products(t.corr, phases({0.0})), std::invalid_argument);
}

TEST_CASE("trace inequality chain and positivity on random scenarios") {
  const double lambda = 299792458.0 / 1.9e9;
  RngStream rng(123);
  for (std::size_t side : {2u, 4u}) {
    const auto shape = toy_shape(side, lambda / 4, lambda, CorrelationKind::correlated);
    const double r_norm = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(shape->r).eigenvalues().maxCoeff();
    const double n = static_cast<double>(side * side);
    for (int trial = 0; trial < 20; ++trial) {
      const double am = std::exp(rng.uniform(-5.0, 5.0));
      const double ak = std::exp(rng.uniform(-5.0, 5.0));
      const CorrelationModel corr(shape, {am}, {ak});
      const PhaseShifts phi = random_phases(side * side, 1000 + trial);
      const TraceProducts tp = trace_products(corr, phi);
      const double lhs = theta_trace(corr, tp, 0, 0) / n;
      const double rhs = ak * shape->element_area * r_norm * corr.ap_covariance(0).trace() / n;
      CHECK(lhs > 0.0);
      CHECK(lhs <= rhs * (1.0 + 1e-12));
      CHECK(tp.tr_a2 >= 0.0);
    }
  }
}

TEST_CASE("sample_channels: zero-variance direct link is exactly zero") {
  const auto shape = toy_shape(2, 0.05, 0.2, CorrelationKind::correlated);
  const auto cfg = toy_config(2, 2, 1, 1.0, 1.0);
  Eigen::MatrixXd beta(2, 2);
  beta << 1.0, 0.0, 0.0, 2.0;
  const Toy t = make_toy(cfg, beta, {1.0, 1.0}, {1.0, 1.0}, shape);
  RngStream rng(4);
  const auto ch = sample_channels(t.ls, t.corr, phases({0, 0, 0, 0}), rng);
  CHECK(ch.direct(0, 1) == cplx(0.0, 0.0));
  CHECK(ch.direct(1, 0) == cplx(0.0, 0.0));
  CHECK(ch.direct(0, 0) != cplx(0.0, 0.0));
  // u = g + h^H Phi z holds exactly for the stored realization.
  const auto phi = phases({0.1, 0.2, -0.3, 3.0});
  RngStream r2(5);
  const auto c2 = sample_channels(t.ls, t.corr, phi, r2);
  for (Eigen::Index m = 0; m < 2; ++m) {
    for (Eigen::Index k = 0; k < 2; ++k) {
      const cplx u = aggregated_channel(c2.direct(m, k), c2.ap_ris.col(m), c2.ris_user.col(k), phi);
      CHECK(std::abs(u - c2.aggregated(m, k)) < 1e-13);
    }
  }
}

TEST_CASE("sample_channels: deterministic per stream") {
  const auto shape = toy_shape(2, 0.05, 0.2, CorrelationKind::correlated);
  const auto cfg = toy_config(3, 2, 1, 1.0, 1.0);
  const Toy t = make_toy(cfg, Eigen::MatrixXd::Ones(3, 2), {1.0, 2.0, 3.0}, {1.0, 0.5}, shape);
  RngStream a(1, StreamTag::channel, 7), b(1, StreamTag::channel, 7);
  const auto phi = phases({0.1, 0.2, 0.3, 0.4});
  CHECK(sample_channels(t.ls, t.corr, phi, a).aggregated ==
        sample_channels(t.ls, t.corr, phi, b).aggregated);
}

TEST_CASE("sample_channels: AP-RIS covariance and aggregate variance by Monte Carlo") {
  const double lambda = 0.2;
  const auto shape = toy_shape(2, lambda / 4, lambda, CorrelationKind::correlated);
  const auto cfg = toy_config(2, 2, 1, 1.0, 1.0);
  Eigen::MatrixXd beta(2, 2);
  beta << 0.8, 0.0, 0.3, 1.1;
  const Toy t = make_toy(cfg, beta, {3.0, 50.0}, {40.0, 7.0}, shape);
  const PhaseShifts phi = random_phases(4, 21);
  const TraceProducts tp = trace_products(t.corr, phi);

  const int n = 100000;
  RngStream rng(31);
  ChannelRealization ch;
  const Eigen::VectorXcd pd = phi.diagonal();
  Eigen::MatrixXcd sum_hh = Eigen::MatrixXcd::Zero(4, 4);
  Eigen::MatrixXd sum_abs2 = Eigen::MatrixXd::Zero(4, 4);  // for per-entry standard errors
  Eigen::MatrixXd sum_u2 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd sum_u4 = Eigen::MatrixXd::Zero(2, 2);
  cplx sum_u = 0.0;
  for (int i = 0; i < n; ++i) {
    sample_channels(t.ls, t.corr, pd, rng, ch);
    const Eigen::VectorXcd h = ch.ap_ris.col(1);
    const Eigen::MatrixXcd outer = h * h.adjoint();
    sum_hh += outer;
    sum_abs2 += outer.cwiseAbs2();
    const Eigen::MatrixXd u2 = ch.aggregated.cwiseAbs2();
    sum_u2 += u2;
    sum_u4 += u2.cwiseAbs2();
    sum_u += ch.aggregated(0, 0);
  }
  const Eigen::MatrixXcd mean_hh = sum_hh / n;
  const Eigen::MatrixXd expected = t.corr.ap_covariance(1).dense();
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double var = sum_abs2(i, j) / n - std::norm(mean_hh(i, j));
      const double se = std::sqrt(var / n);
      CHECK(std::abs(mean_hh(i, j) - expected(i, j)) <= 3.0 * se);
    }
  }
  const Eigen::MatrixXd delta = aggregate_variances(t.ls, t.corr, tp);
  for (Eigen::Index m = 0; m < 2; ++m) {
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double mean = sum_u2(m, k) / n;
      const double se = std::sqrt((sum_u4(m, k) / n - mean * mean) / n);
      CHECK(std::abs(mean - delta(m, k)) <= 3.0 * se);
    }
  }
  CHECK(std::abs(sum_u / static_cast<double>(n)) <= 4.0 * std::sqrt(delta(0, 0) / n));
}
