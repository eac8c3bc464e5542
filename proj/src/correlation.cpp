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

#include "riscf/correlation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace riscf {

ElementLayout element_positions(std::size_t cols, std::size_t rows, double d_h, double d_v) {
  ElementLayout layout{cols, rows, d_h, d_v, {}};
  layout.positions.reserve(cols * rows);
  for (std::size_t x = 0; x < cols * rows; ++x) {
    layout.positions.emplace_back(0.0, static_cast<double>(x % cols) * d_h,
                                  static_cast<double>(x / cols) * d_v);
  }
  return layout;
}

double sinc(double x) {
  const double px = std::numbers::pi * x;
  if (std::abs(px) < 1e-4) {
    const double p2 = px * px;
    return 1.0 - p2 / 6.0 + p2 * p2 / 120.0;
  }
  return std::sin(px) / px;
}

Eigen::MatrixXd build_sinc_matrix(const ElementLayout& layout, double wavelength_m) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    r(l, l) = 1.0;
    for (Eigen::Index t = l + 1; t < n; ++t) {
      const double d = (layout.positions[l] - layout.positions[t]).norm();
      const double v = sinc(2.0 * d / wavelength_m);
      r(l, t) = v;
      r(t, l) = v;
    }
  }
  return r;
}

double min_eigenvalue(const Eigen::MatrixXd& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd factorize_psd(const Eigen::MatrixXd& r, double tolerance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  if (es.info() != Eigen::Success) throw IndefiniteMatrixError("eigendecomposition failed");
  Eigen::VectorXd lambda = es.eigenvalues();
  const double floor = -tolerance * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < floor) {
    std::ostringstream os;
    os << "matrix is indefinite: min eigenvalue " << lambda.minCoeff();
    throw IndefiniteMatrixError(os.str());
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lambda.asDiagonal();
}

std::shared_ptr<const CorrelationShape> make_correlation_shape(const ElementLayout& layout,
                                                               double wavelength_m,
                                                               CorrelationKind kind,
                                                               bool with_factor) {
  auto shape = std::make_shared<CorrelationShape>();
  shape->layout = layout;
  shape->element_area = layout.d_h * layout.d_v;
  const auto n = static_cast<Eigen::Index>(layout.size());
  if (kind == CorrelationKind::independent) {
    shape->r = Eigen::MatrixXd::Identity(n, n);
    if (with_factor) shape->factor = Eigen::MatrixXd::Identity(n, n);
  } else {
    shape->r = build_sinc_matrix(layout, wavelength_m);
    if (with_factor) shape->factor = factorize_psd(shape->r);
  }
  return shape;
}

std::shared_ptr<const CorrelationShape> make_correlation_shape(const SystemConfig& cfg,
                                                               bool with_factor) {
  return make_correlation_shape(
      element_positions(cfg.ris_cols, cfg.ris_rows, cfg.element_width_m, cfg.element_height_m),
      cfg.wavelength_m, cfg.correlation, with_factor);
}

CorrelationModel::CorrelationModel(std::shared_ptr<const CorrelationShape> shape,
                                   std::vector<double> alpha, std::vector<double> alpha_tilde)
    : shape_(std::move(shape)), alpha_(std::move(alpha)), alpha_tilde_(std::move(alpha_tilde)) {}

CorrelationModel CorrelationModel::without_ris() const {
  return {shape_, std::vector<double>(alpha_.size(), 0.0),
          std::vector<double>(alpha_tilde_.size(), 0.0)};
}

}  // namespace riscf
