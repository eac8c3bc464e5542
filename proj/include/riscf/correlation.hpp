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

#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "riscf/config.hpp"

namespace riscf {

/// RIS element grid. Element x (0-based here) sits at
/// [0, (x mod cols) * d_h, floor(x / cols) * d_v] in metres.
struct ElementLayout {
  std::size_t cols = 1;  // elements per row (N_H)
  std::size_t rows = 1;  // elements per column (N_V)
  double d_h = 0.0;
  double d_v = 0.0;
  std::vector<Eigen::Vector3d> positions;

  std::size_t size() const { return positions.size(); }
};

ElementLayout element_positions(std::size_t cols, std::size_t rows, double d_h, double d_v);

/// Normalized sinc, sin(pi x)/(pi x), with a series branch around zero.
double sinc(double x);

/// [R]_{lt} = sinc(2 |u_l - u_t| / lambda).
Eigen::MatrixXd build_sinc_matrix(const ElementLayout& layout, double wavelength_m);

class IndefiniteMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F with F F^T = R from the eigendecomposition of a symmetric R. Eigenvalues in
/// [-tolerance * max(1, |lambda|_max), 0) are clipped to zero; anything more
/// negative throws IndefiniteMatrixError.
Eigen::MatrixXd factorize_psd(const Eigen::MatrixXd& r, double tolerance = 1e-10);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& r);

/// Shared N x N correlation structure. Built once per scenario family and
/// referenced by every covariance; never copied per link.
struct CorrelationShape {
  ElementLayout layout;
  Eigen::MatrixXd r;       // unit-diagonal correlation
  Eigen::MatrixXd factor;  // empty unless built with sampling support
  double element_area = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(r.rows()); }
  bool can_sample() const { return factor.size() > 0; }
};

/// Sinc correlation for `correlated`, identity for `independent`. The eigen
/// factor is only computed when `with_factor` is set (it is O(N^3) and only the
/// Monte-Carlo paths need it).
std::shared_ptr<const CorrelationShape> make_correlation_shape(const SystemConfig& cfg,
                                                               bool with_factor = true);
std::shared_ptr<const CorrelationShape> make_correlation_shape(const ElementLayout& layout,
                                                               double wavelength_m,
                                                               CorrelationKind kind,
                                                               bool with_factor = true);

/// scale * R, with R held by reference. For an AP this is alpha_m d_H d_V R.
struct Covariance {
  double scale = 0.0;
  const Eigen::MatrixXd* shape = nullptr;

  double trace() const { return scale * shape->trace(); }
  Eigen::MatrixXd dense() const { return scale * (*shape); }
};

/// Per-AP and per-user large-scale scalars on top of one shared shape:
/// R_m = alpha[m] d_H d_V R and R~_k = alpha_tilde[k] d_H d_V R.
class CorrelationModel {
 public:
  CorrelationModel() = default;
  CorrelationModel(std::shared_ptr<const CorrelationShape> shape, std::vector<double> alpha,
                   std::vector<double> alpha_tilde);

  const CorrelationShape& shape() const { return *shape_; }
  std::shared_ptr<const CorrelationShape> shared_shape() const { return shape_; }
  const Eigen::MatrixXd& r() const { return shape_->r; }
  double element_area() const { return shape_->element_area; }
  std::size_t num_elements() const { return shape_->size(); }

  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& alpha_tilde() const { return alpha_tilde_; }

  Covariance ap_covariance(std::size_t m) const { return {alpha_[m] * element_area(), &shape_->r}; }
  Covariance user_covariance(std::size_t k) const {
    return {alpha_tilde_[k] * element_area(), &shape_->r};
  }

  /// Same shape, all RIS-link scalars zeroed (no RIS deployed).
  CorrelationModel without_ris() const;

 private:
  std::shared_ptr<const CorrelationShape> shape_;
  std::vector<double> alpha_;
  std::vector<double> alpha_tilde_;
};

}  // namespace riscf
