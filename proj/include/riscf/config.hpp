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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riscf/path_loss.hpp"
#include "riscf/rng.hpp"

namespace riscf {

/// Raised for unreadable or invalid scenario files. The message names the
/// offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

/// Axis-aligned box in km.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool empty() const { return !(x_max > x_min) || !(y_max > y_min); }
  bool contains(const Point2& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

enum class CorrelationKind { correlated, independent };

/// Every scalar parameter of one scenario. See README.md for the JSON keys
/// and defaults.
struct SystemConfig {
  std::size_t num_aps = 100;
  std::size_t num_users = 10;
  std::size_t ris_cols = 30;  // elements per row
  std::size_t ris_rows = 30;  // elements per column
  std::size_t tau_c = 200;
  std::size_t tau_p = 5;

  double pilot_snr = 0.0;  // normalized p
  double data_snr = 0.0;   // normalized rho
  std::vector<double> eta;

  double bandwidth_mhz = 20.0;
  double uplink_fraction = 1.0;
  double wavelength_m = 299792458.0 / 1.9e9;
  double element_width_m = 299792458.0 / 1.9e9 / 4.0;
  double element_height_m = 299792458.0 / 1.9e9 / 4.0;
  double p_tilde = 0.2;
  double area_side_km = 2.0;

  std::uint64_t master_seed = 1;
  std::size_t trials = 100000;
  std::size_t scenario_draws = 50;

  Rect ap_region{-0.75, -0.5, -0.75, -0.5};
  Rect user_region{0.375, 0.75, 0.375, 0.75};
  Point2 ris_position{0.0, 0.0};
  double ap_height_m = 15.0;
  double user_height_m = 1.65;
  double ris_height_m = 30.0;

  PathLossParams path_loss;
  double ris_gain_db = 0.0;  // extra gain on each RIS hop
  double noise_figure_db = 9.0;
  double pilot_power_mw = 100.0;
  double data_power_mw = 100.0;

  CorrelationKind correlation = CorrelationKind::correlated;
  std::string phase = "equal:0.7853981633974483";

  std::vector<double> p_tilde_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<std::size_t> asymptotic_aps{50, 100, 200, 400};
  std::vector<std::size_t> asymptotic_ris_side{2, 4, 6, 8};
  std::size_t asymptotic_trials = 2000;
  std::size_t asymptotic_draws = 6;

  std::size_t num_elements() const { return ris_cols * ris_rows; }
  double element_area() const { return element_width_m * element_height_m; }
  double pilot_gain() const { return pilot_snr * static_cast<double>(tau_p); }  // p * tau_p
  double prelog() const {
    return bandwidth_mhz * uplink_fraction *
           (1.0 - static_cast<double>(tau_p) / static_cast<double>(tau_c));
  }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Noise power in dBm for the given bandwidth and noise figure (-174 dBm/Hz floor).
double noise_power_dbm(double bandwidth_mhz, double noise_figure_db);

SystemConfig config_from_json(const nlohmann::json& doc);
SystemConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const SystemConfig& cfg);

struct Geometry {
  std::vector<Point2> ap_positions;
  std::vector<Point2> user_positions;
  Point2 ris_position;
  double ap_height_m = 15.0;
  double user_height_m = 1.65;
  double ris_height_m = 30.0;
};

/// Toroidal distance on a square of side `side`: per-axis min(|d|, side - |d|).
double wrap_distance(const Point2& a, const Point2& b, double side);

/// AP and user positions i.i.d. uniform in their regions; the RIS sits at the
/// configured position.
Geometry generate_geometry(const SystemConfig& cfg, const Rect& ap_region, const Rect& user_region,
                           RngStream& rng);
Geometry generate_geometry(const SystemConfig& cfg, RngStream& rng);

}  // namespace riscf
