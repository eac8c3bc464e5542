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

#include "riscf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace riscf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

template <typename T>
void read(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(std::string("field '") + key + "': " + e.what());
  }
}

Rect read_rect(const json& doc, const char* key, Rect fallback) {
  if (!doc.contains(key)) return fallback;
  const json& r = doc.at(key);
  try {
    if (r.is_array() && r.size() == 4) {
      return {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
    }
    return {r.at("x_min").get<double>(), r.at("x_max").get<double>(), r.at("y_min").get<double>(),
            r.at("y_max").get<double>()};
  } catch (const json::exception& e) {
    fail(std::string("field '") + key + "': expected [x_min,x_max,y_min,y_max] (" + e.what() + ")");
  }
}

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

bool inside_square(const Rect& r, double side) {
  const double h = 0.5 * side;
  return r.x_min >= -h && r.x_max <= h && r.y_min >= -h && r.y_max <= h;
}

}  // namespace

double noise_power_dbm(double bandwidth_mhz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

void SystemConfig::validate() const {
  if (num_aps < 1) fail("aps >= 1 violated");
  if (num_users < 1) fail("users >= 1 violated");
  if (ris_cols < 1 || ris_rows < 1) fail("ris_elements_h * ris_elements_v = N >= 1 violated");
  if (tau_p < 1) fail("tau_p >= 1 violated");
  if (!(tau_p < tau_c)) fail("tau_p < tau_c violated");
  if (!(pilot_snr > 0.0)) fail("pilot_snr > 0 violated");
  if (!(data_snr > 0.0)) fail("data_snr > 0 violated");
  if (eta.size() != num_users) fail("eta must have one entry per user");
  for (double e : eta) {
    if (!(e >= 0.0 && e <= 1.0)) fail("0 <= eta[k] <= 1 violated");
  }
  if (!(p_tilde >= 0.0 && p_tilde <= 1.0)) fail("0 <= p_tilde <= 1 violated");
  if (!(uplink_fraction >= 0.0 && uplink_fraction <= 1.0)) fail("0 <= uplink_fraction <= 1 violated");
  if (!(bandwidth_mhz > 0.0)) fail("bandwidth_mhz > 0 violated");
  if (!(wavelength_m > 0.0)) fail("wavelength_m > 0 violated");
  if (!(element_width_m > 0.0) || !(element_height_m > 0.0)) fail("element dimensions > 0 violated");
  if (!(area_side_km > 0.0)) fail("area_side_km > 0 violated");
  if (ap_region.empty()) fail("ap_region is empty");
  if (user_region.empty()) fail("user_region is empty");
  if (!inside_square(ap_region, area_side_km)) fail("ap_region outside the wrap-around square");
  if (!inside_square(user_region, area_side_km)) fail("user_region outside the wrap-around square");
  if (std::abs(ris_position.x) > 0.5 * area_side_km || std::abs(ris_position.y) > 0.5 * area_side_km) {
    fail("ris_position outside the wrap-around square");
  }
  if (!(path_loss.d0_km > 0.0 && path_loss.d0_km < path_loss.d1_km)) fail("0 < d0 < d1 violated");
  if (trials < 1) fail("trials >= 1 violated");
  if (p_tilde_grid.empty()) fail("p_tilde_grid is empty");
  for (double p : p_tilde_grid) {
    if (!(p >= 0.0 && p <= 1.0)) fail("p_tilde_grid entries must lie in [0,1]");
  }
}

SystemConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail("config root must be a JSON object");
  SystemConfig cfg;
  read(doc, "aps", cfg.num_aps);
  read(doc, "users", cfg.num_users);
  read(doc, "ris_elements_h", cfg.ris_cols);
  read(doc, "ris_elements_v", cfg.ris_rows);
  read(doc, "tau_c", cfg.tau_c);
  read(doc, "tau_p", cfg.tau_p);
  read(doc, "bandwidth_mhz", cfg.bandwidth_mhz);
  read(doc, "uplink_fraction", cfg.uplink_fraction);
  read(doc, "p_tilde", cfg.p_tilde);
  read(doc, "area_side_km", cfg.area_side_km);
  read(doc, "master_seed", cfg.master_seed);
  read(doc, "trials", cfg.trials);
  read(doc, "scenario_draws", cfg.scenario_draws);
  read(doc, "ap_height_m", cfg.ap_height_m);
  read(doc, "user_height_m", cfg.user_height_m);
  read(doc, "ris_height_m", cfg.ris_height_m);
  read(doc, "ris_gain_db", cfg.ris_gain_db);
  read(doc, "noise_figure_db", cfg.noise_figure_db);
  read(doc, "pilot_power_mw", cfg.pilot_power_mw);
  read(doc, "data_power_mw", cfg.data_power_mw);
  read(doc, "phase", cfg.phase);
  read(doc, "p_tilde_grid", cfg.p_tilde_grid);
  read(doc, "asymptotic_aps", cfg.asymptotic_aps);
  read(doc, "asymptotic_ris_side", cfg.asymptotic_ris_side);
  read(doc, "asymptotic_trials", cfg.asymptotic_trials);
  read(doc, "asymptotic_draws", cfg.asymptotic_draws);

  if (doc.contains("carrier_ghz") && !doc.contains("wavelength_m")) {
    double ghz = 0.0;
    read(doc, "carrier_ghz", ghz);
    if (!(ghz > 0.0)) fail("carrier_ghz > 0 violated");
    cfg.wavelength_m = 299792458.0 / (ghz * 1e9);
    cfg.path_loss.carrier_mhz = ghz * 1e3;
  }
  read(doc, "wavelength_m", cfg.wavelength_m);
  // Element size defaults to a quarter wavelength of whatever carrier is configured.
  cfg.element_width_m = cfg.wavelength_m / 4.0;
  cfg.element_height_m = cfg.wavelength_m / 4.0;
  read(doc, "element_width_m", cfg.element_width_m);
  read(doc, "element_height_m", cfg.element_height_m);

  cfg.ap_region = read_rect(doc, "ap_region", cfg.ap_region);
  cfg.user_region = read_rect(doc, "user_region", cfg.user_region);
  if (doc.contains("ris_position")) {
    std::vector<double> xy;
    read(doc, "ris_position", xy);
    if (xy.size() != 2) fail("field 'ris_position': expected [x, y]");
    cfg.ris_position = {xy[0], xy[1]};
  }

  if (doc.contains("path_loss")) {
    const json& pl = doc.at("path_loss");
    read(pl, "d0_km", cfg.path_loss.d0_km);
    read(pl, "d1_km", cfg.path_loss.d1_km);
    read(pl, "mid_exponent", cfg.path_loss.mid_exponent);
    read(pl, "far_exponent", cfg.path_loss.far_exponent);
    read(pl, "carrier_mhz", cfg.path_loss.carrier_mhz);
    if (pl.contains("reference_loss_db")) {
      double l = 0.0;
      read(pl, "reference_loss_db", l);
      cfg.path_loss.reference_loss_db = l;
    }
  }

  if (doc.contains("correlation")) {
    std::string kind;
    read(doc, "correlation", kind);
    if (kind == "correlated") {
      cfg.correlation = CorrelationKind::correlated;
    } else if (kind == "independent") {
      cfg.correlation = CorrelationKind::independent;
    } else {
      fail("field 'correlation': expected 'correlated' or 'independent'");
    }
  }

  const double noise_dbm = noise_power_dbm(cfg.bandwidth_mhz, cfg.noise_figure_db);
  cfg.pilot_snr = std::pow(10.0, (mw_to_dbm(cfg.pilot_power_mw) - noise_dbm) / 10.0);
  cfg.data_snr = std::pow(10.0, (mw_to_dbm(cfg.data_power_mw) - noise_dbm) / 10.0);
  read(doc, "pilot_snr", cfg.pilot_snr);
  read(doc, "data_snr", cfg.data_snr);

  if (doc.contains("eta")) {
    const json& e = doc.at("eta");
    if (e.is_number()) {
      cfg.eta.assign(cfg.num_users, e.get<double>());
    } else {
      read(doc, "eta", cfg.eta);
    }
  } else {
    cfg.eta.assign(cfg.num_users, 1.0);
  }

  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    fail("parse failure in " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::json config_to_json(const SystemConfig& cfg) {
  json pl = {{"d0_km", cfg.path_loss.d0_km},
             {"d1_km", cfg.path_loss.d1_km},
             {"mid_exponent", cfg.path_loss.mid_exponent},
             {"far_exponent", cfg.path_loss.far_exponent},
             {"carrier_mhz", cfg.path_loss.carrier_mhz}};
  if (cfg.path_loss.reference_loss_db) pl["reference_loss_db"] = *cfg.path_loss.reference_loss_db;
  auto rect = [](const Rect& r) { return json::array({r.x_min, r.x_max, r.y_min, r.y_max}); };
  return {
      {"aps", cfg.num_aps},
      {"users", cfg.num_users},
      {"ris_elements_h", cfg.ris_cols},
      {"ris_elements_v", cfg.ris_rows},
      {"tau_c", cfg.tau_c},
      {"tau_p", cfg.tau_p},
      {"pilot_snr", cfg.pilot_snr},
      {"data_snr", cfg.data_snr},
      {"eta", cfg.eta},
      {"bandwidth_mhz", cfg.bandwidth_mhz},
      {"uplink_fraction", cfg.uplink_fraction},
      {"wavelength_m", cfg.wavelength_m},
      {"element_width_m", cfg.element_width_m},
      {"element_height_m", cfg.element_height_m},
      {"p_tilde", cfg.p_tilde},
      {"area_side_km", cfg.area_side_km},
      {"master_seed", cfg.master_seed},
      {"trials", cfg.trials},
      {"scenario_draws", cfg.scenario_draws},
      {"ap_region", rect(cfg.ap_region)},
      {"user_region", rect(cfg.user_region)},
      {"ris_position", json::array({cfg.ris_position.x, cfg.ris_position.y})},
      {"ap_height_m", cfg.ap_height_m},
      {"user_height_m", cfg.user_height_m},
      {"ris_height_m", cfg.ris_height_m},
      {"path_loss", pl},
      {"ris_gain_db", cfg.ris_gain_db},
      {"noise_figure_db", cfg.noise_figure_db},
      {"pilot_power_mw", cfg.pilot_power_mw},
      {"data_power_mw", cfg.data_power_mw},
      {"correlation", cfg.correlation == CorrelationKind::correlated ? "correlated" : "independent"},
      {"phase", cfg.phase},
      {"p_tilde_grid", cfg.p_tilde_grid},
      {"asymptotic_aps", cfg.asymptotic_aps},
      {"asymptotic_ris_side", cfg.asymptotic_ris_side},
      {"asymptotic_trials", cfg.asymptotic_trials},
      {"asymptotic_draws", cfg.asymptotic_draws},
  };
}

double wrap_distance(const Point2& a, const Point2& b, double side) {
  auto axis = [side](double d) {
    d = std::fmod(std::abs(d), side);
    return std::min(d, side - d);
  };
  return std::hypot(axis(a.x - b.x), axis(a.y - b.y));
}

Geometry generate_geometry(const SystemConfig& cfg, const Rect& ap_region, const Rect& user_region,
                           RngStream& rng) {
  if (ap_region.empty()) throw ConfigError("empty AP region");
  if (user_region.empty()) throw ConfigError("empty user region");
  if (!inside_square(ap_region, cfg.area_side_km) || !inside_square(user_region, cfg.area_side_km)) {
    throw ConfigError("placement region outside the wrap-around square");
  }
  Geometry g;
  g.ap_positions.reserve(cfg.num_aps);
  for (std::size_t m = 0; m < cfg.num_aps; ++m) {
    const double x = rng.uniform(ap_region.x_min, ap_region.x_max);
    const double y = rng.uniform(ap_region.y_min, ap_region.y_max);
    g.ap_positions.push_back({x, y});
  }
  g.user_positions.reserve(cfg.num_users);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    const double x = rng.uniform(user_region.x_min, user_region.x_max);
    const double y = rng.uniform(user_region.y_min, user_region.y_max);
    g.user_positions.push_back({x, y});
  }
  g.ris_position = cfg.ris_position;
  g.ap_height_m = cfg.ap_height_m;
  g.user_height_m = cfg.user_height_m;
  g.ris_height_m = cfg.ris_height_m;
  return g;
}

Geometry generate_geometry(const SystemConfig& cfg, RngStream& rng) {
  return generate_geometry(cfg, cfg.ap_region, cfg.user_region, rng);
}

}  // namespace riscf
