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

#include "riscf/phase.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "riscf/estimation.hpp"

namespace riscf {

double wrap_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  if (theta >= -pi && theta <= pi) return theta;
  return std::remainder(theta, 2.0 * pi);
}

PhaseDesign equal_phase_design(double theta_bar, std::size_t num_elements) {
  PhaseDesign d;
  d.kind = PhaseKind::equal;
  d.theta_bar = wrap_angle(theta_bar);
  d.realized.theta.assign(num_elements, d.theta_bar);
  return d;
}

PhaseDesign random_phase_design(RngStream& rng, std::size_t num_elements) {
  PhaseDesign d;
  d.kind = PhaseKind::random;
  d.realized.theta.resize(num_elements);
  for (auto& t : d.realized.theta) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return d;
}

PhaseDesign random_phase_design(std::uint64_t seed, std::size_t num_elements) {
  RngStream rng(seed, StreamTag::phase, 0);
  PhaseDesign d = random_phase_design(rng, num_elements);
  d.seed = seed;
  return d;
}

PhaseDesign explicit_phase_design(std::vector<double> theta) {
  PhaseDesign d;
  d.kind = PhaseKind::explicit_angles;
  for (auto& t : theta) t = wrap_angle(t);
  d.realized.theta = std::move(theta);
  return d;
}

std::vector<double> read_phase_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open phase file " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(std::stod(line.substr(first)));
    } catch (const std::exception&) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": not a number");
    }
  }
  return out;
}

PhaseDesign parse_phase_spec(std::string_view spec, std::size_t num_elements) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("phase spec must be equal:<rad>, random:<seed> or file:<path>");
  }
  const std::string kind(spec.substr(0, colon));
  const std::string arg(spec.substr(colon + 1));
  try {
    if (kind == "equal") return equal_phase_design(std::stod(arg), num_elements);
    if (kind == "random") return random_phase_design(std::stoull(arg), num_elements);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad phase argument '" + arg + "'");
  }
  if (kind == "file") {
    auto angles = read_phase_file(arg);
    if (angles.size() != num_elements) {
      throw std::invalid_argument("phase file has " + std::to_string(angles.size()) +
                                  " angles, RIS has " + std::to_string(num_elements));
    }
    return explicit_phase_design(std::move(angles));
  }
  throw std::invalid_argument("unknown phase design '" + kind + "'");
}

double total_nmse(const LargeScaleState& ls, const CorrelationModel& corr, const PhaseShifts& phi,
                  const SystemConfig& cfg) {
  return estimator_stats(ls, corr, phi, cfg).nmse.sum();
}

OptimalityReport verify_equal_phase_optimality(const LargeScaleState& ls,
                                               const CorrelationModel& corr,
                                               const SystemConfig& cfg, std::size_t samples,
                                               std::uint64_t seed) {
  if ((ls.beta.array() != 0.0).any()) {
    throw std::invalid_argument("equal-phase optimality check needs all direct links blocked");
  }
  const std::size_t n = corr.num_elements();
  OptimalityReport rep;
  rep.samples = samples;
  rep.equal_value = total_nmse(ls, corr, equal_phase_design(0.0, n).realized, cfg);

  std::vector<double> values(samples);
  const auto count = static_cast<std::int64_t>(samples);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    RngStream rng(seed, StreamTag::verifier, static_cast<std::uint64_t>(i));
    values[static_cast<std::size_t>(i)] =
        total_nmse(ls, corr, random_phase_design(rng, n).realized, cfg);
  }

  rep.min_random = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    sum += values[i];
    if (values[i] < rep.min_random) {
      rep.min_random = values[i];
      rep.worst_index = i;
    }
  }
  rep.mean_random = samples ? sum / static_cast<double>(samples) : 0.0;
  rep.violated = samples > 0 && rep.min_random < rep.equal_value * (1.0 - 1e-9);
  return rep;
}

}  // namespace riscf
