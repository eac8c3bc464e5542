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
#include <string_view>
#include <vector>

#include "riscf/channel.hpp"
#include "riscf/config.hpp"
#include "riscf/propagation.hpp"

namespace riscf {

enum class PhaseKind { equal, random, explicit_angles };

struct PhaseDesign {
  PhaseKind kind = PhaseKind::equal;
  double theta_bar = 0.0;    // equal designs
  std::uint64_t seed = 0;    // random designs
  PhaseShifts realized;      // angles wrapped into [-pi, pi]
};

/// Maps an angle into [-pi, pi].
double wrap_angle(double theta);

PhaseDesign equal_phase_design(double theta_bar, std::size_t num_elements);
PhaseDesign random_phase_design(RngStream& rng, std::size_t num_elements);
PhaseDesign random_phase_design(std::uint64_t seed, std::size_t num_elements);
PhaseDesign explicit_phase_design(std::vector<double> theta);

/// One angle (radians) per line; blank lines and '#' comments are skipped.
std::vector<double> read_phase_file(const std::filesystem::path& path);

/// Parses "equal:<rad>", "random:<seed>" or "file:<path>". Throws
/// std::invalid_argument on malformed input or a length mismatch.
PhaseDesign parse_phase_spec(std::string_view spec, std::size_t num_elements);

/// Sum over all (m, k) of NMSE_mk for the given Phi.
double total_nmse(const LargeScaleState& ls, const CorrelationModel& corr, const PhaseShifts& phi,
                  const SystemConfig& cfg);

struct OptimalityReport {
  double equal_value = 0.0;
  double min_random = 0.0;
  double mean_random = 0.0;
  std::size_t samples = 0;
  std::size_t worst_index = 0;  // design achieving min_random
  bool violated = false;        // some random design beat equal phase by > 1e-9 relative
};

/// Samples random designs and compares their total NMSE with the equal-phase
/// design. Requires every direct link to be absent (beta == 0). Designs are
/// evaluated in parallel; the result does not depend on the thread count.
OptimalityReport verify_equal_phase_optimality(const LargeScaleState& ls,
                                               const CorrelationModel& corr,
                                               const SystemConfig& cfg, std::size_t samples,
                                               std::uint64_t seed);

}  // namespace riscf
