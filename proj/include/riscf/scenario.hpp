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
#include <memory>
#include <string_view>

#include "riscf/config.hpp"
#include "riscf/correlation.hpp"
#include "riscf/propagation.hpp"

namespace riscf {

/// The three compared deployments. All share geometry and blocking draws for a
/// given draw index, so comparisons are paired.
enum class SystemVariant {
  ris_cell_free,  // direct links unblocked with p_tilde, RIS present
  cell_free,      // same draws, RIS scalars zeroed
  ris_no_los,     // every direct link blocked, RIS present
};

std::string_view variant_name(SystemVariant v);

struct Scenario {
  SystemConfig cfg;
  Geometry geometry;
  LargeScaleState large_scale;
  CorrelationModel correlation;
};

/// Draw `draw_index` of the scenario family defined by cfg. Geometry and
/// blocking uniforms come from sub-streams keyed by the draw index; `p_tilde`
/// only thresholds the blocking uniforms.
Scenario build_scenario(const SystemConfig& cfg, std::shared_ptr<const CorrelationShape> shape,
                        std::uint64_t draw_index, double p_tilde, SystemVariant variant);
Scenario build_scenario(const SystemConfig& cfg, std::shared_ptr<const CorrelationShape> shape,
                        std::uint64_t draw_index = 0);

/// Keeps the first `num_aps` APs of a scenario; nested AP sets share every other draw.
Scenario restrict_aps(const Scenario& sc, std::size_t num_aps);

}  // namespace riscf
