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

#include <optional>

namespace riscf {

/// Constants of the three-slope large-scale model. Distances in km, losses in dB.
///
/// Below `d0_km` the loss is flat, between the breakpoints it decays with
/// `mid_exponent`, and beyond `d1_km` with `far_exponent`. The reference loss is
/// COST231-Hata at `carrier_mhz` for the link's base/mobile heights unless
/// `reference_loss_db` pins it explicitly.
struct PathLossParams {
  double d0_km = 0.01;
  double d1_km = 0.05;
  double mid_exponent = 2.0;
  double far_exponent = 3.5;
  double carrier_mhz = 1900.0;
  std::optional<double> reference_loss_db;
};

/// COST231-Hata reference loss L in dB (urban, medium city correction).
double cost231_reference_loss_db(double carrier_mhz, double base_height_m, double mobile_height_m);

}  // namespace riscf
