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

#include <complex>
#include <cstdint>
#include <random>

namespace riscf {

// Purpose tags for sub-stream derivation. Values are part of the reproducibility
// contract: changing one changes every seeded result that uses it.
enum class StreamTag : std::uint64_t {
  geometry = 1,
  blocking = 2,
  phase = 3,
  channel = 4,
  pilot_noise = 5,
  data_noise = 6,
  symbols = 7,
  verifier = 8,
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed of the sub-stream identified by (master, tag, index).
std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index);

/// One independent random stream. Cheap to construct; create one per task and
/// never share it between threads.
class RngStream {
 public:
  RngStream(std::uint64_t master, StreamTag tag, std::uint64_t index);
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  double normal();
  bool bernoulli(double p);

  // CN(0, variance): independent real and imaginary parts of variance/2 each.
  std::complex<double> complex_normal(double variance = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace riscf
