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

// Serial reference vs OpenMP Monte-Carlo SINR kernel on the desk scenario.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "riscf/config.hpp"
#include "riscf/correlation.hpp"
#include "riscf/montecarlo.hpp"
#include "riscf/phase.hpp"
#include "riscf/scenario.hpp"

namespace {

using namespace riscf;

struct DeskFixture {
  SystemConfig cfg = load_config(RISCF_SOURCE_DIR "/configs/desk.json");
  Scenario sc = build_scenario(cfg, make_correlation_shape(cfg, true), 0);
  PhaseShifts phi = parse_phase_spec(cfg.phase, cfg.num_elements()).realized;
  McProblem problem{sc.large_scale, sc.correlation, phi, sc.cfg};
};

const DeskFixture& fixture() {
  static const DeskFixture f;
  return f;
}

McOptions options(benchmark::State& state) {
  McOptions opt;
  opt.trials = static_cast<std::size_t>(state.range(0));
  opt.batches = 64;
  opt.seed = 7;
  return opt;
}

void BM_Serial(benchmark::State& state) {
  const auto& f = fixture();
  const McOptions opt = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_sinr_serial(f.problem, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OpenMP(benchmark::State& state) {
  const auto& f = fixture();
  const McOptions opt = options(state);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_sinr(f.problem, opt));
  omp_set_num_threads(saved);
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = static_cast<double>(state.range(1));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OpenMP)
    ->ArgsProduct({{20000, 100000}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
