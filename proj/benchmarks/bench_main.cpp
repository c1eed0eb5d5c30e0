// Copyright 2026 The lqrflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "lqrflow/flow.hpp"
#include "lqrflow/lqr.hpp"
#include "lqrflow/overparam.hpp"
#include "lqrflow/pli.hpp"
#include "lqrflow/presets.hpp"

namespace {

using namespace lqrflow;

void BM_LyapunovSolve(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Mat a = -(5.0 * Mat::Identity(n, n)) + 0.1 * Mat::Ones(n, n);
  const Mat w = Mat::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(a, w));
}
BENCHMARK(BM_LyapunovSolve)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

void BM_CostAndGradientG1(benchmark::State& state) {
  const LtiSystem sys = presets::g1();
  const Mat k = presets::k_minus0();
  for (auto _ : state) benchmark::DoNotOptimize(lqr_cost_and_gradient(sys, k));
}
BENCHMARK(BM_CostAndGradientG1);

void BM_RiccatiG2(benchmark::State& state) {
  const LtiSystem sys = presets::g2();
  for (auto _ : state) benchmark::DoNotOptimize(solve_riccati(sys));
}
BENCHMARK(BM_RiccatiG2);

void BM_StandardFlowG1(benchmark::State& state) {
  const LtiSystem sys = presets::g1();
  const double j_min = solve_riccati(sys).cost;
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow_standard(sys, presets::k_minus0(), cfg, j_min));
  }
}
BENCHMARK(BM_StandardFlowG1)->Unit(benchmark::kMillisecond);

void BM_FactoredFlowG1(benchmark::State& state) {
  const LtiSystem sys = presets::g1();
  const double j_min = solve_riccati(sys).cost;
  const FactoredGain fg = remark2_factorize(presets::k_minus0(), presets::kKappa, 1);
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(flow_factored(sys, fg, cfg, j_min));
}
BENCHMARK(BM_FactoredFlowG1)->Unit(benchmark::kMillisecond);

void BM_GpliSamples(benchmark::State& state) {
  const ScalarProblem p{-1.0, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(verify_gpli_samples(p, 2.0, 2, 1000, 1));
}
BENCHMARK(BM_GpliSamples)->Unit(benchmark::kMillisecond);

void BM_ClassifyProfile(benchmark::State& state) {
  std::vector<double> t, g;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    t.push_back(0.01 * i);
    g.push_back(std::exp(-t.back()) + 1e-3 * std::max(0.0, 5.0 - t.back()));
  }
  for (auto _ : state) benchmark::DoNotOptimize(classify_profile(t, g));
}
BENCHMARK(BM_ClassifyProfile)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
