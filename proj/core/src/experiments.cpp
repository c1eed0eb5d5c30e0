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


#include "lqrflow/experiments.hpp"

#include <cmath>
#include <future>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "json.hpp"
#include "lqrflow/overparam.hpp"
#include "lqrflow/pli.hpp"
#include "lqrflow/presets.hpp"

namespace lqrflow {
namespace {

using json = nlohmann::json;

constexpr double kScalarStartMultiple = 1e3;
constexpr double kScalarFactoredHorizon = 30.0;
constexpr double kScalarFactoredStride = 0.05;
constexpr std::size_t kScalarStandardPoints = 4000;

LegResult finish_leg(std::string name, Trajectory traj, double j_min, std::string echo,
                     std::uint64_t seed, const std::filesystem::path& out_dir,
                     const OutputBlock& output = {}) {
  LegResult leg;
  leg.summary = summarize(name, traj, j_min, std::move(echo), seed);
  if (!out_dir.empty()) {
    if (output.csv) write_trajectory_csv(traj, out_dir / (name + ".csv"));
    if (output.summary) {
      write_text_file(out_dir / (name + ".summary.json"), summary_to_json(leg.summary));
    }
  }
  leg.name = std::move(name);
  leg.trajectory = std::move(traj);
  return leg;
}

// Echoes omit the output directory so reruns into different places stay byte-identical.
ExperimentConfig preset_config(const std::string& preset, const IntegratorConfig& cfg) {
  ExperimentConfig c;
  c.system.preset = preset;
  c.integrator = cfg;
  return c;
}

std::string echo_gain(ExperimentConfig c, const Mat& k) {
  c.init.kind = InitKind::kGain;
  c.init.k = k;
  return config_to_json(c);
}

std::string echo_factors(ExperimentConfig c, const FactoredGain& fg) {
  c.init.kind = InitKind::kFactors;
  c.init.k1 = fg.k1;
  c.init.k2 = fg.k2;
  return config_to_json(c);
}

ExperimentConfig scalar_config(const ScalarProblem& p, const IntegratorConfig& cfg) {
  ExperimentConfig c;
  c.system.a = Mat::Constant(1, 1, p.a);
  c.system.b = Mat::Constant(1, 1, 1.0);
  c.system.q = Mat::Constant(1, 1, p.q);
  c.system.r = Mat::Constant(1, 1, p.r);
  c.system.sigma = Mat::Constant(1, 1, 1.0);
  c.integrator = cfg;
  return c;
}

void require_stabilizing(const LtiSystem& sys, const Mat& k, std::string_view what) {
  const double abscissa = spectral_abscissa(sys.closed_loop(k));
  if (!(abscissa < 0.0)) {
    throw NumericalError(fmt::format(
        "{}: initial gain is not stabilizing (closed-loop spectral abscissa {:.6g})", what,
        abscissa));
  }
}

// Factors (k1, k2) of a positive scalar gain k with imbalance c.
FactoredGain scalar_factors(double k, double c) {
  const double s = std::sqrt(c + 4.0 * k * k);
  const double k1 = std::sqrt(0.5 * (s + std::sqrt(c)));
  const double k2 = k / k1;
  return FactoredGain(Mat::Constant(1, 1, k1), Mat::Constant(1, 1, k2));
}

}  // namespace

IntegratorConfig comparison_integrator() {
  IntegratorConfig cfg;
  cfg.t_end = 20.0;
  return cfg;
}

IntegratorConfig saddle_integrator() {
  IntegratorConfig cfg;
  cfg.t_end = 200.0;
  cfg.max_step = 0.5;
  cfg.record_stride = 0.5;
  return cfg;
}

ComparisonResult run_fig_comparison(FigVariant variant, const std::filesystem::path& out_dir,
                                    std::uint64_t seed, const IntegratorConfig& cfg) {
  const bool stable = variant == FigVariant::kStable;
  const std::string preset = stable ? "G1" : "G2";
  const std::string fig = stable ? "fig2a" : "fig2b";
  const LtiSystem sys = presets::by_name(preset);
  const Mat k0 = presets::initial_gain(preset);
  require_stabilizing(sys, k0, preset);

  const double j_min = solve_riccati(sys).cost;
  const FactoredGain fg0 = remark2_factorize(k0, presets::kKappa, seed);
  const ExperimentConfig base = preset_config(preset, cfg);

  auto standard = std::async(std::launch::async, [&] {
    return finish_leg(fig + "_standard", flow_standard(sys, k0, cfg, j_min), j_min,
                      echo_gain(base, k0), seed, out_dir);
  });
  auto factored = std::async(std::launch::async, [&] {
    return finish_leg(fig + "_factored", flow_factored(sys, fg0, cfg, j_min), j_min,
                      echo_factors(base, fg0), seed, out_dir);
  });
  ComparisonResult out;
  out.standard = standard.get();
  out.factored = factored.get();
  return out;
}

ComparisonResult run_saddle(const std::filesystem::path& out_dir, double k0_scale,
                            std::uint64_t seed, const IntegratorConfig& cfg) {
  const LtiSystem sys = presets::g1();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat noise(sys.inputs(), sys.states());
  for (Eigen::Index j = 0; j < noise.cols(); ++j) {
    for (Eigen::Index i = 0; i < noise.rows(); ++i) noise(i, j) = normal(rng);
  }
  const Mat k0 = k0_scale * noise;
  require_stabilizing(sys, k0, "G1");

  const double j_min = solve_riccati(sys).cost;
  const FactoredGain fg0 = balanced_factorize(k0, presets::kKappa);
  const ExperimentConfig base = preset_config("G1", cfg);

  auto standard = std::async(std::launch::async, [&] {
    return finish_leg("fig3_standard", flow_standard(sys, k0, cfg, j_min), j_min,
                      echo_gain(base, k0), seed, out_dir);
  });
  auto factored = std::async(std::launch::async, [&] {
    return finish_leg("fig3_factored", flow_factored(sys, fg0, cfg, j_min), j_min,
                      echo_factors(base, fg0), seed, out_dir);
  });
  ComparisonResult out;
  out.standard = standard.get();
  out.factored = factored.get();
  return out;
}

std::string mu_table_csv(const ScalarProblem& p) {
  std::string csv = "c,gamma,mu_gamma,mu_lower_bound\n";
  const double base = std::max(0.0, 4.0 * p.a);
  for (double dg : {0.5, 1.0, 2.0, 4.0, 10.0}) {
    const double gamma = base + dg;
    const double lower = mu_lower_bound(p, gamma);
    for (double c : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", c, gamma, mu_gamma(p, c, gamma),
                         lower);
    }
  }
  return csv;
}

ScalarDemoResult run_scalar_demo(const ScalarProblem& p, const std::filesystem::path& out_dir) {
  p.validate();
  const ScalarOptimum opt = scalar_optimum(p);
  const double k0 = kScalarStartMultiple * opt.k_star;

  // The standard flow crawls at speed ≈ r/2, so its horizon scales with k0.
  IntegratorConfig std_cfg;
  std_cfg.t_end = 2.5 * (k0 - opt.k_star) / p.r;
  std_cfg.record_stride = std_cfg.t_end / static_cast<double>(kScalarStandardPoints);
  std_cfg.max_step = std_cfg.record_stride;

  IntegratorConfig fac_cfg;
  fac_cfg.t_end = kScalarFactoredHorizon;
  fac_cfg.record_stride = kScalarFactoredStride;
  fac_cfg.max_step = kScalarFactoredStride;

  ScalarDemoResult out;
  auto standard = std::async(std::launch::async, [&] {
    return finish_leg("scalar_standard", flow_standard(p, k0, std_cfg), opt.j_min,
                      echo_gain(scalar_config(p, std_cfg), Mat::Constant(1, 1, k0)), 0,
                      out_dir);
  });
  for (double c : {0.0, 4.0}) {
    const FactoredGain fg = scalar_factors(k0, c);
    out.legs.push_back(finish_leg(fmt::format("scalar_factored_c{:g}", c),
                                  flow_factored(p, fg, fac_cfg), opt.j_min,
                                  echo_factors(scalar_config(p, fac_cfg), fg), 0,
                                  out_dir));
  }
  if (p.a > 0.0) {
    const double k0_reparam = std::sqrt(k0);
    const json echo = {
        {"scalar_reparam", {{"a", p.a}, {"q", p.q}, {"r", p.r}, {"k0", k0_reparam}}},
        {"integrator",
         {{"rtol", fac_cfg.rtol},
          {"atol", fac_cfg.atol},
          {"t_end", fac_cfg.t_end},
          {"max_step", fac_cfg.max_step},
          {"record_stride", fac_cfg.record_stride},
          {"guard_margin", fac_cfg.guard_margin}}}};
    out.legs.push_back(finish_leg("scalar_reparam", scalar_flow_reparam(p, k0_reparam, fac_cfg),
                                  opt.j_min, echo.dump(), 0, out_dir));
  }
  out.legs.insert(out.legs.begin(), standard.get());

  out.mu_table_csv = mu_table_csv(p);
  if (!out_dir.empty()) write_text_file(out_dir / "mu_table.csv", out.mu_table_csv);
  return out;
}

std::vector<LegResult> run_config(const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir) {
  const LtiSystem sys = config.system.build();
  const IntegratorConfig& cfg = config.integrator;
  const std::uint64_t seed = config.seed();

  std::vector<LegResult> legs;
  FactoredGain fg;
  double j_min = 0.0;
  switch (config.init.kind) {
    case InitKind::kGain: {
      require_stabilizing(sys, config.init.k, "init.K");
      j_min = solve_riccati(sys).cost;
      legs.push_back(finish_leg("standard", flow_standard(sys, config.init.k, cfg, j_min), j_min,
                                config_to_json(config), seed, out_dir, config.output));
      return legs;
    }
    case InitKind::kFactors:
      fg = FactoredGain(config.init.k1, config.init.k2);
      j_min = solve_riccati(sys).cost;
      break;
    case InitKind::kRemark2: {
      const Remark2Block& r2 = config.init.remark2;
      const ScaledGain sg = remark2_scale(sys, r2.eta, r2.s0, r2.growth);
      fg = remark2_factorize(sg.gain, r2.kappa, r2.seed);
      j_min = sg.j_min;
      break;
    }
  }
  const Mat k0 = compose(fg);
  require_stabilizing(sys, k0, "init");
  auto standard = std::async(std::launch::async, [&] {
    return finish_leg("standard", flow_standard(sys, k0, cfg, j_min), j_min,
                      config_to_json(config), seed, out_dir, config.output);
  });
  legs.push_back(finish_leg("factored", flow_factored(sys, fg, cfg, j_min), j_min,
                            config_to_json(config), seed, out_dir, config.output));
  legs.insert(legs.begin(), standard.get());
  return legs;
}

}  // namespace lqrflow
