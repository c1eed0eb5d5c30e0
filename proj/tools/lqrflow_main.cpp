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


// lqrflow: command line front end.
//
//   lqrflow simulate   --config <file> --out <dir>
//   lqrflow reproduce  {fig2a|fig2b|fig3|scalar} --out <dir> [--seed N]
//   lqrflow verify-pli --a <v> --q <v> --r <v> --gamma <v> --samples N --seed N
//   lqrflow sat-pli    --a <v> --q <v> --r <v> --k-max <v>
//   lqrflow profile    --input <traj.csv>
//
// Exit codes: 0 success, 1 assertion or verification failure, 2 usage or
// parse error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lqrflow/config.hpp"
#include "lqrflow/experiments.hpp"
#include "lqrflow/pli.hpp"
#include "lqrflow/trajectory_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void print_leg(const lqrflow::LegResult& leg) {
  const auto& s = leg.summary;
  fmt::print("{:<22} status={:<14} final_gap={:.6e}", leg.name, lqrflow::to_string(s.status),
             s.final_gap);
  if (s.profile) fmt::print(" profile={}", lqrflow::to_string(s.profile->verdict));
  if (leg.trajectory.factored()) fmt::print(" max_drift={:.3e}", s.invariant_max_drift);
  fmt::print("\n");
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
  const lqrflow::ExperimentConfig cfg = lqrflow::load_config(config_path);
  const std::filesystem::path dir = out.empty() ? cfg.output.directory : out;
  for (const auto& leg : lqrflow::run_config(cfg, dir)) print_leg(leg);
  return kExitOk;
}

int cmd_reproduce(const std::string& which, const std::string& out, std::uint64_t seed,
                  double k0_scale) {
  if (which == "fig2a" || which == "fig2b") {
    const auto variant =
        which == "fig2a" ? lqrflow::FigVariant::kStable : lqrflow::FigVariant::kUnstable;
    const auto res = lqrflow::run_fig_comparison(variant, out, seed);
    print_leg(res.standard);
    print_leg(res.factored);
    return kExitOk;
  }
  if (which == "fig3") {
    const auto res = lqrflow::run_saddle(out, k0_scale, seed);
    print_leg(res.standard);
    print_leg(res.factored);
    return kExitOk;
  }
  if (which == "scalar") {
    for (const lqrflow::ScalarProblem& p :
         {lqrflow::ScalarProblem{0.0, 1.0, 1.0}, lqrflow::ScalarProblem{1.0, 3.0, 1.0}}) {
      const std::filesystem::path dir =
          out.empty() ? std::filesystem::path()
                      : std::filesystem::path(out) / fmt::format("a{:g}_q{:g}_r{:g}", p.a, p.q, p.r);
      for (const auto& leg : lqrflow::run_scalar_demo(p, dir).legs) print_leg(leg);
    }
    return kExitOk;
  }
  fmt::print(stderr, "reproduce: unknown experiment '{}' (fig2a, fig2b, fig3, scalar)\n", which);
  return kExitUsage;
}

int cmd_verify_pli(const lqrflow::ScalarProblem& p, double gamma, long kappa,
                   std::size_t samples, std::uint64_t seed, const std::string& out) {
  const auto cert = lqrflow::verify_gpli_samples(p, gamma, kappa, samples, seed);
  const std::string doc = lqrflow::certificate_to_json(cert);
  if (!out.empty()) lqrflow::write_text_file(out, doc);
  fmt::print("{}", doc);
  return cert.accepted ? kExitOk : kExitFailure;
}

int cmd_sat_pli(const lqrflow::ScalarProblem& p, double k_max, const std::string& out) {
  const auto cert = lqrflow::satpli_witness(p, k_max);
  const std::string doc = lqrflow::certificate_to_json(cert);
  if (!out.empty()) lqrflow::write_text_file(out, doc);
  fmt::print("{}", doc);
  return cert.accepted ? kExitOk : kExitFailure;
}

int cmd_profile(const std::string& input, double floor) {
  const lqrflow::Trajectory traj = lqrflow::read_trajectory_csv(std::filesystem::path(input));
  const lqrflow::ProfileFit fit = lqrflow::classify_profile(traj, floor);
  fmt::print(
      "{{\n  \"verdict\": \"{}\",\n  \"beta\": {:.17g},\n  \"t_star\": {:.17g},\n"
      "  \"mu_tail\": {:.17g},\n  \"mu_pure\": {:.17g},\n  \"sse_piecewise\": {:.17g},\n"
      "  \"sse_pure_exp\": {:.17g},\n  \"points\": {}\n}}\n",
      lqrflow::to_string(fit.verdict), fit.beta, fit.t_star, fit.mu_tail, fit.mu_pure,
      fit.sse_piecewise, fit.sse_pure_exp, fit.points);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-gradient flows for standard and overparameterized LQR"};
  app.set_version_flag("--version", std::string(lqrflow::code_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* simulate = app.add_subcommand("simulate", "Run an experiment configuration");
  simulate->add_option("--config", config_path, "Configuration file (JSON)")->required();
  simulate->add_option("--out", out_dir, "Output directory (overrides output.directory)");

  std::string which;
  std::uint64_t seed = lqrflow::kDefaultSeed;
  double k0_scale = 1e-3;
  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a figure or the scalar demo");
  reproduce->add_option("experiment", which, "fig2a | fig2b | fig3 | scalar")
      ->required()
      ->check(CLI::IsMember({"fig2a", "fig2b", "fig3", "scalar"}));
  reproduce->add_option("--out", out_dir, "Output directory")->required();
  reproduce->add_option("--seed", seed, "Factorization seed");
  reproduce->add_option("--k0-scale", k0_scale, "Scale of the near-zero initial gain (fig3)");

  lqrflow::ScalarProblem p;
  double gamma = 0.0;
  long kappa = 2;
  std::size_t samples = 10000;
  std::uint64_t pli_seed = 1;
  std::string cert_out;
  auto* verify = app.add_subcommand("verify-pli", "Monte-Carlo check of the factored PL bound");
  verify->add_option("--a", p.a, "Open-loop pole a")->required();
  verify->add_option("--q", p.q, "State weight q > 0")->required();
  verify->add_option("--r", p.r, "Input weight r > 0")->required();
  verify->add_option("--gamma", gamma, "Distance threshold gamma > max(0, 4a)")->required();
  verify->add_option("--kappa", kappa, "Hidden width")->check(CLI::PositiveNumber);
  verify->add_option("--samples", samples, "Number of samples");
  verify->add_option("--seed", pli_seed, "Sampler seed");
  verify->add_option("--out", cert_out, "Write the certificate document here");

  double k_max = 1e6;
  auto* sat = app.add_subcommand("sat-pli", "Saturated-PL evidence for the standard cost");
  sat->add_option("--a", p.a, "Open-loop pole a")->required();
  sat->add_option("--q", p.q, "State weight q > 0")->required();
  sat->add_option("--r", p.r, "Input weight r > 0")->required();
  sat->add_option("--k-max", k_max, "Upper end of the gain interval");
  sat->add_option("--out", cert_out, "Write the certificate document here");

  std::string input;
  double floor = 1e-10;
  auto* profile = app.add_subcommand("profile", "Classify a trajectory CSV as GECS/GLECS-like");
  profile->add_option("--input", input, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  profile->add_option("--gap-floor", floor, "Ignore points with gap at or below this value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
    if (reproduce->parsed()) return cmd_reproduce(which, out_dir, seed, k0_scale);
    if (verify->parsed()) return cmd_verify_pli(p, gamma, kappa, samples, pli_seed, cert_out);
    if (sat->parsed()) return cmd_sat_pli(p, k_max, cert_out);
    if (profile->parsed()) return cmd_profile(input, floor);
  } catch (const lqrflow::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const lqrflow::FormatError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const lqrflow::HypothesisError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "failure: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
