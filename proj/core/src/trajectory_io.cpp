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


#include "lqrflow/trajectory_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

#ifndef LQRFLOW_VERSION_STRING
#define LQRFLOW_VERSION_STRING "unknown"
#endif

namespace lqrflow {
namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_cell(double v) {
  if (std::isnan(v)) return {};
  return fmt::format("{:.17g}", v);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_cell(std::string_view cell, std::size_t line_no, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw FormatError(fmt::format("trajectory CSV line {}: column '{}': cannot parse '{}'",
                                  line_no, column, cell));
  }
  return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

json fit_to_json(const ProfileFit& fit) {
  return json{{"beta", number_or_null(fit.beta)},
              {"t_star", number_or_null(fit.t_star)},
              {"mu_tail", number_or_null(fit.mu_tail)},
              {"mu_pure", number_or_null(fit.mu_pure)},
              {"sse_piecewise", number_or_null(fit.sse_piecewise)},
              {"sse_pure_exp", number_or_null(fit.sse_pure_exp)},
              {"points", fit.points},
              {"verdict", std::string(to_string(fit.verdict))}};
}

ProfileFit fit_from_json(const json& j) {
  ProfileFit fit;
  fit.beta = number_from(j.at("beta"));
  fit.t_star = number_from(j.at("t_star"));
  fit.mu_tail = number_from(j.at("mu_tail"));
  fit.mu_pure = number_from(j.at("mu_pure"));
  fit.sse_piecewise = number_from(j.at("sse_piecewise"));
  fit.sse_pure_exp = number_from(j.at("sse_pure_exp"));
  fit.points = j.at("points").get<std::size_t>();
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict == to_string(ProfileVerdict::kGecsLike)) {
    fit.verdict = ProfileVerdict::kGecsLike;
  } else if (verdict == to_string(ProfileVerdict::kGlecsLike)) {
    fit.verdict = ProfileVerdict::kGlecsLike;
  } else {
    throw FormatError("summary: unknown profile verdict '" + verdict + "'");
  }
  return fit;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const bool factored = traj.factored();
  if (traj.gaps.size() != traj.size() || traj.grad_norms.size() != traj.size() ||
      (factored && (traj.d_values.size() != traj.size() ||
                    traj.invariant_drift.size() != traj.size()))) {
    throw std::invalid_argument("write_trajectory_csv: column lengths differ");
  }
  std::string buf;
  buf.reserve(64 * (traj.size() + 1));
  buf.append(kTrajectoryCsvHeader);
  buf.push_back('\n');
  for (std::size_t i = 0; i < traj.size(); ++i) {
    buf += fmt::format("{:.17g},{:.17g},{:.17g},", traj.times[i], traj.gaps[i],
                       traj.grad_norms[i]);
    if (factored) {
      buf += format_cell(traj.d_values[i]);
      buf.push_back(',');
      buf += format_cell(traj.invariant_drift[i]);
    } else {
      buf.push_back(',');
    }
    buf.push_back('\n');
  }
  out << buf;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ostringstream os;
  write_trajectory_csv(traj, os);
  write_text_file(path, os.str());
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryCsvHeader) {
    throw FormatError(fmt::format("trajectory CSV line 1: expected header '{}'",
                                  kTrajectoryCsvHeader));
  }
  std::vector<double> d, drift;
  bool any_factored = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 5) {
      throw FormatError(
          fmt::format("trajectory CSV line {}: expected 5 cells, got {}", line_no, cells.size()));
    }
    traj.times.push_back(parse_cell(cells[0], line_no, "t"));
    traj.gaps.push_back(parse_cell(cells[1], line_no, "gap"));
    traj.grad_norms.push_back(parse_cell(cells[2], line_no, "grad_norm"));
    d.push_back(cells[3].empty() ? kNaN : parse_cell(cells[3], line_no, "d"));
    if (!cells[4].empty()) any_factored = true;
    drift.push_back(cells[4].empty() ? kNaN : parse_cell(cells[4], line_no, "invariant_drift"));
  }
  if (any_factored) {
    traj.d_values = std::move(d);
    traj.invariant_drift = std::move(drift);
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open trajectory CSV '" + path.string() + "'");
  return read_trajectory_csv(in);
}

std::string_view code_version() { return LQRFLOW_VERSION_STRING; }

RunSummary summarize(std::string label, const Trajectory& traj, double j_min,
                     std::string config_echo, std::uint64_t seed, double gap_floor) {
  RunSummary s;
  s.label = std::move(label);
  s.final_gap = traj.final_gap();
  s.t_end_reached = traj.times.empty() ? 0.0 : traj.times.back();
  s.status = traj.status;
  s.invariant_max_drift = traj.factored() ? traj.max_invariant_drift() : kNaN;
  s.initial_gap = traj.gaps.empty() ? kNaN : traj.gaps.front();
  s.j_min = j_min;
  s.config_echo = std::move(config_echo);
  s.code_version = std::string(code_version());
  s.seed_echo = seed;
  try {
    s.profile = classify_profile(traj, gap_floor);
  } catch (const std::invalid_argument&) {
    s.profile.reset();
  }
  return s;
}

std::string summary_to_json(const RunSummary& s) {
  json j;
  j["label"] = s.label;
  j["final_gap"] = number_or_null(s.final_gap);
  j["t_end_reached"] = number_or_null(s.t_end_reached);
  j["status"] = std::string(to_string(s.status));
  j["profile"] = s.profile ? fit_to_json(*s.profile) : json(nullptr);
  j["invariant_max_drift"] = number_or_null(s.invariant_max_drift);
  j["initial_gap"] = number_or_null(s.initial_gap);
  j["j_min"] = number_or_null(s.j_min);
  j["config_echo"] = s.config_echo.empty() ? json(nullptr) : json::parse(s.config_echo);
  j["code_version"] = s.code_version;
  j["seed_echo"] = s.seed_echo;
  return j.dump(2) + "\n";
}

RunSummary summary_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    RunSummary s;
    s.label = j.at("label").get<std::string>();
    s.final_gap = number_from(j.at("final_gap"));
    s.t_end_reached = number_from(j.at("t_end_reached"));
    const auto status = parse_terminal_status(j.at("status").get<std::string>());
    if (!status) throw FormatError("summary: unknown status");
    s.status = *status;
    if (!j.at("profile").is_null()) s.profile = fit_from_json(j.at("profile"));
    s.invariant_max_drift = number_from(j.at("invariant_max_drift"));
    s.initial_gap = number_from(j.at("initial_gap"));
    s.j_min = number_from(j.at("j_min"));
    if (!j.at("config_echo").is_null()) s.config_echo = j.at("config_echo").dump();
    s.code_version = j.at("code_version").get<std::string>();
    s.seed_echo = j.at("seed_echo").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("summary: ") + e.what());
  }
}

std::string certificate_to_json(const PliCertificate& cert) {
  json j;
  j["kind"] = std::string(to_string(cert.kind));
  j["accepted"] = cert.accepted;
  j["domain"] = cert.domain_descriptor;
  j["samples_checked"] = cert.samples_checked;
  j["min_ratio_observed"] = number_or_null(cert.min_ratio_observed);
  j["violations"] = cert.violations;
  if (cert.kind == CertificateKind::kGlobalPli) {
    j["mu"] = number_or_null(cert.mu);
  } else {
    j["a_sat"] = number_or_null(cert.a_sat);
    j["b_sat"] = number_or_null(cert.b_sat);
    j["grad_bound"] = number_or_null(cert.grad_bound);
    j["ratio_at_reference"] = number_or_null(cert.ratio_at_reference);
    j["ratio_at_k_max"] = number_or_null(cert.ratio_at_k_max);
  }
  if (cert.witness) {
    const PliWitness& w = *cert.witness;
    j["witness"] = json{{"k", number_or_null(w.k)},         {"c", number_or_null(w.c)},
                        {"d", number_or_null(w.d)},         {"ratio", number_or_null(w.ratio)},
                        {"mu_gamma", number_or_null(w.mu)}, {"k1", w.k1},
                        {"k2", w.k2}};
  }
  return j.dump(2) + "\n";
}

void write_outputs(const Trajectory& traj, const RunSummary& summary,
                   const std::filesystem::path& out_dir, std::string_view stem) {
  write_trajectory_csv(traj, out_dir / (std::string(stem) + ".csv"));
  write_text_file(out_dir / (std::string(stem) + ".summary.json"), summary_to_json(summary));
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace lqrflow
