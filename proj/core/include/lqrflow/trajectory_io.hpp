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


// Bit-exact trajectory CSV and run-summary / certificate documents.
//
// CSV schema: header "t,gap,grad_norm,d,invariant_drift", LF line endings,
// '.' decimal separator, 17 significant digits. The d and invariant_drift
// cells are empty for standard runs; an empty d cell in a factored run
// stands for "undefined" (m ≠ n) and reads back as NaN.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "lqrflow/flow.hpp"
#include "lqrflow/pli.hpp"

namespace lqrflow {

/// Malformed trajectory CSV or summary document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTrajectoryCsvHeader = "t,gap,grad_norm,d,invariant_drift";

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Reads times, gaps, grad_norms and (for factored files) d_values and
/// invariant_drift. Throws FormatError naming the offending line.
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Outcome of one experiment leg.
struct RunSummary {
  std::string label;
  double final_gap = 0.0;
  /// Time of the last recorded point.
  double t_end_reached = 0.0;
  TerminalStatus status = TerminalStatus::kReachedTEnd;
  /// Absent when the trajectory is too short to classify.
  std::optional<ProfileFit> profile;
  /// NaN for standard runs.
  double invariant_max_drift = 0.0;
  double initial_gap = 0.0;
  double j_min = 0.0;
  /// Canonical configuration document the leg was run from.
  std::string config_echo;
  std::string code_version;
  std::uint64_t seed_echo = 0;
};

/// Library version baked in at build time.
std::string_view code_version();

/// Builds a summary from a finished trajectory; classifies the profile when
/// enough points lie above `gap_floor`.
RunSummary summarize(std::string label, const Trajectory& traj, double j_min,
                     std::string config_echo, std::uint64_t seed, double gap_floor = 1e-10);

/// JSON document; doubles are written with round-trip precision and NaN
/// as null.
std::string summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(std::string_view text);

std::string certificate_to_json(const PliCertificate& cert);

/// Writes <stem>.csv and <stem>.summary.json into `out_dir` (created if
/// missing).
void write_outputs(const Trajectory& traj, const RunSummary& summary,
                   const std::filesystem::path& out_dir, std::string_view stem);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lqrflow
