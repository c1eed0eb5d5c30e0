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


#include "lqrflow/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "lqrflow/presets.hpp"

namespace lqrflow {
namespace {

using json = nlohmann::json;

void reject_unknown_keys(const json& obj, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || item.key() == a;
    if (!known) {
      throw ConfigError(fmt::format("config field '{}.{}': unknown key", where, item.key()));
    }
  }
}

const json& require_object(const json& parent, std::string_view key, std::string_view where) {
  if (!parent.contains(key)) {
    throw ConfigError(fmt::format("config field '{}': missing section '{}'", where, key));
  }
  const json& j = parent.at(std::string(key));
  if (!j.is_object()) {
    throw ConfigError(fmt::format("config field '{}.{}': expected an object", where, key));
  }
  return j;
}

double read_number(const json& j, std::string_view field) {
  if (!j.is_number()) throw ConfigError(fmt::format("config field '{}': expected a number", field));
  return j.get<double>();
}

std::uint64_t read_unsigned(const json& j, std::string_view field) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw ConfigError(fmt::format("config field '{}': expected a non-negative integer", field));
  }
  return j.get<std::uint64_t>();
}

Mat read_matrix(const json& j, std::string_view field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(fmt::format("config field '{}': expected a non-empty array of rows", field));
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j.at(i);
    if (!row.is_array()) {
      throw ConfigError(fmt::format("config field '{}': row {} is not an array", field, i + 1));
    }
    if (i == 0) cols = row.size();
    if (row.size() != cols || cols == 0) {
      throw ConfigError(fmt::format("config field '{}': row {} has {} entries, expected {}", field,
                                    i + 1, row.size(), i == 0 ? std::size_t{1} : cols));
    }
  }
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      const json& v = j.at(i).at(k);
      if (!v.is_number()) {
        throw ConfigError(fmt::format("config field '{}': row {} entry {} is not a number", field,
                                      i + 1, k + 1));
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v.get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

SystemBlock parse_system(const json& j) {
  reject_unknown_keys(j, "system", {"preset", "A", "B", "Q", "R", "Sigma"});
  SystemBlock sys;
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) {
      throw ConfigError("config field 'system.preset': expected a string");
    }
    sys.preset = j.at("preset").get<std::string>();
    if (sys.preset != "G1" && sys.preset != "G2") {
      throw ConfigError(fmt::format(
          "config field 'system.preset': unknown preset '{}' (expected G1 or G2)", sys.preset));
    }
    if (j.contains("A") || j.contains("B")) {
      throw ConfigError("config field 'system': give either a preset or A and B, not both");
    }
  } else {
    if (!j.contains("A") || !j.contains("B")) {
      throw ConfigError("config field 'system': need a preset or both A and B");
    }
    sys.a = read_matrix(j.at("A"), "system.A");
    sys.b = read_matrix(j.at("B"), "system.B");
  }
  if (j.contains("Q")) sys.q = read_matrix(j.at("Q"), "system.Q");
  if (j.contains("R")) sys.r = read_matrix(j.at("R"), "system.R");
  if (j.contains("Sigma")) sys.sigma = read_matrix(j.at("Sigma"), "system.Sigma");
  return sys;
}

InitBlock parse_init(const json& j) {
  reject_unknown_keys(j, "init", {"K", "K1", "K2", "remark2"});
  const int variants = (j.contains("K") ? 1 : 0) +
                       ((j.contains("K1") || j.contains("K2")) ? 1 : 0) +
                       (j.contains("remark2") ? 1 : 0);
  if (variants != 1) {
    throw ConfigError("config field 'init': exactly one of K, (K1, K2), remark2 is required");
  }
  InitBlock init;
  if (j.contains("K")) {
    init.kind = InitKind::kGain;
    init.k = read_matrix(j.at("K"), "init.K");
  } else if (j.contains("remark2")) {
    init.kind = InitKind::kRemark2;
    const json& r2 = j.at("remark2");
    if (!r2.is_object()) throw ConfigError("config field 'init.remark2': expected an object");
    reject_unknown_keys(r2, "init.remark2", {"eta", "s0", "growth", "kappa", "seed"});
    if (!r2.contains("eta")) throw ConfigError("config field 'init.remark2.eta': missing");
    init.remark2.eta = read_number(r2.at("eta"), "init.remark2.eta");
    if (r2.contains("s0")) init.remark2.s0 = read_number(r2.at("s0"), "init.remark2.s0");
    if (r2.contains("growth")) {
      init.remark2.growth = read_number(r2.at("growth"), "init.remark2.growth");
    }
    if (r2.contains("kappa")) {
      init.remark2.kappa =
          static_cast<Eigen::Index>(read_unsigned(r2.at("kappa"), "init.remark2.kappa"));
    }
    if (r2.contains("seed")) init.remark2.seed = read_unsigned(r2.at("seed"), "init.remark2.seed");
  } else {
    if (!j.contains("K1") || !j.contains("K2")) {
      throw ConfigError("config field 'init': K1 and K2 must be given together");
    }
    init.kind = InitKind::kFactors;
    init.k1 = read_matrix(j.at("K1"), "init.K1");
    init.k2 = read_matrix(j.at("K2"), "init.K2");
    if (init.k2.cols() != init.k1.rows()) {
      throw ConfigError(fmt::format("config field 'init.K2': has {} columns, K1 has {} rows",
                                    init.k2.cols(), init.k1.rows()));
    }
  }
  return init;
}

IntegratorConfig parse_integrator(const json& j) {
  reject_unknown_keys(j, "integrator",
                      {"rtol", "atol", "t_end", "max_step", "record_stride", "guard_margin"});
  IntegratorConfig cfg;
  const auto field = [&](const char* key, double& target) {
    if (j.contains(key)) target = read_number(j.at(key), fmt::format("integrator.{}", key));
  };
  field("rtol", cfg.rtol);
  field("atol", cfg.atol);
  field("t_end", cfg.t_end);
  field("max_step", cfg.max_step);
  field("record_stride", cfg.record_stride);
  field("guard_margin", cfg.guard_margin);
  return cfg;
}

OutputBlock parse_output(const json& j) {
  reject_unknown_keys(j, "output", {"directory", "stride", "formats"});
  OutputBlock out;
  if (j.contains("directory")) {
    if (!j.at("directory").is_string()) {
      throw ConfigError("config field 'output.directory': expected a string");
    }
    out.directory = j.at("directory").get<std::string>();
  }
  if (j.contains("stride")) out.stride = read_number(j.at("stride"), "output.stride");
  if (j.contains("formats")) {
    const json& f = j.at("formats");
    if (!f.is_array()) throw ConfigError("config field 'output.formats': expected an array");
    out.csv = false;
    out.summary = false;
    for (const json& item : f) {
      const std::string name = item.is_string() ? item.get<std::string>() : std::string();
      if (name == "csv") {
        out.csv = true;
      } else if (name == "summary") {
        out.summary = true;
      } else {
        throw ConfigError(
            "config field 'output.formats': unknown format (expected \"csv\" or \"summary\")");
      }
    }
  }
  return out;
}

}  // namespace

LtiSystem SystemBlock::build() const {
  Mat a_mat, b_mat;
  if (!preset.empty()) {
    const LtiSystem base = presets::by_name(preset);
    a_mat = base.A();
    b_mat = base.B();
  } else {
    a_mat = *a;
    b_mat = *b;
  }
  const Eigen::Index n = a_mat.rows();
  const Eigen::Index m = b_mat.cols();
  return LtiSystem(a_mat, b_mat, q ? *q : Mat(Mat::Identity(n, n)),
                   r ? *r : Mat(Mat::Identity(m, m)), sigma ? *sigma : Mat(Mat::Identity(n, n)));
}

std::uint64_t ExperimentConfig::seed() const {
  return init.kind == InitKind::kRemark2 ? init.remark2.seed : 0;
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(fmt::format("config line {}, column {}: syntax error ({})", line, col,
                                  e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config line 1: top level must be an object");
  reject_unknown_keys(doc, "<root>", {"system", "init", "integrator", "output"});

  ExperimentConfig cfg;
  try {
    cfg.system = parse_system(require_object(doc, "system", "<root>"));
    cfg.init = parse_init(require_object(doc, "init", "<root>"));
    if (doc.contains("integrator")) {
      cfg.integrator = parse_integrator(require_object(doc, "integrator", "<root>"));
    }
    if (doc.contains("output")) cfg.output = parse_output(require_object(doc, "output", "<root>"));
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  if (cfg.output.stride) cfg.integrator.record_stride = *cfg.output.stride;
  try {
    cfg.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("config field 'integrator': {}", e.what()));
  }
  try {
    (void)cfg.system.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("config field 'system': {}", e.what()));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json doc;
  json sys = json::object();
  const LtiSystem built = cfg.system.build();
  if (!cfg.system.preset.empty()) {
    sys["preset"] = cfg.system.preset;
  } else {
    sys["A"] = matrix_to_json(built.A());
    sys["B"] = matrix_to_json(built.B());
  }
  sys["Q"] = matrix_to_json(built.Q());
  sys["R"] = matrix_to_json(built.R());
  sys["Sigma"] = matrix_to_json(built.Sigma());
  doc["system"] = std::move(sys);

  json init = json::object();
  switch (cfg.init.kind) {
    case InitKind::kGain:
      init["K"] = matrix_to_json(cfg.init.k);
      break;
    case InitKind::kFactors:
      init["K1"] = matrix_to_json(cfg.init.k1);
      init["K2"] = matrix_to_json(cfg.init.k2);
      break;
    case InitKind::kRemark2: {
      const Remark2Block& r2 = cfg.init.remark2;
      init["remark2"] = json{{"eta", r2.eta},
                             {"s0", r2.s0},
                             {"growth", r2.growth},
                             {"kappa", static_cast<std::uint64_t>(r2.kappa)},
                             {"seed", r2.seed}};
      break;
    }
  }
  doc["init"] = std::move(init);

  const IntegratorConfig& ic = cfg.integrator;
  doc["integrator"] = json{{"rtol", ic.rtol},
                           {"atol", ic.atol},
                           {"t_end", ic.t_end},
                           {"max_step", ic.max_step},
                           {"record_stride", ic.record_stride},
                           {"guard_margin", ic.guard_margin}};

  json out = json::object();
  if (!cfg.output.directory.empty()) out["directory"] = cfg.output.directory;
  if (cfg.output.stride) out["stride"] = *cfg.output.stride;
  json formats = json::array();
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.summary) formats.push_back("summary");
  out["formats"] = std::move(formats);
  doc["output"] = std::move(out);
  return doc.dump(2) + "\n";
}

}  // namespace lqrflow
