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

#include "lqrflow/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace lqrflow {
namespace {

// Dormand–Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller exponents (Hairer, Nørsett & Wanner, II.4).
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat reshape(const Vec& v, Eigen::Index rows, Eigen::Index cols, Eigen::Index offset = 0) {
  return Eigen::Map<const Mat>(v.data() + offset, rows, cols);
}

// Stage evaluation; domain errors mean the trial step left the admissible set.
bool try_eval(const GradientFlowProblem& problem, const Vec& y, FlowEval& out) {
  try {
    out = problem.evaluate(y);
    return out.gradient.allFinite() && std::isfinite(out.cost);
  } catch (const UnstableGainError&) {
    return false;
  } catch (const InadmissibleGainError&) {
    return false;
  } catch (const NumericalError&) {
    return false;
  }
}

double error_norm(const Vec& err, const Vec& y, const Vec& y_new, const IntegratorConfig& cfg) {
  const Vec scale =
      (cfg.atol + cfg.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).matrix();
  return std::sqrt((err.array() / scale.array()).square().mean());
}

double initial_step(const Vec& y, const Vec& f, const IntegratorConfig& cfg) {
  const Vec scale = (cfg.atol + cfg.rtol * y.cwiseAbs().array()).matrix();
  const double d0 = std::sqrt((y.array() / scale.array()).square().mean());
  const double d1 = std::sqrt((f.array() / scale.array()).square().mean());
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  return std::clamp(h, 1e-10, cfg.max_step);
}

}  // namespace

void IntegratorConfig::validate() const {
  for (double v : {rtol, atol, t_end, max_step, record_stride, guard_margin}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("integrator config: all fields must be positive and finite");
    }
  }
  if (!(rtol < 1.0) || !(atol < 1.0)) {
    throw std::invalid_argument("integrator config: rtol and atol must lie in (0, 1)");
  }
}

std::string_view to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kReachedTEnd:
      return "reached_t_end";
    case TerminalStatus::kConverged:
      return "converged";
    case TerminalStatus::kGuardStop:
      return "guard_stop";
    case TerminalStatus::kIntegratorFailure:
      return "integrator_failure";
  }
  return "unknown";
}

std::optional<TerminalStatus> parse_terminal_status(std::string_view text) {
  for (auto s : {TerminalStatus::kReachedTEnd, TerminalStatus::kConverged,
                 TerminalStatus::kGuardStop, TerminalStatus::kIntegratorFailure}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

double Trajectory::max_invariant_drift() const {
  double worst = 0.0;
  for (double v : invariant_drift) worst = std::max(worst, v);
  return worst;
}

Trajectory integrate_gradient_flow(const GradientFlowProblem& problem, const Vec& y0,
                                   const IntegratorConfig& cfg, double j_min) {
  cfg.validate();
  Trajectory traj;
  Vec y = y0;
  FlowEval cur;
  if (!try_eval(problem, y, cur)) {
    throw UnstableGainError("gradient flow: initial point is not admissible",
                            problem.abscissa ? problem.abscissa(y) : 0.0);
  }

  const auto record = [&](double t, const FlowEval& ev) {
    traj.times.push_back(t);
    traj.gaps.push_back(ev.cost - j_min);
    traj.grad_norms.push_back(ev.gradient.norm());
    if (problem.record_extra) problem.record_extra(y, traj);
  };
  const auto converged = [&](const FlowEval& ev) {
    return ev.cost - j_min <= cfg.atol && ev.gradient.norm() <= std::sqrt(cfg.atol);
  };

  double t = 0.0;
  record(t, cur);
  traj.final_state = y;

  std::size_t next_index = 1;
  auto record_time = [&](std::size_t i) {
    return std::min(static_cast<double>(i) * cfg.record_stride, cfg.t_end);
  };

  Vec k1 = -cur.gradient;
  double h = initial_step(y, k1, cfg);
  double err_prev = 1e-4;
  FlowEval stage;
  Vec k2, k3, k4, k5, k6, k7, y_stage, y_new;

  while (t < cfg.t_end) {
    const double target = record_time(next_index);
    const double h_free = std::min(h, cfg.max_step);
    // Stretch by up to 1% rather than leave a sliver before the record time.
    const bool clipped = t + 1.01 * h_free >= target;
    const double h_use = clipped ? target - t : h_free;
    if (!(h_use > 1e-14 * std::max(1.0, t))) {
      traj.status = TerminalStatus::kIntegratorFailure;
      break;
    }

    bool ok = true;
    y_stage = y + h_use * a21 * k1;
    ok = ok && try_eval(problem, y_stage, stage);
    if (ok) {
      k2 = -stage.gradient;
      y_stage = y + h_use * (a31 * k1 + a32 * k2);
      ok = try_eval(problem, y_stage, stage);
    }
    if (ok) {
      k3 = -stage.gradient;
      y_stage = y + h_use * (a41 * k1 + a42 * k2 + a43 * k3);
      ok = try_eval(problem, y_stage, stage);
    }
    if (ok) {
      k4 = -stage.gradient;
      y_stage = y + h_use * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      ok = try_eval(problem, y_stage, stage);
    }
    if (ok) {
      k5 = -stage.gradient;
      y_stage = y + h_use * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      ok = try_eval(problem, y_stage, stage);
    }
    FlowEval end_eval;
    if (ok) {
      k6 = -stage.gradient;
      y_new = y + h_use * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      ok = try_eval(problem, y_new, end_eval);
    }
    if (!ok) {
      ++traj.rejected_steps;
      h = 0.25 * h_use;
      continue;
    }
    k7 = -end_eval.gradient;
    const Vec err = h_use * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = std::max(error_norm(err, y, y_new, cfg), 1e-10);

    if (en > 1.0) {
      ++traj.rejected_steps;
      h = h_use * std::max(kMinFactor, kSafety * std::pow(en, -kAlpha));
      continue;
    }

    ++traj.accepted_steps;
    t = clipped ? target : t + h_use;
    y = y_new;
    cur = end_eval;
    k1 = k7;
    const double factor = std::clamp(
        kSafety * std::pow(en, -kAlpha) * std::pow(err_prev, kBeta), kMinFactor, kMaxFactor);
    h = clipped ? std::max(h_use * factor, h_free) : h_use * factor;
    err_prev = en;
    traj.final_state = y;

    if (problem.abscissa && problem.abscissa(y) > -cfg.guard_margin) {
      record(t, cur);
      traj.status = TerminalStatus::kGuardStop;
      return traj;
    }
    if (clipped) {
      record(t, cur);
      ++next_index;
      if (converged(cur)) {
        traj.status = TerminalStatus::kConverged;
        return traj;
      }
    }
  }
  if (traj.status != TerminalStatus::kIntegratorFailure) {
    traj.status = TerminalStatus::kReachedTEnd;
  }
  return traj;
}

GainModel make_lqr_model(const LtiSystem& sys) {
  GainModel model;
  model.inputs = sys.inputs();
  model.states = sys.states();
  model.evaluate = [sys](const Mat& k) { return lqr_cost_and_gradient(sys, k); };
  model.abscissa = [sys](const Mat& k) { return spectral_abscissa(sys.closed_loop(k)); };
  return model;
}

GainModel make_scalar_model(const ScalarProblem& p) {
  p.validate();
  GainModel model;
  model.inputs = 1;
  model.states = 1;
  model.evaluate = [p](const Mat& k) {
    CostAndGradient out;
    out.cost = scalar_cost(p, k(0, 0));
    out.gradient = Mat::Constant(1, 1, scalar_gradient(p, k(0, 0)));
    return out;
  };
  model.abscissa = [p](const Mat& k) { return p.a - k(0, 0); };
  return model;
}

Trajectory flow_standard(const GainModel& model, const Mat& k0, const IntegratorConfig& cfg,
                         double j_min) {
  if (k0.rows() != model.inputs || k0.cols() != model.states) {
    throw std::invalid_argument("flow_standard: initial gain has the wrong shape");
  }
  const Eigen::Index m = model.inputs;
  const Eigen::Index n = model.states;
  GradientFlowProblem problem;
  problem.evaluate = [&model, m, n](const Vec& y) {
    const CostAndGradient cg = model.evaluate(reshape(y, m, n));
    return FlowEval{cg.cost, flatten(cg.gradient)};
  };
  problem.abscissa = [&model, m, n](const Vec& y) { return model.abscissa(reshape(y, m, n)); };
  return integrate_gradient_flow(problem, flatten(k0), cfg, j_min);
}

Trajectory flow_standard(const LtiSystem& sys, const Mat& k0, const IntegratorConfig& cfg,
                         double j_min) {
  return flow_standard(make_lqr_model(sys), k0, cfg, j_min);
}

Trajectory flow_standard(const ScalarProblem& p, double k0, const IntegratorConfig& cfg) {
  return flow_standard(make_scalar_model(p), Mat::Constant(1, 1, k0), cfg,
                       scalar_optimum(p).j_min);
}

FactoredGain unflatten_factors(const Vec& state, const FactoredGain& like) {
  const Eigen::Index n1 = like.k1.size();
  if (state.size() != n1 + like.k2.size()) {
    throw std::invalid_argument("unflatten_factors: state size does not match factor shapes");
  }
  return FactoredGain(reshape(state, like.k1.rows(), like.k1.cols()),
                      reshape(state, like.k2.rows(), like.k2.cols(), n1));
}

Trajectory flow_factored(const GainModel& model, const FactoredGain& fg0,
                         const IntegratorConfig& cfg, double j_min) {
  if (fg0.inputs() != model.inputs || fg0.states() != model.states) {
    throw std::invalid_argument("flow_factored: factor shapes do not match the model");
  }
  const FactoredGain shape = fg0;
  const Mat c0 = invariant_matrix(fg0);
  const bool has_d = fg0.inputs() == fg0.states();
  const Eigen::Index n1 = fg0.k1.size();

  GradientFlowProblem problem;
  problem.evaluate = [&model, shape, n1](const Vec& y) {
    const FactoredGain fg = unflatten_factors(y, shape);
    const CostAndGradient cg = model.evaluate(compose(fg));
    FlowEval out;
    out.cost = cg.cost;
    out.gradient.resize(y.size());
    const Mat g1 = fg.k2.transpose() * cg.gradient;
    const Mat g2 = cg.gradient * fg.k1.transpose();
    out.gradient.head(n1) = flatten(g1);
    out.gradient.tail(y.size() - n1) = flatten(g2);
    return out;
  };
  problem.abscissa = [&model, shape](const Vec& y) {
    return model.abscissa(compose(unflatten_factors(y, shape)));
  };
  problem.record_extra = [shape, c0, has_d](const Vec& y, Trajectory& traj) {
    const FactoredGain fg = unflatten_factors(y, shape);
    traj.d_values.push_back(has_d ? distance_measure(fg)
                                  : std::numeric_limits<double>::quiet_NaN());
    traj.invariant_drift.push_back((invariant_matrix(fg) - c0).norm());
  };

  Vec y0(n1 + fg0.k2.size());
  y0.head(n1) = flatten(fg0.k1);
  y0.tail(fg0.k2.size()) = flatten(fg0.k2);
  return integrate_gradient_flow(problem, y0, cfg, j_min);
}

Trajectory flow_factored(const LtiSystem& sys, const FactoredGain& fg0,
                         const IntegratorConfig& cfg, double j_min) {
  return flow_factored(make_lqr_model(sys), fg0, cfg, j_min);
}

Trajectory flow_factored(const ScalarProblem& p, const FactoredGain& fg0,
                         const IntegratorConfig& cfg) {
  return flow_factored(make_scalar_model(p), fg0, cfg, scalar_optimum(p).j_min);
}

Trajectory scalar_flow_reparam(const ScalarProblem& p, double k0, const IntegratorConfig& cfg) {
  p.validate();
  if (!(p.a > 0.0)) throw std::invalid_argument("scalar_flow_reparam: requires a > 0");
  if (!(k0 * k0 > p.a)) {
    throw InadmissibleGainError(fmt::format("scalar_flow_reparam: k0² = {:.6g} <= a", k0 * k0));
  }
  GradientFlowProblem problem;
  problem.evaluate = [p](const Vec& y) {
    const double k = y(0);
    FlowEval out;
    out.cost = scalar_cost(p, k * k);
    out.gradient = Vec::Constant(1, 2.0 * k * scalar_gradient(p, k * k));
    return out;
  };
  problem.abscissa = [p](const Vec& y) { return p.a - y(0) * y(0); };
  return integrate_gradient_flow(problem, Vec::Constant(1, k0), cfg, scalar_optimum(p).j_min);
}

}  // namespace lqrflow
