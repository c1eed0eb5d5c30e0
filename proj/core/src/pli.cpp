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

#include "lqrflow/pli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "lqrflow/overparam.hpp"

namespace lqrflow {
namespace {

constexpr double kViolationSlack = 1e-9;
constexpr double kNearOptimumRadius = 1e-6;
constexpr double kSatGradSlack = 0.02;
constexpr double kVerdictTolerance = 0.05;
constexpr double kSsePerPointFloor = 1e-20;
// Points per phase (knot included in the linear phase); keeps a knot next to
// either end from absorbing measurement noise.
constexpr std::size_t kMinSegmentPoints = 10;
constexpr int kMaxRedraws = 64;

void require_hypothesis(const ScalarProblem& p, double gamma) {
  p.validate();
  if (!(gamma > std::max(0.0, 4.0 * p.a)) || !std::isfinite(gamma)) {
    throw HypothesisError(fmt::format(
        "gamma = {:.6g} outside hypothesis gamma > max(0, 4a) = {:.6g}", gamma,
        std::max(0.0, 4.0 * p.a)));
  }
}

double ell(const ScalarProblem& p, double k) { return 1.0 / (2.0 * (k - p.a)); }

bool near_optimum(double k, double k_star) {
  return std::abs(k - k_star) <= kNearOptimumRadius * std::max(1.0, std::abs(k_star));
}

// ∇J²/θ = 4 r ℓ (1 − ℓε)², free of the 0/0 at ε = 0.
double standard_ratio_expansion(const ScalarProblem& p, double k, double k_star) {
  const double l = ell(p, k);
  const double x = l * (k - k_star);
  return 4.0 * p.r * l * (1.0 - x) * (1.0 - x);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = std::exp(llo + u * (lhi - llo));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

// Factor vectors a = k1, b = k2ᵀ in ℝ^κ with bᵀa = k and
// (‖a‖² + ‖b‖²)² = c + 4k², i.e. the prescribed composed gain and imbalance.
FactoredGain factors_for(double k, double c, Eigen::Index kappa, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double s = std::sqrt(c + 4.0 * k * k);

  Vec u(kappa);
  for (Eigen::Index i = 0; i < kappa; ++i) u(i) = normal(rng);
  u.normalize();
  Vec w = Vec::Zero(kappa);
  double cos_phi = 1.0;
  if (kappa >= 2) {
    for (Eigen::Index i = 0; i < kappa; ++i) w(i) = normal(rng);
    w -= w.dot(u) * u;
    w.normalize();
    // αβ = |k| / |cos φ| must not exceed s/2.
    const double cos_min = s > 0.0 ? std::min(1.0, 2.0 * std::abs(k) / s) : 1.0;
    cos_phi = cos_min + (1.0 - cos_min) * uniform(rng);
  }
  const double sign = k < 0.0 ? -1.0 : 1.0;
  double prod;  // αβ
  if (k == 0.0) {
    cos_phi = kappa >= 2 ? 0.0 : 1.0;
    prod = kappa >= 2 ? 0.5 * s * uniform(rng) : 0.0;
  } else {
    prod = std::abs(k) / cos_phi;
  }
  const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * prod * prod));
  double alpha = std::sqrt(0.5 * (s + disc));
  double beta = std::sqrt(std::max(0.0, 0.5 * (s - disc)));
  if (uniform(rng) < 0.5) std::swap(alpha, beta);

  const double sin_phi = std::sqrt(std::max(0.0, 1.0 - cos_phi * cos_phi));
  const Vec a = alpha * u;
  const Vec b = sign * beta * (cos_phi * u + sin_phi * w);
  return FactoredGain(Mat(a), Mat(b.transpose()));
}

struct SampleTarget {
  double c;
  double k;
};

class GpliSampler {
 public:
  GpliSampler(const ScalarProblem& p, double gamma, std::uint64_t seed)
      : p_(p), gamma_(gamma), rng_(seed), k_star_(scalar_optimum(p).k_star) {
    c_scale_ = std::max({gamma * gamma, 4.0 * p.a * p.a, 1.0});
    k_scale_ = std::max({1.0, std::abs(k_star_), gamma});
  }

  SampleTarget next() {
    const double c = draw_c();
    return {c, draw_k(c)};
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  double draw_c() {
    const double u = uniform_(rng_);
    if (u < 0.10) return 0.0;
    if (p_.a < 0.0 && u < 0.30) {
      const double ct = c_tilde(p_, gamma_);
      const double v = uniform_(rng_);
      if (v < 0.2) return ct;
      // log-spread relative offsets on both sides of c̃
      const double off = std::pow(10.0, -9.0 + 8.0 * uniform_(rng_));
      return v < 0.6 ? ct * (1.0 - off) : ct * (1.0 + off);
    }
    return c_scale_ * std::pow(10.0, -4.0 + 7.0 * uniform_(rng_));
  }

  double draw_k(double c) {
    const double kl = k_lower(gamma_, c);
    const double lower = std::max(p_.a, kl);
    const double u = uniform_(rng_);
    if (u < 0.10 && k_star_ > lower) return k_star_;
    if (u < 0.20 && kl > p_.a) return kl * (1.0 + 1e-12) + 1e-300;
    if (u < 0.35 && p_.a < 0.0) {
      const double k_inf = -c / (4.0 * p_.a);
      if (k_inf > lower) {
        return k_inf * (1.0 + 0.1 * (uniform_(rng_) - 0.5));
      }
    }
    const double offset = k_scale_ * std::pow(10.0, -6.0 + 10.0 * uniform_(rng_));
    return lower + offset;
  }

  ScalarProblem p_;
  double gamma_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  double k_star_;
  double c_scale_;
  double k_scale_;
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Ordinary least squares of z on t over [first, last).
LinearFit ols(std::span<const double> t, std::span<const double> z, std::size_t first,
              std::size_t last) {
  const double n = static_cast<double>(last - first);
  double tm = 0.0, zm = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    tm += t[i];
    zm += z[i];
  }
  tm /= n;
  zm /= n;
  double stt = 0.0, stz = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stz += (t[i] - tm) * (z[i] - zm);
  }
  LinearFit fit;
  fit.slope = stt > 0.0 ? stz / stt : 0.0;
  fit.intercept = zm - fit.slope * tm;
  return fit;
}

double ols_sse(std::span<const double> t, std::span<const double> z, std::size_t first,
               std::size_t last, const LinearFit& fit) {
  double sse = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double r = z[i] - (fit.intercept + fit.slope * t[i]);
    sse += r * r;
  }
  return sse;
}

// Line through the knot (t_k, g_k) fitted to gaps on [first, last) by least
// squares weighted with 1/g² (relative error); returns the slope.
double anchored_line_slope(std::span<const double> t, std::span<const double> g,
                           std::size_t first, std::size_t last, double t_k, double g_k) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double w = 1.0 / (g[i] * g[i]);
    num += w * (g[i] - g_k) * (t[i] - t_k);
    den += w * (t[i] - t_k) * (t[i] - t_k);
  }
  return den > 0.0 ? num / den : 0.0;
}

// Σ (log g_i − log(g_k + slope (t_i − t_k)))² over [first, last); a line
// reaching zero or below is charged as a gap of 1e-300.
double anchored_line_sse(std::span<const double> t, std::span<const double> z,
                         std::size_t first, std::size_t last, double t_k, double g_k,
                         double slope) {
  constexpr double kTiny = 1e-300;
  double sse = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double pred = std::max(g_k + slope * (t[i] - t_k), kTiny);
    const double r = z[i] - std::log(pred);
    sse += r * r;
  }
  return sse;
}

// Exponential through the knot (t_k, e^{z_k}) fitted on log scale over
// [first, last): z − z_k = −μ (t − t_k). Returns μ and the SSE.
std::pair<double, double> anchored_exponential(std::span<const double> t,
                                               std::span<const double> z, std::size_t first,
                                               std::size_t last, double t_k, double z_k) {
  double stt = 0.0, stz = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    stt += (t[i] - t_k) * (t[i] - t_k);
    stz += (t[i] - t_k) * (z[i] - z_k);
  }
  const double mu = stt > 0.0 ? -stz / stt : 0.0;
  double sse = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double r = z[i] - z_k + mu * (t[i] - t_k);
    sse += r * r;
  }
  return {mu, sse};
}

}  // namespace

double c_tilde(const ScalarProblem& p, double gamma) {
  return p.a * gamma * gamma / (p.a - gamma);
}

double k_lower(double gamma, double c) { return (gamma * gamma - c) / (4.0 * gamma); }

double mu_gamma(const ScalarProblem& p, double c, double gamma) {
  require_hypothesis(p, gamma);
  if (!(c >= 0.0)) throw std::invalid_argument("mu_gamma: imbalance c must be >= 0");
  const double a = p.a;
  if (a >= 0.0) {
    const double den = gamma - 4.0 * a;
    return 0.25 * p.r * std::sqrt((4.0 * c + gamma * gamma) / (den * den));
  }
  if (c < c_tilde(p, gamma)) {
    const double num = gamma * gamma + c;
    const double den = gamma * gamma - c - 4.0 * a * gamma;
    return 0.25 * p.r * std::sqrt((num * num) / (den * den));
  }
  return 0.25 * p.r * std::sqrt(c / (4.0 * a * a + c));
}

double mu_lower_bound(const ScalarProblem& p, double gamma) {
  require_hypothesis(p, gamma);
  const double ratio = gamma / (gamma - 4.0 * p.a);
  return 0.25 * p.r * std::min(1.0, std::sqrt(ratio * ratio));
}

bool monotonicity_check(const ScalarProblem& p, double gamma, std::span<const double> c_grid) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double c : c_grid) {
    const double mu = mu_gamma(p, c, gamma);
    if (mu < prev - 1e-12) return false;
    prev = std::max(prev, mu);
  }
  return true;
}

RatioComponents pli_ratio_components(const ScalarProblem& p, double k, double c) {
  p.validate();
  if (!(k > p.a)) throw InadmissibleGainError("pli_ratio_components: k must exceed a");
  const double l = ell(p, k);
  const double eps = k - scalar_optimum(p).k_star;
  RatioComponents out;
  out.theta1 = p.r * (l * l * eps * eps - 2.0 * l * eps + 1.0);
  out.theta2 = l * std::sqrt(c + 4.0 * k * k);
  return out;
}

double factored_pli_ratio(const ScalarProblem& p, double k, double c) {
  const double k_star = scalar_optimum(p).k_star;
  if (near_optimum(k, k_star)) {
    const RatioComponents rc = pli_ratio_components(p, k, c);
    return 4.0 * rc.theta1 * rc.theta2;
  }
  const double g = scalar_gradient(p, k);
  const double gap = scalar_cost(p, k) - scalar_optimum(p).j_min;
  return g * g * std::sqrt(c + 4.0 * k * k) / gap;
}

double standard_pli_ratio(const ScalarProblem& p, double k) {
  const ScalarOptimum opt = scalar_optimum(p);
  if (near_optimum(k, opt.k_star)) return standard_ratio_expansion(p, k, opt.k_star);
  const double g = scalar_gradient(p, k);
  return g * g / (scalar_cost(p, k) - opt.j_min);
}

std::string_view to_string(CertificateKind kind) {
  return kind == CertificateKind::kGlobalPli ? "gPLI" : "satPLI";
}

std::string_view to_string(ProfileVerdict verdict) {
  return verdict == ProfileVerdict::kGecsLike ? "GECS-like" : "GLECS-like";
}

PliCertificate verify_gpli_samples(const ScalarProblem& p, double gamma, Eigen::Index kappa,
                                   std::size_t n_samples, std::uint64_t seed) {
  require_hypothesis(p, gamma);
  if (kappa < 1) throw std::invalid_argument("verify_gpli_samples: kappa must be >= 1");
  const ScalarOptimum opt = scalar_optimum(p);

  PliCertificate cert;
  cert.kind = CertificateKind::kGlobalPli;
  cert.mu = mu_lower_bound(p, gamma);
  cert.domain_descriptor = fmt::format(
      "K_gamma = {{(k1, k2) : k2 k1 > {:.6g}, |k1 + k2^T|^2 >= {:.6g}}}, kappa = {}", p.a, gamma,
      kappa);
  cert.min_ratio_observed = std::numeric_limits<double>::infinity();

  GpliSampler sampler(p, gamma, seed);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    FactoredGain fg;
    double k = 0.0, c = 0.0, d = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < kMaxRedraws && !found; ++attempt) {
      const SampleTarget target = sampler.next();
      fg = factors_for(target.k, target.c, kappa, sampler.rng());
      k = compose(fg)(0, 0);
      c = std::max(0.0, imbalance(fg));
      d = distance_measure(fg);
      found = k > p.a && d >= gamma && std::isfinite(d);
    }
    if (!found) continue;

    const double sum_sq = fg.k1.squaredNorm() + fg.k2.squaredNorm();
    double ratio;
    if (near_optimum(k, opt.k_star)) {
      ratio = standard_ratio_expansion(p, k, opt.k_star) * sum_sq;
    } else {
      const double g = scalar_gradient(p, k);
      ratio = g * g * sum_sq / (scalar_cost(p, k) - opt.j_min);
    }
    const double mu = mu_gamma(p, c, gamma);
    ++cert.samples_checked;
    cert.min_ratio_observed = std::min(cert.min_ratio_observed, ratio);

    const bool violated = ratio < mu * (1.0 - kViolationSlack);
    if (violated) ++cert.violations;
    const double margin = ratio / mu;
    const bool track = cert.violations > 0 ? (violated && margin < worst_margin)
                                           : margin < worst_margin;
    if (track || (violated && cert.violations == 1)) {
      worst_margin = margin;
      PliWitness w;
      w.k = k;
      w.c = c;
      w.d = d;
      w.ratio = ratio;
      w.mu = mu;
      w.k1.assign(fg.k1.data(), fg.k1.data() + fg.k1.size());
      w.k2.assign(fg.k2.data(), fg.k2.data() + fg.k2.size());
      cert.witness = std::move(w);
    }
  }
  cert.accepted = cert.violations == 0 && cert.samples_checked > 0;
  return cert;
}

PliCertificate satpli_witness(const ScalarProblem& p, double k_max, std::size_t grid_points) {
  const ScalarOptimum opt = scalar_optimum(p);
  if (!(k_max > opt.k_star)) {
    throw std::invalid_argument("satpli_witness: k_max must exceed k*");
  }
  if (grid_points < 2) throw std::invalid_argument("satpli_witness: need >= 2 grid points");

  PliCertificate cert;
  cert.kind = CertificateKind::kSaturatedPli;
  cert.grad_bound = 0.5 * p.r * (1.0 + kSatGradSlack);
  // Scale of the saturation: the optimal cost.
  cert.b_sat = opt.j_min;
  cert.domain_descriptor = fmt::format("(k*, k_max] = ({:.6g}, {:.6g}]", opt.k_star, k_max);

  // Log grid strictly above k*.
  std::vector<double> grid = log_grid(opt.k_star, k_max, grid_points + 1);
  grid.erase(grid.begin());

  double max_grad = 0.0;
  double a_sat = std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();
  double prev_ratio = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double k : grid) {
    const double g = scalar_gradient(p, k);
    const double theta = scalar_cost(p, k) - opt.j_min;
    const double ratio = standard_pli_ratio(p, k);
    max_grad = std::max(max_grad, std::abs(g));
    a_sat = std::min(a_sat, ratio * (cert.b_sat + theta));
    min_ratio = std::min(min_ratio, ratio);
    if (ratio > prev_ratio * (1.0 + 1e-12)) monotone = false;
    prev_ratio = ratio;
  }
  cert.a_sat = a_sat;
  cert.samples_checked = grid.size();
  cert.min_ratio_observed = min_ratio;
  cert.ratio_at_reference = standard_pli_ratio(p, 2.0 * opt.k_star);
  cert.ratio_at_k_max = standard_pli_ratio(p, k_max);

  const bool bounded = max_grad <= cert.grad_bound;
  const bool vanishing =
      k_max < 100.0 * opt.k_star || cert.ratio_at_k_max < cert.ratio_at_reference / 10.0;
  cert.accepted = bounded && monotone && vanishing && a_sat > 0.0;
  cert.violations = (bounded ? 0 : 1) + (monotone ? 0 : 1) + (vanishing ? 0 : 1);
  return cert;
}

double reparam_mu_estimate(const ScalarProblem& p, double epsilon, double k_max,
                           std::size_t grid_points) {
  p.validate();
  if (!(p.a > 0.0)) throw std::invalid_argument("reparam_mu_estimate: requires a > 0");
  if (!(epsilon > std::sqrt(p.a))) {
    throw std::invalid_argument("reparam_mu_estimate: epsilon must exceed sqrt(a)");
  }
  if (!(k_max > epsilon)) throw std::invalid_argument("reparam_mu_estimate: k_max <= epsilon");
  const ScalarOptimum opt = scalar_optimum(p);

  double inf = std::numeric_limits<double>::infinity();
  for (double k : log_grid(epsilon, k_max, grid_points)) {
    const double kk = k * k;
    double ratio;
    if (near_optimum(k, std::sqrt(opt.k_star))) {
      // f'² / (f − f̲) = 4k² ∇J(k²)² / θ(k²), the latter by its expansion.
      ratio = 4.0 * kk * standard_ratio_expansion(p, kk, opt.k_star);
    } else {
      const double fprime = 2.0 * k * scalar_gradient(p, kk);
      ratio = fprime * fprime / (scalar_cost(p, kk) - opt.j_min);
    }
    inf = std::min(inf, ratio);
  }
  return inf;
}

double standard_ratio_infimum(const ScalarProblem& p, double k_lo, double k_max,
                              std::size_t grid_points) {
  p.validate();
  if (!(k_lo > p.a) || !(k_lo > 0.0) || !(k_max > k_lo)) {
    throw std::invalid_argument("standard_ratio_infimum: need max(a, 0) < k_lo < k_max");
  }
  double inf = std::numeric_limits<double>::infinity();
  for (double k : log_grid(k_lo, k_max, grid_points)) {
    inf = std::min(inf, standard_pli_ratio(p, k));
  }
  return inf;
}

ProfileFit classify_profile(std::span<const double> times, std::span<const double> gaps,
                            double gap_floor) {
  if (times.size() != gaps.size()) {
    throw std::invalid_argument("classify_profile: times and gaps differ in length");
  }
  std::vector<double> t, g, z;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::isfinite(gaps[i]) && gaps[i] > gap_floor && std::isfinite(times[i])) {
      t.push_back(times[i]);
      g.push_back(gaps[i]);
      z.push_back(std::log(gaps[i]));
    }
  }
  const std::size_t n = t.size();
  if (n < kMinProfilePoints) {
    throw std::invalid_argument(fmt::format(
        "classify_profile: trajectory too short ({} usable points, need {})", n,
        kMinProfilePoints));
  }

  ProfileFit fit;
  fit.points = n;
  const LinearFit pure = ols(t, z, 0, n);
  fit.sse_pure_exp = ols_sse(t, z, 0, n, pure);
  fit.mu_pure = -pure.slope;

  // Piecewise model continuous at the knot t* = t[s]: a line through
  // (t*, gap(t*)) on [0, t*] and an exponential through the same point on
  // (t*, end]. The knot is searched exhaustively over recorded times.
  const std::size_t min_seg = kMinSegmentPoints;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_knot = min_seg - 1;
  for (std::size_t knot = min_seg - 1; knot + min_seg < n; ++knot) {
    const double slope = anchored_line_slope(t, g, 0, knot, t[knot], g[knot]);
    const double head = anchored_line_sse(t, z, 0, knot, t[knot], g[knot], slope);
    if (head >= best) continue;
    const double tail = anchored_exponential(t, z, knot + 1, n, t[knot], z[knot]).second;
    if (head + tail < best) {
      best = head + tail;
      best_knot = knot;
    }
  }

  const double slope = anchored_line_slope(t, g, 0, best_knot, t[best_knot], g[best_knot]);
  const auto [mu_tail, tail_sse] =
      anchored_exponential(t, z, best_knot + 1, n, t[best_knot], z[best_knot]);
  fit.sse_piecewise =
      anchored_line_sse(t, z, 0, best_knot, t[best_knot], g[best_knot], slope) + tail_sse;
  fit.beta = -slope;
  fit.t_star = t[best_knot];
  fit.mu_tail = mu_tail;

  const double floor = kSsePerPointFloor * static_cast<double>(n);
  fit.verdict = fit.sse_pure_exp <= fit.sse_piecewise * (1.0 + kVerdictTolerance) + floor
                    ? ProfileVerdict::kGecsLike
                    : ProfileVerdict::kGlecsLike;
  return fit;
}

ProfileFit classify_profile(const Trajectory& traj, double gap_floor) {
  return classify_profile(traj.times, traj.gaps, gap_floor);
}

}  // namespace lqrflow
