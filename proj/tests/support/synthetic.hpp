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


// Seeded synthetic gap profiles with known GECS / GLECS labels.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace lqrflow::testing {

struct LabeledProfile {
  std::vector<double> times;
  std::vector<double> gaps;
  bool glecs = false;
  double beta = 0.0;    ///< linear-phase slope (GLECS only)
  double t_star = 0.0;  ///< switch time (GLECS only)
  double mu = 0.0;      ///< exponential rate
};

/// Case i is GLECS when i is odd: a linear descent from g0 at slope beta to
/// g_s, then g_s·e^{−μ(t − t*)}. Even cases are g0·e^{−μt}. Every sample is
/// multiplied by (1 + noise·N(0, 1)); 200 points span 12 e-folds of the tail.
inline std::vector<LabeledProfile> synthetic_profiles(std::size_t count, std::uint64_t seed,
                                                      double noise = 0.01) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<LabeledProfile> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    LabeledProfile prof;
    prof.glecs = c % 2 == 1;
    const double g0 = std::pow(10.0, 2.0 * uniform(rng));
    prof.mu = 0.5 + 2.5 * uniform(rng);
    prof.beta = g0 / (5.0 + 10.0 * uniform(rng));
    const double g_switch = g0 * (0.02 + 0.2 * uniform(rng));
    prof.t_star = prof.glecs ? (g0 - g_switch) / prof.beta : 0.0;
    const double horizon = prof.t_star + 12.0 / prof.mu;
    for (int i = 0; i < 200; ++i) {
      const double t = horizon * i / 199.0;
      double v;
      if (!prof.glecs) {
        v = g0 * std::exp(-prof.mu * t);
      } else if (t <= prof.t_star) {
        v = g0 - prof.beta * t;
      } else {
        v = g_switch * std::exp(-prof.mu * (t - prof.t_star));
      }
      prof.times.push_back(t);
      prof.gaps.push_back(v * (1.0 + noise * normal(rng)));
    }
    out.push_back(std::move(prof));
  }
  return out;
}

}  // namespace lqrflow::testing
