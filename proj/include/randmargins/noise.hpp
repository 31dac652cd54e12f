// Copyright 2026 The RandMargins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RANDMARGINS_NOISE_HPP_
#define RANDMARGINS_NOISE_HPP_

#include <cmath>
#include <cstdint>

#include "randmargins/errors.hpp"
#include "randmargins/random.hpp"

namespace randmargins {


struct LaplaceSpec {
  double mean = 0.0;
  double scale = 1.0;

  void Validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw InvalidArgumentError("LaplaceSpec: scale must be positive");
    }
  }
};

// Inverse-CDF draw: one uniform per sample, so the stream is a pure function
// of the rng state.
inline double SampleLaplace(const LaplaceSpec& spec, Rng& rng) {
  spec.Validate();
  const double u = UniformOpenDouble(rng) - 0.5;
  const double magnitude = -spec.scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? spec.mean - magnitude : spec.mean + magnitude;
}

// CDF of the centered Laplace distribution with scale b.
inline double LaplaceCdf(double x, double b) {
  return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

// Pr[w > x] for centered Laplace(b), accurate in the upper tail.
inline double LaplaceSurvival(double x, double b) {
  return x < 0.0 ? 1.0 - 0.5 * std::exp(x / b) : 0.5 * std::exp(-x / b);
}

// Pr[ceil(mu + w) = k] for w ~ Lap(b): the mass of w in (k-1-mu, k-mu].
inline double CeilShiftedLaplacePmf(double mu, double b, std::int64_t k) {
  if (!(b > 0.0)) throw InvalidArgumentError("Laplace scale must be positive");
  const double hi = static_cast<double>(k) - mu;
  const double lo = hi - 1.0;
  // Width-one interval mass, written to avoid cancellation in the tails.
  const double width_factor = -std::expm1(-1.0 / b);
  if (lo >= 0.0) return 0.5 * std::exp(-lo / b) * width_factor;
  if (hi <= 0.0) return 0.5 * std::exp(hi / b) * width_factor;
  return 1.0 - 0.5 * std::exp(-hi / b) - 0.5 * std::exp(lo / b);
}

// Pr[ceil(mu + w) <= k].
inline double CeilShiftedLaplaceCdf(double mu, double b, std::int64_t k) {
  return LaplaceCdf(static_cast<double>(k) - mu, b);
}

// Pr[ceil(mu + w) >= k].
inline double CeilShiftedLaplaceSurvival(double mu, double b, std::int64_t k) {
  return LaplaceSurvival(static_cast<double>(k) - 1.0 - mu, b);
}

}  // namespace randmargins

#endif  // RANDMARGINS_NOISE_HPP_
