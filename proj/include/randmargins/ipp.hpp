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

#ifndef RANDMARGINS_IPP_HPP_
#define RANDMARGINS_IPP_HPP_

// Interior point solvers. Given a multiset of values from {0, ..., domain_max}
// a solver returns some v with min(values) <= v <= max(values), except with
// probability beta, provided it receives at least SampleComplexity(params)
// values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "randmargins/errors.hpp"
#include "randmargins/random.hpp"

namespace randmargins {

struct IppParams {
  double epsilon = 1.0;
  double delta = 0.0;
  double beta = 0.1;
  std::int64_t domain_max = 0;

  void Validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw InvalidArgumentError("IppParams: epsilon must be positive");
    }
    if (!(delta >= 0.0) || !(delta < std::exp(-2.0))) {
      throw InvalidArgumentError("IppParams: delta must lie in [0, 1/e^2)");
    }
    if (!(beta > 0.0) || !(beta < 0.25)) {
      throw InvalidArgumentError("IppParams: beta must lie in (0, 1/4)");
    }
    if (domain_max < 0) {
      throw InvalidArgumentError("IppParams: domain_max must be >= 0");
    }
  }
};

class IppSolver {
 public:
  virtual ~IppSolver() = default;

  virtual std::string_view Name() const = 0;

  // Minimum input size n for which the interior-point guarantee holds.
  virtual std::int64_t SampleComplexity(const IppParams& params) const = 0;

  std::int64_t Solve(std::span<const std::int64_t> values,
                     const IppParams& params, Rng& rng) const {
    params.Validate();
    if (values.empty() ||
        static_cast<std::int64_t>(values.size()) < SampleComplexity(params)) {
      throw TooFewPointsError("IppSolver::Solve: " + std::string(Name()) +
                              " needs at least " +
                              std::to_string(SampleComplexity(params)) +
                              " values, got " + std::to_string(values.size()));
    }
    for (std::int64_t v : values) {
      if (v < 0 || v > params.domain_max) {
        throw InvalidArgumentError("IppSolver::Solve: value outside domain");
      }
    }
    return DoSolve(values, params, rng);
  }

  // Exact output pmf over {0, ..., domain_max}, or nullopt when the solver
  // does not support exact evaluation for these inputs.
  virtual std::optional<std::vector<double>> OutputDistribution(
      std::span<const std::int64_t> values, const IppParams& params) const {
    (void)values;
    (void)params;
    return std::nullopt;
  }

 private:
  virtual std::int64_t DoSolve(std::span<const std::int64_t> values,
                               const IppParams& params, Rng& rng) const = 0;
};

// Deterministic, non-private reference: the lower median.
class OracleMedianIpp final : public IppSolver {
 public:
  std::string_view Name() const override { return "oracle"; }
  std::int64_t SampleComplexity(const IppParams&) const override { return 1; }

  static std::int64_t LowerMedian(std::span<const std::int64_t> values) {
    if (values.empty()) throw TooFewPointsError("LowerMedian: empty input");
    std::vector<std::int64_t> sorted(values.begin(), values.end());
    const auto mid = sorted.begin() +
                     static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    return *mid;
  }

  std::optional<std::vector<double>> OutputDistribution(
      std::span<const std::int64_t> values,
      const IppParams& params) const override {
    std::vector<double> pmf(static_cast<std::size_t>(params.domain_max) + 1,
                            0.0);
    pmf[static_cast<std::size_t>(LowerMedian(values))] = 1.0;
    return pmf;
  }

 private:
  std::int64_t DoSolve(std::span<const std::int64_t> values, const IppParams&,
                       Rng&) const override {
    return LowerMedian(values);
  }
};

// Maximal run of outputs [lo, hi] sharing one quality score.
struct QualitySegment {
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t quality;
};

// Exponential mechanism over {0, ..., domain_max} with quality
// q(v) = min(#{s <= v}, #{s >= v}). q has sensitivity 1, so sampling
// proportional to exp(eps * q / 2) is eps-DP. delta is not used.
class ExpMechIpp final : public IppSolver {
 public:
  static constexpr std::int64_t kDefaultExactLimit = 4096;

  explicit ExpMechIpp(std::int64_t exact_limit = kDefaultExactLimit)
      : exact_limit_(exact_limit) {}

  std::string_view Name() const override { return "expmech"; }

  // ceil((4 / eps) * ln((domain_max + 1) / beta)): the median scores at
  // least n/2, every non-interior output scores 0, so the non-interior mass
  // is at most (domain_max + 1) * exp(-eps * n / 4) <= beta.
  std::int64_t SampleComplexity(const IppParams& params) const override {
    params.Validate();
    const double n =
        (4.0 / params.epsilon) *
        std::log((static_cast<double>(params.domain_max) + 1.0) / params.beta);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n)));
  }

  // Piecewise-constant description of q over the whole domain.
  static std::vector<QualitySegment> Segments(
      std::span<const std::int64_t> values, std::int64_t domain_max) {
    std::vector<std::int64_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<std::int64_t>(sorted.size());
    std::vector<QualitySegment> out;
    auto push = [&](std::int64_t lo, std::int64_t hi, std::int64_t q) {
      lo = std::max<std::int64_t>(lo, 0);
      hi = std::min(hi, domain_max);
      if (lo <= hi) out.push_back({lo, hi, q});
    };
    std::int64_t cursor = 0;   // first output not yet covered
    std::int64_t at_most = 0;  // #{s <= current distinct value}
    std::size_t i = 0;
    while (i < sorted.size()) {
      const std::int64_t value = sorted[i];
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == value) ++j;
      const std::int64_t below = at_most;  // #{s < value}
      at_most += static_cast<std::int64_t>(j - i);
      // Gap (cursor, value): #{s <= v} = below, #{s >= v} = n - below.
      push(cursor, value - 1, std::min(below, n - below));
      push(value, value, std::min(at_most, n - below));
      cursor = value + 1;
      i = j;
    }
    push(cursor, domain_max, 0);
    return out;
  }

  static std::vector<std::int64_t> QualityScores(
      std::span<const std::int64_t> values, std::int64_t domain_max) {
    std::vector<std::int64_t> q(static_cast<std::size_t>(domain_max) + 1, 0);
    for (const QualitySegment& seg : Segments(values, domain_max)) {
      std::fill(q.begin() + seg.lo, q.begin() + seg.hi + 1, seg.quality);
    }
    return q;
  }

  // pmf(v) proportional to exp(eps * q(v) / 2). Does not require the sample
  // complexity to be met, so audits may evaluate arbitrary inputs.
  std::vector<double> ExactOutputDistribution(
      std::span<const std::int64_t> values, double epsilon,
      std::int64_t domain_max) const {
    if (domain_max > exact_limit_) {
      throw DomainTooLargeError("ExactOutputDistribution: domain_max " +
                                std::to_string(domain_max) +
                                " exceeds exact limit " +
                                std::to_string(exact_limit_));
    }
    if (!(epsilon > 0.0)) {
      throw InvalidArgumentError("ExactOutputDistribution: epsilon <= 0");
    }
    const auto segments = Segments(values, domain_max);
    std::int64_t q_max = 0;
    for (const auto& s : segments) q_max = std::max(q_max, s.quality);
    std::vector<double> pmf(static_cast<std::size_t>(domain_max) + 1);
    double total = 0.0;
    for (const auto& s : segments) {
      const double w =
          std::exp(0.5 * epsilon * static_cast<double>(s.quality - q_max));
      for (std::int64_t v = s.lo; v <= s.hi; ++v) {
        pmf[static_cast<std::size_t>(v)] = w;
      }
      total += w * static_cast<double>(s.hi - s.lo + 1);
    }
    for (double& p : pmf) p /= total;
    return pmf;
  }

  std::optional<std::vector<double>> OutputDistribution(
      std::span<const std::int64_t> values,
      const IppParams& params) const override {
    if (params.domain_max > exact_limit_) return std::nullopt;
    return ExactOutputDistribution(values, params.epsilon, params.domain_max);
  }

  std::int64_t exact_limit() const { return exact_limit_; }

 private:
  // Picks a segment with probability proportional to its total weight, then
  // a uniform point inside it. Cost is O(|values| log |values|) regardless of
  // the domain size.
  std::int64_t DoSolve(std::span<const std::int64_t> values,
                       const IppParams& params, Rng& rng) const override {
    const auto segments = Segments(values, params.domain_max);
    std::int64_t q_max = 0;
    for (const auto& s : segments) q_max = std::max(q_max, s.quality);
    std::vector<double> cumulative;
    cumulative.reserve(segments.size());
    double total = 0.0;
    for (const auto& s : segments) {
      total += std::exp(0.5 * params.epsilon *
                        static_cast<double>(s.quality - q_max)) *
               static_cast<double>(s.hi - s.lo + 1);
      cumulative.push_back(total);
    }
    const double u = UniformDouble(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const QualitySegment& seg =
        segments[static_cast<std::size_t>(it - cumulative.begin())];
    return UniformInt(rng, seg.lo, seg.hi);
  }

  std::int64_t exact_limit_;
};

}  // namespace randmargins

#endif  // RANDMARGINS_IPP_HPP_
