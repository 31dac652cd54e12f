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

#ifndef RANDMARGINS_LEARNER_HPP_
#define RANDMARGINS_LEARNER_HPP_

// RandMargins: for each axis in turn, take a block of noisy size from the top
// of the surviving data, run the interior point solver on the block's
// Delta innermost (lowest) points, and delete every survivor at or above the
// returned point. A point therefore influences the solver only on the few
// axes where it sits inside a block, and is removed with constant probability
// each time it does.
//
// Axes are 0-based throughout the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randmargins/core_model.hpp"
#include "randmargins/errors.hpp"
#include "randmargins/ipp.hpp"
#include "randmargins/noise.hpp"
#include "randmargins/random.hpp"

namespace randmargins {

// Iterations whose x' is in the top block, beyond which privacy loss is
// charged: |E_in| <= kInBlockFactor * ln(1/delta) w.h.p.
inline constexpr double kInBlockFactor = 35.0;
// End-to-end epsilon constant: each charged iteration costs 2 eps.
inline constexpr double kTotalEpsilonFactor = 2.0 * kInBlockFactor;

struct PrivacyBudget {
  double epsilon = 0.0;        // per solver call
  double delta = 0.0;          // per solver call
  double total_epsilon = 0.0;  // 70 * eps * ln(1/delta)
  double total_delta = 0.0;    // (d + 2) * delta

  static PrivacyBudget ForRandMargins(double epsilon, double delta,
                                      std::size_t d) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
      throw InvalidArgumentError("PrivacyBudget: delta must lie in (0, 1)");
    }
    return {epsilon, delta,
            kTotalEpsilonFactor * epsilon * std::log(1.0 / delta),
            static_cast<double>(d + 2) * delta};
  }
};

inline double InBlockThreshold(double delta) {
  return kInBlockFactor * std::log(1.0 / delta);
}

struct RandMarginsParams {
  IppParams ipp;
  std::int64_t block_size = 1;  // Delta, the solver's sample complexity
  double mean_block = 0.0;      // mu = 4 * Delta * ln(1/beta)
  RandomSeed seed = 0;
  bool zero_noise = false;      // debug: w_i = 0 on every axis

  static RandMarginsParams Make(const IppParams& ipp, std::int64_t block_size,
                                RandomSeed seed) {
    ipp.Validate();
    if (block_size < 1) {
      throw InvalidArgumentError("RandMarginsParams: Delta must be >= 1");
    }
    RandMarginsParams p;
    p.ipp = ipp;
    p.block_size = block_size;
    p.mean_block =
        4.0 * static_cast<double>(block_size) * std::log(1.0 / ipp.beta);
    p.seed = seed;
    return p;
  }

  static RandMarginsParams ForSolver(const IppParams& ipp,
                                     const IppSolver& solver,
                                     RandomSeed seed) {
    return Make(ipp, solver.SampleComplexity(ipp), seed);
  }

  double noise_scale() const { return 2.0 * static_cast<double>(block_size); }

  void Validate() const {
    ipp.Validate();
    if (block_size < 1) {
      throw InvalidArgumentError("RandMarginsParams: Delta must be >= 1");
    }
  }
};

enum class ClampEvent { kNone, kLow, kHigh };

inline const char* ClampEventName(ClampEvent e) {
  switch (e) {
    case ClampEvent::kNone: return "none";
    case ClampEvent::kLow: return "low";
    case ClampEvent::kHigh: return "high";
  }
  return "none";
}

struct IterationTrace {
  std::size_t axis = 0;
  double noise = 0.0;               // w_i
  std::int64_t raw_size = 0;        // ceil(mu + w_i)
  std::int64_t clamped_size = 0;    // clamped into [Delta, |S_bar|]
  ClampEvent clamp = ClampEvent::kNone;
  std::int64_t survivors_before = 0;
  std::vector<ExampleId> block;     // B_i, ascending ids
  std::vector<ExampleId> inner;     // D_i, ascending ids
  std::int64_t inner_min = 0;
  std::int64_t inner_max = 0;
  std::int64_t interior_point = 0;  // p_i
  bool interior_success = false;    // p_i in [min D_i, max D_i]
  std::vector<ExampleId> removed;   // R_i = {y : y[i] >= p_i}, ascending ids
  // Members of R_i with y[i] == p_i; they would survive a strict rule and
  // are classified correctly by h_p.
  std::int64_t boundary_removed = 0;
  std::int64_t survivors_after = 0;

  std::int64_t removed_count() const {
    return static_cast<std::int64_t>(removed.size());
  }
};

struct RunTrace {
  std::vector<IterationTrace> iterations;
  std::vector<std::int64_t> corner;
  std::uint64_t input_hash = 0;
  RandomSeed seed = 0;
  std::int64_t block_size = 0;
  double mean_block = 0.0;
  bool complete = true;  // false when the run was halted early

  std::int64_t total_removed() const {
    std::int64_t total = 0;
    for (const auto& it : iterations) total += it.removed_count();
    return total;
  }
  std::int64_t max_clamped_size() const {
    std::int64_t m = 0;
    for (const auto& it : iterations) m = std::max(m, it.clamped_size);
    return m;
  }
  std::size_t clamp_events() const {
    return static_cast<std::size_t>(
        std::count_if(iterations.begin(), iterations.end(), [](const auto& it) {
          return it.clamp != ClampEvent::kNone;
        }));
  }
  std::size_t solver_failures() const {
    return static_cast<std::size_t>(
        std::count_if(iterations.begin(), iterations.end(),
                      [](const auto& it) { return !it.interior_success; }));
  }
};

struct RandMarginsResult {
  OriginRectangle hypothesis;
  RunTrace trace;
};

namespace detail {

struct RunControl {
  // Stop after the iteration that removes this example.
  std::optional<ExampleId> halt_after_removal;
  std::optional<std::size_t> max_iterations;
  bool hash_input = true;
};

inline RunTrace RunRandMargins(const Dataset& data,
                               const RandMarginsParams& params,
                               const IppSolver& solver,
                               const RunControl& control = {}) {
  params.Validate();
  if (params.ipp.domain_max < data.domain().x_max) {
    throw InvalidArgumentError(
        "RandMargins: solver domain smaller than the grid");
  }
  const std::size_t d = data.dim();
  const auto delta_count = static_cast<std::size_t>(params.block_size);

  RunTrace trace;
  if (control.hash_input) trace.input_hash = data.ContentHash();
  trace.seed = params.seed;
  trace.block_size = params.block_size;
  trace.mean_block = params.mean_block;

  std::vector<ExampleId> survivors(data.ids().begin(), data.ids().end());
  std::vector<std::int64_t> inner_values;
  using Key = std::pair<std::int64_t, ExampleId>;
  std::vector<Key> keys;
  keys.reserve(survivors.size());
  for (std::size_t axis = 0; axis < d; ++axis) {
    if (control.max_iterations && axis >= *control.max_iterations) {
      trace.complete = false;
      break;
    }
    Rng rng(DeriveSeed(params.seed, axis));
    IterationTrace it;
    it.axis = axis;
    it.survivors_before = static_cast<std::int64_t>(survivors.size());
    if (survivors.size() < delta_count) {
      throw InsufficientDataError(
          "RandMargins: " + std::to_string(survivors.size()) +
          " points left at axis " + std::to_string(axis) + ", need Delta = " +
          std::to_string(delta_count));
    }
    it.noise = params.zero_noise
                   ? 0.0
                   : SampleLaplace({0.0, params.noise_scale()}, rng);
    it.raw_size =
        static_cast<std::int64_t>(std::ceil(params.mean_block + it.noise));
    it.clamped_size = it.raw_size;
    if (it.raw_size < params.block_size) {
      it.clamped_size = params.block_size;
      it.clamp = ClampEvent::kLow;
    } else if (it.raw_size > it.survivors_before) {
      it.clamped_size = it.survivors_before;
      it.clamp = ClampEvent::kHigh;
    }
    const auto k = static_cast<std::size_t>(it.clamped_size);

    // Project once per axis; ranking uses the same total order as
    // detail::AxisRankGreater (higher value first, then smaller id).
    keys.clear();
    const auto column = data.Column(axis);
    for (ExampleId id : survivors) keys.push_back({column[id], id});
    auto greater = [](const Key& a, const Key& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    };
    auto lower = [&](const Key& a, const Key& b) { return greater(b, a); };
    // B_i: top k of the survivors along this axis.
    if (k < keys.size()) {
      std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k),
                       keys.end(), greater);
    }
    it.block.clear();
    for (std::size_t j = 0; j < k; ++j) it.block.push_back(keys[j].second);
    // D_i: the Delta lowest members of B_i.
    if (delta_count < k) {
      std::nth_element(keys.begin(),
                       keys.begin() + static_cast<std::ptrdiff_t>(delta_count),
                       keys.begin() + static_cast<std::ptrdiff_t>(k), lower);
    }
    inner_values.clear();
    for (std::size_t j = 0; j < delta_count; ++j) {
      it.inner.push_back(keys[j].second);
      inner_values.push_back(keys[j].first);
    }
    std::sort(it.block.begin(), it.block.end());
    std::sort(it.inner.begin(), it.inner.end());

    const auto [lo, hi] =
        std::minmax_element(inner_values.begin(), inner_values.end());
    it.inner_min = *lo;
    it.inner_max = *hi;
    it.interior_point = solver.Solve(inner_values, params.ipp, rng);
    it.interior_success =
        it.inner_min <= it.interior_point && it.interior_point <= it.inner_max;

    // R_i and the new survivor set.
    std::vector<ExampleId> keep;
    keep.reserve(keys.size());
    for (const auto& [c, id] : keys) {
      if (c >= it.interior_point) {
        it.removed.push_back(id);
        if (c == it.interior_point) ++it.boundary_removed;
      } else {
        keep.push_back(id);
      }
    }
    std::sort(it.removed.begin(), it.removed.end());
    survivors = std::move(keep);
    it.survivors_after = static_cast<std::int64_t>(survivors.size());
    trace.corner.push_back(it.interior_point);

    const bool halt =
        control.halt_after_removal &&
        std::binary_search(it.removed.begin(), it.removed.end(),
                           *control.halt_after_removal);
    trace.iterations.push_back(std::move(it));
    if (halt && axis + 1 < d) {
      trace.complete = false;
      break;
    }
  }
  return trace;
}

}  // namespace detail

// Runs the learner on `data`, treating every member as a positive point.
// Throws InsufficientDataError if fewer than Delta points survive into some
// iteration.
inline RandMarginsResult RandMargins(const Dataset& data,
                                     const RandMarginsParams& params,
                                     const IppSolver& solver) {
  RunTrace trace = detail::RunRandMargins(data, params, solver);
  OriginRectangle h{trace.corner, false};
  return {std::move(h), std::move(trace)};
}

// Minimum positive count below which LearnRectangle returns the all-zero
// hypothesis: Delta + ceil(6 * Delta * ln(1/beta)).
inline std::int64_t FallbackThreshold(const RandMarginsParams& params) {
  const double b = static_cast<double>(params.block_size);
  return params.block_size +
         static_cast<std::int64_t>(std::ceil(6.0 * b * std::log(1.0 / params.ipp.beta)));
}

struct LearnOptions {
  bool fallback = true;
};

struct LearnResult {
  OriginRectangle hypothesis;
  std::optional<RunTrace> trace;
  bool fell_back = false;
  std::string fallback_reason;
};

inline LearnResult LearnRectangle(const Dataset& s,
                                  const RandMarginsParams& params,
                                  const IppSolver& solver,
                                  const LearnOptions& options = {}) {
  params.Validate();
  const Dataset positives = s.Positives();
  LearnResult out;
  const auto threshold = FallbackThreshold(params);
  if (static_cast<std::int64_t>(positives.size()) < threshold) {
    if (!options.fallback) {
      throw InsufficientDataError(
          "LearnRectangle: " + std::to_string(positives.size()) +
          " positives, need " + std::to_string(threshold));
    }
    out.hypothesis = OriginRectangle::AllZero(s.dim());
    out.fell_back = true;
    out.fallback_reason = "too few positives";
    return out;
  }
  try {
    auto result = RandMargins(positives, params, solver);
    out.hypothesis = std::move(result.hypothesis);
    out.trace = std::move(result.trace);
  } catch (const InsufficientDataError& e) {
    if (!options.fallback) throw;
    out.hypothesis = OriginRectangle::AllZero(s.dim());
    out.fell_back = true;
    out.fallback_reason = e.what();
  }
  return out;
}

struct SampleSizeConstants {
  double learner = 12.0;  // C
  double vc = 8.0;        // C'
};

// max(C * n_A * (d/alpha) * ln(e/alpha) * ln(e/beta),
//     C' * (1/alpha) * (2d * ln(1/alpha) + ln(1/beta))).
inline std::int64_t RequiredSampleSize(double alpha, const IppParams& ipp,
                                       std::size_t d, const IppSolver& solver,
                                       const SampleSizeConstants& c = {}) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidArgumentError("RequiredSampleSize: alpha must lie in (0, 1)");
  }
  ipp.Validate();
  const double n_a = static_cast<double>(solver.SampleComplexity(ipp));
  const double dd = static_cast<double>(d);
  const double learner = c.learner * n_a * (dd / alpha) *
                         std::log(std::exp(1.0) / alpha) *
                         std::log(std::exp(1.0) / ipp.beta);
  const double vc = c.vc / alpha *
                    (2.0 * dd * std::log(1.0 / alpha) + std::log(1.0 / ipp.beta));
  return static_cast<std::int64_t>(std::ceil(std::max(learner, vc)));
}

// Composition baseline: two solver calls per axis, on the n lowest and the n
// highest projected positives, with per-call budget set by advanced
// composition over 2d calls.
struct BaselineResult {
  OriginRectangle hypothesis;  // corner = upper interval ends
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
  IppParams per_call;
  std::int64_t block_size = 0;
};

inline IppParams BaselinePerCallParams(const IppParams& total, std::size_t d) {
  total.Validate();
  if (!(total.delta > 0.0)) {
    throw InvalidArgumentError("Baseline: delta must be positive");
  }
  IppParams per = total;
  const double dd = static_cast<double>(d);
  per.epsilon =
      total.epsilon / (2.0 * std::sqrt(4.0 * dd * std::log(1.0 / total.delta)));
  per.delta = total.delta / (4.0 * dd);
  return per;
}

inline BaselineResult BaselineCompositionLearner(const Dataset& s,
                                                 const IppParams& total,
                                                 const IppSolver& solver,
                                                 RandomSeed seed) {
  const std::size_t d = s.dim();
  BaselineResult out;
  out.per_call = BaselinePerCallParams(total, d);
  out.block_size = solver.SampleComplexity(out.per_call);
  const Dataset positives = s.Positives();
  const auto n = static_cast<std::size_t>(out.block_size);
  if (positives.size() < n) {
    throw InsufficientDataError("Baseline: " +
                                std::to_string(positives.size()) +
                                " positives, need " + std::to_string(n));
  }
  std::vector<ExampleId> ids(positives.ids().begin(), positives.ids().end());
  std::vector<std::int64_t> values;
  for (std::size_t axis = 0; axis < d; ++axis) {
    Rng rng(DeriveSeed(seed, axis));
    auto project = [&](std::size_t count) {
      values.clear();
      for (std::size_t j = 0; j < count; ++j) {
        values.push_back(positives.Coord(ids[j], axis));
      }
    };
    detail::PartitionBottomK(ids, positives, axis, n);
    project(n);
    out.lower.push_back(solver.Solve(values, out.per_call, rng));
    detail::PartitionTopK(ids, positives, axis, n);
    project(n);
    out.upper.push_back(solver.Solve(values, out.per_call, rng));
  }
  out.hypothesis = OriginRectangle{out.upper, false};
  return out;
}

}  // namespace randmargins

#endif  // RANDMARGINS_LEARNER_HPP_
