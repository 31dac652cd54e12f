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

#ifndef RANDMARGINS_AUDIT_HPP_
#define RANDMARGINS_AUDIT_HPP_

// Verification tools for RandMargins on neighboring datasets S and
// S' = S ∪ {x'}:
//
//  * iteration partitioning of paired runs (E_in / E_out / E_after),
//  * the |E_in| concentration experiment,
//  * exact output marginals for d = 1 and hockey-stick divergence,
//  * Monte-Carlo lower bounds on the privacy loss for d >= 2,
//  * a replay checker for the per-run trace invariants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "randmargins/core_model.hpp"
#include "randmargins/errors.hpp"
#include "randmargins/ipp.hpp"
#include "randmargins/learner.hpp"
#include "randmargins/neighboring.hpp"
#include "randmargins/noise.hpp"
#include "randmargins/random.hpp"
#include "randmargins/stats.hpp"

namespace randmargins {

struct IterationPartition {
  // First iteration whose removal set contains x' (i*), if any.
  std::optional<std::size_t> removal_iteration;
  std::vector<std::size_t> in;     // i <= i*, x' in B'_i
  std::vector<std::size_t> out;    // i <= i*, x' not in B'_i
  std::vector<std::size_t> after;  // i > i*
  std::size_t iterations = 0;
};

inline bool ContainsId(const std::vector<ExampleId>& sorted_ids, ExampleId id) {
  return std::binary_search(sorted_ids.begin(), sorted_ids.end(), id);
}

// Partitions the iterations of the run on S' by the membership of x' in the
// top blocks B'_i. i* itself joins E_in or E_out by membership, so the three
// sets always cover every iteration.
inline IterationPartition PartitionIterations(const RunTrace& trace,
                                              const RunTrace& trace_prime,
                                              ExampleId extra_id) {
  if (trace.seed != trace_prime.seed ||
      trace.block_size != trace_prime.block_size ||
      trace.mean_block != trace_prime.mean_block) {
    throw UnpairedTracesError("PartitionIterations: traces are not paired");
  }
  IterationPartition part;
  part.iterations = trace_prime.iterations.size();
  for (std::size_t i = 0; i < part.iterations; ++i) {
    const auto& it = trace_prime.iterations[i];
    if (part.removal_iteration) {
      part.after.push_back(i);
      continue;
    }
    (ContainsId(it.block, extra_id) ? part.in : part.out).push_back(i);
    if (ContainsId(it.removed, extra_id)) part.removal_iteration = i;
  }
  return part;
}

inline IterationPartition PartitionIterations(const RunTrace& trace,
                                              const RunTrace& trace_prime,
                                              const NeighboringPair& pair) {
  return PartitionIterations(trace, trace_prime, pair.extra_id());
}

struct PairedEqualityReport {
  std::size_t checked = 0;
  std::vector<std::size_t> violations;
};

// Under paired seeds, iterations in E_out and E_after must reproduce the
// run on S exactly (same B_i, D_i and p_i) as long as every earlier output
// agreed. Checking stops at the first disagreeing output.
inline PairedEqualityReport CheckPairedEqualities(
    const RunTrace& trace, const RunTrace& trace_prime,
    const IterationPartition& part) {
  PairedEqualityReport report;
  const std::size_t common =
      std::min(trace.iterations.size(), trace_prime.iterations.size());
  std::set<std::size_t> charged(part.in.begin(), part.in.end());
  for (std::size_t i = 0; i < common; ++i) {
    const auto& a = trace.iterations[i];
    const auto& b = trace_prime.iterations[i];
    if (!charged.count(i)) {
      ++report.checked;
      if (a.block != b.block || a.inner != b.inner ||
          a.interior_point != b.interior_point || a.noise != b.noise) {
        report.violations.push_back(i);
      }
    }
    if (a.interior_point != b.interior_point) break;
  }
  return report;
}

struct AxisGameCounts {
  std::size_t present = 0;          // x' survived into this iteration
  std::size_t in_block_survived = 0;
  std::size_t removed = 0;
};

struct ConcentrationReport {
  std::size_t trials = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  double delta = 0.0;
  double threshold = 0.0;  // 35 ln(1/delta)
  std::size_t tail_count = 0;
  double tail_frequency = 0.0;
  double ci_high = 0.0;    // one-sided 99% Clopper-Pearson
  double mean_in = 0.0;
  std::size_t max_in = 0;
  std::vector<std::size_t> histogram;  // histogram[k] = #trials with |E_in|=k
  std::vector<AxisGameCounts> axes;
  std::size_t paired_checks = 0;
  std::size_t paired_violations = 0;
};

// Paired executions on S and S' for independent seeds. Each run stops once
// x' has been removed from S', since later iterations cannot join E_in.
inline ConcentrationReport ConcentrationExperiment(
    const NeighboringPair& pair, const IppParams& ipp, const IppSolver& solver,
    std::size_t trials, double delta, RandomSeed master_seed) {
  if (trials < 1000) {
    throw InvalidArgumentError("ConcentrationExperiment: trials must be >= 1000");
  }
  const Dataset base = pair.base().Positives();
  const Dataset extended = pair.extended().Positives();
  ConcentrationReport report;
  report.trials = trials;
  report.delta = delta;
  report.threshold = InBlockThreshold(delta);
  report.axes.resize(extended.dim());
  double sum_in = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto params = RandMarginsParams::ForSolver(
        ipp, solver, DeriveSeed(master_seed, t));
    try {
      detail::RunControl prime_control;
      prime_control.halt_after_removal = pair.extra_id();
      prime_control.hash_input = false;
      const RunTrace prime =
          detail::RunRandMargins(extended, params, solver, prime_control);
      detail::RunControl base_control;
      base_control.max_iterations = prime.iterations.size();
      base_control.hash_input = false;
      const RunTrace plain =
          detail::RunRandMargins(base, params, solver, base_control);
      const IterationPartition part =
          PartitionIterations(plain, prime, pair.extra_id());
      const auto paired = CheckPairedEqualities(plain, prime, part);
      report.paired_checks += paired.checked;
      report.paired_violations += paired.violations.size();

      const std::size_t in = part.in.size();
      if (report.histogram.size() <= in) report.histogram.resize(in + 1);
      ++report.histogram[in];
      sum_in += static_cast<double>(in);
      report.max_in = std::max(report.max_in, in);
      if (static_cast<double>(in) > report.threshold) ++report.tail_count;
      ++report.completed;

      if (extended.Contains(pair.extra_id())) {
        for (const auto& it : prime.iterations) {
          auto& axis = report.axes[it.axis];
          ++axis.present;
          if (ContainsId(it.removed, pair.extra_id())) {
            ++axis.removed;
            break;
          }
          if (ContainsId(it.block, pair.extra_id())) ++axis.in_block_survived;
        }
      }
    } catch (const InsufficientDataError&) {
      ++report.failed;
    }
  }
  if (report.completed > 0) {
    report.mean_in = sum_in / static_cast<double>(report.completed);
    report.tail_frequency = static_cast<double>(report.tail_count) /
                            static_cast<double>(report.completed);
    report.ci_high = ClopperPearsonUpper(report.tail_count, report.completed);
  } else {
    report.ci_high = 1.0;
  }
  return report;
}

struct ExactMarginal {
  std::vector<double> pmf;       // over {0, ..., x_max}
  double residual_mass = 0.0;    // |1 - total block-size mass|
  std::size_t block_sizes = 0;   // distinct clamped sizes evaluated
};

// Exact distribution of p_1 for d = 1. Only ceil(mu + w) matters, and after
// clamping to [Delta, |S|] it takes finitely many values, whose end masses
// are Laplace tail probabilities; no truncation of the sum is needed.
inline ExactMarginal ExactRandMarginsDistribution1d(
    const Dataset& positives, const RandMarginsParams& params,
    const IppSolver& solver) {
  params.Validate();
  if (positives.dim() != 1) {
    throw InvalidArgumentError("ExactRandMarginsDistribution1d: d must be 1");
  }
  const std::int64_t x_max = positives.domain().x_max;
  IppParams ipp = params.ipp;
  ipp.domain_max = x_max;
  const auto n = static_cast<std::int64_t>(positives.size());
  const std::int64_t delta_count = params.block_size;
  if (n < delta_count) {
    throw InsufficientDataError("ExactRandMarginsDistribution1d: |S| < Delta");
  }
  std::vector<std::int64_t> desc;
  desc.reserve(positives.size());
  for (ExampleId id : positives.ids()) desc.push_back(positives.Coord(id, 0));
  std::sort(desc.begin(), desc.end(), std::greater<>());

  const double mu = params.mean_block;
  const double b = params.noise_scale();
  auto weight = [&](std::int64_t k) {
    if (params.zero_noise) {
      const auto raw = static_cast<std::int64_t>(std::ceil(mu));
      return std::clamp(raw, delta_count, n) == k ? 1.0 : 0.0;
    }
    if (delta_count == n) return 1.0;
    if (k == delta_count) return CeilShiftedLaplaceCdf(mu, b, k);
    if (k == n) return CeilShiftedLaplaceSurvival(mu, b, k);
    return CeilShiftedLaplacePmf(mu, b, k);
  };

  ExactMarginal out;
  out.pmf.assign(static_cast<std::size_t>(x_max) + 1, 0.0);
  double total_weight = 0.0;
  std::vector<std::int64_t> inner;
  for (std::int64_t k = delta_count; k <= n; ++k) {
    const double w = weight(k);
    total_weight += w;
    if (w == 0.0) continue;
    inner.assign(desc.begin() + (k - delta_count), desc.begin() + k);
    const auto pmf = solver.OutputDistribution(inner, ipp);
    if (!pmf) {
      throw DomainTooLargeError(
          "ExactRandMarginsDistribution1d: solver has no exact distribution");
    }
    for (std::size_t v = 0; v < out.pmf.size(); ++v) out.pmf[v] += w * (*pmf)[v];
    ++out.block_sizes;
  }
  out.residual_mass = std::abs(1.0 - total_weight);
  return out;
}

// sum_v max(0, P(v) - e^eps Q(v)).
inline double HockeyStickDivergence(std::span<const double> p,
                                    std::span<const double> q, double epsilon) {
  if (p.size() != q.size()) {
    throw InvalidArgumentError("HockeyStickDivergence: support size mismatch");
  }
  const double scale = std::exp(epsilon);
  double total = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    total += std::max(0.0, p[v] - scale * q[v]);
  }
  return total;
}

inline double TwoSidedHockeyStick(std::span<const double> p,
                                  std::span<const double> q, double epsilon) {
  return std::max(HockeyStickDivergence(p, q, epsilon),
                  HockeyStickDivergence(q, p, epsilon));
}

// Smallest eps >= 0 with two-sided divergence <= delta (infinity if none up
// to eps_cap).
inline double SmallestEpsilon(std::span<const double> p,
                              std::span<const double> q, double delta,
                              double eps_cap = 100.0) {
  if (TwoSidedHockeyStick(p, q, 0.0) <= delta) return 0.0;
  if (TwoSidedHockeyStick(p, q, eps_cap) > delta) {
    return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  double hi = eps_cap;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (TwoSidedHockeyStick(p, q, mid) <= delta ? hi : lo) = mid;
  }
  return hi;
}

struct ExactAuditReport {
  double claimed_epsilon = 0.0;
  double claimed_delta = 0.0;
  double divergence = 0.0;        // two-sided, at claimed_epsilon
  double epsilon_at_delta = 0.0;  // smallest eps meeting claimed_delta
  double residual_mass = 0.0;
  bool pass = false;
};

inline ExactAuditReport ExactAudit1d(const NeighboringPair& pair,
                                     const RandMarginsParams& params,
                                     const IppSolver& solver) {
  const auto budget =
      PrivacyBudget::ForRandMargins(params.ipp.epsilon, params.ipp.delta, 1);
  const auto p = ExactRandMarginsDistribution1d(pair.base().Positives(),
                                                params, solver);
  const auto q = ExactRandMarginsDistribution1d(pair.extended().Positives(),
                                                params, solver);
  ExactAuditReport r;
  r.claimed_epsilon = budget.total_epsilon;
  r.claimed_delta = budget.total_delta;
  r.divergence = TwoSidedHockeyStick(p.pmf, q.pmf, r.claimed_epsilon);
  r.epsilon_at_delta = SmallestEpsilon(p.pmf, q.pmf, r.claimed_delta);
  r.residual_mass = std::max(p.residual_mass, q.residual_mass);
  r.pass = r.divergence <= r.claimed_delta;
  return r;
}

// Output of a mechanism run; empty when the run failed.
using Mechanism =
    std::function<std::vector<std::int64_t>(const Dataset&, RandomSeed)>;

inline Mechanism RandMarginsMechanism(const RandMarginsParams& params,
                                      const IppSolver& solver) {
  return [params, &solver](const Dataset& data, RandomSeed seed) {
    RandMarginsParams p = params;
    p.seed = seed;
    try {
      return RandMargins(data.Positives(), p, solver).hypothesis.corner;
    } catch (const InsufficientDataError&) {
      return std::vector<std::int64_t>{};
    }
  };
}

// Event {p_axis <= threshold}.
struct ThresholdEvent {
  std::size_t axis = 0;
  std::int64_t threshold = 0;
};

// Every threshold when x_max + 1 <= per_axis, else per_axis evenly spaced.
inline std::vector<ThresholdEvent> ThresholdEventFamily(
    std::size_t d, std::int64_t x_max, std::int64_t per_axis = 64) {
  std::vector<ThresholdEvent> events;
  for (std::size_t axis = 0; axis < d; ++axis) {
    if (x_max + 1 <= per_axis) {
      for (std::int64_t t = 0; t < x_max; ++t) events.push_back({axis, t});
    } else {
      for (std::int64_t j = 1; j < per_axis; ++j) {
        events.push_back({axis, j * x_max / per_axis});
      }
    }
  }
  return events;
}

struct EventEstimate {
  ThresholdEvent event;
  bool complement = false;   // {p_axis > threshold}
  bool extended_first = true;  // bound on ln(Pr_S'[F] / Pr_S[F])
  std::uint64_t count_base = 0;
  std::uint64_t count_extended = 0;
  double epsilon_lower = -std::numeric_limits<double>::infinity();
};

struct MonteCarloReport {
  std::size_t trials = 0;
  std::size_t failed_base = 0;
  std::size_t failed_extended = 0;
  std::size_t events = 0;
  double claimed_epsilon = 0.0;
  double claimed_delta = 0.0;
  double epsilon_lower = 0.0;  // max over events, floored at 0
  EventEstimate best;
  bool violation = false;
};

// For each event F and both directions, the Clopper-Pearson bounds give
// eps_hat = ln((lower(Pr_1[F]) - delta) / upper(Pr_2[F])); a value above the
// claimed epsilon would be a privacy violation.
inline MonteCarloReport MonteCarloPrivacyLowerBound(
    const Mechanism& mechanism, const NeighboringPair& pair,
    const std::vector<ThresholdEvent>& events, std::size_t trials,
    double claimed_epsilon, double claimed_delta, RandomSeed master_seed,
    double confidence = 0.99) {
  if (trials < 100) {
    throw InvalidArgumentError(
        "MonteCarloPrivacyLowerBound: need at least 100 trials");
  }
  MonteCarloReport report;
  report.trials = trials;
  report.events = events.size();
  report.claimed_epsilon = claimed_epsilon;
  report.claimed_delta = claimed_delta;
  std::vector<std::uint64_t> hits_base(events.size(), 0);
  std::vector<std::uint64_t> hits_ext(events.size(), 0);
  auto tally = [&](const std::vector<std::int64_t>& out,
                   std::vector<std::uint64_t>& hits) {
    if (out.empty()) return;
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (out[events[e].axis] <= events[e].threshold) ++hits[e];
    }
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const auto a = mechanism(pair.base(), DeriveSeed(master_seed, 2 * t));
    const auto b = mechanism(pair.extended(), DeriveSeed(master_seed, 2 * t + 1));
    if (a.empty()) ++report.failed_base;
    if (b.empty()) ++report.failed_extended;
    tally(a, hits_base);
    tally(b, hits_ext);
  }
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](EventEstimate est, std::uint64_t num, std::uint64_t den) {
    const double lower = ClopperPearsonLower(num, trials, confidence);
    const double upper = ClopperPearsonUpper(den, trials, confidence);
    if (lower - claimed_delta > 0.0 && upper > 0.0) {
      est.epsilon_lower = std::log((lower - claimed_delta) / upper);
    }
    if (est.epsilon_lower > best) {
      best = est.epsilon_lower;
      report.best = est;
    }
  };
  for (std::size_t e = 0; e < events.size(); ++e) {
    // Failed runs fall in the complement of {p <= t}.
    const std::uint64_t in_b = hits_base[e];
    const std::uint64_t in_e = hits_ext[e];
    const std::uint64_t out_b = trials - in_b;
    const std::uint64_t out_e = trials - in_e;
    EventEstimate est{events[e], false, true, in_b, in_e};
    consider(est, in_e, in_b);
    est.extended_first = false;
    consider(est, in_b, in_e);
    est.complement = true;
    est.count_base = out_b;
    est.count_extended = out_e;
    consider(est, out_b, out_e);
    est.extended_first = true;
    consider(est, out_e, out_b);
  }
  report.epsilon_lower = std::max(0.0, best);
  report.violation = report.epsilon_lower > claimed_epsilon;
  return report;
}

struct InvariantReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Replays a trace against the data it was produced from and checks:
// block/inner selection, deletion monotonicity, removal soundness, error
// accounting, and (given a target corner containing every positive and all
// solver calls successful) containment p <= target with no false positives
// on `labeled`.
inline InvariantReport CheckTraceInvariants(
    const Dataset& positives, const RunTrace& trace,
    const std::optional<std::vector<std::int64_t>>& target = std::nullopt,
    const Dataset* labeled = nullptr) {
  InvariantReport report;
  auto fail = [&](std::size_t i, const std::string& what) {
    report.violations.push_back("iteration " + std::to_string(i) + ": " + what);
  };
  std::vector<ExampleId> survivors(positives.ids().begin(),
                                   positives.ids().end());
  std::vector<ExampleId> all_removed;
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const auto& it = trace.iterations[i];
    const std::size_t axis = it.axis;
    if (it.survivors_before != static_cast<std::int64_t>(survivors.size())) {
      fail(i, "survivor count does not match replay");
    }
    if (static_cast<std::int64_t>(it.block.size()) != it.clamped_size) {
      fail(i, "|B_i| differs from clamped size");
    }
    if (static_cast<std::int64_t>(it.inner.size()) != trace.block_size) {
      fail(i, "|D_i| differs from Delta");
    }
    if (!std::includes(survivors.begin(), survivors.end(), it.block.begin(),
                       it.block.end())) {
      fail(i, "B_i not contained in survivors");
    }
    if (!std::includes(it.block.begin(), it.block.end(), it.inner.begin(),
                       it.inner.end())) {
      fail(i, "D_i not contained in B_i");
    }
    // B_i is a top block: no outside survivor ranks above a member.
    std::int64_t block_min = std::numeric_limits<std::int64_t>::max();
    for (ExampleId id : it.block) {
      block_min = std::min(block_min, positives.Coord(id, axis));
    }
    for (ExampleId id : survivors) {
      if (!ContainsId(it.block, id) && positives.Coord(id, axis) > block_min) {
        fail(i, "B_i is not a top block");
        break;
      }
    }
    std::int64_t inner_max = std::numeric_limits<std::int64_t>::min();
    for (ExampleId id : it.inner) {
      inner_max = std::max(inner_max, positives.Coord(id, axis));
    }
    for (ExampleId id : it.block) {
      if (!ContainsId(it.inner, id) && positives.Coord(id, axis) < inner_max) {
        fail(i, "D_i is not the bottom of B_i");
        break;
      }
    }
    const bool success =
        it.inner_min <= it.interior_point && it.interior_point <= it.inner_max;
    if (success != it.interior_success) fail(i, "interior flag inconsistent");

    std::vector<ExampleId> expected_removed;
    std::vector<ExampleId> next;
    for (ExampleId id : survivors) {
      (positives.Coord(id, axis) >= it.interior_point ? expected_removed : next)
          .push_back(id);
    }
    if (expected_removed != it.removed) fail(i, "R_i is not {y : y[i] >= p_i}");
    for (ExampleId id : it.removed) {
      if (positives.Coord(id, axis) < it.interior_point) {
        fail(i, "removed point below p_i");
        break;
      }
    }
    if (it.survivors_after > it.survivors_before) {
      fail(i, "survivor count increased");
    }
    if (static_cast<std::int64_t>(next.size()) != it.survivors_after) {
      fail(i, "survivors after removal do not match replay");
    }
    all_removed.insert(all_removed.end(), it.removed.begin(), it.removed.end());
    survivors = std::move(next);
  }
  if (!trace.complete) return report;

  std::sort(all_removed.begin(), all_removed.end());
  const OriginRectangle h{trace.corner, false};
  for (ExampleId id : positives.ids()) {
    if (!Predict(h, positives.Coords(id)) && !ContainsId(all_removed, id)) {
      report.violations.push_back("misclassified positive was never removed");
      break;
    }
  }
  if (target && trace.solver_failures() == 0) {
    bool inside = true;
    for (ExampleId id : positives.ids()) {
      for (std::size_t a = 0; a < positives.dim(); ++a) {
        inside = inside && positives.Coord(id, a) <= (*target)[a];
      }
    }
    if (inside) {
      for (std::size_t a = 0; a < trace.corner.size(); ++a) {
        if (trace.corner[a] > (*target)[a]) {
          report.violations.push_back("p exceeds target on axis " +
                                      std::to_string(a));
        }
      }
      if (labeled != nullptr) {
        const OriginRectangle t{*target, false};
        for (ExampleId id : labeled->ids()) {
          if (!Predict(t, labeled->Coords(id)) &&
              Predict(h, labeled->Coords(id))) {
            report.violations.push_back("false positive outside target");
            break;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace randmargins

#endif  // RANDMARGINS_AUDIT_HPP_
