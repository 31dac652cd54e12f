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


// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "randmargins.hpp"

namespace rm = randmargins;

namespace {

constexpr double kConfidence = 0.99;

// Criterion 1
constexpr double kIppEpsilon = 1.0;
constexpr double kIppBeta = 0.1;
constexpr std::int64_t kIppDomain = 1000000;
constexpr std::size_t kIppTrials = 10000;

// Criterion 2
constexpr std::int64_t kDpDomain = 8;
constexpr std::size_t kDpMaxSize = 6;
constexpr double kDpEpsilon = 1.0;
constexpr double kDpSlack = 1e-9;

// Criterion 3
constexpr double kAuditEpsilon = 0.5;
constexpr double kAuditDelta = 0.01;
constexpr double kAuditBeta = 0.1;
constexpr std::size_t kAuditMinPairs = 20;

// Criterion 4
constexpr std::size_t kConcDim = 64;
constexpr double kConcDelta = 0.05;
constexpr std::size_t kConcTrials = 10000;
constexpr std::int64_t kConcXMax = 1000000;

// Criterion 5
constexpr std::size_t kGameRounds = 500;
constexpr std::size_t kGameEpisodes = 100000;

// Criterion 6
constexpr std::size_t kUtilDim = 8;
constexpr std::int64_t kUtilXMax = 1000000;
constexpr std::size_t kUtilTrials = 50;

// Criterion 7
constexpr std::size_t kInvariantInstances = 1000;

// Criterion 8
constexpr std::size_t kDominoDim = 32;
constexpr std::size_t kDominoTrials = 1000;
constexpr double kDominoRate = 0.95;

// Criterion 9
constexpr std::int64_t kScaleN = 40000;
constexpr std::int64_t kScaleXMax = 1000;
constexpr std::size_t kScaleTrials = 100;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// Input families for the interior point check.
std::vector<std::int64_t> IppInput(int family, std::size_t n, rm::Rng& rng) {
  std::vector<std::int64_t> v(n);
  const std::int64_t mid = kIppDomain / 2;
  for (std::size_t j = 0; j < n; ++j) {
    switch (family) {
      case 0: v[j] = rm::UniformInt(rng, 0, kIppDomain); break;
      case 1: v[j] = mid + static_cast<std::int64_t>(j); break;  // consecutive
      case 2: v[j] = mid + (j % 2 == 0 ? 0 : 1); break;          // two adjacent
      default: v[j] = j % 2 == 0 ? 0 : kIppDomain; break;         // extremes
    }
  }
  return v;
}

Outcome IppContract() {
  const rm::ExpMechIpp mech;
  const rm::IppParams params{kIppEpsilon, 0.0, kIppBeta, kIppDomain};
  const auto n = static_cast<std::size_t>(mech.SampleComplexity(params));
  double worst = 0.0;
  std::string per_family;
  for (int family = 0; family < 4; ++family) {
    std::size_t failures = 0;
    for (std::size_t t = 0; t < kIppTrials; ++t) {
      rm::Rng rng(rm::DeriveSeed(rm::DeriveSeed(101, family), t));
      const auto values = IppInput(family, n, rng);
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      const auto p = mech.Solve(values, params, rng);
      failures += (p < *lo || p > *hi);
    }
    const double ci = rm::ClopperPearsonUpper(failures, kIppTrials, kConfidence);
    worst = std::max(worst, ci);
    per_family += Fmt(" f%d=%zu", family, failures);
  }
  return {worst <= kIppBeta,
          Fmt("n=%zu trials=%zu/family failures:", n, kIppTrials) + per_family +
              Fmt(" max_cp99=%.4f bound=%.2f", worst, kIppBeta)};
}

Outcome ExpMechPureDp() {
  const rm::ExpMechIpp mech;
  double worst = 0.0;
  std::size_t pairs = 0;
  // Enumerate multisets of size <= kDpMaxSize - 1 as non-decreasing vectors
  // and compare each with every one-element extension.
  std::vector<std::int64_t> ms;
  std::function<void(std::int64_t)> rec = [&](std::int64_t start) {
    const auto p = mech.ExactOutputDistribution(ms, kDpEpsilon, kDpDomain);
    for (std::int64_t extra = 0; extra <= kDpDomain; ++extra) {
      auto bigger = ms;
      bigger.push_back(extra);
      const auto q = mech.ExactOutputDistribution(bigger, kDpEpsilon, kDpDomain);
      for (std::size_t v = 0; v < p.size(); ++v) {
        worst = std::max({worst, p[v] / q[v], q[v] / p[v]});
      }
      ++pairs;
    }
    if (ms.size() + 1 >= kDpMaxSize) return;
    for (std::int64_t x = start; x <= kDpDomain; ++x) {
      ms.push_back(x);
      rec(x);
      ms.pop_back();
    }
  };
  rec(0);
  const double bound = std::exp(kDpEpsilon) + kDpSlack;
  return {worst <= bound,
          Fmt("pairs=%zu max_ratio=%.12f bound=%.12f", pairs, worst, bound)};
}

// Adversarial pairs for the exact audit: data shapes times placements of x'.
std::vector<rm::NeighboringPair> AuditPairs() {
  std::vector<rm::NeighboringPair> pairs;
  const std::int64_t x_max = 64;
  const rm::GridDomain dom{x_max, 1};
  auto make = [&](const std::vector<std::int64_t>& xs) {
    std::vector<rm::LabeledExample> ex;
    for (auto x : xs) ex.push_back({{x}, true});
    return rm::Dataset(dom, ex);
  };
  rm::Rng rng(303);
  std::vector<std::vector<std::int64_t>> shapes;
  for (std::size_t n : {60u, 150u, 400u, 900u}) {
    std::vector<std::int64_t> uniform(n);
    for (auto& x : uniform) x = rm::UniformInt(rng, 0, x_max);
    shapes.push_back(uniform);
  }
  {
    // Two clusters with a gap.
    std::vector<std::int64_t> xs;
    for (int i = 0; i < 300; ++i) xs.push_back(i % 2 ? 10 : 50);
    shapes.push_back(xs);
  }
  {
    // A spike on one value.
    std::vector<std::int64_t> xs(500, 32);
    shapes.push_back(xs);
  }
  {
    // Staircase: one point per level, repeated.
    std::vector<std::int64_t> xs;
    for (int r = 0; r < 8; ++r) {
      for (std::int64_t v = 0; v <= x_max; ++v) xs.push_back(v);
    }
    shapes.push_back(xs);
  }
  for (const auto& xs : shapes) {
    std::vector<std::int64_t> sorted = xs;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    // Value at the mean block boundary, clipped to the data.
    const std::size_t rank = std::min<std::size_t>(sorted.size() - 1, 479);
    const std::int64_t boundary = sorted[rank];
    const std::int64_t median = sorted[sorted.size() / 2];
    for (std::int64_t extra : {x_max, std::int64_t{0}, median, boundary}) {
      pairs.emplace_back(make(xs), rm::LabeledExample{{extra}, true});
    }
  }
  return pairs;
}

Outcome ExactAudit() {
  const rm::ExpMechIpp mech;
  const auto pairs = AuditPairs();
  double worst = 0.0, worst_eps = 0.0, residual = 0.0;
  std::size_t violations = 0;
  for (const auto& pair : pairs) {
    const auto params = rm::RandMarginsParams::ForSolver(
        {kAuditEpsilon, kAuditDelta, kAuditBeta, 64}, mech, 0);
    const auto r = rm::ExactAudit1d(pair, params, mech);
    worst = std::max(worst, r.divergence);
    worst_eps = std::max(worst_eps, r.epsilon_at_delta);
    residual = std::max(residual, r.residual_mass);
    violations += !r.pass;
  }
  const auto budget = rm::PrivacyBudget::ForRandMargins(kAuditEpsilon, kAuditDelta, 1);
  const bool pass = pairs.size() >= kAuditMinPairs && violations == 0 &&
                    worst <= budget.total_delta;
  return {pass, Fmt("pairs=%zu violations=%zu max_divergence=%.3g at eps=%.2f "
                    "bound=%.3g smallest_eps_at_delta=%.3f residual=%.1e",
                    pairs.size(), violations, worst, budget.total_epsilon,
                    budget.total_delta, worst_eps, residual)};
}

// x' sits near rank mu on every axis of the survivors it is expected to see,
// so each iteration has a fair chance of selecting it into the block.
rm::NeighboringPair ConcentrationPair(const rm::RandMarginsParams& params) {
  const std::size_t d = kConcDim;
  const double mu = params.mean_block;
  const auto fillers = static_cast<std::size_t>(
      static_cast<double>(d) * mu + 12.0 * params.noise_scale() * std::sqrt(static_cast<double>(d)) + 4000.0);
  rm::Rng rng(404);
  std::vector<std::int64_t> coords(fillers * d);
  for (auto& c : coords) c = rm::UniformInt(rng, 0, kConcXMax);
  std::vector<std::uint8_t> labels(fillers, 1);
  const auto base = rm::Dataset::FromColumns(rm::GridDomain{kConcXMax, d},
                                             std::move(coords), std::move(labels));
  std::vector<std::int64_t> extra(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double survivors = static_cast<double>(fillers) - static_cast<double>(i) * mu;
    const double frac_above = std::min(1.0, mu / survivors);
    extra[i] = static_cast<std::int64_t>(std::lround(kConcXMax * (1.0 - frac_above)));
  }
  return rm::NeighboringPair(base, {extra, true});
}

Outcome Concentration() {
  const rm::ExpMechIpp mech;
  const rm::IppParams ipp{1.0, kConcDelta, 0.1, kConcXMax};
  const auto params = rm::RandMarginsParams::ForSolver(ipp, mech, 0);
  const auto pair = ConcentrationPair(params);
  const auto r = rm::ConcentrationExperiment(pair, ipp, mech, kConcTrials, kConcDelta, 505);
  // Trials that could not finish count against the bound.
  const std::size_t bad = r.tail_count + r.failed;
  const double ci = rm::ClopperPearsonUpper(bad, r.trials, kConfidence);
  return {ci <= kConcDelta && r.paired_violations == 0,
          Fmt("trials=%zu failed=%zu threshold=%.2f mean_in=%.3f max_in=%zu "
              "tail=%zu cp99=%.5f bound=%.2f paired_checks=%zu violations=%zu",
              r.trials, r.failed, r.threshold, r.mean_in, r.max_in, r.tail_count,
              ci, kConcDelta, r.paired_checks, r.paired_violations)};
}

Outcome GameBound() {
  const std::vector<rm::GameConfig> configs{
      {"constant", kGameRounds, rm::ConstantStrategy(0.5, 0.125)},
      {"boundary", kGameRounds, rm::BoundaryStrategy(0.5)},
      {"adaptive", kGameRounds, rm::AdaptiveGreedyStrategy()}};
  const std::vector<double> gammas{35.0, 50.0, 70.0};
  bool pass = true;
  std::string detail;
  for (std::size_t s = 0; s < configs.size(); ++s) {
    const auto report = rm::SimulateGame(configs[s], kGameEpisodes, gammas,
                                         rm::DeriveSeed(606, s), kConfidence);
    detail += Fmt(" %s(mean=%.2f max=%lld", configs[s].name.c_str(),
                  report.mean_score, static_cast<long long>(report.max_score));
    for (const auto& t : report.tails) {
      pass = pass && t.pass;
      detail += Fmt(" g%.0f:%llu cp99=%.2e<=%.2e", t.gamma,
                    static_cast<unsigned long long>(t.count), t.ci_high, t.bound);
    }
    detail += ")";
  }
  return {pass, Fmt("episodes=%zu rounds=%zu", kGameEpisodes, kGameRounds) + detail};
}

Outcome Utility() {
  rm::ExperimentConfig c;
  c.x_max = kUtilXMax;
  c.d = kUtilDim;
  c.target = {kUtilXMax / 2};
  c.distribution = rm::DistributionKind::kTargetMixture;
  c.target_weight = 0.5;
  c.learners = {rm::LearnerKind::kRandMargins};
  c.alpha = 0.1;
  c.beta = 0.1;
  c.epsilon = 1.0;
  c.delta = 1e-6;
  c.sample_size = 0;
  c.trials = kUtilTrials;
  c.master_seed = 707;
  const auto result = rm::RunLearningBenchmark(c);
  std::size_t failures = 0, clamps = 0, iterations = 0, fallbacks = 0;
  double mean_err = 0.0;
  for (const auto& r : result.records) {
    failures += r.exceeds_alpha;
    clamps += r.clamp_events;
    fallbacks += r.fell_back;
    iterations += r.fell_back ? 0 : kUtilDim;
    mean_err += r.generalization_error / static_cast<double>(result.records.size());
  }
  const auto critical = rm::BinomialCriticalCount(kUtilTrials, c.beta, 1.0 - kConfidence);
  const double clamp_freq =
      iterations ? static_cast<double>(clamps) / static_cast<double>(iterations) : 1.0;
  return {failures <= critical && clamp_freq < c.beta,
          Fmt("n=%lld trials=%zu failures=%zu critical=%llu mean_error=%.4f "
              "fallbacks=%zu clamp_freq=%.4f (%zu/%zu iterations) bound=%.2f",
              static_cast<long long>(result.records.front().n), kUtilTrials,
              failures, static_cast<unsigned long long>(critical), mean_err,
              fallbacks, clamp_freq, clamps, iterations, c.beta)};
}

Outcome Invariants() {
  const rm::ExpMechIpp mech;
  const rm::OracleMedianIpp oracle;
  rm::Rng rng(808);
  std::size_t instances = 0, skipped = 0, violations = 0, paired_checked = 0;
  std::string first;
  while (instances < kInvariantInstances) {
    const std::size_t d = static_cast<std::size_t>(rm::UniformInt(rng, 1, 6));
    const std::int64_t x_max = rm::UniformInt(rng, 10, 20000);
    const bool use_oracle = rng() % 2 == 0;
    const rm::IppSolver& solver = use_oracle ? static_cast<const rm::IppSolver&>(oracle) : mech;
    const rm::IppParams ipp{rm::UniformDouble(rng) * 2 + 0.25, 1e-6,
                            0.05 + 0.15 * rm::UniformDouble(rng), x_max};
    auto params = rm::RandMarginsParams::ForSolver(ipp, solver, rng());
    if (use_oracle) params = rm::RandMarginsParams::Make(ipp, rm::UniformInt(rng, 1, 8), params.seed);
    std::vector<std::int64_t> target(d);
    for (auto& t : target) t = rm::UniformInt(rng, x_max / 4, x_max);
    const rm::OriginRectangle truth{target, false};
    const auto n = static_cast<std::size_t>(
        (static_cast<double>(d) * params.mean_block + 6.0 * params.noise_scale()) *
        (1.5 + rm::UniformDouble(rng)) + 50.0);
    std::vector<rm::LabeledExample> ex;
    for (std::size_t j = 0; j < 2 * n; ++j) {
      std::vector<std::int64_t> x(d);
      const bool inside = j % 2 == 0;
      for (std::size_t a = 0; a < d; ++a) {
        // Small value ranges create ties.
        x[a] = rm::UniformInt(rng, 0, inside ? target[a] : x_max);
        if (rng() % 4 == 0) x[a] -= x[a] % 8;
      }
      const bool label = rm::Predict(truth, x);
      ex.push_back({std::move(x), label});
    }
    const rm::Dataset labeled(rm::GridDomain{x_max, d}, ex);
    const rm::Dataset positives = labeled.Positives();
    std::vector<std::int64_t> extra(d);
    for (std::size_t a = 0; a < d; ++a) extra[a] = rm::UniformInt(rng, 0, target[a]);
    const rm::NeighboringPair pair(positives, {extra, true});
    rm::RunTrace t, tp;
    try {
      t = rm::RandMargins(pair.base(), params, solver).trace;
      tp = rm::RandMargins(pair.extended(), params, solver).trace;
    } catch (const rm::InsufficientDataError&) {
      ++skipped;
      continue;
    }
    ++instances;
    auto report = rm::CheckTraceInvariants(pair.base(), t, target, &labeled);
    const auto report_prime = rm::CheckTraceInvariants(pair.extended(), tp, target);
    const auto part = rm::PartitionIterations(t, tp, pair);
    const auto paired = rm::CheckPairedEqualities(t, tp, part);
    paired_checked += paired.checked;
    const std::size_t v = report.violations.size() + report_prime.violations.size() +
                          paired.violations.size();
    if (v > 0 && first.empty()) {
      first = !report.violations.empty() ? report.violations.front()
              : !report_prime.violations.empty() ? report_prime.violations.front()
                                                  : "paired equality";
    }
    violations += v;
  }
  return {violations == 0,
          Fmt("instances=%zu skipped_insufficient=%zu paired_iterations=%zu violations=%zu",
              instances, skipped, paired_checked, violations) +
              (first.empty() ? "" : " first: " + first)};
}

Outcome Domino() {
  const rm::ExpMechIpp mech;
  const std::int64_t x_max = 1000;
  const rm::IppParams ipp{1.0, 1e-6, 0.1, x_max};
  const std::int64_t n = mech.SampleComplexity(ipp);
  std::size_t wins = 0;
  std::size_t total_div = 0, total_in = 0;
  for (std::size_t t = 0; t < kDominoTrials; ++t) {
    rm::Rng rng(rm::DeriveSeed(909, t));
    const auto pair = rm::MakeChainPair(kDominoDim, n, x_max, 4000, rng);
    rm::VariantOptions options;
    options.seed = rm::DeriveSeed(910, t);
    options.block_size = n;
    const auto variant = rm::VariantLearner(pair, ipp, rm::Variant::kFixedSizeDeletion, options);
    const auto params = rm::RandMarginsParams::ForSolver(ipp, mech, rm::DeriveSeed(911, t));
    std::size_t in = kDominoDim + 1;  // counts as a loss if the run fails
    try {
      rm::detail::RunControl control;
      control.halt_after_removal = pair.extra_id();
      const auto tp = rm::detail::RunRandMargins(pair.extended(), params, mech, control);
      rm::detail::RunControl base_control;
      base_control.max_iterations = tp.iterations.size();
      const auto tb = rm::detail::RunRandMargins(pair.base(), params, mech, base_control);
      in = rm::PartitionIterations(tb, tp, pair).in.size();
    } catch (const rm::InsufficientDataError&) {
    }
    total_div += variant.divergence.divergent_iterations;
    total_in += in;
    wins += variant.divergence.divergent_iterations > in;
  }
  const double rate = static_cast<double>(wins) / static_cast<double>(kDominoTrials);
  return {rate >= kDominoRate,
          Fmt("trials=%zu d=%zu block=%lld wins=%zu rate=%.3f>=%.2f "
              "mean_divergent=%.2f mean_E_in=%.3f",
              kDominoTrials, kDominoDim, static_cast<long long>(n), wins, rate,
              kDominoRate, static_cast<double>(total_div) / kDominoTrials,
              static_cast<double>(total_in) / kDominoTrials)};
}

Outcome Scaling() {
  rm::ExperimentConfig c;
  c.x_max = kScaleXMax;
  c.target = {kScaleXMax * 4 / 5};
  c.distribution = rm::DistributionKind::kUniformInTarget;
  c.learners = {rm::LearnerKind::kRandMargins, rm::LearnerKind::kBaseline};
  c.epsilon = 1.0;
  c.delta = 1e-6;
  c.beta = 0.1;
  c.dimension_sweep = {2, 4, 8, 16, 32};
  c.d = 2;
  c.sample_sweep = {kScaleN};
  c.trials = kScaleTrials;
  c.master_seed = 1001;
  const auto result = rm::RunLearningBenchmark(c);
  std::map<std::size_t, std::vector<double>> diffs;
  std::map<std::pair<std::size_t, std::size_t>, double> rm_err;
  for (const auto& r : result.records) {
    if (r.learner == "rand_margins") rm_err[{r.d, r.trial}] = r.generalization_error;
  }
  for (const auto& r : result.records) {
    if (r.learner == "baseline") {
      diffs[r.d].push_back(rm_err.at({r.d, r.trial}) - r.generalization_error);
    }
  }
  bool pass = true;
  std::string detail = Fmt("n=%lld trials=%zu", static_cast<long long>(kScaleN), kScaleTrials);
  for (const auto& g : result.groups) {
    if (g.learner == "rand_margins") {
      detail += Fmt(" d%zu:rm=%.3f", g.d, g.mean_generalization_error);
    } else {
      detail += Fmt("/base=%.3f", g.mean_generalization_error);
    }
  }
  for (const auto& [d, xs] : diffs) {
    if (d < 16) continue;
    const double ub = rm::MeanUpperBound(xs, kConfidence);
    detail += Fmt(" d%zu:ub(rm-base)=%.4f<=0", d, ub);
    pass = pass && ub <= 0.0;
  }
  return {pass, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 ipp-contract", IppContract},
      {"2 expmech-pure-dp", ExpMechPureDp},
      {"3 exact-1d-audit", ExactAudit},
      {"4 in-block-concentration", Concentration},
      {"5 game-tail-bound", GameBound},
      {"6 utility", Utility},
      {"7 trace-invariants", Invariants},
      {"8 domino", Domino},
      {"9 scaling-order", Scaling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
