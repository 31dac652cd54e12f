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

#ifndef RANDMARGINS_EXPERIMENTS_HPP_
#define RANDMARGINS_EXPERIMENTS_HPP_

// Reproducible learning benchmarks: synthetic realizable data, learner runs,
// exact generalization error, and deterministic CSV/JSON reports.
//
// Seeds: the trial at sweep point j with index t uses
//   trial_seed = DeriveSeed(DeriveSeed(master_seed, j), t)
// with data drawn from Rng(DeriveSeed(trial_seed, 0)) and learner k (in
// config order) seeded with DeriveSeed(trial_seed, k + 1).

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "randmargins/core_model.hpp"
#include "randmargins/errors.hpp"
#include "randmargins/io.hpp"
#include "randmargins/ipp.hpp"
#include "randmargins/learner.hpp"
#include "randmargins/random.hpp"
#include "randmargins/stats.hpp"

namespace randmargins {

enum class SolverKind { kExpMech, kOracle };
enum class LearnerKind { kRandMargins, kBaseline };
enum class DistributionKind {
  kUniformInTarget,
  kUniformDomain,
  kCornerMass,
  kTargetMixture,
  kExplicit,
};

inline std::unique_ptr<IppSolver> MakeSolver(SolverKind kind) {
  if (kind == SolverKind::kOracle) return std::make_unique<OracleMedianIpp>();
  return std::make_unique<ExpMechIpp>();
}

inline SolverKind ParseSolverKind(const std::string& s) {
  if (s == "expmech") return SolverKind::kExpMech;
  if (s == "oracle") return SolverKind::kOracle;
  throw InvalidArgumentError("unknown solver '" + s + "'");
}

inline const char* SolverKindName(SolverKind k) {
  return k == SolverKind::kOracle ? "oracle" : "expmech";
}

inline LearnerKind ParseLearnerKind(const std::string& s) {
  if (s == "rand_margins") return LearnerKind::kRandMargins;
  if (s == "baseline") return LearnerKind::kBaseline;
  throw InvalidArgumentError("unknown learner '" + s + "'");
}

inline const char* LearnerKindName(LearnerKind k) {
  return k == LearnerKind::kBaseline ? "baseline" : "rand_margins";
}

inline DistributionKind ParseDistributionKind(const std::string& s) {
  if (s == "uniform_in_target") return DistributionKind::kUniformInTarget;
  if (s == "uniform_domain") return DistributionKind::kUniformDomain;
  if (s == "corner_mass") return DistributionKind::kCornerMass;
  if (s == "target_mixture") return DistributionKind::kTargetMixture;
  if (s == "explicit") return DistributionKind::kExplicit;
  throw InvalidArgumentError("unknown distribution '" + s + "'");
}

inline const char* DistributionKindName(DistributionKind k) {
  switch (k) {
    case DistributionKind::kUniformInTarget: return "uniform_in_target";
    case DistributionKind::kUniformDomain: return "uniform_domain";
    case DistributionKind::kCornerMass: return "corner_mass";
    case DistributionKind::kTargetMixture: return "target_mixture";
    case DistributionKind::kExplicit: return "explicit";
  }
  return "uniform_in_target";
}

// Git blob id (SHA-1 of "blob <len>\0<content>") as lowercase hex.
inline std::string GitBlobHash(const std::string& content) {
  const std::string blob =
      "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("GitBlobHash: digest failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

struct ExperimentConfig {
  std::int64_t x_max = 1000;
  std::size_t d = 2;
  // Target corner; a single entry is broadcast to every axis.
  std::vector<std::int64_t> target{500};
  DistributionKind distribution = DistributionKind::kUniformInTarget;
  double target_weight = 0.5;  // for target_mixture
  std::string distribution_file;
  std::optional<ExplicitDistribution> explicit_distribution;
  std::vector<LearnerKind> learners{LearnerKind::kRandMargins};
  SolverKind solver = SolverKind::kExpMech;
  double alpha = 0.1;
  double beta = 0.1;
  double epsilon = 1.0;
  double delta = 1e-6;
  std::int64_t sample_size = 0;  // 0: RequiredSampleSize
  std::size_t trials = 10;
  RandomSeed master_seed = 1;
  std::vector<std::size_t> dimension_sweep;     // empty: {d}
  std::vector<std::int64_t> sample_sweep;       // empty: {sample_size}
  std::size_t threads = 1;
  std::string output_dir;

  IppParams ipp() const { return {epsilon, delta, beta, x_max}; }

  std::vector<std::int64_t> TargetFor(std::size_t dim) const {
    if (target.size() == 1) return std::vector<std::int64_t>(dim, target[0]);
    if (target.size() != dim) {
      throw InvalidArgumentError("config: target length differs from d");
    }
    return target;
  }

  void Validate() const {
    GridDomain{x_max, d}.Validate();
    if (target.empty()) throw InvalidArgumentError("config: empty target");
    for (std::int64_t t : target) {
      if (t < 0 || t > x_max) {
        throw InvalidArgumentError("config: target outside domain");
      }
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
      throw InvalidArgumentError("config: alpha must lie in (0, 1)");
    }
    ipp().Validate();
    if (!(delta > 0.0)) throw InvalidArgumentError("config: delta must be > 0");
    if (!(target_weight >= 0.0 && target_weight <= 1.0)) {
      throw InvalidArgumentError("config: target_weight must lie in [0, 1]");
    }
    if (distribution == DistributionKind::kExplicit && !explicit_distribution) {
      throw InvalidArgumentError("config: explicit distribution not loaded");
    }
    if (learners.empty()) throw InvalidArgumentError("config: no learners");
    if (trials == 0) throw InvalidArgumentError("config: trials must be > 0");
    for (std::size_t dd : dimension_sweep) GridDomain{x_max, dd}.Validate();
    for (std::int64_t n : sample_sweep) {
      if (n < 1) throw InvalidArgumentError("config: sample sizes must be >= 1");
    }
    if (threads == 0) throw InvalidArgumentError("config: threads must be >= 1");
  }

  nlohmann::ordered_json ToJson() const {
    nlohmann::ordered_json j;
    j["x_max"] = x_max;
    j["d"] = d;
    j["target"] = target;
    j["distribution"] = DistributionKindName(distribution);
    j["target_weight"] = target_weight;
    j["distribution_file"] = distribution_file;
    std::vector<std::string> names;
    for (auto l : learners) names.push_back(LearnerKindName(l));
    j["learners"] = names;
    j["solver"] = SolverKindName(solver);
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["epsilon"] = epsilon;
    j["delta"] = delta;
    j["sample_size"] = sample_size;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["dimension_sweep"] = dimension_sweep;
    j["sample_sweep"] = sample_sweep;
    return j;
  }

  // Output location and thread count do not affect results and are left out
  // of the hash.
  std::string Hash() const { return GitBlobHash(ToJson().dump()); }

  static ExperimentConfig FromJson(const nlohmann::json& j) {
    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    try {
      get("x_max", c.x_max);
      get("d", c.d);
      if (j.contains("target")) {
        if (j.at("target").is_array()) {
          j.at("target").get_to(c.target);
        } else {
          c.target = {j.at("target").get<std::int64_t>()};
        }
      }
      if (j.contains("distribution")) {
        c.distribution =
            ParseDistributionKind(j.at("distribution").get<std::string>());
      }
      get("target_weight", c.target_weight);
      get("distribution_file", c.distribution_file);
      if (j.contains("learners")) {
        c.learners.clear();
        for (const auto& name : j.at("learners")) {
          c.learners.push_back(ParseLearnerKind(name.get<std::string>()));
        }
      }
      if (j.contains("solver")) {
        c.solver = ParseSolverKind(j.at("solver").get<std::string>());
      }
      get("alpha", c.alpha);
      get("beta", c.beta);
      get("epsilon", c.epsilon);
      get("delta", c.delta);
      get("sample_size", c.sample_size);
      get("trials", c.trials);
      get("master_seed", c.master_seed);
      get("dimension_sweep", c.dimension_sweep);
      get("sample_sweep", c.sample_sweep);
      get("threads", c.threads);
      get("output_dir", c.output_dir);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgumentError(std::string("config: ") + e.what());
    }
    if (c.distribution == DistributionKind::kExplicit &&
        !c.distribution_file.empty()) {
      c.explicit_distribution = ReadDistributionCsv(c.distribution_file, c.x_max);
    }
    return c;
  }

  static ExperimentConfig FromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("config " + path + ": " + e.what());
    }
    return FromJson(j);
  }
};

namespace detail {

inline std::vector<std::int64_t> UniformBox(Rng& rng, std::span<const std::int64_t> upper) {
  std::vector<std::int64_t> x(upper.size());
  for (std::size_t i = 0; i < upper.size(); ++i) x[i] = UniformInt(rng, 0, upper[i]);
  return x;
}

// Mass of the box [0, corner] under the uniform distribution on [0, outer].
inline double BoxMass(std::span<const std::int64_t> corner,
                      std::span<const std::int64_t> outer) {
  double m = 1.0;
  for (std::size_t i = 0; i < corner.size(); ++i) {
    const std::int64_t c = std::min(corner[i], outer[i]);
    m *= static_cast<double>(c + 1) / static_cast<double>(outer[i] + 1);
  }
  return m;
}

}  // namespace detail

// Realizable sample of size n in dimension `dim`: labels come from the
// target rectangle (or the explicit distribution's own labels).
inline Dataset GenerateSynthetic(const ExperimentConfig& config,
                                 std::size_t dim, std::int64_t n, Rng& rng) {
  const GridDomain domain{config.x_max, dim};
  domain.Validate();
  if (n < 0) throw InvalidArgumentError("GenerateSynthetic: n < 0");
  const auto count = static_cast<std::size_t>(n);
  std::vector<std::int64_t> coords;
  coords.reserve(count * dim);
  std::vector<std::uint8_t> labels;
  labels.reserve(count);

  if (config.distribution == DistributionKind::kExplicit) {
    if (!config.explicit_distribution) {
      throw InvalidArgumentError("GenerateSynthetic: no explicit distribution");
    }
    const auto& support = config.explicit_distribution->support();
    if (config.explicit_distribution->domain().d != dim) {
      throw InvalidArgumentError("GenerateSynthetic: explicit distribution d");
    }
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& [e, mass] : support) cdf.push_back(acc += mass);
    for (std::size_t j = 0; j < count; ++j) {
      const double u = UniformDouble(rng) * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) --it;
      const auto& e = support[static_cast<std::size_t>(it - cdf.begin())].first;
      coords.insert(coords.end(), e.coords.begin(), e.coords.end());
      labels.push_back(e.label ? 1 : 0);
    }
    return Dataset::FromColumns(domain, std::move(coords), std::move(labels));
  }

  const auto target = config.TargetFor(dim);
  const std::vector<std::int64_t> full(dim, config.x_max);
  const OriginRectangle truth{target, false};
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<std::int64_t> x;
    switch (config.distribution) {
      case DistributionKind::kUniformInTarget:
        x = detail::UniformBox(rng, target);
        break;
      case DistributionKind::kUniformDomain:
        x = detail::UniformBox(rng, full);
        break;
      case DistributionKind::kCornerMass:
        x = target;
        break;
      case DistributionKind::kTargetMixture:
        x = UniformDouble(rng) < config.target_weight
                ? detail::UniformBox(rng, target)
                : detail::UniformBox(rng, full);
        break;
      case DistributionKind::kExplicit:
        break;
    }
    labels.push_back(Predict(truth, x) ? 1 : 0);
    coords.insert(coords.end(), x.begin(), x.end());
  }
  return Dataset::FromColumns(domain, std::move(coords), std::move(labels));
}

// Exact error of h under the configured distribution; closed form for the
// product distributions, direct summation for explicit ones.
inline double ExactGeneralizationError(const ExperimentConfig& config,
                                       std::size_t dim,
                                       const OriginRectangle& h) {
  if (config.distribution == DistributionKind::kExplicit) {
    return GeneralizationError(h, *config.explicit_distribution);
  }
  const auto target = config.TargetFor(dim);
  const std::vector<std::int64_t> full(dim, config.x_max);
  // Under uniform-in-target every point is positive; the error is the target
  // mass outside h.
  const double in_target_error =
      h.empty ? 1.0 : 1.0 - detail::BoxMass(h.corner, target);
  // Under uniform-on-domain the error is the mass of the symmetric
  // difference of the two boxes.
  auto domain_error = [&] {
    const double t = detail::BoxMass(target, full);
    if (h.empty) return t;
    std::vector<std::int64_t> meet(dim);
    for (std::size_t i = 0; i < dim; ++i) meet[i] = std::min(h.corner[i], target[i]);
    return detail::BoxMass(h.corner, full) + t - 2.0 * detail::BoxMass(meet, full);
  };
  switch (config.distribution) {
    case DistributionKind::kUniformInTarget:
      return in_target_error;
    case DistributionKind::kUniformDomain:
      return domain_error();
    case DistributionKind::kCornerMass:
      return Predict(h, target) ? 0.0 : 1.0;
    case DistributionKind::kTargetMixture:
      return config.target_weight * in_target_error +
             (1.0 - config.target_weight) * domain_error();
    case DistributionKind::kExplicit:
      break;
  }
  return 0.0;
}

struct ResultRecord {
  std::string config_hash;
  std::string learner;
  std::size_t d = 0;
  std::int64_t n = 0;
  std::size_t trial = 0;
  RandomSeed seed = 0;
  std::int64_t positives = 0;
  double empirical_error = 0.0;
  double generalization_error = 0.0;
  bool exceeds_alpha = false;
  std::int64_t removed_total = 0;
  std::int64_t max_clamped_size = 0;
  std::size_t clamp_events = 0;
  std::size_t solver_failures = 0;
  bool fell_back = false;
  std::string error;  // learner error, empty on success
  double wall_ms = 0.0;  // not part of the CSV
};

struct GroupSummary {
  std::string learner;
  std::size_t d = 0;
  std::int64_t n = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;  // generalization error > alpha
  double failure_frequency = 0.0;
  Interval failure_ci;
  double mean_generalization_error = 0.0;
  double stddev_generalization_error = 0.0;
  double mean_empirical_error = 0.0;
  std::size_t trials_with_clamp = 0;
  std::size_t learner_errors = 0;
};

struct BenchmarkResult {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<ResultRecord> records;
  std::vector<GroupSummary> groups;
  std::vector<std::string> monotonicity_flags;
  double wall_seconds = 0.0;
};

namespace detail {

inline std::vector<ResultRecord> RunTrial(const ExperimentConfig& config,
                                          const std::string& config_hash,
                                          const IppSolver& solver,
                                          std::size_t dim, std::int64_t n,
                                          std::size_t trial,
                                          RandomSeed trial_seed) {
  Rng data_rng(DeriveSeed(trial_seed, 0));
  const Dataset data = GenerateSynthetic(config, dim, n, data_rng);
  const auto positives = static_cast<std::int64_t>(data.Positives().size());
  std::vector<ResultRecord> out;
  for (std::size_t k = 0; k < config.learners.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    ResultRecord r;
    r.config_hash = config_hash;
    r.learner = LearnerKindName(config.learners[k]);
    r.d = dim;
    r.n = n;
    r.trial = trial;
    r.seed = trial_seed;
    r.positives = positives;
    const RandomSeed learner_seed = DeriveSeed(trial_seed, k + 1);
    OriginRectangle h = OriginRectangle::AllZero(dim);
    try {
      if (config.learners[k] == LearnerKind::kRandMargins) {
        const auto params =
            RandMarginsParams::ForSolver(config.ipp(), solver, learner_seed);
        auto learned = LearnRectangle(data, params, solver);
        h = learned.hypothesis;
        r.fell_back = learned.fell_back;
        if (learned.trace) {
          r.removed_total = learned.trace->total_removed();
          r.max_clamped_size = learned.trace->max_clamped_size();
          r.clamp_events = learned.trace->clamp_events();
          r.solver_failures = learned.trace->solver_failures();
        }
      } else {
        h = BaselineCompositionLearner(data, config.ipp(), solver, learner_seed)
                .hypothesis;
      }
    } catch (const Error& e) {
      r.error = e.what();
      r.fell_back = true;
    }
    r.empirical_error = data.empty() ? 0.0 : EmpiricalError(h, data);
    r.generalization_error = ExactGeneralizationError(config, dim, h);
    r.exceeds_alpha = r.generalization_error > config.alpha;
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

inline std::vector<GroupSummary> SummarizeRecords(
    const std::vector<ResultRecord>& records) {
  std::vector<GroupSummary> groups;
  auto find = [&](const ResultRecord& r) -> GroupSummary& {
    for (auto& g : groups) {
      if (g.learner == r.learner && g.d == r.d && g.n == r.n) return g;
    }
    GroupSummary g;
    g.learner = r.learner;
    g.d = r.d;
    g.n = r.n;
    groups.push_back(std::move(g));
    return groups.back();
  };
  std::vector<std::vector<double>> errors;
  for (const auto& r : records) {
    GroupSummary& g = find(r);
    const auto idx = static_cast<std::size_t>(&g - groups.data());
    if (errors.size() <= idx) errors.resize(idx + 1);
    ++g.trials;
    if (r.exceeds_alpha) ++g.failures;
    if (r.clamp_events > 0) ++g.trials_with_clamp;
    if (!r.error.empty()) ++g.learner_errors;
    g.mean_empirical_error += r.empirical_error;
    errors[idx].push_back(r.generalization_error);
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto& g = groups[i];
    g.failure_frequency =
        static_cast<double>(g.failures) / static_cast<double>(g.trials);
    g.failure_ci = ClopperPearson(g.failures, g.trials);
    g.mean_empirical_error /= static_cast<double>(g.trials);
    const auto s = Summarize(errors[i]);
    g.mean_generalization_error = s.mean;
    g.stddev_generalization_error = s.stddev;
  }
  return groups;
}

// Flags (never fails) sweeps whose mean error rises with n by more than
// three standard errors.
inline std::vector<std::string> MonotonicityFlags(
    const std::vector<GroupSummary>& groups) {
  std::vector<std::string> flags;
  for (const auto& a : groups) {
    const GroupSummary* next = nullptr;
    for (const auto& b : groups) {
      if (b.learner == a.learner && b.d == a.d && b.n > a.n &&
          (next == nullptr || b.n < next->n)) {
        next = &b;
      }
    }
    if (next == nullptr) continue;
    const double se = std::sqrt(
        a.stddev_generalization_error * a.stddev_generalization_error /
            static_cast<double>(a.trials) +
        next->stddev_generalization_error * next->stddev_generalization_error /
            static_cast<double>(next->trials));
    if (next->mean_generalization_error > a.mean_generalization_error + 3.0 * se) {
      flags.push_back(a.learner + " d=" + std::to_string(a.d) + ": mean error rises from n=" +
                      std::to_string(a.n) + " to n=" + std::to_string(next->n));
    }
  }
  return flags;
}

inline BenchmarkResult RunLearningBenchmark(const ExperimentConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  BenchmarkResult result;
  result.config = config;
  result.config_hash = config.Hash();
  const auto solver = MakeSolver(config.solver);

  struct Point {
    std::size_t d;
    std::int64_t n;
  };
  std::vector<Point> points;
  const std::vector<std::size_t> dims =
      config.dimension_sweep.empty() ? std::vector<std::size_t>{config.d}
                                     : config.dimension_sweep;
  for (std::size_t dim : dims) {
    std::vector<std::int64_t> sizes = config.sample_sweep;
    if (sizes.empty()) {
      sizes.push_back(config.sample_size > 0
                          ? config.sample_size
                          : RequiredSampleSize(config.alpha, config.ipp(), dim,
                                               *solver));
    }
    for (std::int64_t n : sizes) points.push_back({dim, n});
  }

  // Work items are (point, trial); results land in fixed slots so the merge
  // order never depends on scheduling.
  const std::size_t items = points.size() * config.trials;
  std::vector<std::vector<ResultRecord>> slots(items);
  auto work = [&](std::size_t item) {
    const std::size_t j = item / config.trials;
    const std::size_t t = item % config.trials;
    const RandomSeed trial_seed = DeriveSeed(DeriveSeed(config.master_seed, j), t);
    slots[item] = detail::RunTrial(config, result.config_hash, *solver,
                                   points[j].d, points[j].n, t, trial_seed);
  };
  const std::size_t threads = std::min(config.threads, std::max<std::size_t>(1, items));
  if (threads <= 1) {
    for (std::size_t i = 0; i < items; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < items; i += threads) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& slot : slots) {
    for (auto& r : slot) result.records.push_back(std::move(r));
  }
  result.groups = SummarizeRecords(result.records);
  result.monotonicity_flags = MonotonicityFlags(result.groups);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace detail {

inline std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace detail

inline constexpr const char* kResultCsvHeader =
    "config_hash,learner,d,n,trial,seed,positives,empirical_error,"
    "generalization_error,exceeds_alpha,removed_total,max_clamped_size,"
    "clamp_events,solver_failures,fell_back,error";

inline std::string RecordsToCsv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << kResultCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.config_hash << ',' << r.learner << ',' << r.d << ',' << r.n << ','
        << r.trial << ',' << r.seed << ',' << r.positives << ','
        << detail::FormatDouble(r.empirical_error) << ','
        << detail::FormatDouble(r.generalization_error) << ','
        << (r.exceeds_alpha ? 1 : 0) << ',' << r.removed_total << ','
        << r.max_clamped_size << ',' << r.clamp_events << ','
        << r.solver_failures << ',' << (r.fell_back ? 1 : 0) << ','
        << detail::CsvQuote(r.error) << '\n';
  }
  return out.str();
}

struct Report {
  std::string csv;
  nlohmann::ordered_json summary;
};

inline Report EmitReport(const BenchmarkResult& result) {
  Report report;
  report.csv = RecordsToCsv(result.records);
  auto& s = report.summary;
  s["config"] = result.config.ToJson();
  s["config_hash"] = result.config_hash;
  s["content_hash"] = GitBlobHash(report.csv);
  s["records"] = result.records.size();
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& g : result.groups) {
    nlohmann::ordered_json j;
    j["learner"] = g.learner;
    j["d"] = g.d;
    j["n"] = g.n;
    j["trials"] = g.trials;
    j["failures"] = g.failures;
    j["failure_frequency"] = g.failure_frequency;
    j["failure_ci_low"] = g.failure_ci.low;
    j["failure_ci_high"] = g.failure_ci.high;
    j["mean_generalization_error"] = g.mean_generalization_error;
    j["stddev_generalization_error"] = g.stddev_generalization_error;
    j["mean_empirical_error"] = g.mean_empirical_error;
    j["trials_with_clamp"] = g.trials_with_clamp;
    j["learner_errors"] = g.learner_errors;
    groups.push_back(std::move(j));
  }
  s["groups"] = std::move(groups);
  s["monotonicity_flags"] = result.monotonicity_flags;
  return report;
}

// Writes results.csv and summary.json into `dir`; wall time goes to
// timing.json so the other two files stay reproducible.
inline void WriteReport(const std::string& dir, const BenchmarkResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const Report report = EmitReport(result);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (fs::path(dir) / name).string());
    out << content;
    if (!out) throw IoError("write failed for " + name);
  };
  write("results.csv", report.csv);
  write("summary.json", report.summary.dump(2) + "\n");
  nlohmann::ordered_json timing;
  timing["wall_seconds"] = result.wall_seconds;
  std::vector<double> per_trial;
  for (const auto& r : result.records) per_trial.push_back(r.wall_ms);
  timing["record_wall_ms"] = per_trial;
  write("timing.json", timing.dump(2) + "\n");
}

}  // namespace randmargins

#endif  // RANDMARGINS_EXPERIMENTS_HPP_
