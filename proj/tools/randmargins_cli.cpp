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


// Command-line front end: learn, gen, ipp, audit, game, bench.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "randmargins.hpp"

namespace rm = randmargins;
using nlohmann::ordered_json;

namespace {

struct PrivacyFlags {
  double epsilon = 1.0;
  double delta = 1e-6;
  double beta = 0.1;
  std::string solver = "expmech";
  std::int64_t block_size = 0;
  std::uint64_t seed = 1;

  void Add(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "per-call epsilon");
    app->add_option("--delta", delta, "per-call delta");
    app->add_option("--beta", beta, "failure probability");
    app->add_option("--solver", solver, "expmech | oracle")
        ->check(CLI::IsMember({"expmech", "oracle"}));
    app->add_option("--block-size", block_size, "override Delta (0: solver)");
    app->add_option("--seed", seed, "master seed");
  }
  rm::IppParams Ipp(std::int64_t x_max) const {
    return {epsilon, delta, beta, x_max};
  }
  rm::RandMarginsParams Params(const rm::IppSolver& s, std::int64_t x_max) const {
    const auto ipp = Ipp(x_max);
    return block_size > 0 ? rm::RandMarginsParams::Make(ipp, block_size, seed)
                          : rm::RandMarginsParams::ForSolver(ipp, s, seed);
  }
};

std::vector<std::int64_t> ParseCoords(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stoll(cell));
    } catch (const std::exception&) {
      throw rm::InvalidArgumentError("bad coordinate '" + cell + "'");
    }
  }
  if (out.empty()) throw rm::InvalidArgumentError("empty coordinate list");
  return out;
}

void Print(const ordered_json& j) { std::cout << j.dump(2) << std::endl; }

std::string Verdict(bool pass) { return pass ? "pass" : "fail"; }

rm::Strategy MakeStrategy(const std::string& name, double q, double q_bar) {
  if (name == "constant") return rm::ConstantStrategy(q, q_bar);
  if (name == "boundary") return rm::BoundaryStrategy(q);
  if (name == "adaptive") return rm::AdaptiveGreedyStrategy();
  throw rm::InvalidArgumentError("unknown strategy '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private learning of origin rectangles"};
  app.require_subcommand(1);

  // learn
  auto* learn = app.add_subcommand("learn", "run the learner on a CSV dataset");
  PrivacyFlags learn_flags;
  learn_flags.Add(learn);
  std::string learn_data, learn_trace;
  bool zero_noise = false, no_fallback = false;
  learn->add_option("--data", learn_data, "dataset CSV")->required();
  learn->add_option("--trace", learn_trace, "write per-iteration JSON lines");
  learn->add_flag("--zero-noise", zero_noise, "debug: no size noise");
  learn->add_flag("--no-fallback", no_fallback,
                  "fail instead of returning the all-zero hypothesis");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  std::string gen_config, gen_out;
  std::int64_t gen_n = 1000, gen_x_max = 1000;
  std::size_t gen_d = 2;
  std::vector<std::int64_t> gen_target{500};
  std::string gen_dist = "uniform_in_target";
  double gen_weight = 0.5;
  std::uint64_t gen_seed = 1;
  gen->add_option("--config", gen_config, "experiment config JSON");
  gen->add_option("--n", gen_n, "sample size");
  gen->add_option("--d", gen_d, "dimension");
  gen->add_option("--x-max", gen_x_max, "grid size");
  gen->add_option("--target", gen_target, "target corner (one value broadcasts)")
      ->delimiter(',');
  gen->add_option("--distribution", gen_dist, "distribution kind");
  gen->add_option("--target-weight", gen_weight, "mixture weight");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output CSV (default stdout)");

  // ipp
  auto* ipp = app.add_subcommand("ipp", "measure solver failure rate");
  double ipp_eps = 1.0, ipp_beta = 0.1;
  std::int64_t ipp_domain = 1000000, ipp_n = 0;
  std::size_t ipp_trials = 1000;
  std::string ipp_solver = "expmech";
  std::uint64_t ipp_seed = 1;
  ipp->add_option("--solver", ipp_solver)->check(CLI::IsMember({"expmech", "oracle"}));
  ipp->add_option("--eps", ipp_eps, "epsilon");
  ipp->add_option("--beta", ipp_beta, "beta");
  ipp->add_option("--domain-max", ipp_domain, "largest value");
  ipp->add_option("--n", ipp_n, "input size (0: sample complexity)");
  ipp->add_option("--trials", ipp_trials, "trials");
  ipp->add_option("--seed", ipp_seed, "seed");

  // audit
  auto* audit = app.add_subcommand("audit", "privacy audits");
  std::string audit_mode = "exact-1d", audit_data, audit_extra;
  std::size_t audit_trials = 1000;
  PrivacyFlags audit_flags;
  audit_flags.Add(audit);
  std::string audit_strategy = "boundary";
  std::size_t audit_rounds = 500;
  double audit_gamma = 50.0;
  audit->add_option("--mode", audit_mode)
      ->check(CLI::IsMember({"exact-1d", "mc", "concentration", "game"}));
  audit->add_option("--data", audit_data, "base dataset CSV");
  audit->add_option("--extra", audit_extra, "added example, comma separated");
  audit->add_option("--trials", audit_trials, "trials / episodes");
  audit->add_option("--strategy", audit_strategy, "game strategy");
  audit->add_option("--rounds", audit_rounds, "game rounds");
  audit->add_option("--gamma", audit_gamma, "game tail threshold");

  // game
  auto* game = app.add_subcommand("game", "simulate the adversary game");
  std::string game_strategy = "boundary";
  double game_q = 0.5, game_q_bar = 0.125;
  std::size_t game_rounds = 500, game_episodes = 10000;
  std::vector<double> game_gammas{35, 50, 70};
  std::uint64_t game_seed = 1;
  game->add_option("--strategy", game_strategy)
      ->check(CLI::IsMember({"constant", "boundary", "adaptive"}));
  game->add_option("--q", game_q);
  game->add_option("--q-bar", game_q_bar);
  game->add_option("--rounds", game_rounds);
  game->add_option("--episodes", game_episodes);
  game->add_option("--gamma", game_gammas)->delimiter(',');
  game->add_option("--seed", game_seed);

  // bench
  auto* bench = app.add_subcommand("bench", "run a learning benchmark");
  std::string bench_config, bench_out;
  std::size_t bench_threads = 0;
  bench->add_option("--config", bench_config, "experiment config JSON")->required();
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--threads", bench_threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*learn) {
      const auto data = rm::ReadDatasetCsv(learn_data);
      const auto solver = rm::MakeSolver(rm::ParseSolverKind(learn_flags.solver));
      auto params = learn_flags.Params(*solver, data.domain().x_max);
      params.zero_noise = zero_noise;
      rm::LearnOptions options;
      options.fallback = !no_fallback;
      const auto result = rm::LearnRectangle(data, params, *solver, options);
      ordered_json j;
      j["corner"] = result.hypothesis.corner;
      j["all_zero"] = result.hypothesis.empty;
      j["fell_back"] = result.fell_back;
      j["fallback_reason"] = result.fallback_reason;
      j["block_size"] = params.block_size;
      j["mean_block"] = params.mean_block;
      j["empirical_error"] = data.empty() ? 0.0 : rm::EmpiricalError(result.hypothesis, data);
      const auto budget = rm::PrivacyBudget::ForRandMargins(
          learn_flags.epsilon, learn_flags.delta, data.dim());
      j["total_epsilon"] = budget.total_epsilon;
      j["total_delta"] = budget.total_delta;
      if (result.trace) {
        j["trace"] = rm::TraceSummaryJson(*result.trace);
        if (!learn_trace.empty()) {
          std::ofstream out(learn_trace);
          if (!out) throw rm::IoError("cannot write " + learn_trace);
          rm::WriteTraceJsonl(out, *result.trace);
        }
      }
      Print(j);
    } else if (*gen) {
      rm::ExperimentConfig config;
      if (!gen_config.empty()) {
        config = rm::ExperimentConfig::FromFile(gen_config);
      } else {
        config.x_max = gen_x_max;
        config.d = gen_d;
        config.target = gen_target;
        config.distribution = rm::ParseDistributionKind(gen_dist);
        config.target_weight = gen_weight;
      }
      config.Validate();
      rm::Rng rng(gen_seed);
      const auto data = rm::GenerateSynthetic(config, config.d, gen_n, rng);
      if (gen_out.empty()) {
        rm::WriteDatasetCsv(std::cout, data);
      } else {
        rm::WriteDatasetCsv(gen_out, data);
      }
    } else if (*ipp) {
      const auto solver = rm::MakeSolver(rm::ParseSolverKind(ipp_solver));
      const rm::IppParams params{ipp_eps, 0.0, ipp_beta, ipp_domain};
      params.Validate();
      const std::int64_t n = ipp_n > 0 ? ipp_n : solver->SampleComplexity(params);
      std::size_t failures = 0;
      std::vector<std::int64_t> values(static_cast<std::size_t>(n));
      for (std::size_t t = 0; t < ipp_trials; ++t) {
        rm::Rng rng(rm::DeriveSeed(ipp_seed, t));
        for (auto& v : values) v = rm::UniformInt(rng, 0, ipp_domain);
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        const auto p = solver->Solve(values, params, rng);
        if (p < *lo || p > *hi) ++failures;
      }
      ordered_json j;
      j["solver"] = std::string(solver->Name());
      j["n"] = n;
      j["eps"] = ipp_eps;
      j["beta"] = ipp_beta;
      j["trials"] = ipp_trials;
      j["failures"] = failures;
      j["ci_high"] = rm::ClopperPearsonUpper(failures, ipp_trials);
      Print(j);
    } else if (*audit) {
      ordered_json j;
      j["mode"] = audit_mode;
      if (audit_mode == "game") {
        rm::GameConfig config{audit_strategy, audit_rounds,
                              MakeStrategy(audit_strategy, 0.5, 0.125)};
        const double gammas[] = {audit_gamma};
        const auto report =
            rm::SimulateGame(config, audit_trials, gammas, audit_flags.seed);
        const auto& t = report.tails.front();
        j["params"] = {{"strategy", audit_strategy}, {"rounds", audit_rounds},
                       {"episodes", audit_trials}, {"gamma", audit_gamma}};
        j["estimate"] = t.frequency;
        j["ci_low"] = t.ci_low;
        j["ci_high"] = t.ci_high;
        j["claimed_bound"] = t.bound;
        j["verdict"] = Verdict(t.pass);
        Print(j);
        return 0;
      }
      if (audit_data.empty() || audit_extra.empty()) {
        throw rm::InvalidArgumentError("audit: --data and --extra are required");
      }
      const auto base = rm::ReadDatasetCsv(audit_data);
      const rm::NeighboringPair pair(base, {ParseCoords(audit_extra), true});
      if (!base.domain().Contains(pair.extra().coords)) {
        throw rm::InvalidArgumentError("audit: extra example outside the grid");
      }
      const auto solver = rm::MakeSolver(rm::ParseSolverKind(audit_flags.solver));
      const auto params = audit_flags.Params(*solver, base.domain().x_max);
      j["params"] = {{"epsilon", audit_flags.epsilon},
                     {"delta", audit_flags.delta},
                     {"beta", audit_flags.beta},
                     {"solver", audit_flags.solver},
                     {"block_size", params.block_size},
                     {"trials", audit_trials},
                     {"seed", audit_flags.seed}};
      if (audit_mode == "exact-1d") {
        const auto r = rm::ExactAudit1d(pair, params, *solver);
        j["estimate"] = r.epsilon_at_delta;
        j["ci_low"] = r.epsilon_at_delta;
        j["ci_high"] = r.epsilon_at_delta;
        j["claimed_bound"] = r.claimed_epsilon;
        j["divergence"] = r.divergence;
        j["claimed_delta"] = r.claimed_delta;
        j["verdict"] = Verdict(r.pass);
      } else if (audit_mode == "mc") {
        const auto budget = rm::PrivacyBudget::ForRandMargins(
            audit_flags.epsilon, audit_flags.delta, base.dim());
        const auto events =
            rm::ThresholdEventFamily(base.dim(), base.domain().x_max);
        const auto r = rm::MonteCarloPrivacyLowerBound(
            rm::RandMarginsMechanism(params, *solver), pair, events,
            audit_trials, budget.total_epsilon, budget.total_delta,
            audit_flags.seed);
        j["estimate"] = r.epsilon_lower;
        j["ci_low"] = r.epsilon_lower;
        j["ci_high"] = nullptr;
        j["claimed_bound"] = r.claimed_epsilon;
        j["verdict"] = Verdict(!r.violation);
      } else {
        const auto r = rm::ConcentrationExperiment(
            pair, params.ipp, *solver, audit_trials, audit_flags.delta,
            audit_flags.seed);
        j["estimate"] = r.tail_frequency;
        j["ci_low"] = rm::ClopperPearsonLower(r.tail_count, r.completed);
        j["ci_high"] = r.ci_high;
        j["claimed_bound"] = audit_flags.delta;
        j["mean_in"] = r.mean_in;
        j["max_in"] = r.max_in;
        j["threshold"] = r.threshold;
        j["paired_violations"] = r.paired_violations;
        j["verdict"] = Verdict(r.ci_high <= audit_flags.delta &&
                               r.paired_violations == 0);
      }
      Print(j);
    } else if (*game) {
      rm::GameConfig config{game_strategy, game_rounds,
                            MakeStrategy(game_strategy, game_q, game_q_bar)};
      const auto report =
          rm::SimulateGame(config, game_episodes, game_gammas, game_seed);
      ordered_json j;
      j["strategy"] = report.strategy;
      j["rounds"] = report.rounds;
      j["episodes"] = report.episodes;
      j["mean_score"] = report.mean_score;
      j["max_score"] = report.max_score;
      ordered_json tails = ordered_json::array();
      for (const auto& t : report.tails) {
        tails.push_back({{"gamma", t.gamma},
                         {"count", t.count},
                         {"frequency", t.frequency},
                         {"ci_low", t.ci_low},
                         {"ci_high", t.ci_high},
                         {"bound", t.bound},
                         {"verdict", Verdict(t.pass)}});
      }
      j["tails"] = tails;
      Print(j);
    } else if (*bench) {
      auto config = rm::ExperimentConfig::FromFile(bench_config);
      if (bench_threads > 0) config.threads = bench_threads;
      std::string out_dir = bench_out;
      if (out_dir.empty()) {
        const char* env = std::getenv("RANDMARGINS_OUT_DIR");
        out_dir = env ? env : (config.output_dir.empty() ? "." : config.output_dir);
      }
      const auto result = rm::RunLearningBenchmark(config);
      rm::WriteReport(out_dir, result);
      auto summary = rm::EmitReport(result).summary;
      summary["output_dir"] = out_dir;
      Print(summary);
    }
  } catch (const rm::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const rm::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
