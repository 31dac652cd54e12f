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

#ifndef RANDMARGINS_GAME_HPP_
#define RANDMARGINS_GAME_HPP_

// The m-round game behind the |E_in| concentration bound. Each round the
// adversary picks (q, q_bar) with 0 <= q <= 1/2 and q/4 <= q_bar <= 1 - q;
// then X in {0, 1, 2} is drawn with Pr[X=1] = q, Pr[X=2] = q_bar. The score
// counts rounds with X = 1 before the first X = 2, and
// Pr[score > gamma] <= exp(-gamma/5 + 6) for every strategy.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "randmargins/errors.hpp"
#include "randmargins/random.hpp"
#include "randmargins/stats.hpp"

namespace randmargins {

struct RoundChoice {
  double q = 0.0;
  double q_bar = 0.0;
};

struct GameHistory {
  std::span<const int> outcomes;  // X_1 .. X_{i-1}
  std::int64_t score = 0;
  bool alive = true;              // no X = 2 yet
};

using Strategy = std::function<RoundChoice(const GameHistory&)>;

struct GameConfig {
  std::string name;
  std::size_t rounds = 0;
  Strategy strategy;
};

inline constexpr double kChoiceSlack = 1e-12;

inline void ValidateChoice(const RoundChoice& c) {
  const bool ok = c.q >= 0.0 && c.q <= 0.5 + kChoiceSlack &&
                  c.q_bar >= c.q / 4.0 - kChoiceSlack &&
                  c.q_bar <= 1.0 - c.q + kChoiceSlack;
  if (!ok) {
    throw InvalidStrategyError("game: (q, q_bar) = (" + std::to_string(c.q) +
                               ", " + std::to_string(c.q_bar) +
                               ") violates 0 <= q <= 1/2, q/4 <= q_bar <= 1-q");
  }
}

inline Strategy ConstantStrategy(double q, double q_bar) {
  return [q, q_bar](const GameHistory&) { return RoundChoice{q, q_bar}; };
}

// q_bar pinned to its lower limit q/4.
inline Strategy BoundaryStrategy(double q = 0.5) {
  return [q](const GameHistory&) { return RoundChoice{q, q / 4.0}; };
}

// Plays the highest-ratio move (1/2, 1/8) after a success, and backs off to
// (1/4, 1/16) after a quiet round or at the start.
inline Strategy AdaptiveGreedyStrategy() {
  return [](const GameHistory& h) {
    if (!h.outcomes.empty() && h.outcomes.back() == 1) {
      return RoundChoice{0.5, 0.125};
    }
    return RoundChoice{0.25, 0.0625};
  };
}

struct GameEpisode {
  std::vector<int> outcomes;  // X_i
  std::vector<int> alive;     // Z_i
  std::int64_t score = 0;
};

inline GameEpisode PlayEpisode(const GameConfig& config, Rng& rng,
                               bool stop_when_dead = false) {
  GameEpisode ep;
  ep.outcomes.reserve(config.rounds);
  ep.alive.reserve(config.rounds);
  bool alive = true;
  for (std::size_t i = 0; i < config.rounds; ++i) {
    const RoundChoice c =
        config.strategy(GameHistory{ep.outcomes, ep.score, alive});
    ValidateChoice(c);
    const double u = UniformDouble(rng);
    const int x = u < c.q ? 1 : (u < c.q + c.q_bar ? 2 : 0);
    if (x == 2) alive = false;
    ep.outcomes.push_back(x);
    ep.alive.push_back(alive ? 1 : 0);
    if (alive && x == 1) ++ep.score;
    if (!alive && stop_when_dead) break;
  }
  return ep;
}

inline double GameTailBound(double gamma) { return std::exp(-gamma / 5.0 + 6.0); }

// E[score] for a constant strategy over m rounds:
// sum_i q (1 - q_bar)^(i-1) = q (1 - (1 - q_bar)^m) / q_bar.
inline double ExpectedConstantScore(double q, double q_bar, std::size_t rounds) {
  if (q_bar == 0.0) return q * static_cast<double>(rounds);
  return q * (1.0 - std::pow(1.0 - q_bar, static_cast<double>(rounds))) / q_bar;
}

struct TailEstimate {
  double gamma = 0.0;
  std::uint64_t count = 0;  // episodes with score > gamma
  double frequency = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;     // one-sided 99% Clopper-Pearson
  double bound = 0.0;       // exp(-gamma/5 + 6)
  bool pass = false;        // ci_high <= bound
};

struct GameReport {
  std::string strategy;
  std::size_t rounds = 0;
  std::size_t episodes = 0;
  double mean_score = 0.0;
  std::int64_t max_score = 0;
  std::vector<TailEstimate> tails;
};

inline GameReport SimulateGame(const GameConfig& config, std::size_t episodes,
                               std::span<const double> gammas, RandomSeed seed,
                               double confidence = 0.99) {
  if (episodes == 0) throw InvalidArgumentError("SimulateGame: no episodes");
  GameReport report;
  report.strategy = config.name;
  report.rounds = config.rounds;
  report.episodes = episodes;
  std::vector<std::int64_t> scores;
  scores.reserve(episodes);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    const auto ep = PlayEpisode(config, rng, /*stop_when_dead=*/true);
    scores.push_back(ep.score);
    total += static_cast<double>(ep.score);
    report.max_score = std::max(report.max_score, ep.score);
  }
  report.mean_score = total / static_cast<double>(episodes);
  for (double gamma : gammas) {
    TailEstimate t;
    t.gamma = gamma;
    for (std::int64_t s : scores) {
      if (static_cast<double>(s) > gamma) ++t.count;
    }
    t.frequency = static_cast<double>(t.count) / static_cast<double>(episodes);
    t.ci_low = ClopperPearsonLower(t.count, episodes, confidence);
    t.ci_high = ClopperPearsonUpper(t.count, episodes, confidence);
    t.bound = GameTailBound(gamma);
    t.pass = t.ci_high <= t.bound;
    report.tails.push_back(t);
  }
  return report;
}

}  // namespace randmargins

#endif  // RANDMARGINS_GAME_HPP_
