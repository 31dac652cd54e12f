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


#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "randmargins/game.hpp"

namespace randmargins {
namespace {

TEST(GameTest, ChoiceValidation) {
  EXPECT_NO_THROW(ValidateChoice({0.5, 0.125}));
  EXPECT_NO_THROW(ValidateChoice({0.0, 0.0}));
  EXPECT_THROW(ValidateChoice({0.6, 0.2}), InvalidStrategyError);
  EXPECT_THROW(ValidateChoice({0.4, 0.05}), InvalidStrategyError);
  EXPECT_THROW(ValidateChoice({0.5, 0.6}), InvalidStrategyError);
  GameConfig bad{"bad", 10, ConstantStrategy(0.5, 0.01)};
  Rng rng(1);
  EXPECT_THROW(PlayEpisode(bad, rng, true), InvalidStrategyError);
}

TEST(GameTest, StrategiesChooseExpectedMoves) {
  const std::vector<int> none;
  const std::vector<int> hit{1};
  const std::vector<int> quiet{0};
  auto choice = [](const Strategy& s, const std::vector<int>& h) {
    return s(GameHistory{h, 0, true});
  };
  EXPECT_DOUBLE_EQ(choice(BoundaryStrategy(), none).q_bar, 0.125);
  EXPECT_DOUBLE_EQ(choice(AdaptiveGreedyStrategy(), none).q, 0.25);
  EXPECT_DOUBLE_EQ(choice(AdaptiveGreedyStrategy(), hit).q, 0.5);
  EXPECT_DOUBLE_EQ(choice(AdaptiveGreedyStrategy(), quiet).q_bar, 0.0625);
}

TEST(GameTest, TailBoundFormula) {
  EXPECT_NEAR(GameTailBound(35.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(GameTailBound(50.0), std::exp(-4.0), 1e-15);
}

TEST(GameTest, ConstantStrategyMeanMatchesClosedForm) {
  for (auto [q, q_bar] : {std::pair{0.5, 0.125}, std::pair{0.2, 0.3},
                          std::pair{0.4, 0.1}}) {
    GameConfig config{"constant", 60, ConstantStrategy(q, q_bar)};
    const double gammas[] = {10.0};
    const auto report = SimulateGame(config, 40000, gammas, 7);
    const double expected = ExpectedConstantScore(q, q_bar, 60);
    EXPECT_NEAR(report.mean_score, expected, 0.05 * expected + 0.02)
        << q << "," << q_bar;
  }
  EXPECT_DOUBLE_EQ(ExpectedConstantScore(0.3, 0.0, 10), 3.0);
}

TEST(GameTest, EpisodeBookkeeping) {
  GameConfig config{"boundary", 200, BoundaryStrategy()};
  Rng rng(3);
  for (int e = 0; e < 200; ++e) {
    const auto ep = PlayEpisode(config, rng, false);
    ASSERT_EQ(ep.outcomes.size(), 200u);
    std::int64_t score = 0;
    bool alive = true;
    for (std::size_t i = 0; i < ep.outcomes.size(); ++i) {
      if (ep.outcomes[i] == 2) alive = false;
      if (alive && ep.outcomes[i] == 1) ++score;
      EXPECT_EQ(ep.alive[i], alive ? 1 : 0);
    }
    EXPECT_EQ(ep.score, score);
  }
}

TEST(GameTest, SimulationIsReproducible) {
  GameConfig config{"adaptive", 100, AdaptiveGreedyStrategy()};
  const double gammas[] = {20.0, 30.0};
  const auto a = SimulateGame(config, 3000, gammas, 9);
  const auto b = SimulateGame(config, 3000, gammas, 9);
  EXPECT_EQ(a.mean_score, b.mean_score);
  EXPECT_EQ(a.tails[1].count, b.tails[1].count);
  EXPECT_THROW(SimulateGame(config, 0, gammas, 9), InvalidArgumentError);
}

}  // namespace
}  // namespace randmargins
