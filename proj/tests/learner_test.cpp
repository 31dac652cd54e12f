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
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "randmargins/learner.hpp"

namespace randmargins {
namespace {

class FixedComplexityIpp final : public IppSolver {
 public:
  explicit FixedComplexityIpp(std::int64_t n) : n_(n) {}
  std::string_view Name() const override { return "fixed"; }
  std::int64_t SampleComplexity(const IppParams&) const override { return n_; }

 private:
  std::int64_t DoSolve(std::span<const std::int64_t> values, const IppParams&,
                       Rng&) const override {
    return OracleMedianIpp::LowerMedian(values);
  }
  std::int64_t n_;
};

Dataset Range1d(std::int64_t n) {
  std::vector<LabeledExample> ex;
  for (std::int64_t i = 0; i < n; ++i) ex.push_back({{i}, true});
  return Dataset(GridDomain{n - 1, 1}, ex);
}

TEST(PrivacyBudgetTest, Values) {
  const auto b = PrivacyBudget::ForRandMargins(0.5, 0.01, 1);
  EXPECT_NEAR(b.total_epsilon, 35.0 * std::log(100.0), 1e-12);
  EXPECT_NEAR(b.total_delta, 0.03, 1e-15);
  EXPECT_NEAR(InBlockThreshold(0.05), 35.0 * std::log(20.0), 1e-12);
  EXPECT_THROW(PrivacyBudget::ForRandMargins(1.0, 0.0, 2), InvalidArgumentError);
}

TEST(RandMarginsTest, ZeroNoiseWorkedExample) {
  const OracleMedianIpp oracle;
  const IppParams ipp{1.0, 1e-6, 0.1, 99};
  auto params = RandMarginsParams::Make(ipp, 3, 1);
  params.zero_noise = true;
  const auto result = RandMargins(Range1d(100), params, oracle);
  ASSERT_EQ(result.trace.iterations.size(), 1u);
  const auto& it = result.trace.iterations[0];
  EXPECT_NEAR(params.mean_block, 12.0 * std::log(10.0), 1e-12);
  EXPECT_EQ(it.raw_size, 28);
  EXPECT_EQ(it.clamped_size, 28);
  EXPECT_EQ(it.clamp, ClampEvent::kNone);
  EXPECT_EQ(it.block.front(), 72u);
  EXPECT_EQ(it.block.back(), 99u);
  EXPECT_EQ(it.inner, (std::vector<ExampleId>{72, 73, 74}));
  EXPECT_EQ(it.interior_point, 73);
  EXPECT_TRUE(it.interior_success);
  EXPECT_EQ(it.removed_count(), 27);
  EXPECT_EQ(it.boundary_removed, 1);
  EXPECT_EQ(it.survivors_after, 73);
  EXPECT_EQ(result.hypothesis.corner, (std::vector<std::int64_t>{73}));
}

TEST(RandMarginsTest, ClampEvents) {
  const OracleMedianIpp oracle;
  const IppParams ipp{1.0, 1e-6, 0.1, 99};
  auto params = RandMarginsParams::Make(ipp, 3, 1);
  params.zero_noise = true;
  // mu = 27.6 exceeds the 20 survivors.
  const auto high = RandMargins(Range1d(20), params, oracle);
  EXPECT_EQ(high.trace.iterations[0].clamp, ClampEvent::kHigh);
  EXPECT_EQ(high.trace.iterations[0].clamped_size, 20);

  params.zero_noise = false;
  bool saw_low = false;
  for (RandomSeed seed = 0; seed < 3000 && !saw_low; ++seed) {
    params.seed = seed;
    const auto r = RandMargins(Range1d(100), params, oracle);
    const auto& it = r.trace.iterations[0];
    if (it.clamp == ClampEvent::kLow) {
      saw_low = true;
      EXPECT_LT(it.raw_size, 3);
      EXPECT_EQ(it.clamped_size, 3);
    }
  }
  EXPECT_TRUE(saw_low);
}

TEST(RandMarginsTest, DeterministicAndPairedNoise) {
  const ExpMechIpp mech;
  Rng rng(8);
  std::vector<LabeledExample> ex;
  for (int i = 0; i < 3000; ++i) {
    ex.push_back({{UniformInt(rng, 0, 500), UniformInt(rng, 0, 500)}, true});
  }
  const Dataset s(GridDomain{500, 2}, ex);
  const auto params = RandMarginsParams::ForSolver({1.0, 1e-6, 0.1, 500}, mech, 77);
  const auto a = RandMargins(s, params, mech);
  const auto b = RandMargins(s, params, mech);
  EXPECT_EQ(a.hypothesis, b.hypothesis);
  const auto c = RandMargins(s.WithAppended({{3, 3}, true}), params, mech);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.trace.iterations[i].noise, c.trace.iterations[i].noise);
  }
}

TEST(RandMarginsTest, InsufficientData) {
  const OracleMedianIpp oracle;
  const auto params = RandMarginsParams::Make({1.0, 1e-6, 0.1, 99}, 3, 1);
  EXPECT_THROW(RandMargins(Range1d(2), params, oracle), InsufficientDataError);
  const auto narrow = RandMarginsParams::Make({1.0, 1e-6, 0.1, 5}, 3, 1);
  EXPECT_THROW(RandMargins(Range1d(50), narrow, oracle), InvalidArgumentError);
}

TEST(LearnRectangleTest, FallsBackBelowThreshold) {
  const OracleMedianIpp oracle;
  const auto params = RandMarginsParams::Make({1.0, 1e-6, 0.1, 99}, 3, 1);
  EXPECT_EQ(FallbackThreshold(params),
            3 + static_cast<std::int64_t>(std::ceil(18.0 * std::log(10.0))));
  const auto r = LearnRectangle(Range1d(30), params, oracle);
  EXPECT_TRUE(r.fell_back);
  EXPECT_TRUE(r.hypothesis.empty);
  EXPECT_FALSE(r.trace);
  EXPECT_THROW(LearnRectangle(Range1d(30), params, oracle, {false}),
               InsufficientDataError);
  const auto ok = LearnRectangle(Range1d(100), params, oracle);
  EXPECT_FALSE(ok.fell_back);
  EXPECT_TRUE(ok.trace);
}

TEST(LearnRectangleTest, IgnoresNegativesAndStaysInsideTarget) {
  const OracleMedianIpp oracle;
  Rng rng(10);
  const std::vector<std::int64_t> target{300, 120, 450};
  const OriginRectangle truth{target, false};
  std::vector<LabeledExample> ex;
  for (int i = 0; i < 4000; ++i) {
    std::vector<std::int64_t> x{UniformInt(rng, 0, 500), UniformInt(rng, 0, 500),
                                UniformInt(rng, 0, 500)};
    const bool label = Predict(truth, x);
    ex.push_back({std::move(x), label});
  }
  const Dataset s(GridDomain{500, 3}, ex);
  for (RandomSeed seed = 0; seed < 20; ++seed) {
    const auto params = RandMarginsParams::Make({1.0, 1e-6, 0.1, 500}, 3, seed);
    const auto r = LearnRectangle(s, params, oracle);
    ASSERT_FALSE(r.fell_back);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(r.hypothesis.corner[i], target[i]);
  }
}

TEST(SampleSizeTest, PinnedValue) {
  const FixedComplexityIpp solver(40);
  // 12 * 40 * 40 * (1 + ln 10)^2 = 209415.7...
  EXPECT_EQ(RequiredSampleSize(0.1, {1.0, 1e-6, 0.1, 1000}, 4, solver), 209416);
  EXPECT_THROW(RequiredSampleSize(0.0, {1.0, 1e-6, 0.1, 1000}, 4, solver),
               InvalidArgumentError);
}

TEST(BaselineTest, PerCallBudgetAndOutput) {
  const IppParams total{1.0, 1e-6, 0.1, 1000};
  const auto per = BaselinePerCallParams(total, 4);
  EXPECT_NEAR(per.epsilon, 1.0 / (2.0 * std::sqrt(16.0 * std::log(1e6))), 1e-15);
  EXPECT_NEAR(per.delta, 1e-6 / 16.0, 1e-20);
  EXPECT_THROW(BaselinePerCallParams({1.0, 0.0, 0.1, 10}, 2), InvalidArgumentError);

  const OracleMedianIpp oracle;
  Rng rng(11);
  std::vector<LabeledExample> ex;
  for (int i = 0; i < 101; ++i) {
    ex.push_back({{UniformInt(rng, 0, 600), UniformInt(rng, 0, 600)}, true});
  }
  const Dataset s(GridDomain{1000, 2}, ex);
  const auto r = BaselineCompositionLearner(s, total, oracle, 3);
  ASSERT_EQ(r.upper.size(), 2u);
  // Oracle with n = 1: lower end is the minimum, upper end the maximum.
  for (std::size_t axis = 0; axis < 2; ++axis) {
    std::int64_t lo = 1000, hi = 0;
    for (auto id : s.ids()) {
      lo = std::min(lo, s.Coord(id, axis));
      hi = std::max(hi, s.Coord(id, axis));
    }
    EXPECT_EQ(r.lower[axis], lo);
    EXPECT_EQ(r.upper[axis], hi);
  }
  EXPECT_EQ(r.hypothesis.corner, r.upper);
  const ExpMechIpp mech;
  EXPECT_THROW(BaselineCompositionLearner(s, total, mech, 3), InsufficientDataError);
}

}  // namespace
}  // namespace randmargins
