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


// Learns a 3-d origin rectangle from synthetic data and prints the corner,
// the privacy cost and the exact error.

#include <iostream>

#include "randmargins.hpp"

int main() {
  namespace rm = randmargins;
  rm::ExperimentConfig config;
  config.x_max = 1000;
  config.d = 3;
  config.target = {700, 400, 900};
  config.distribution = rm::DistributionKind::kTargetMixture;
  config.target_weight = 0.5;
  config.epsilon = 1.0;
  config.delta = 1e-6;
  config.beta = 0.1;

  rm::Rng rng(2026);
  const rm::Dataset data = rm::GenerateSynthetic(config, config.d, 20000, rng);

  const rm::ExpMechIpp solver;
  const auto params = rm::RandMarginsParams::ForSolver(config.ipp(), solver, 7);
  const auto result = rm::LearnRectangle(data, params, solver);

  std::cout << "Delta = " << params.block_size << ", mu = " << params.mean_block
            << "\ncorner:";
  for (auto c : result.hypothesis.corner) std::cout << ' ' << c;
  const auto budget = rm::PrivacyBudget::ForRandMargins(
      config.epsilon, config.delta, config.d);
  std::cout << "\nempirical error: " << rm::EmpiricalError(result.hypothesis, data)
            << "\ngeneralization error: "
            << rm::ExactGeneralizationError(config, config.d, result.hypothesis)
            << "\nprivacy: (" << budget.total_epsilon << ", "
            << budget.total_delta << ")\n";
  if (result.trace) {
    for (const auto& it : result.trace->iterations) {
      std::cout << "axis " << it.axis << ": block " << it.clamped_size
                << ", p = " << it.interior_point << ", removed "
                << it.removed_count() << '\n';
    }
  }
  return 0;
}
