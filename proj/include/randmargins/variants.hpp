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

#ifndef RANDMARGINS_VARIANTS_HPP_
#define RANDMARGINS_VARIANTS_HPP_

// Two natural deletion-based learners that do not avoid composition, kept
// for comparison with RandMargins:
//
//   kFixedSizeDeletion  per axis, take the n lowest and n highest positives,
//                       solve on each, delete both blocks.
//   kNoisySizeDeletion  same, with block sizes 2n + Lap(n).
//
// Removing one point shifts which points the fixed-size blocks pick up, and
// the displaced point is then deleted in one run but not the other, so the
// difference can propagate from axis to axis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "randmargins/core_model.hpp"
#include "randmargins/errors.hpp"
#include "randmargins/ipp.hpp"
#include "randmargins/neighboring.hpp"
#include "randmargins/noise.hpp"
#include "randmargins/random.hpp"

namespace randmargins {

enum class Variant { kFixedSizeDeletion, kNoisySizeDeletion };

inline const char* VariantName(Variant v) {
  return v == Variant::kFixedSizeDeletion ? "failed_1" : "failed_2";
}

struct VariantIteration {
  std::size_t axis = 0;
  std::int64_t low_size = 0;
  std::int64_t high_size = 0;
  std::vector<ExampleId> low_block;   // A_i, ascending ids
  std::vector<ExampleId> high_block;  // B_i, ascending ids
  std::optional<std::int64_t> low_point;
  std::optional<std::int64_t> high_point;
};

struct VariantRun {
  std::vector<VariantIteration> iterations;
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
  OriginRectangle hypothesis;  // corner = upper ends when solved
};

struct VariantOptions {
  RandomSeed seed = 0;
  // Without a solver only the block sets are computed.
  const IppSolver* solver = nullptr;
  // n; 0 means solver->SampleComplexity(ipp).
  std::int64_t block_size = 0;
  // Explicit (low, high) sizes per axis, bypassing the noise.
  std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> sizes;
};

inline VariantRun RunVariant(const Dataset& positives, const IppParams& ipp,
                             Variant variant, const VariantOptions& options) {
  ipp.Validate();
  const std::size_t d = positives.dim();
  std::int64_t n = options.block_size;
  if (n == 0) {
    if (options.solver == nullptr) {
      throw InvalidArgumentError("RunVariant: need a solver or a block size");
    }
    n = options.solver->SampleComplexity(ipp);
  }
  if (options.sizes && options.sizes->size() != d) {
    throw InvalidArgumentError("RunVariant: one size pair per axis required");
  }

  VariantRun run;
  std::vector<ExampleId> survivors(positives.ids().begin(),
                                   positives.ids().end());
  std::vector<std::int64_t> values;
  for (std::size_t axis = 0; axis < d; ++axis) {
    Rng rng(DeriveSeed(options.seed, axis));
    VariantIteration it;
    it.axis = axis;
    if (options.sizes) {
      std::tie(it.low_size, it.high_size) = (*options.sizes)[axis];
    } else if (variant == Variant::kFixedSizeDeletion) {
      it.low_size = it.high_size = n;
    } else {
      const LaplaceSpec noise{0.0, static_cast<double>(n)};
      auto noisy = [&] {
        const double raw = 2.0 * static_cast<double>(n) + SampleLaplace(noise, rng);
        return std::max(n, static_cast<std::int64_t>(std::ceil(raw)));
      };
      it.low_size = noisy();
      it.high_size = noisy();
    }
    if (it.low_size < 0 || it.high_size < 0 ||
        static_cast<std::size_t>(it.low_size + it.high_size) > survivors.size()) {
      throw InsufficientDataError("RunVariant: blocks of " +
                                  std::to_string(it.low_size) + " + " +
                                  std::to_string(it.high_size) +
                                  " exceed " + std::to_string(survivors.size()) +
                                  " survivors at axis " + std::to_string(axis));
    }
    const auto low = static_cast<std::size_t>(it.low_size);
    const auto high = static_cast<std::size_t>(it.high_size);
    detail::PartitionBottomK(survivors, positives, axis, low);
    it.low_block.assign(survivors.begin(),
                        survivors.begin() + static_cast<std::ptrdiff_t>(low));
    std::vector<ExampleId> rest(
        survivors.begin() + static_cast<std::ptrdiff_t>(low), survivors.end());
    detail::PartitionTopK(rest, positives, axis, high);
    it.high_block.assign(rest.begin(),
                         rest.begin() + static_cast<std::ptrdiff_t>(high));
    survivors.assign(rest.begin() + static_cast<std::ptrdiff_t>(high),
                     rest.end());
    std::sort(it.low_block.begin(), it.low_block.end());
    std::sort(it.high_block.begin(), it.high_block.end());

    if (options.solver != nullptr) {
      auto solve = [&](const std::vector<ExampleId>& block) {
        values.clear();
        for (ExampleId id : block) values.push_back(positives.Coord(id, axis));
        return options.solver->Solve(values, ipp, rng);
      };
      it.low_point = solve(it.low_block);
      it.high_point = solve(it.high_block);
      run.lower.push_back(*it.low_point);
      run.upper.push_back(*it.high_point);
    }
    run.iterations.push_back(std::move(it));
  }
  run.hypothesis = run.upper.size() == d ? OriginRectangle{run.upper, false}
                                         : OriginRectangle::AllZero(d);
  return run;
}

struct DivergenceReport {
  std::size_t divergent_iterations = 0;
  std::vector<std::size_t> divergent_axes;
};

// Iterations whose low or high blocks differ between two paired runs.
inline DivergenceReport CompareVariantRuns(const VariantRun& a,
                                           const VariantRun& b) {
  DivergenceReport report;
  const std::size_t common = std::min(a.iterations.size(), b.iterations.size());
  for (std::size_t i = 0; i < common; ++i) {
    const auto& x = a.iterations[i];
    const auto& y = b.iterations[i];
    if (x.low_block != y.low_block || x.high_block != y.high_block) {
      report.divergent_axes.push_back(i);
    }
  }
  report.divergent_iterations = report.divergent_axes.size();
  return report;
}

struct VariantLearnerResult {
  VariantRun run;        // on S
  VariantRun run_prime;  // on S' = S ∪ {x'}, same seed
  DivergenceReport divergence;
};

inline VariantLearnerResult VariantLearner(const NeighboringPair& pair,
                                           const IppParams& ipp,
                                           Variant variant,
                                           const VariantOptions& options) {
  VariantLearnerResult out;
  out.run = RunVariant(pair.base().Positives(), ipp, variant, options);
  out.run_prime = RunVariant(pair.extended().Positives(), ipp, variant, options);
  out.divergence = CompareVariantRuns(out.run, out.run_prime);
  return out;
}

// Domino instance for the fixed-size variant with block size n on d axes.
// Axis i has n-1 points at height H = x_max - 2 and a link point z_i at H-1
// that also sits at H+1 on axis i+1; every other coordinate of these points
// is x_max/2. Fillers lie uniformly below x_max/2. The extra point sits at
// x_max on axis 0. In the run with the extra point, z_0 is pushed out of the
// first high block, survives, and pushes z_1 out of the next, and so on.
inline NeighboringPair MakeChainPair(std::size_t d, std::int64_t n,
                                     std::int64_t x_max,
                                     std::size_t filler_count, Rng& rng) {
  if (x_max < 8) throw InvalidArgumentError("MakeChainPair: x_max < 8");
  if (n < 1) throw InvalidArgumentError("MakeChainPair: n < 1");
  const std::int64_t mid = x_max / 2;
  const std::int64_t top = x_max - 2;
  GridDomain domain{x_max, d};
  std::vector<LabeledExample> examples;
  for (std::size_t axis = 0; axis < d; ++axis) {
    for (std::int64_t j = 0; j + 1 < n; ++j) {
      LabeledExample e{std::vector<std::int64_t>(d, mid), true};
      e.coords[axis] = top;
      examples.push_back(std::move(e));
    }
    LabeledExample link{std::vector<std::int64_t>(d, mid), true};
    link.coords[axis] = top - 1;
    if (axis + 1 < d) link.coords[axis + 1] = top + 1;
    examples.push_back(std::move(link));
  }
  for (std::size_t f = 0; f < filler_count; ++f) {
    LabeledExample e{std::vector<std::int64_t>(d), true};
    for (auto& c : e.coords) c = UniformInt(rng, 0, mid - 1);
    examples.push_back(std::move(e));
  }
  LabeledExample extra{std::vector<std::int64_t>(d, mid), true};
  extra.coords[0] = x_max;
  return NeighboringPair(Dataset(domain, examples), std::move(extra));
}

struct FanInReport {
  std::size_t max_fan_in = 0;      // over shifted noise vectors
  std::size_t noise_vectors = 0;   // enumerated
  std::size_t shifted_vectors = 0; // those whose blocks ever contain x'
  // One image with maximal fan-in and its preimages (high sizes per axis).
  std::vector<std::int64_t> collided_image;
  std::vector<std::vector<std::int64_t>> collided_preimages;
};

// The noisy-size variant's attempted synchronization: for each vector of
// high-block sizes v' in [lo, hi]^d used on S', find the first axis whose
// block contains x' and decrement that block's size for the run on S. Counts
// how many shifted v' land on the same image; a bijection would have fan-in
// 1. Vectors under which x' is never selected map to themselves and are not
// counted.
inline FanInReport SynchronizationFanIn(const NeighboringPair& pair,
                                        std::int64_t low_size,
                                        std::int64_t high_lo,
                                        std::int64_t high_hi) {
  const Dataset positives = pair.extended().Positives();
  const std::size_t d = positives.dim();
  IppParams sets_only{1.0, 0.0, 0.1, positives.domain().x_max};
  std::map<std::vector<std::int64_t>, std::vector<std::vector<std::int64_t>>>
      preimages;
  std::vector<std::int64_t> sizes(d, high_lo);
  FanInReport report;
  while (true) {
    VariantOptions options;
    options.block_size = 1;
    options.sizes.emplace();
    for (std::int64_t s : sizes) options.sizes->push_back({low_size, s});
    const VariantRun run = RunVariant(positives, sets_only,
                                      Variant::kNoisySizeDeletion, options);
    std::vector<std::int64_t> image = sizes;
    bool shifted = false;
    for (const auto& it : run.iterations) {
      if (std::binary_search(it.high_block.begin(), it.high_block.end(),
                             pair.extra_id())) {
        --image[it.axis];
        shifted = true;
        break;
      }
      if (std::binary_search(it.low_block.begin(), it.low_block.end(),
                             pair.extra_id())) {
        // Low sizes are fixed in this enumeration; record the shift on the
        // high coordinate space as a distinct image.
        image.push_back(static_cast<std::int64_t>(it.axis));
        shifted = true;
        break;
      }
    }
    if (shifted) {
      preimages[image].push_back(sizes);
      ++report.shifted_vectors;
    }
    ++report.noise_vectors;
    std::size_t axis = 0;
    while (axis < d && ++sizes[axis] > high_hi) sizes[axis++] = high_lo;
    if (axis == d) break;
  }
  for (const auto& [image, pre] : preimages) {
    if (pre.size() > report.max_fan_in) {
      report.max_fan_in = pre.size();
      report.collided_image = image;
      report.collided_preimages = pre;
    }
  }
  return report;
}

// The crafted two-axis instance on the grid {0, 1, 2}^2: `base_copies` of
// (0,0), ten of (2,0), ten of (0,2), and the extra point (1,1). Origin copies
// are inserted last so they fill the low blocks first.
inline NeighboringPair MakeCollisionPair(std::size_t base_copies = 60) {
  GridDomain domain{2, 2};
  std::vector<LabeledExample> examples;
  for (int i = 0; i < 10; ++i) examples.push_back({{2, 0}, true});
  for (int i = 0; i < 10; ++i) examples.push_back({{0, 2}, true});
  for (std::size_t i = 0; i < base_copies; ++i) {
    examples.push_back({{0, 0}, true});
  }
  return NeighboringPair(Dataset(domain, examples), {{1, 1}, true});
}

}  // namespace randmargins

#endif  // RANDMARGINS_VARIANTS_HPP_
