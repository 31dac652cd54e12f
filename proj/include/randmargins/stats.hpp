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

#ifndef RANDMARGINS_STATS_HPP_
#define RANDMARGINS_STATS_HPP_

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "randmargins/errors.hpp"

namespace randmargins {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// One-sided Clopper-Pearson upper bound on a binomial proportion.
inline double ClopperPearsonUpper(std::uint64_t successes, std::uint64_t trials,
                                  double confidence = 0.99) {
  if (trials == 0 || successes > trials) {
    throw InvalidArgumentError("ClopperPearson: need 0 <= k <= n, n > 0");
  }
  if (successes == trials) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(successes) + 1.0,
                                static_cast<double>(trials - successes),
                                confidence);
}

inline double ClopperPearsonLower(std::uint64_t successes, std::uint64_t trials,
                                  double confidence = 0.99) {
  if (trials == 0 || successes > trials) {
    throw InvalidArgumentError("ClopperPearson: need 0 <= k <= n, n > 0");
  }
  if (successes == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(successes),
                                static_cast<double>(trials - successes) + 1.0,
                                1.0 - confidence);
}

// Two one-sided bounds, each at `confidence`.
inline Interval ClopperPearson(std::uint64_t successes, std::uint64_t trials,
                               double confidence = 0.99) {
  return {ClopperPearsonLower(successes, trials, confidence),
          ClopperPearsonUpper(successes, trials, confidence)};
}

// Smallest c with Pr[Binomial(n, p) > c] <= alpha.
inline std::uint64_t BinomialCriticalCount(std::uint64_t n, double p,
                                           double alpha = 0.01) {
  boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  for (std::uint64_t c = 0; c <= n; ++c) {
    if (boost::math::cdf(boost::math::complement(dist, static_cast<double>(c))) <=
        alpha) {
      return c;
    }
  }
  return n;
}

struct MeanSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

inline MeanSummary Summarize(std::span<const double> xs) {
  MeanSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

// One-sided Student-t upper confidence bound on the mean.
inline double MeanUpperBound(std::span<const double> xs,
                             double confidence = 0.99) {
  const MeanSummary s = Summarize(xs);
  if (s.count < 2) throw InvalidArgumentError("MeanUpperBound: need >= 2");
  boost::math::students_t dist(static_cast<double>(s.count - 1));
  const double t = boost::math::quantile(dist, confidence);
  return s.mean + t * s.stddev / std::sqrt(static_cast<double>(s.count));
}

}  // namespace randmargins

#endif  // RANDMARGINS_STATS_HPP_
