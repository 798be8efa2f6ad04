// Copyright 2026 The rbcsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "rbcsp/error.hpp"
#include "rbcsp/generator.hpp"
#include "rbcsp/model.hpp"
#include "rbcsp/random.hpp"
#include "rbcsp/solver.hpp"
#include "rbcsp/theory.hpp"

// Monte-Carlo checks of the exact moment formulas. Each draws `seeds`
// instances with seeds (seed, i), measures the quantity by exhaustive
// counting, and reports a z-score against the closed form.

namespace rbcsp {

/// Largest d^n the moment checks will enumerate.
inline constexpr double kMaxCountSpace = 1e6;

struct MomentCheck {
  std::uint64_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double expected = 0.0;
  double log_expected = 0.0;
  double z = 0.0;
  // Second-moment check only: sample variance of N against the exact
  // E(N^2) - E(N)^2.
  double variance = 0.0;
  double variance_expected = 0.0;
  double variance_z = 0.0;
};

struct PairCheck {
  std::uint32_t similarity = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double frequency = 0.0;
  double expected = 0.0;
  double log_expected = 0.0;
  double std_error = 0.0;  // binomial, from the expected probability
  double z = 0.0;
};

namespace detail {

inline void check_countable(const DerivedParams& derived) {
  const double space =
      std::pow(static_cast<double>(derived.d), static_cast<double>(derived.n));
  if (space > kMaxCountSpace) {
    throw Error(ErrorKind::kTooLarge,
                "d^n = " + std::to_string(space) +
                    " is too large to count solutions exhaustively");
  }
}

inline bool nearly_equal(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

/// (observed - expected) / se, with the degenerate se = 0 case reported as
/// 0 when the two agree and as +-inf otherwise.
inline double z_score(double observed, double expected, double se) {
  if (se > 0.0) return (observed - expected) / se;
  if (nearly_equal(observed, expected)) return 0.0;
  return observed > expected ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
}

struct SolutionCountStats {
  std::uint64_t samples = 0;
  double mean = 0.0;
  double m2 = 0.0;  // mean of N^2
  double variance = 0.0;  // unbiased sample variance of N
  double var_of_sq = 0.0;  // unbiased sample variance of N^2
  double central4 = 0.0;  // mean of (N - mean)^4
};

inline SolutionCountStats sample_solution_counts(const DerivedParams& derived,
                                                 std::uint64_t seeds,
                                                 Seed seed) {
  if (seeds < 2) {
    throw Error(ErrorKind::kInvalidParameters, "need at least 2 seeds");
  }
  check_countable(derived);
  std::vector<double> counts(seeds);
  for (std::uint64_t i = 0; i < seeds; ++i) {
    const CspInstance instance =
        generate_from_shape(derived, derive_seed(seed, {i}));
    counts[i] = static_cast<double>(count_solutions(instance).count);
  }
  SolutionCountStats s;
  s.samples = seeds;
  const double m = static_cast<double>(seeds);
  for (double c : counts) {
    s.mean += c;
    s.m2 += c * c;
  }
  s.mean /= m;
  s.m2 /= m;
  for (double c : counts) {
    const double dev = c - s.mean;
    s.variance += dev * dev;
    s.central4 += dev * dev * dev * dev;
    const double dev_sq = c * c - s.m2;
    s.var_of_sq += dev_sq * dev_sq;
  }
  s.variance /= m - 1.0;
  s.var_of_sq /= m - 1.0;
  s.central4 /= m;
  return s;
}

}  // namespace detail

/// Mean solution count over random instances of `derived` against E(N).
inline MomentCheck verify_first_moment(const DerivedParams& derived,
                                       std::uint64_t seeds, Seed seed) {
  const auto stats = detail::sample_solution_counts(derived, seeds, seed);
  MomentCheck out;
  out.samples = stats.samples;
  out.mean = stats.mean;
  out.std_error = std::sqrt(stats.variance / static_cast<double>(seeds));
  out.log_expected = log_expected_solutions(derived);
  out.expected = std::exp(out.log_expected);
  out.z = detail::z_score(out.mean, out.expected, out.std_error);
  return out;
}

/// Mean of N^2 against E(N^2); also the sample variance of N against
/// E(N^2) - E(N)^2.
inline MomentCheck verify_second_moment(const DerivedParams& derived,
                                        std::uint64_t seeds, Seed seed) {
  const auto stats = detail::sample_solution_counts(derived, seeds, seed);
  const double m = static_cast<double>(seeds);
  MomentCheck out;
  out.samples = stats.samples;
  out.mean = stats.m2;
  out.std_error = std::sqrt(stats.var_of_sq / m);
  out.log_expected = log_second_moment(derived);
  out.expected = std::exp(out.log_expected);
  out.z = detail::z_score(out.mean, out.expected, out.std_error);

  const double e_n = std::exp(log_expected_solutions(derived));
  out.variance = stats.variance;
  out.variance_expected = out.expected - e_n * e_n;
  // Large-sample standard error of the sample variance.
  const double s2 = stats.variance;
  const double var_se =
      std::sqrt(std::max(0.0, stats.central4 - s2 * s2) / m);
  out.variance_z = detail::z_score(out.variance, out.variance_expected, var_se);
  return out;
}

/// The fixed pair used by verify_pair_probability: all zeros, and zeros on
/// the first S variables with ones elsewhere.
inline AssignmentPair pair_with_similarity(std::uint32_t n, std::uint64_t d,
                                           std::uint32_t S) {
  if (S > n) throw Error(ErrorKind::kRange, "similarity exceeds n");
  if (S < n && d < 2) {
    throw Error(ErrorKind::kRange, "d = 1 admits only similarity n");
  }
  AssignmentPair pair;
  pair.first.values.assign(n, 0);
  pair.second.values.assign(n, 0);
  for (std::uint32_t i = S; i < n; ++i) pair.second.values[i] = 1;
  return pair;
}

/// Frequency with which a fixed pair of similarity S satisfies a random
/// instance, against exp(pair_satisfaction_log_prob).
inline PairCheck verify_pair_probability(const DerivedParams& derived,
                                         std::uint32_t S, std::uint64_t seeds,
                                         Seed seed) {
  if (seeds < 1) {
    throw Error(ErrorKind::kInvalidParameters, "need at least 1 seed");
  }
  const AssignmentPair pair = pair_with_similarity(derived.n, derived.d, S);
  PairCheck out;
  out.similarity = S;
  out.samples = seeds;
  for (std::uint64_t i = 0; i < seeds; ++i) {
    const CspInstance instance =
        generate_from_shape(derived, derive_seed(seed, {i}));
    if (is_satisfied(instance, pair.first) &&
        is_satisfied(instance, pair.second)) {
      ++out.hits;
    }
  }
  const double m = static_cast<double>(seeds);
  out.frequency = static_cast<double>(out.hits) / m;
  out.log_expected = pair_satisfaction_log_prob(derived, S);
  out.expected = std::exp(out.log_expected);
  out.std_error = std::sqrt(out.expected * (1.0 - out.expected) / m);
  out.z = detail::z_score(out.frequency, out.expected, out.std_error);
  return out;
}

}  // namespace rbcsp
