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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "rbcsp/theory.hpp"

using namespace rbcsp;

namespace {

/// Enumerates every q-subset of the d^k tuples and counts how many leave
/// tuple 0, and both tuples 0 and 1, compatible.
std::pair<Rational, Rational> enumerate_single_constraint(std::uint64_t space,
                                                          std::uint64_t q) {
  std::uint64_t total = 0, keep0 = 0, keep01 = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << space); ++mask) {
    if (static_cast<std::uint64_t>(__builtin_popcountll(mask)) != q) continue;
    ++total;
    if (!(mask & 1)) ++keep0;
    if (!(mask & 3)) ++keep01;
  }
  return {Rational(keep0, total), Rational(keep01, total)};
}

}  // namespace

TEST(CriticalValues, Examples) {
  EXPECT_NEAR(critical_r(1.0, 1.0 - std::exp(-1.0)), 1.0, 1e-12);
  EXPECT_NEAR(critical_r(0.7686, 0.38), 0.7686 / -std::log(0.62), 1e-12);
  EXPECT_NEAR(critical_r(0.7686, 0.38), 1.608, 5e-4);
  EXPECT_NEAR(critical_r(1.4, 0.3), 2 * critical_r(0.7, 0.3), 1e-12);

  const double alpha = std::log(10.0) / std::log(20.0);
  const double r = 0.5 * 19 / (2 * std::log(20.0));
  EXPECT_NEAR(critical_p(alpha, r), 0.38, 5e-3);
  EXPECT_NEAR(critical_p(0.9, 0.9), 1 - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(critical_p(0.9, 0.9), 0.6321, 5e-5);
  EXPECT_THROW(critical_r(1.0, 0.0), Error);
  EXPECT_THROW(critical_r(1.0, 1.0), Error);
  EXPECT_THROW(critical_p(1.0, 0.0), Error);
}

TEST(CriticalValues, InverseConsistency) {
  for (double alpha : {0.3, 0.77, 1.0, 2.5}) {
    for (double r : {0.2, 1.0, 1.5856, 4.0}) {
      EXPECT_NEAR(critical_r(alpha, critical_p(alpha, r)), r, 1e-12 * r);
    }
  }
}

TEST(Conditions, Theorems) {
  const auto t2 = thm2_conditions(2, 0.7686, 1.5856);
  EXPECT_TRUE(t2.applicable);
  EXPECT_FALSE(thm2_conditions(2, 0.4, 1.0).alpha_gt_1_over_k);
  EXPECT_FALSE(thm1_conditions(2, 0.4, 0.3).alpha_gt_1_over_k);
  const auto t1 = thm1_conditions(2, 0.8, 0.6);
  EXPECT_FALSE(t1.tightness_condition);  // 2 < 1 / 0.4 = 2.5
  EXPECT_DOUBLE_EQ(t1.threshold, 2.5);
  EXPECT_FALSE(t1.applicable);
  EXPECT_TRUE(thm1_conditions(2, 0.8, 0.5).applicable);
  EXPECT_FALSE(thm1_conditions(3, 0.8, 0.0).applicable);
}

TEST(Conditions, ModelB) {
  const auto c = model_b_conditions(20, 10, 0.5);
  EXPECT_TRUE(c.alpha_gt_1_over_k);
  EXPECT_TRUE(c.tightness_condition);
  EXPECT_NEAR(c.threshold, 0.35, 5e-3);
  EXPECT_FALSE(model_b_conditions(20, 4, 0.5).alpha_gt_1_over_k);
  EXPECT_FALSE(model_b_conditions(20, 10, 0.3).tightness_condition);
}

TEST(FirstMoment, Examples) {
  // n=4, d=2, t=2, q/d^k = 1/2: 4 ln 2 + 2 ln(1/2) = 2 ln 2.
  EXPECT_NEAR(log_expected_solutions(make_derived(4, 2, 2, 2, 2)),
              2 * std::log(2.0), 1e-12);
  EXPECT_EQ(log_expected_solutions(make_derived(4, 2, 2, 2, 4)), kLogZero);
  EXPECT_NEAR(log_expected_solutions(make_derived(4, 2, 2, 0, 4)),
              4 * std::log(2.0), 1e-12);
}

TEST(FirstMoment, ZeroAtCriticalDensity) {
  for (double alpha : {0.6, 0.8, 1.0, 1.3}) {
    for (double p : {0.1, 0.25, 0.5}) {
      for (double n : {10.0, 50.0, 1000.0}) {
        const double r = critical_r(alpha, p);
        const double v = log_expected_solutions(
            n, std::pow(n, alpha), r * n * std::log(n), p);
        EXPECT_NEAR(v, 0.0, 1e-9);
      }
    }
  }
}

TEST(FirstMoment, SignFlipsAtCriticalValue) {
  const double alpha = 0.8, p = 0.3, n = 40.0;
  const double rc = critical_r(alpha, p);
  for (double f : {0.5, 0.9, 0.999}) {
    EXPECT_GT(log_expected_solutions(n, std::pow(n, alpha),
                                     f * rc * n * std::log(n), p),
              0.0);
    EXPECT_LT(log_expected_solutions(n, std::pow(n, alpha),
                                     rc / f * n * std::log(n), p),
              0.0);
  }
}

TEST(SingleConstraint, MatchesEnumeration) {
  const auto probs = single_constraint_probs(2, 2, 1);
  EXPECT_EQ(probs.p_same, Rational(3, 4));
  EXPECT_EQ(probs.p_diff, Rational(1, 2));
  for (std::uint64_t d : {2u, 3u}) {
    for (std::uint32_t k : {1u, 2u}) {
      const TupleCode space = tuple_space(d, k);
      for (TupleCode q = 0; q <= space; ++q) {
        const auto [same, diff] = enumerate_single_constraint(space, q);
        const auto exact = single_constraint_probs(d, k, q);
        EXPECT_EQ(exact.p_same, same) << d << " " << k << " " << q;
        EXPECT_EQ(exact.p_diff, diff) << d << " " << k << " " << q;
      }
    }
  }
}

TEST(SingleConstraint, Extremes) {
  auto none = single_constraint_probs(3, 2, 0);
  EXPECT_EQ(none.p_same, 1);
  EXPECT_EQ(none.p_diff, 1);
  auto all = single_constraint_probs(3, 2, 9);
  EXPECT_EQ(all.p_same, 0);
  EXPECT_EQ(all.p_diff, 0);
  EXPECT_THROW(single_constraint_probs(1, 3, 0), Error);
}

TEST(PairProbability, LimitingCases) {
  const auto shape = make_derived(6, 2, 3, 5, 4);
  const auto probs = single_constraint_probs(3, 2, 4);
  EXPECT_NEAR(pair_satisfaction_log_prob(shape, 6), 5 * log_of(probs.p_same),
              1e-12);
  EXPECT_NEAR(pair_satisfaction_log_prob(shape, 1), 5 * log_of(probs.p_diff),
              1e-12);
  EXPECT_NEAR(pair_satisfaction_log_prob(shape, 0), 5 * log_of(probs.p_diff),
              1e-12);
  EXPECT_EQ(pair_satisfaction_log_prob(make_derived(6, 2, 3, 5, 9), 3),
            kLogZero);
  EXPECT_EQ(pair_satisfaction_log_prob(make_derived(6, 2, 3, 0, 9), 3), 0.0);
  EXPECT_THROW(pair_satisfaction_log_prob(shape, 7), Error);
}

TEST(PairProbability, SZeroCloseToSquaredSingle) {
  // p_diff = (1-p)^2 + O(1/d^k): exp(result) approaches (1-p)^(2t).
  const auto shape = make_derived(10, 2, 30, 4, 450);
  const double approx = 8 * std::log(0.5);
  EXPECT_NEAR(pair_satisfaction_log_prob(shape, 0), approx, 4 * 8 / 900.0);
  EXPECT_LT(pair_satisfaction_log_prob(shape, 0), approx);
}

TEST(PairCount, MatchesBruteForce) {
  const auto buckets = oracle::bucket_pairs(2, 2);
  ASSERT_EQ(buckets, (std::vector<std::uint64_t>{4, 8, 4}));
  for (std::uint32_t S = 0; S <= 2; ++S) {
    EXPECT_NEAR(log_pair_count(2, 2, S), std::log(double(buckets[S])), 1e-12);
    EXPECT_EQ(pair_count(2, 2, S), buckets[S]);
  }
  const auto b3 = oracle::bucket_pairs(3, 3);
  for (std::uint32_t S = 0; S <= 3; ++S) EXPECT_EQ(pair_count(3, 3, S), b3[S]);
}

TEST(PairCount, SumsToAllPairs) {
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (std::uint64_t d = 1; d <= 3; ++d) {
      BigInt total = 0;
      std::vector<double> logs;
      for (std::uint32_t S = 0; S <= n; ++S) {
        total += pair_count(n, d, S);
        logs.push_back(log_pair_count(n, d, S));
      }
      EXPECT_EQ(total, boost::multiprecision::pow(BigInt(d), 2 * n));
      EXPECT_NEAR(log_sum_exp(logs), 2.0 * n * std::log(double(d)), 1e-9);
      EXPECT_NEAR(log_pair_count(n, d, n), n * std::log(double(d)), 1e-12);
    }
  }
  EXPECT_EQ(log_pair_count(3, 1, 2), kLogZero);
}

TEST(SecondMoment, EmptyInstance) {
  const auto shape = make_derived(5, 2, 3, 0, 4);
  EXPECT_NEAR(log_second_moment(shape), 10 * std::log(3.0), 1e-12);
}

TEST(SecondMoment, ExactSumByBruteForce) {
  // E(N^2) = sum over ordered pairs of P(pair satisfies), evaluated by
  // brute-force pair enumeration with exact per-constraint probabilities.
  const auto shape = make_derived(4, 2, 2, 3, 1);
  const auto probs = single_constraint_probs(2, 2, 1);
  Rational total = 0;
  oracle::for_each_assignment(4, 2, [&](const Assignment& a) {
    oracle::for_each_assignment(4, 2, [&](const Assignment& b) {
      // Fraction of the 6 scopes on which a and b agree.
      int agree = 0;
      for (Var u = 0; u < 4; ++u) {
        for (Var v = u + 1; v < 4; ++v) {
          agree += a.values[u] == b.values[u] && a.values[v] == b.values[v];
        }
      }
      const Rational one =
          probs.p_same * Rational(agree, 6) + probs.p_diff * Rational(6 - agree, 6);
      total += one * one * one;
    });
  });
  EXPECT_NEAR(log_second_moment(shape), log_of(total), 1e-12);
}

TEST(SecondMoment, CauchySchwarz) {
  for (std::uint32_t n : {4u, 7u, 12u}) {
    for (std::uint64_t d : {2u, 3u, 6u}) {
      for (std::uint64_t t : {0u, 3u, 20u}) {
        const TupleCode space = d * d;
        for (TupleCode q : {TupleCode{0}, space / 3, space - 1}) {
          const auto m = moment_report(make_derived(n, 2, d, t, q));
          EXPECT_LE(m.ratio_log, 1e-9);
          EXPECT_GE(m.log_e_n2, 2 * m.log_e_n - 1e-9);
        }
      }
    }
  }
}

TEST(SecondMoment, RatioTrendsTowardOne) {
  // alpha = 1, p = 1/4, r = 1 < r_cr = 3.48, k >= 1/(1-p): the ratio
  // E(N)^2/E(N^2) should increase with n.
  double previous = -std::numeric_limits<double>::infinity();
  for (std::uint32_t n : {8u, 12u, 16u, 24u}) {
    const auto shape = derive_params({n, 2, 1.0, 1.0, 0.25});
    ASSERT_EQ(shape.p_eff, 0.25);
    const auto m = moment_report(shape);
    EXPECT_LE(m.ratio_log, 0.0);
    EXPECT_GT(m.ratio_log, previous) << "n=" << n;
    previous = m.ratio_log;
  }
}

TEST(AuxiliaryFunctions, GAndH) {
  for (std::uint32_t k = 2; k <= 5; ++k) {
    EXPECT_EQ(g_of_s(0.0, k), 0.0);
    EXPECT_EQ(g_of_s(1.0, k), 0.0);
  }
  EXPECT_DOUBLE_EQ(g_of_s(0.5, 2), 2 * 1 * (0.25 - 0.5) / 2);
  EXPECT_EQ(h_of_s(0.0, 3, 1.2, 0.4, 0.9), 0.0);
  EXPECT_NEAR(h_of_s(1.0, 3, 1.2, 0.4, 0.9), -1.2 * std::log(0.6) - 0.9,
              1e-12);
  EXPECT_NEAR(log_f(0.3, 2, 1.0, 0.3, 0.8, 50.0),
              h_of_s(0.3, 2, 1.0, 0.3, 0.8) * 50 * std::log(50.0), 1e-12);
  EXPECT_THROW(h_second_derivative(0.5, 2, 1.0, 1.0), Error);
  EXPECT_THROW(h_of_s(0.5, 2, 1.0, 0.0, 1.0), Error);
}

TEST(AuxiliaryFunctions, SecondDerivativeMatchesFiniteDifference) {
  const double step = 1e-4;
  for (std::uint32_t k : {2u, 3u, 5u}) {
    for (double p : {0.2, 0.5, 0.8}) {
      const double r = 1.3, alpha = 0.7;
      for (int i = 1; i <= 9; ++i) {
        const double s = i / 10.0;
        const double fd = (h_of_s(s + step, k, r, p, alpha) -
                           2 * h_of_s(s, k, r, p, alpha) +
                           h_of_s(s - step, k, r, p, alpha)) /
                          (step * step);
        const double exact = h_second_derivative(s, k, r, p);
        EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, std::abs(exact)))
            << "k=" << k << " p=" << p << " s=" << s;
      }
    }
  }
}

TEST(AuxiliaryFunctions, ConvexAndMaximalAtZeroBelowThreshold) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t k = 2 + gen() % 5;
    const double p = 0.01 + unit(gen) * (1.0 - 1.0 / k - 0.01);
    const double alpha = 0.1 + 2 * unit(gen);
    const double r = (0.05 + 0.9 * unit(gen)) * critical_r(alpha, p);
    ASSERT_TRUE(k >= 1.0 / (1.0 - p));
    int argmax = 0;
    double best = h_of_s(0.0, k, r, p, alpha);
    for (int i = 0; i <= 1000; ++i) {
      const double s = i / 1000.0;
      EXPECT_GE(h_second_derivative(s, k, r, p), -1e-12);
      const double h = h_of_s(s, k, r, p, alpha);
      if (h > best) {
        best = h;
        argmax = i;
      }
    }
    EXPECT_EQ(argmax, 0);
    EXPECT_LT(h_of_s(1.0, k, r, p, alpha), 0.0);
  }
}

TEST(LogSumExp, Sentinels) {
  const std::vector<double> none;
  EXPECT_EQ(log_sum_exp(none), kLogZero);
  const std::vector<double> zeros{kLogZero, kLogZero};
  EXPECT_EQ(log_sum_exp(zeros), kLogZero);
  const std::vector<double> mixed{kLogZero, 1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(mixed), 1000.0 + std::log(2.0), 1e-12);
}
