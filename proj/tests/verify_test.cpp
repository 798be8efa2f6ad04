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

#include "gtest/gtest.h"
#include "rbcsp/verify.hpp"

using namespace rbcsp;

TEST(VerifyFirstMoment, EmptyInstancesHaveExactlyDToTheN) {
  const auto check = verify_first_moment(make_derived(5, 2, 3, 0, 0), 20, Seed{1});
  EXPECT_EQ(check.mean, 243.0);
  EXPECT_EQ(check.std_error, 0.0);
  EXPECT_EQ(check.z, 0.0);
}

TEST(VerifyFirstMoment, FullRelations) {
  const auto check = verify_first_moment(make_derived(4, 2, 2, 2, 4), 10, Seed{1});
  EXPECT_EQ(check.mean, 0.0);
  EXPECT_EQ(check.log_expected, kLogZero);
  EXPECT_EQ(check.z, 0.0);
}

TEST(VerifyFirstMoment, AgreesWithFormula) {
  const auto check = verify_first_moment(make_derived(6, 2, 3, 4, 3), 2000, Seed{7});
  EXPECT_NEAR(check.expected, 729.0 * std::pow(2.0 / 3.0, 4), 1e-9);
  EXPECT_LE(std::abs(check.z), 3.0);
}

TEST(VerifyFirstMoment, RefusesHugeEnumerations) {
  try {
    verify_first_moment(make_derived(20, 2, 10, 3, 1), 10, Seed{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
}

TEST(VerifySecondMoment, EmptyInstances) {
  const auto check = verify_second_moment(make_derived(4, 2, 2, 0, 0), 10, Seed{1});
  EXPECT_EQ(check.mean, 256.0);
  EXPECT_EQ(check.z, 0.0);
}

TEST(VerifySecondMoment, AgreesWithFormula) {
  const auto check = verify_second_moment(make_derived(4, 2, 2, 3, 1), 2000, Seed{9});
  EXPECT_LE(std::abs(check.z), 3.0);
  EXPECT_LE(std::abs(check.variance_z), 3.0);
}

TEST(VerifyPairProbability, Trivial) {
  const auto check =
      verify_pair_probability(make_derived(4, 2, 2, 3, 0), 4, 100, Seed{1});
  EXPECT_EQ(check.frequency, 1.0);
  EXPECT_EQ(check.expected, 1.0);
  EXPECT_EQ(check.z, 0.0);
}

TEST(VerifyPairProbability, AgreesWithFormulaAndOrdersBySimilarity) {
  const auto shape = make_derived(4, 2, 2, 3, 1);
  const auto same = verify_pair_probability(shape, 4, 20000, Seed{2});
  const auto diff = verify_pair_probability(shape, 0, 20000, Seed{2});
  const auto mid = verify_pair_probability(shape, 2, 20000, Seed{2});
  EXPECT_LE(std::abs(same.z), 3.0);
  EXPECT_LE(std::abs(diff.z), 3.0);
  EXPECT_LE(std::abs(mid.z), 3.0);
  EXPECT_GE(same.frequency, diff.frequency);
  EXPECT_NEAR(same.expected, std::pow(0.75, 3), 1e-12);
  EXPECT_NEAR(diff.expected, std::pow(0.5, 3), 1e-12);
}

TEST(PairWithSimilarity, HasRequestedSimilarity) {
  for (std::uint32_t S = 0; S <= 5; ++S) {
    EXPECT_EQ(similarity(pair_with_similarity(5, 3, S)), S);
  }
  EXPECT_THROW(pair_with_similarity(5, 3, 6), Error);
  EXPECT_THROW(pair_with_similarity(5, 1, 2), Error);
}
