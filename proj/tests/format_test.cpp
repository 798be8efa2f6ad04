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

#include <string>

#include "gtest/gtest.h"
#include "rbcsp/format.hpp"
#include "rbcsp/generator.hpp"

using namespace rbcsp;

TEST(Format, WritesCanonicalText) {
  CspInstance inst{4, 2, 2, {{{0, 3}, {1, 2}}, {{1, 2}, {}}}};
  EXPECT_EQ(to_rbcsp(inst), "RBCSP 1 4 2 2 2\n0 3 : 1 2\n1 2 :\n");
}

TEST(Format, RoundTripsGeneratedInstances) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = generate_rb({8, 3, 0.6, 0.8, 0.3}, Seed{s});
    const std::string text = to_rbcsp(inst);
    const auto back = from_rbcsp(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(to_rbcsp(back), text);
  }
}

TEST(Format, RejectsMalformedInput) {
  const char* bad[] = {
      "",                                   // no header
      "RBCSP 2 4 2 2 0\n",                  // wrong version
      "RBCSP 1 4 2 2 1\n",                  // missing constraint
      "RBCSP 1 4 2 2 1\n1 0 : 1\n",         // unsorted scope
      "RBCSP 1 4 2 2 1\n0 4 : 1\n",         // variable out of range
      "RBCSP 1 4 2 2 1\n0 1 : 2 1\n",       // unsorted codes
      "RBCSP 1 4 2 2 1\n0 1 : 1 1\n",       // duplicate code
      "RBCSP 1 4 2 2 1\n0 1 : 4\n",         // code out of range
      "RBCSP 1 4 2 2 1\n0 1 : 1 \n",        // trailing whitespace
      "RBCSP 1 4 2 2 1\n0 1 1\n",           // missing separator
      "RBCSP 1 4 2 2 1\n0 1 :\n0 1 :\n",    // extra line
      "RBCSP 1 1 2 2 0\n",                  // n < k
  };
  for (const char* text : bad) {
    EXPECT_THROW(from_rbcsp(text), Error) << '"' << text << '"';
  }
}
