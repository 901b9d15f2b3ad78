// Copyright 2026 The zhsat Authors
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

#include <gtest/gtest.h>

#include "zhsat/random.hpp"
#include "zhsat/semiring.hpp"

namespace zhsat {
namespace {

TEST(Project, Examples) {
  EXPECT_FALSE(project(Natural(0)).value);
  EXPECT_TRUE(project(Natural(1)).value);
  EXPECT_TRUE(project(Natural(2)).value);
}

TEST(Pow2, Examples) {
  EXPECT_EQ(pow2(0), Natural(1));
  EXPECT_EQ(pow2(3), Natural(8));
  EXPECT_EQ(pow2(64).str(), "18446744073709551616");
  EXPECT_EQ(pow2(64).log2_exact(), 64u);
  EXPECT_EQ(Natural(12).log2_exact(), std::nullopt);
}

TEST(Project, IsHomomorphism) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    // Small values hit zero often; the shift reaches past 64 bits.
    Natural a(rng.uniform(0, 3)), b(rng.uniform(0, 3));
    if (rng.coin()) a <<= rng.uniform(0, 100);
    EXPECT_EQ(project(a + b), project(a) + project(b));
    EXPECT_EQ(project(a * b), project(a) * project(b));
  }
  EXPECT_EQ(project(Natural(0)), Boolean(false));
  EXPECT_EQ(project(Natural(1)), Boolean(true));
  for (std::size_t c = 0; c < 200; ++c) EXPECT_TRUE(project(pow2(c)).value);
}

TEST(Boolean, SemiringAxiomsExhaustive) {
  for (bool x : {false, true})
    for (bool y : {false, true})
      for (bool z : {false, true}) {
        Boolean a(x), b(y), c(z);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + Boolean(false), a);
        EXPECT_EQ(a * Boolean(true), a);
        EXPECT_EQ(a * Boolean(false), Boolean(false));
      }
}

TEST(Natural, SemiringAxiomsRandomized) {
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    Natural a(rng.engine()()), b(rng.engine()()), c(rng.uniform(0, 5));
    a <<= rng.uniform(0, 70);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + Natural(0), a);
    EXPECT_EQ(a * Natural(1), a);
    EXPECT_EQ(a * Natural(0), Natural(0));
  }
}

TEST(Natural, DecimalRoundTrip) {
  const std::string big = "340282366920938463463374607431768211457";
  EXPECT_EQ(Natural::from_string(big).str(), big);
  EXPECT_EQ(Natural::from_string("0"), Natural(0));
  EXPECT_THROW(Natural::from_string(""), std::invalid_argument);
  EXPECT_THROW(Natural::from_string("-3"), std::invalid_argument);
  EXPECT_THROW(Natural::from_string("1e9"), std::invalid_argument);
}

TEST(Carrier, InCarrierProjectsForBool) {
  EXPECT_EQ(in_carrier(Natural(7), Carrier::Nat), Natural(7));
  EXPECT_EQ(in_carrier(Natural(7), Carrier::Bool), Natural(1));
  EXPECT_EQ(in_carrier(Natural(0), Carrier::Bool), Natural(0));
}

}  // namespace
}  // namespace zhsat
