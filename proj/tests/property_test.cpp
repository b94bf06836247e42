// Copyright 2026 The Pathweaver Authors
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

#include "support/properties.hpp"

namespace pw = pathweaver;

namespace {

void expect_clean(const pw::testing::PropertyReport& r) {
  EXPECT_GT(r.cases, 0u);
  for (const auto& c : r.counterexamples) ADD_FAILURE() << c;
}

}  // namespace

TEST(Generator, ProducesCleanSmallModels) {
  pw::testing::RandomModelGenerator gen(11);
  for (int k = 0; k < 200; ++k) {
    auto m = gen.next();
    EXPECT_TRUE(pw::validate_model(m).empty());
    EXPECT_LE(pw::testing::option_count(m), 12u);
  }
}

TEST(Properties, FixpointIdempotentMonotoneConfluent) { expect_clean(pw::testing::check_fixpoint_properties(300, 101)); }

TEST(Properties, PropagationAgreesWithOracle) { expect_clean(pw::testing::check_oracle_agreement(150, 202)); }

TEST(Properties, SerializationRoundTrips) { expect_clean(pw::testing::check_round_trip(200, 303)); }
