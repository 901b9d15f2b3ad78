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

#include "support.hpp"
#include "zhsat/oracles.hpp"
#include "zhsat/random.hpp"
#include "zhsat/strategy.hpp"

namespace zhsat {
namespace {

using testing::example6;

bool is_power_of_two(const Natural& n) { return n.log2_exact().has_value(); }

// The recorded trace, replayed on the encoding and contracted, gives the
// strategy's answer.
void expect_replay_agrees(const Formula& f, const StrategyReport& r) {
  Diagram d = replay(encode(f), r.steps);
  Natural v = contract_scalar(d, r.carrier, kUnlimitedWires);
  if (r.carrier == Carrier::Bool) v = Natural(v.is_zero() ? 0 : 1);
  EXPECT_EQ(v, r.answer) << r.strategy;
  EXPECT_EQ(r.steps.size(), r.step_count);
}

TEST(Xorsat, Examples) {
  // x1 + x2 = 1, x2 + x3 = 1: 2 models.
  Formula f{3, {xor_clause({pos(1), pos(2)}), xor_clause({pos(2), pos(3)})}};
  StrategyReport r = count_xorsat(f);
  EXPECT_EQ(r.answer, Natural(2));
  EXPECT_FALSE(r.fallback_used);
  expect_replay_agrees(f, r);
  // Contradiction x1 = 1 and x1 = 0.
  Formula g{1, {xor_clause({pos(1)}), xor_clause({neg(1)})}};
  EXPECT_EQ(count_xorsat(g).answer, Natural(0));
  // No clauses: all 2^n assignments.
  EXPECT_EQ(count_xorsat(Formula{5, {}}).answer, Natural(32));
  EXPECT_THROW(count_xorsat(example6()), PreconditionError);
  // XOR variant of the six-variable example: four independent equations.
  Formula x6 = example6();
  for (Clause& cl : x6.clauses) cl.kind = ClauseKind::Xor;
  EXPECT_EQ(gauss_count_xor(x6), Natural(4));
  EXPECT_EQ(count_xorsat(x6).answer, Natural(4));
}

TEST(Xorsat, RandomAgreesWithGauss) {
  Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 10));
    Formula f = random_xor(rng, n, rng.uniform(0, 12), 4);
    StrategyReport r = count_xorsat(f);
    EXPECT_EQ(r.answer, gauss_count_xor(f));
    EXPECT_TRUE(r.answer.is_zero() || is_power_of_two(r.answer));
    EXPECT_TRUE(r.edge_bound_held);
    expect_replay_agrees(f, r);
  }
}

TEST(TwoSat, Examples) {
  EXPECT_EQ(decide_2sat(Formula{2, {or_clause({pos(1), pos(2)}), or_clause({neg(1), pos(2)})}})
                .answer,
            Natural(1));
  Formula sat{3, {or_clause({pos(1), pos(2)}), or_clause({neg(1), pos(3)})}};
  StrategyReport r = decide_2sat(sat);
  EXPECT_EQ(r.answer, Natural(1));
  EXPECT_EQ(r.eliminations, 3u);
  EXPECT_TRUE(r.arity_bound_held);
  EXPECT_LE(r.max_resolvent_arity, 2u);
  expect_replay_agrees(sat, r);

  Formula unsat{2, {or_clause({pos(1), pos(2)}), or_clause({pos(1), neg(2)}),
                    or_clause({neg(1), pos(2)}), or_clause({neg(1), neg(2)})}};
  EXPECT_EQ(decide_2sat(unsat).answer, Natural(0));
  EXPECT_THROW(decide_2sat(example6()), PreconditionError);
}

TEST(TwoSat, RandomAgreesWithOracle) {
  Rng rng(22);
  for (int t = 0; t < 150; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 14));
    Formula f = random_2sat(rng, n, rng.uniform(0, 3 * n));
    StrategyReport r = decide_2sat(f);
    EXPECT_EQ(r.satisfiable(), two_sat_oracle(f).value);
    EXPECT_EQ(r.eliminations, f.num_vars);
    EXPECT_TRUE(r.arity_bound_held);
    EXPECT_FALSE(r.fallback_used);
  }
}

TEST(SharpSat, Examples) {
  EXPECT_EQ(count_sharpsat(Formula{2, {or_clause({pos(1), pos(2)})}}).answer, Natural(3));
  StrategyReport r = count_sharpsat(example6());
  EXPECT_EQ(r.answer, Natural(37));
  expect_replay_agrees(example6(), r);
}

TEST(SharpSat, RandomAgreesWithBruteForceUnderEveryCap) {
  Rng rng(23);
  for (int t = 0; t < 60; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 9));
    Formula f = random_kcnf(rng, n, rng.uniform(0, 20), std::min<std::size_t>(3, n));
    Natural truth = brute_force_count(f);
    for (std::size_t cap : {std::size_t{2}, std::size_t{4}, std::size_t{16}, kUnlimitedArity}) {
      StrategyOptions o;
      o.max_box_arity = cap;
      StrategyReport r = count_sharpsat(f, o);
      EXPECT_EQ(r.answer, truth) << "cap " << cap;
      expect_replay_agrees(f, r);
    }
  }
}

TEST(SharpSat, TwoSatNeverHitsTheArityCap) {
  // Resolvents of binary clauses are binary, so cap 2 never stops the run.
  // H(2) corrections do block later eliminations; the small residual is
  // contracted within the wire limit.
  Rng rng(24);
  for (int t = 0; t < 60; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 8));
    Formula f = random_2sat(rng, n, rng.uniform(0, 2 * n));
    StrategyOptions o;
    o.max_box_arity = 2;
    o.allow_fallback = false;
    StrategyReport r;
    ASSERT_NO_THROW(r = count_sharpsat(f, o)) << render_dimacs(f);
    EXPECT_EQ(r.answer, brute_force_count(f));
    EXPECT_NE(r.stop_reason, "cap");
    EXPECT_LE(r.max_resolvent_arity, 2u);
  }
}

TEST(SharpSat, CapWithoutFallbackThrows) {
  Formula f{6, {or_clause({pos(1), pos(2), pos(3)}), or_clause({neg(1), pos(4), pos(5)}),
                or_clause({neg(2), neg(4), pos(6)}), or_clause({neg(3), neg(5), neg(6)})}};
  StrategyOptions o;
  o.max_box_arity = 2;
  o.allow_fallback = false;
  EXPECT_THROW(count_sharpsat(f, o), ResourceLimitError);
  o.allow_fallback = true;
  StrategyReport r = count_sharpsat(f, o);
  EXPECT_EQ(r.stop_reason, "cap");
  EXPECT_TRUE(r.fallback_used);
  EXPECT_EQ(r.answer, brute_force_count(f));
}

TEST(SharpSat, BoxBudget) {
  Rng rng(25);
  Formula f = random_kcnf(rng, 12, 40, 3);
  StrategyOptions o;
  o.max_box_arity = kUnlimitedArity;
  o.max_box_count = 1;
  StrategyReport r = count_sharpsat(f, o);
  EXPECT_EQ(r.stop_reason, "budget");
  EXPECT_EQ(r.answer, brute_force_count(f));
  o.allow_fallback = false;
  EXPECT_THROW(count_sharpsat(f, o), ResourceLimitError);
}

TEST(SharpSat, RewriteOnlyReturnsEquivalentResidual) {
  Rng rng(26);
  for (int t = 0; t < 30; ++t) {
    Formula f = random_kcnf(rng, 8, rng.uniform(0, 16), 3);
    Diagram residual;
    StrategyReport r = sharpsat_rewrite_only(f, &residual, {});
    EXPECT_EQ(testing::nat_value(residual), brute_force_count(f));
    EXPECT_FALSE(r.fallback_used);
  }
}

TEST(DecideSat, RandomAgreesWithBruteForce) {
  Rng rng(27);
  for (int t = 0; t < 100; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 10));
    Formula f = random_kcnf(rng, n, rng.uniform(0, 5 * n), std::min<std::size_t>(3, n));
    StrategyReport r = decide_sat(f);
    EXPECT_EQ(r.satisfiable(), !brute_force_count(f).is_zero());
    EXPECT_EQ(r.carrier, Carrier::Bool);
    expect_replay_agrees(f, r);
  }
}

TEST(DecideSat, CapIsOnlyReported) {
  Rng rng(30);
  Formula f = random_kcnf(rng, 12, 50, 3);
  StrategyOptions o;
  o.max_box_arity = 2;
  StrategyReport r = decide_sat(f, o);
  EXPECT_TRUE(r.cap_exceeded);
  EXPECT_GT(r.max_resolvent_arity, 2u);
  EXPECT_FALSE(r.fallback_used && r.stop_reason == "cap");
  EXPECT_EQ(r.satisfiable(), !brute_force_count(f).is_zero());
}

TEST(Mixed, RandomAgreesWithBruteForce) {
  Rng rng(28);
  for (int t = 0; t < 100; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 9));
    Formula f = random_mixed(rng, n, rng.uniform(0, 14), 3);
    StrategyReport r = count_mixed(f);
    EXPECT_EQ(r.answer, brute_force_count(f)) << render_dimacs(f);
    expect_replay_agrees(f, r);
  }
}

TEST(Brute, RespectsWireLimit) {
  StrategyOptions o;
  EXPECT_EQ(solve_brute(example6(), Mode::Count, o).answer, Natural(37));
  EXPECT_EQ(solve_brute(example6(), Mode::Decide, o).answer, Natural(1));
  o.wire_limit = 4;
  EXPECT_THROW(solve_brute(example6(), Mode::Count, o), ResourceLimitError);
}

TEST(Auto, Routing) {
  Formula x{2, {xor_clause({pos(1), pos(2)})}};
  Formula two{2, {or_clause({pos(1), pos(2)})}};
  Formula mixed{3, {xor_clause({pos(1), pos(2)}), or_clause({pos(1), pos(3)})}};
  EXPECT_EQ(solve_auto(x, Mode::Count).strategy, "xorsat");
  EXPECT_EQ(solve_auto(x, Mode::Decide).answer, Natural(1));
  EXPECT_EQ(solve_auto(two, Mode::Decide).strategy, "2sat");
  StrategyReport c = solve_auto(two, Mode::Count);
  EXPECT_EQ(c.strategy, "sharpsat");
  EXPECT_EQ(c.answer, Natural(3));
  EXPECT_EQ(solve_auto(example6(), Mode::Decide).strategy, "sat");
  EXPECT_EQ(solve_auto(example6(), Mode::Count).answer, Natural(37));
  StrategyReport m = solve_auto(mixed, Mode::Count);
  EXPECT_EQ(m.strategy, "mixed");
  EXPECT_EQ(m.answer, Natural(3));
  EXPECT_EQ(solve_auto(mixed, Mode::Decide).carrier, Carrier::Bool);
}

TEST(Auto, CountAndDecideAgree) {
  Rng rng(29);
  for (int t = 0; t < 100; ++t) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.uniform(1, 8));
    Formula f = t % 2 ? random_mixed(rng, n, rng.uniform(0, 12), 3)
                      : random_kcnf(rng, n, rng.uniform(0, 4 * n), std::min<std::size_t>(2, n));
    EXPECT_EQ(!solve_auto(f, Mode::Count).answer.is_zero(), solve_auto(f, Mode::Decide).satisfiable());
  }
}

TEST(Auto, RecordTraceOffKeepsStepCount) {
  StrategyOptions o;
  o.record_trace = false;
  StrategyReport r = count_sharpsat(example6(), o);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.step_count, count_sharpsat(example6()).step_count);
}

}  // namespace
}  // namespace zhsat
