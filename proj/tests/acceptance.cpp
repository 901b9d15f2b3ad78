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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// fails. All comparisons are exact; the only tolerances are wall-clock
// limits, fixed below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "zhsat/zhsat.hpp"

namespace zhsat {
namespace {

constexpr double kScalingSeconds = 10.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool ok = true;
  std::string detail;
};

// Records the first few failures of a criterion.
class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok_ = false;
    if (++failures_ <= 3) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  Result done(const std::string& summary) const {
    std::string s = summary;
    if (!ok_) s += " | " + std::to_string(failures_) + " failure(s): " + notes_.str();
    return {ok_, s};
  }

 private:
  bool ok_ = true;
  std::size_t failures_ = 0;
  std::ostringstream notes_;
};

// 1. Per-rule randomized soundness.
Result rule_soundness() {
  Check c;
  std::size_t nat_rules = 0, bool_rules = 0;
  for (const RuleInfo& r : kRules) {
    VerifyReport rep = verify_rule(r.id, 500, 12, 1);
    c.expect(rep.trials == 500, std::string(r.name) + " ran too few trials");
    if (r.validity == Validity::Nat) {
      ++nat_rules;
      c.expect(rep.nat_failures == 0, std::string(r.name) + " has " +
                                          std::to_string(rep.nat_failures) + " N discrepancies");
    } else {
      ++bool_rules;
      c.expect(rep.bool_failures == 0, std::string(r.name) + " has B discrepancies");
      c.expect(rep.nat_failures > 0, std::string(r.name) + " found no N counterexample");
    }
  }
  return c.done(std::to_string(nat_rules) + " N-valid and " + std::to_string(bool_rules) +
                " B-only rules, 500 trials each, <= 12 wires");
}

// 2. Counting elimination on binary clauses as a tensor identity. Rows are
// indexed by the plain group's outer bits, columns by the negated group's.
Result elimination_identity() {
  Check c;
  for (std::size_t m = 0; m <= 3; ++m) {
    for (std::size_t n = 0; n <= 3; ++n) {
      NodeId z;
      Diagram lhs = testing::elimination_lhs(m, n, &z);
      Diagram rhs = lhs;
      apply_elim_var_sharp2sat(rhs, z);
      ValueTensor a = contract(lhs, Carrier::Nat, kUnlimitedWires);
      ValueTensor b = contract(rhs, Carrier::Nat, kUnlimitedWires);
      const std::string tag = "m=" + std::to_string(m) + ",n=" + std::to_string(n);
      c.expect(a == b, tag + " sides differ");
      const std::size_t cols = std::size_t{1} << n;
      for (std::size_t idx = 0; idx < a.coefficients.size(); ++idx) {
        std::size_t row = idx / cols, col = idx % cols;
        Natural want = row == 0 && col == 0 ? 2 : (row == 0 || col == 0 ? 1 : 0);
        c.expect(a.coefficients[idx] == want, tag + " wrong entry " + std::to_string(idx));
      }
    }
  }
  return c.done("m,n in 0..3: both sides equal, 2 at the corner, 1 on first row/column, 0 else");
}

// 3. Encoding soundness.
Result encoding_soundness() {
  Check c;
  Rng rng(3001);
  for (int t = 0; t < 1000; ++t) {
    auto n = static_cast<std::uint32_t>(rng.uniform(1, 12));
    Formula f = random_mixed(rng, n, rng.uniform(0, 20), 3);
    Natural got = contract_scalar(encode(f), Carrier::Nat, kUnlimitedWires);
    c.expect(got == brute_force_count(f), "instance " + std::to_string(t));
  }
  return c.done("1000 mixed formulas, n <= 12, m <= 20");
}

// Makes every clause true under a hidden random assignment, so that a large
// instance cannot be settled by an early contradiction.
Formula planted(Formula f, Rng& rng) {
  std::vector<bool> hidden(f.num_vars + 1);
  for (std::size_t v = 1; v <= f.num_vars; ++v) hidden[v] = rng.coin();
  for (Clause& c : f.clauses) {
    bool any = false, parity = false;
    for (const Literal& l : c.literals) {
      bool val = hidden[l.variable] != l.negated;
      any = any || val;
      parity = parity != val;
    }
    bool sat = c.kind == ClauseKind::Xor ? parity : any;
    if (!sat) c.literals[0].negated = !c.literals[0].negated;
  }
  return f;
}

// 4. XORSAT counting and scaling.
Result xorsat() {
  Check c;
  Rng rng(4001);
  for (int t = 0; t < 200; ++t) {
    auto n = static_cast<std::uint32_t>(rng.uniform(1, 14));
    Formula f = random_xor(rng, n, rng.uniform(0, 18), 4);
    StrategyReport r = count_xorsat(f);
    const std::string tag = "instance " + std::to_string(t);
    c.expect(r.answer == brute_force_count(f), tag + " differs from brute force");
    c.expect(r.answer == gauss_count_xor(f), tag + " differs from elimination");
    c.expect(r.answer.is_zero() || r.answer.log2_exact().has_value(), tag + " not 0 or 2^c");
  }
  // One unconstrained draw and one planted draw, so that the full
  // elimination runs at least once.
  StrategyOptions o;
  o.record_trace = false;
  double worst = 0;
  std::size_t peak_edges = 0;
  std::string counts;
  for (int k = 0; k < 2; ++k) {
    Formula big = random_xor(rng, 1000, 1000, 3);
    if (k == 1) big = planted(std::move(big), rng);
    auto t0 = Clock::now();
    StrategyReport r = count_xorsat(big, o);
    double secs = seconds_since(t0);
    worst = std::max(worst, secs);
    peak_edges = std::max(peak_edges, r.peak_edges);
    const std::string tag = k == 0 ? "random n=1000" : "planted n=1000";
    c.expect(secs < kScalingSeconds, tag + " took " + std::to_string(secs) + " s");
    c.expect(r.edge_bound_held, tag + " edge count exceeded node count squared");
    c.expect(r.answer == gauss_count_xor(big), tag + " count differs from elimination");
    auto e = r.answer.log2_exact();
    counts += (k ? ", " : "") + (e ? "2^" + std::to_string(*e) : r.answer.str());
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "200 instances n <= 14; n=m=1000 random and planted (counts %s) in <= %.2f s, "
                "peak edges %zu",
                counts.c_str(), worst, peak_edges);
  return c.done(buf);
}

// 5. 2SAT decision.
Result twosat() {
  Check c;
  Rng rng(5001);
  for (int t = 0; t < 500; ++t) {
    auto n = static_cast<std::uint32_t>(rng.uniform(1, 14));
    Formula f = random_2sat(rng, n, rng.uniform(0, 3 * n));
    StrategyReport r = decide_2sat(f);
    const std::string tag = "instance " + std::to_string(t);
    c.expect(r.satisfiable() == two_sat_oracle(f).value, tag + " differs from SCC oracle");
    c.expect(r.satisfiable() == project(brute_force_count(f)).value,
             tag + " differs from brute force");
    c.expect(r.eliminations == f.num_vars, tag + " eliminated " +
                                               std::to_string(r.eliminations) + " variables");
    c.expect(r.arity_bound_held, tag + " spider arity bound broken");
  }
  StrategyOptions o;
  o.record_trace = false;
  double worst = 0;
  std::string answers;
  for (int k = 0; k < 2; ++k) {
    Formula big = random_2sat(rng, 2000, 3000);
    if (k == 1) big = planted(std::move(big), rng);
    auto t0 = Clock::now();
    StrategyReport r = decide_2sat(big, o);
    double secs = seconds_since(t0);
    worst = std::max(worst, secs);
    const std::string tag = k == 0 ? "random n=2000" : "planted n=2000";
    c.expect(secs < kScalingSeconds, tag + " took " + std::to_string(secs) + " s");
    c.expect(r.satisfiable() == two_sat_oracle(big).value, tag + " differs from SCC oracle");
    c.expect(r.eliminations == big.num_vars, tag + " eliminations");
    c.expect(r.arity_bound_held, tag + " spider arity bound broken");
    answers += (k ? ", " : "") + std::string(r.satisfiable() ? "SAT" : "UNSAT");
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "500 instances n <= 14; n=2000, m=3000 random and planted (%s) in <= %.2f s",
                answers.c_str(), worst);
  return c.done(buf);
}

// Nested 3SAT chain: variable v >= 3 brings one clause over v and two
// earlier variables, so the formula for n is a prefix of the one for n + 1.
std::vector<Clause> nested_chain(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Clause> cl;
  for (std::uint32_t v = 3; v <= 16; ++v) {
    auto lits = random_literals(rng, v - 1, 2);
    lits.push_back(Literal{v, rng.coin()});
    cl.push_back(or_clause(lits));
  }
  return cl;
}

// 6. General counting, plus the box-growth report.
Result general_counting() {
  Check c;
  Rng rng(6001);
  for (int t = 0; t < 200; ++t) {
    auto n = static_cast<std::uint32_t>(rng.uniform(3, 12));
    Formula f = random_kcnf(rng, n, rng.uniform(0, 30), 3);
    Natural truth = brute_force_count(f);
    const std::string tag = "instance " + std::to_string(t);
    for (std::size_t cap : {std::size_t{2}, std::size_t{4}, std::size_t{16}, kUnlimitedArity}) {
      StrategyOptions o;
      o.max_box_arity = cap;
      o.record_trace = false;
      c.expect(count_sharpsat(f, o).answer == truth, tag + " cap " + std::to_string(cap));
    }
    c.expect(decide_sat(f).satisfiable() == project(truth).value, tag + " decision");
  }

  constexpr int kChains = 8;
  std::vector<std::vector<Clause>> chains;
  for (int s = 0; s < kChains; ++s) chains.push_back(nested_chain(9000 + s));
  StrategyOptions o;
  o.max_box_arity = kUnlimitedArity;
  o.max_box_count = 0;
  o.allow_fallback = false;
  o.record_trace = false;
  std::ostringstream peaks;
  std::size_t prev = 0;
  std::vector<std::size_t> last(kChains, 0);
  std::vector<bool> monotone(kChains, true);
  for (std::uint32_t n = 10; n <= 16; ++n) {
    std::size_t sum = 0;
    for (int s = 0; s < kChains; ++s) {
      Formula f{n, {chains[s].begin(), chains[s].begin() + (n - 2)}};
      StrategyReport r = sharpsat_rewrite_only(f, nullptr, o);
      if (r.peak_box_count < last[s]) monotone[s] = false;
      last[s] = r.peak_box_count;
      sum += r.peak_box_count;
    }
    peaks << (n == 10 ? "" : " ") << n << ":" << sum;
    c.expect(sum >= prev, "summed peak box count fell at n=" + std::to_string(n));
    prev = sum;
  }
  const auto chains_monotone = std::count(monotone.begin(), monotone.end(), true);
  return c.done("200 instances n <= 12, m <= 30, caps 2/4/16/none; peak boxes summed over " +
                std::to_string(kChains) + " nested chains " + peaks.str() + " (" +
                std::to_string(chains_monotone) + "/" + std::to_string(kChains) +
                " chains monotone on their own)");
}

// 7. The six-variable example.
Result worked_example() {
  Check c;
  Formula f = testing::example6();
  Diagram d = encode(f);
  Natural brute = brute_force_count(f);
  Natural contracted = contract_scalar(d, Carrier::Nat, kUnlimitedWires);
  Natural rewritten = count_sharpsat(f).answer;
  c.expect(brute == contracted && contracted == rewritten, "counts disagree");
  c.expect(d.count(NodeType::ZSpider) == 6, "Z-spider count");
  std::size_t h0 = 0;
  for (NodeId n : d.node_ids()) h0 += d.kind(n).is_h0();
  c.expect(h0 == 4 && d.count(NodeType::HBox) == 4, "H(0) count");
  c.expect(d.edge_count() == 12, "edge count");
  return c.done("count " + brute.str() + " by brute force, contraction and rewriting; 6 Z, " +
                "4 H(0), 12 edges");
}

// 8. Normal form round trip.
Result normal_form() {
  Check c;
  Rng rng(8001);
  for (int t = 0; t < 200; ++t) {
    ValueTensor want = random_tensor(rng, rng.uniform(0, 3), 3);
    ValueTensor got = contract(build_normal_form(want), Carrier::Nat, kUnlimitedWires);
    c.expect(got == want, "tensor " + std::to_string(t));
  }
  return c.done("200 tensors, arity <= 3, entries <= 3");
}

}  // namespace
}  // namespace zhsat

int main() {
  using zhsat::Result;
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"rule soundness", zhsat::rule_soundness},
      {"elimination identity", zhsat::elimination_identity},
      {"encoding soundness", zhsat::encoding_soundness},
      {"xorsat", zhsat::xorsat},
      {"2sat", zhsat::twosat},
      {"general counting", zhsat::general_counting},
      {"worked example", zhsat::worked_example},
      {"normal form", zhsat::normal_form},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = zhsat::Clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", r.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first, r.detail.c_str(), zhsat::seconds_since(t0));
    std::fflush(stdout);
    failed += !r.ok;
  }
  return failed == 0 ? 0 : 1;
}
