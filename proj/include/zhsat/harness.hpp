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

// Randomized soundness check per rule: plant the left-hand pattern in a
// random closed context, rewrite, and compare reference contractions.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "zhsat/contract.hpp"
#include "zhsat/json_io.hpp"
#include "zhsat/random.hpp"
#include "zhsat/rewrite.hpp"

namespace zhsat {

struct VerifyReport {
  RuleId rule = RuleId::FuseZ;
  std::size_t trials = 0;
  std::size_t nat_failures = 0;
  std::size_t bool_failures = 0;
  /// Up to kMaxCounterexamples failing trials, each with the diagram before
  /// the rewrite, the step and both values per carrier.
  std::vector<Json> counterexamples;

  static constexpr std::size_t kMaxCounterexamples = 3;

  /// Nat rules must show no discrepancy at all. Bool-only rules must show
  /// none over B and at least one over N, which is what makes them Bool-only.
  bool passed() const {
    if (rule_validity(rule) == Validity::Nat) return nat_failures == 0 && bool_failures == 0;
    return bool_failures == 0 && nat_failures > 0;
  }
};

namespace detail {

/// Builds one planted instance. Pattern nodes are created by the rule's
/// planter; every wire leaving the pattern ends on a context node, so the
/// planted site keeps matching.
class Planter {
 public:
  explicit Planter(Rng& rng) : rng_(rng) {}

  Diagram d;

  NodeId z() { return d.add_node(NodeKind::z()); }
  NodeId x() { return d.add_node(NodeKind::x(rng_.coin())); }
  NodeId h0() { return d.add_node(NodeKind::h(Natural(0))); }
  NodeId h_any() { return d.add_node(NodeKind::h(Natural(rng_.uniform(0, 3)))); }

  /// Edge with random orientation; the flag is semantic, the orientation not.
  EdgeId wire(NodeId a, NodeId b, bool negated) {
    return rng_.coin() ? d.add_edge(a, b, negated) : d.add_edge(b, a, negated);
  }
  EdgeId wire(NodeId a, NodeId b) { return wire(a, b, rng_.coin()); }

  /// A context node: reuses one half of the time.
  NodeId context() {
    if (!ctx_.empty() && rng_.coin()) return ctx_[rng_.index(ctx_.size())];
    NodeId n;
    switch (rng_.uniform(0, 2)) {
      case 0: n = z(); break;
      case 1: n = h_any(); break;
      default: n = x(); break;
    }
    ctx_.push_back(n);
    return n;
  }
  /// A context Z-spider, for legs that the rule needs to end on Z-spiders.
  NodeId context_z() {
    NodeId n = z();
    ctx_.push_back(n);
    return n;
  }

  void legs(NodeId p, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t k = rng_.uniform(lo, hi); k > 0; --k) wire(p, context());
  }
  void loops(NodeId p, std::uint64_t hi) {
    for (std::uint64_t k = rng_.uniform(0, hi); k > 0; --k) d.add_edge(p, p, rng_.coin());
  }
  /// A few extra wires inside the context.
  void close() {
    if (ctx_.empty()) {
      context();
      context();
    }
    for (std::uint64_t k = rng_.uniform(0, 2); k > 0; --k) {
      NodeId a = ctx_[rng_.index(ctx_.size())];
      NodeId b = ctx_[rng_.index(ctx_.size())];
      wire(a, b);
    }
  }

  Rng& rng() { return rng_; }

 private:
  Rng& rng_;
  std::vector<NodeId> ctx_;
};

inline Site plant(Planter& p, RuleId rule) {
  Rng& rng = p.rng();
  switch (rule) {
    case RuleId::FuseZ:
    case RuleId::FuseX: {
      bool zz = rule == RuleId::FuseZ;
      NodeId a = zz ? p.z() : p.x();
      NodeId b = zz ? p.z() : p.x();
      p.wire(a, b, zz ? false : rng.coin());
      for (std::uint64_t k = rng.uniform(0, 1); k > 0; --k) p.wire(a, b);
      p.loops(a, 1);
      p.legs(a, 0, 2);
      p.legs(b, 0, 2);
      return Site{{a, b}, {}};
    }
    case RuleId::NotCopy:
    case RuleId::DoubleNegation: {
      NodeId s = rule == RuleId::NotCopy ? p.z() : p.x();
      EdgeId e = p.wire(s, p.context(), true);
      p.legs(s, 0, 3);
      p.loops(s, 1);
      return Site{{s}, {e}};
    }
    case RuleId::LoopZero:
    case RuleId::LoopTwo: {
      NodeId s = rng.coin() ? p.z() : p.x();
      EdgeId e = p.d.add_edge(s, s, rule == RuleId::LoopZero);
      p.loops(s, 1);
      p.legs(s, 0, 3);
      return Site{{s}, {e}};
    }
    case RuleId::BialgebraZX: {
      NodeId z = p.z(), x = p.x();
      EdgeId e = p.wire(z, x, false);
      p.legs(z, 0, 3);
      p.legs(x, 0, 3);
      return Site{{z, x}, {e}};
    }
    case RuleId::Hopf: {
      NodeId z = p.z(), x = p.x();
      EdgeId e1 = p.wire(z, x);
      EdgeId e2 = p.wire(z, x);
      for (std::uint64_t k = rng.uniform(0, 1); k > 0; --k) p.wire(z, x);
      p.legs(z, 0, 2);
      p.legs(x, 0, 2);
      return Site{{z, x}, {e1, e2}};
    }
    case RuleId::DedupParallelH0:
    case RuleId::MergeComplementaryH0: {
      std::vector<NodeId> ys;
      for (std::uint64_t k = rng.uniform(1, 3); k > 0; --k) {
        NodeId y = p.z();
        p.legs(y, 0, 2);
        ys.push_back(y);
      }
      std::vector<bool> flags;
      for (std::size_t i = 0; i < ys.size(); ++i) flags.push_back(rng.coin());
      NodeId b1 = p.h0(), b2 = p.h0();
      for (std::size_t i = 0; i < ys.size(); ++i) {
        p.wire(ys[i], b1, flags[i]);
        bool f2 = flags[i] != (rule == RuleId::MergeComplementaryH0 && i == 0);
        p.wire(ys[i], b2, f2);
      }
      return Site{{b1, b2}, {}};
    }
    case RuleId::TautologyH0:
    case RuleId::MergeDuplicateLiteral: {
      NodeId box = p.h_any();
      NodeId y = p.z();
      p.legs(y, 0, 2);
      bool f = rng.coin();
      EdgeId e1 = p.wire(y, box, f);
      EdgeId e2 = p.wire(y, box, rule == RuleId::TautologyH0 ? !f : f);
      p.legs(box, 0, 2);
      return Site{{box}, {e1, e2}};
    }
    case RuleId::UnitPropagate: {
      NodeId z = p.z();
      NodeId unit = rng.coin() ? p.h0() : p.x();
      p.wire(unit, z);
      p.legs(z, 0, 3);
      p.loops(z, 1);
      return Site{{unit}, {}};
    }
    case RuleId::EmptyH0: {
      NodeId n = p.h0();
      return Site{{n}, {}};
    }
    case RuleId::ScalarizeArity0: {
      NodeId n;
      switch (rng.uniform(0, 2)) {
        case 0: n = p.z(); break;
        case 1: n = p.h_any(); break;
        default: n = p.x(); break;
      }
      return Site{{n}, {}};
    }
    case RuleId::ElimVarSharp2Sat:
    case RuleId::ElimVar2Sat:
    case RuleId::ElimVarSharpSat:
    case RuleId::ElimVarSat: {
      bool two = rule == RuleId::ElimVarSharp2Sat || rule == RuleId::ElimVar2Sat;
      NodeId z = p.z();
      std::uint64_t m = rng.uniform(0, 3), n = rng.uniform(0, 3);
      for (std::uint64_t i = 0; i < m + n; ++i) {
        NodeId b = p.h0();
        p.wire(z, b, i >= m);
        std::uint64_t outer = two ? 1 : rng.uniform(0, 2);
        for (std::uint64_t k = 0; k < outer; ++k) {
          // Outer legs mostly end on Z-spiders, as in CNF diagrams, but
          // other kinds exercise the copy-spider path.
          NodeId o = rng.chance(3, 4) ? p.context_z() : p.context();
          p.wire(b, o);
        }
      }
      return Site{{z}, {}};
    }
  }
  return {};
}

}  // namespace detail

/// Runs `trials` planted instances of `rule` with at most `wire_limit` wires
/// before the rewrite. Deterministic in `seed`.
inline VerifyReport verify_rule(RuleId rule, std::size_t trials, std::size_t wire_limit,
                                std::uint64_t seed = 1) {
  VerifyReport rep;
  rep.rule = rule;
  Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(rule) + 1)));
  while (rep.trials < trials) {
    detail::Planter p(rng);
    Site site = detail::plant(p, rule);
    p.close();
    if (p.d.edge_count() > wire_limit) continue;  // redraw, not a trial
    ++rep.trials;
    const Diagram before = p.d;
    Diagram after = p.d;
    RewriteStep step = apply(after, rule, site);
    const ValueTensor nat0 = contract(before, Carrier::Nat, kUnlimitedWires);
    const ValueTensor nat1 = contract(after, Carrier::Nat, kUnlimitedWires);
    const ValueTensor bool0 = contract(before, Carrier::Bool, kUnlimitedWires);
    const ValueTensor bool1 = contract(after, Carrier::Bool, kUnlimitedWires);
    bool nat_bad = !(nat0 == nat1);
    bool bool_bad = !(bool0 == bool1);
    rep.nat_failures += nat_bad;
    rep.bool_failures += bool_bad;
    // Counterexamples are kept for unexpected failures only: an N
    // discrepancy of a Bool-only rule is the expected outcome.
    bool unexpected = bool_bad || (nat_bad && rule_validity(rule) == Validity::Nat);
    if (unexpected && rep.counterexamples.size() < VerifyReport::kMaxCounterexamples) {
      rep.counterexamples.push_back(Json{{"trial", rep.trials - 1},
                                         {"diagram", to_json(before)},
                                         {"step", to_json(step)},
                                         {"nat_before", nat0.scalar().str()},
                                         {"nat_after", nat1.scalar().str()},
                                         {"bool_before", bool0.scalar().str()},
                                         {"bool_after", bool1.scalar().str()}});
    }
  }
  return rep;
}

}  // namespace zhsat
