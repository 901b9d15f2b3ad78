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

// End-to-end solvers. Each one encodes the formula, rewrites until no wires
// are left (or it gets stuck) and reads the answer off the scalar.
//
// Scheduling is deterministic: every choice breaks ties by lowest node id.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zhsat/cnf.hpp"
#include "zhsat/contract.hpp"
#include "zhsat/diagram.hpp"
#include "zhsat/errors.hpp"
#include "zhsat/rewrite.hpp"
#include "zhsat/semiring.hpp"

namespace zhsat {

enum class Mode : std::uint8_t { Count, Decide };

inline Carrier carrier_of(Mode m) { return m == Mode::Count ? Carrier::Nat : Carrier::Bool; }

inline constexpr std::size_t kUnlimitedArity = static_cast<std::size_t>(-1);

struct StrategyOptions {
  /// Largest resolvent a counting elimination may create. In decide_sat it
  /// is only reported.
  std::size_t max_box_arity = 16;
  /// Counting strategies stop rewriting before an elimination that would
  /// leave more H-boxes than this live (before tidying) and contract the
  /// residual instead. 0 disables the budget.
  std::size_t max_box_count = 1024;
  /// Largest residual the counting strategies contract when fallback is off.
  std::size_t wire_limit = kDefaultWireLimit;
  /// Contract a stuck or capped residual regardless of its size.
  bool allow_fallback = true;
  /// Keep every RewriteStep. Off for large runs; step_count is kept anyway.
  bool record_trace = true;
};

struct StrategyReport {
  std::string strategy;
  Carrier carrier = Carrier::Nat;
  /// Exact count, or 0 / 1 for decisions.
  Natural answer;
  RewriteTrace steps;
  std::size_t step_count = 0;
  std::size_t peak_box_count = 0;
  std::size_t peak_box_arity = 0;
  /// The answer needed a reference contraction of a non-empty residual.
  bool fallback_used = false;
  /// Why rewriting stopped short, if it did: "cap", "budget" or "stuck".
  std::string stop_reason;
  /// Wires left when rewriting stopped.
  std::size_t residual_wires = 0;

  /// Variable spiders removed (by elimination, unit propagation or
  /// scalarization).
  std::size_t eliminations = 0;
  /// Largest H-box arity created by an elimination rule, or refused by the
  /// arity cap.
  std::size_t max_resolvent_arity = 0;
  /// All ZSpider arities stayed within 2 x (remaining variables) whenever
  /// an elimination was chosen. Checked by decide_2sat only.
  bool arity_bound_held = true;
  /// edges <= nodes^2 after every XOR elimination step.
  bool edge_bound_held = true;
  std::size_t peak_edges = 0;
  /// decide_sat: some resolvent exceeded max_box_arity.
  bool cap_exceeded = false;

  bool satisfiable() const { return !answer.is_zero(); }
};

namespace detail {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t x : v) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Owns the diagram of one solver run and records every step.
class Engine {
 public:
  Engine(Diagram d, std::size_t num_vars, const StrategyOptions& opts, StrategyReport& rep)
      : d_(std::move(d)), num_vars_(num_vars), opts_(opts), rep_(rep) {
    rep_.peak_box_count = d_.count(NodeType::HBox);
    for (NodeId n : d_.node_ids())
      if (d_.kind(n).is_h()) rep_.peak_box_arity = std::max(rep_.peak_box_arity, d_.arity(n));
    rep_.peak_edges = d_.edge_count();
  }

  Diagram& d() { return d_; }
  const StrategyOptions& opts() const { return opts_; }
  StrategyReport& report() { return rep_; }

  /// Applies a rule and returns the step. Nodes touched by it (the site,
  /// its neighborhood, the produced ids) are appended to `touched`.
  RewriteStep run(RuleId rule, const Site& site, std::vector<NodeId>* touched = nullptr,
                  int hops = 1) {
    if (touched) collect(site, hops, *touched);
    RewriteStep s = apply(d_, rule, site);
    // Variable spiders keep ids 0..num_vars-1 and never change kind.
    for (NodeId n : s.site.nodes)
      if (n < num_vars_ && !d_.has_node(n)) ++rep_.eliminations;
    note(s, touched);
    return s;
  }

  void note(const RewriteStep& s, std::vector<NodeId>* touched) {
    ++rep_.step_count;
    const bool elim = s.rule == RuleId::ElimVarSharp2Sat || s.rule == RuleId::ElimVar2Sat ||
                      s.rule == RuleId::ElimVarSharpSat || s.rule == RuleId::ElimVarSat;
    for (NodeId n : s.produced.nodes) {
      if (!d_.has_node(n)) continue;
      if (d_.kind(n).is_h()) {
        rep_.peak_box_arity = std::max(rep_.peak_box_arity, d_.arity(n));
        if (elim) rep_.max_resolvent_arity = std::max(rep_.max_resolvent_arity, d_.arity(n));
      }
      if (touched) touched->push_back(n);
    }
    if (touched) {
      for (EdgeId e : s.produced.edges) {
        if (!d_.has_edge(e)) continue;
        touched->push_back(d_.edge(e).u);
        touched->push_back(d_.edge(e).v);
      }
    }
    rep_.peak_box_count = std::max(rep_.peak_box_count, d_.count(NodeType::HBox));
    rep_.peak_edges = std::max(rep_.peak_edges, d_.edge_count());
    if (opts_.record_trace) rep_.steps.push_back(s);
  }

 private:
  void collect(const Site& site, int hops, std::vector<NodeId>& out) {
    std::size_t start = out.size();
    for (NodeId n : site.nodes)
      if (d_.has_node(n)) out.push_back(n);
    for (EdgeId e : site.edges) {
      if (!d_.has_edge(e)) continue;
      out.push_back(d_.edge(e).u);
      out.push_back(d_.edge(e).v);
    }
    for (int h = 0; h < hops; ++h) {
      std::size_t end = out.size();
      for (std::size_t i = start; i < end; ++i) {
        NodeId n = out[i];
        for (const HalfEdge& he : d_.incident(n)) out.push_back(d_.edge(he.edge).other(n));
      }
      start = end;
    }
  }

  Diagram d_;
  std::size_t num_vars_;
  const StrategyOptions& opts_;
  StrategyReport& rep_;
};

// ---------------------------------------------------------------------------
// Tidy: local clean-up to a fixpoint over a worklist of dirty nodes.

class Tidy {
 public:
  explicit Tidy(Engine& e) : e_(e) {}

  void mark(NodeId n) {
    if (n >= queued_.size()) queued_.resize(std::max<std::size_t>(n + 1, 2 * queued_.size()), 0);
    if (!queued_[n]) {
      queued_[n] = 1;
      queue_.push_back(n);
    }
  }
  void mark_all(const std::vector<NodeId>& ns) {
    for (NodeId n : ns) mark(n);
  }
  void mark_everything() {
    for (NodeId n : e_.d().node_ids()) mark(n);
  }

  /// Runs to fixpoint. Every node whose neighborhood changed is passed to
  /// `on_touch` (the elimination scheduler listens here).
  template <class OnTouch>
  void run(OnTouch&& on_touch) {
    while (!queue_.empty()) {
      NodeId n = queue_.back();
      queue_.pop_back();
      queued_[n] = 0;
      if (!e_.d().has_node(n)) continue;
      std::vector<NodeId> touched;
      if (visit(n, touched)) {
        for (NodeId t : touched) {
          if (!e_.d().has_node(t)) continue;
          mark(t);
          on_touch(t);
        }
      }
    }
  }

  /// Nodes touched by a step taken outside the tidy loop.
  void absorb(const std::vector<NodeId>& touched) { mark_all(touched); }

 private:
  using Key = std::vector<std::uint64_t>;

  std::optional<Key> signature(NodeId box) const {
    const Diagram& d = e_.d();
    Key k;
    for (const HalfEdge& h : d.incident(box)) {
      const Edge& ed = d.edge(h.edge);
      if (ed.is_loop()) return std::nullopt;
      NodeId o = ed.other(box);
      if (!d.kind(o).is_z()) return std::nullopt;
      k.push_back((static_cast<std::uint64_t>(o) << 1) | (ed.negated ? 1 : 0));
    }
    std::sort(k.begin(), k.end());
    return k;
  }

  std::optional<NodeId> lookup(const Key& k, NodeId self) {
    auto it = boxes_.find(k);
    if (it == boxes_.end()) return std::nullopt;
    NodeId b = it->second;
    const Diagram& d = e_.d();
    if (b == self || !d.has_node(b) || !d.kind(b).is_h0()) return std::nullopt;
    auto cur = signature(b);
    if (!cur || *cur != k) return std::nullopt;
    return b;
  }

  bool step(RuleId r, Site s, std::vector<NodeId>& touched, int hops = 1) {
    e_.run(r, s, &touched, hops);
    return true;
  }

  bool visit(NodeId n, std::vector<NodeId>& touched) {
    Diagram& d = e_.d();
    const NodeKind k = d.kind(n);
    if (k.is_boundary()) return false;
    const std::size_t ar = d.arity(n);
    if (ar == 0) {
      return step(k.is_h0() ? RuleId::EmptyH0 : RuleId::ScalarizeArity0, Site{{n}, {}}, touched);
    }
    for (const HalfEdge& h : d.incident(n)) {
      const Edge& ed = d.edge(h.edge);
      if (ed.is_loop() && (k.is_z() || k.is_x())) {
        return step(ed.negated ? RuleId::LoopZero : RuleId::LoopTwo, Site{{n}, {h.edge}},
                    touched);
      }
    }
    if (k.is_x()) {
      for (const HalfEdge& h : d.incident(n))
        if (d.edge(h.edge).negated)
          return step(RuleId::DoubleNegation, Site{{n}, {h.edge}}, touched);
      if (ar == 1 && d.kind(d.edge(d.incident(n)[0].edge).other(n)).is_z())
        return step(RuleId::UnitPropagate, Site{{n}, {}}, touched, 2);
      return false;
    }
    if (!k.is_h()) return false;

    // Two legs into one Z-spider.
    {
      std::vector<std::pair<NodeId, EdgeId>> legs;
      for (const HalfEdge& h : d.incident(n)) {
        const Edge& ed = d.edge(h.edge);
        if (ed.is_loop()) continue;
        NodeId o = ed.other(n);
        if (d.kind(o).is_z()) legs.emplace_back(o, h.edge);
      }
      std::sort(legs.begin(), legs.end());
      for (std::size_t i = 1; i < legs.size(); ++i) {
        if (legs[i].first != legs[i - 1].first) continue;
        EdgeId a = legs[i - 1].second, b = legs[i].second;
        RuleId r = d.edge(a).negated == d.edge(b).negated ? RuleId::MergeDuplicateLiteral
                                                           : RuleId::TautologyH0;
        step(r, Site{{n}, {a, b}}, touched);
        touched.push_back(n);
        return true;
      }
    }
    if (!k.is_h0()) return false;
    if (ar == 1 && d.kind(d.edge(d.incident(n)[0].edge).other(n)).is_z())
      return step(RuleId::UnitPropagate, Site{{n}, {}}, touched, 2);

    auto sig = signature(n);
    if (!sig) return false;
    if (auto other = lookup(*sig, n)) {
      return step(RuleId::DedupParallelH0, Site{{*other, n}, {}}, touched);
    }
    for (std::size_t i = 0; i < sig->size(); ++i) {
      Key flipped = *sig;
      flipped[i] ^= 1;
      std::sort(flipped.begin(), flipped.end());
      if (auto other = lookup(flipped, n)) {
        step(RuleId::MergeComplementaryH0, Site{{n, *other}, {}}, touched);
        touched.push_back(n);
        return true;
      }
    }
    boxes_[*sig] = n;
    return false;
  }

  Engine& e_;
  std::vector<NodeId> queue_;
  std::vector<char> queued_;
  std::unordered_map<Key, NodeId, VecHash> boxes_;
};

// ---------------------------------------------------------------------------
// Variable elimination scheduling.

enum class ElimFamily : std::uint8_t {
  Counting,   // ElimVarSharp2Sat / ElimVarSharpSat
  Resolution, // ElimVar2Sat / ElimVarSat
  TwoSat,     // ElimVar2Sat only
};

struct Candidate {
  RuleId rule;
  std::size_t cost;
  std::size_t resolvent_arity;
};

struct ElimProfile {
  std::size_t m = 0, n = 0;
  std::size_t max_plain = 0, max_negated = 0;
  bool all_arity2 = true;
};

// Allocation-free form of analyze_elimination for scheduling. Agrees with it
// whenever no outer leg ends on an H-box; that rare case defers to it.
inline std::optional<ElimProfile> elim_profile(const Diagram& d, NodeId z) {
  if (!d.has_node(z) || !d.kind(z).is_z()) return std::nullopt;
  ElimProfile p;
  for (const HalfEdge& h : d.incident(z)) {
    const Edge& e = d.edge(h.edge);
    if (e.is_loop()) return std::nullopt;
    NodeId b = e.other(z);
    if (!d.kind(b).is_h0()) return std::nullopt;
    std::size_t outer = 0, to_z = 0;
    for (const HalfEdge& bh : d.incident(b)) {
      const Edge& o = d.edge(bh.edge);
      if (o.is_loop()) return std::nullopt;
      NodeId nb = o.other(b);
      if (nb == z) {
        ++to_z;
        continue;
      }
      if (d.kind(nb).is_h()) {
        auto s = analyze_elimination(d, z);
        if (!s) return std::nullopt;
        ElimProfile q{s->m(), s->n(), 0, 0, s->all_arity2()};
        for (const ElimBox& x : s->plain) q.max_plain = std::max(q.max_plain, x.outer.size());
        for (const ElimBox& x : s->negated)
          q.max_negated = std::max(q.max_negated, x.outer.size());
        return q;
      }
      ++outer;
    }
    if (to_z != 1) return std::nullopt;  // a box on two legs of z
    if (outer != 1) p.all_arity2 = false;
    if (e.negated) {
      ++p.n;
      p.max_negated = std::max(p.max_negated, outer);
    } else {
      ++p.m;
      p.max_plain = std::max(p.max_plain, outer);
    }
  }
  return p;
}

inline std::optional<Candidate> candidate(const Diagram& d, NodeId z, ElimFamily fam) {
  auto s = elim_profile(d, z);
  if (!s) return std::nullopt;
  const bool two = s->all_arity2;
  const std::size_t resolvent = s->m > 0 && s->n > 0 ? s->max_plain + s->max_negated : 0;
  Candidate c{RuleId::ElimVarSat, s->m * s->n, resolvent};
  switch (fam) {
    case ElimFamily::Counting:
      if (two) {
        c.rule = RuleId::ElimVarSharp2Sat;
      } else if (s->m > 0 && s->n > 0) {
        c.rule = RuleId::ElimVarSharpSat;
      } else {
        return std::nullopt;  // a pure variable reproduces itself
      }
      break;
    case ElimFamily::Resolution: c.rule = two ? RuleId::ElimVar2Sat : RuleId::ElimVarSat; break;
    case ElimFamily::TwoSat:
      if (!two) return std::nullopt;
      c.rule = RuleId::ElimVar2Sat;
      break;
  }
  return c;
}

/// Min (m x n) priority queue over Z-spiders. Touched nodes are queued and
/// re-scored lazily, once, before the next pick.
class Scheduler {
 public:
  Scheduler(const Diagram& d, ElimFamily fam) : d_(d), fam_(fam) {}

  void touch(NodeId n) {
    grow(n);
    if (dirty_[n]) return;
    dirty_[n] = true;
    pending_.push_back(n);
  }

  std::optional<std::pair<NodeId, Candidate>> best() {
    for (NodeId n : pending_) {
      dirty_[n] = false;
      refresh(n);
    }
    pending_.clear();
    while (!heap_.empty()) {
      auto [cost, n] = *heap_.begin();
      auto c = candidate(d_, n, fam_);
      if (c && c->cost == cost) return std::make_pair(n, *c);
      refresh(n);  // stale entry
    }
    return std::nullopt;
  }

 private:
  void grow(NodeId n) {
    if (n >= key_.size()) {
      std::size_t size = std::max<std::size_t>(n + 1, 2 * key_.size());
      key_.resize(size, kNone);
      dirty_.resize(size, false);
    }
  }

  void refresh(NodeId n) {
    grow(n);
    if (key_[n] != kNone) {
      heap_.erase({key_[n], n});
      key_[n] = kNone;
    }
    if (!d_.has_node(n) || !d_.kind(n).is_z()) return;
    if (auto c = candidate(d_, n, fam_)) {
      key_[n] = c->cost;
      heap_.insert({c->cost, n});
    }
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const Diagram& d_;
  ElimFamily fam_;
  std::set<std::pair<std::size_t, NodeId>> heap_;
  std::vector<std::size_t> key_;
  std::vector<bool> dirty_;
  std::vector<NodeId> pending_;
};

// ---------------------------------------------------------------------------
// XOR elimination: Gaussian elimination carried out with the bialgebra rule.

class XorPhase {
 public:
  /// With `only_pure` set, a variable is pivoted on only if all its
  /// neighbors are X-spiders (mixed formulas keep their clause boxes).
  XorPhase(Engine& e, bool only_pure) : e_(e), only_pure_(only_pure) {}

  void run() {
    Diagram& d = e_.d();
    normalize();
    for (NodeId n : d.node_ids())
      if (d.kind(n).is_x()) refresh(n);
    while (!open_.empty() && !d.scalar().is_zero()) {
      auto [ar, c] = *open_.begin();
      open_.erase(open_.begin());
      key_[c] = kNone;
      if (!d.has_node(c) || !d.kind(c).is_x()) continue;
      std::optional<NodeId> z = pivot(c);
      if (!z) continue;  // blocked; revisited if touched again
      eliminate(*z, c);
    }
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void refresh(NodeId c) {
    Diagram& d = e_.d();
    if (c >= key_.size()) key_.resize(std::max<std::size_t>(c + 1, 2 * key_.size()), kNone);
    if (key_[c] != kNone) {
      open_.erase({key_[c], c});
      key_[c] = kNone;
    }
    if (!d.has_node(c) || !d.kind(c).is_x()) return;
    key_[c] = d.arity(c);
    open_.insert({key_[c], c});
  }

  // Flags into X-spiders, loops, parallel Z-X pairs and arity-0 spiders.
  void normalize() {
    Diagram& d = e_.d();
    for (NodeId n : d.node_ids()) {
      if (!d.has_node(n)) continue;
      if (d.kind(n).is_x()) {
        for (EdgeId e : d.incident_edges(n)) {
          if (!d.has_edge(e)) continue;
          const Edge& ed = d.edge(e);
          if (ed.is_loop()) {
            e_.run(ed.negated ? RuleId::LoopZero : RuleId::LoopTwo, Site{{n}, {e}});
          } else if (ed.negated) {
            e_.run(RuleId::DoubleNegation, Site{{n}, {e}});
          }
        }
        hopf(n);
      } else if (d.kind(n).is_z()) {
        for (EdgeId e : d.incident_edges(n)) {
          if (d.has_edge(e) && d.edge(e).is_loop())
            e_.run(d.edge(e).negated ? RuleId::LoopZero : RuleId::LoopTwo, Site{{n}, {e}});
        }
      }
    }
    for (NodeId n : d.node_ids()) scalarize_if_empty(n);
  }

  void scalarize_if_empty(NodeId n) {
    Diagram& d = e_.d();
    if (d.has_node(n) && d.arity(n) == 0 && (d.kind(n).is_x() || d.kind(n).is_z()))
      e_.run(RuleId::ScalarizeArity0, Site{{n}, {}});
  }

  // Cancels parallel pairs between X-spider c and its Z neighbors.
  void hopf(NodeId c) {
    Diagram& d = e_.d();
    if (stamp_.size() < d.node_capacity()) stamp_.resize(d.node_capacity(), kNoEdge);
    std::vector<NodeId> seen;
    std::vector<std::pair<EdgeId, EdgeId>> pairs;
    for (const HalfEdge& h : d.incident(c)) {
      const Edge& ed = d.edge(h.edge);
      if (ed.is_loop()) continue;
      NodeId z = ed.other(c);
      if (!d.kind(z).is_z()) continue;
      if (stamp_[z] == kNoEdge) {
        stamp_[z] = h.edge;
        seen.push_back(z);
      } else {
        pairs.emplace_back(stamp_[z], h.edge);
        stamp_[z] = kNoEdge;
      }
    }
    for (NodeId z : seen) stamp_[z] = kNoEdge;
    for (auto [a, b] : pairs) e_.run(RuleId::Hopf, Site{{}, {a, b}});
  }

  bool pure(NodeId z) const {
    const Diagram& d = e_.d();
    for (const HalfEdge& h : d.incident(z)) {
      const Edge& ed = d.edge(h.edge);
      if (ed.is_loop() || !d.kind(ed.other(z)).is_x()) return false;
    }
    return true;
  }

  std::optional<NodeId> pivot(NodeId c) const {
    const Diagram& d = e_.d();
    std::optional<NodeId> best;
    std::size_t best_deg = 0;
    for (const HalfEdge& h : d.incident(c)) {
      NodeId z = d.edge(h.edge).other(c);
      if (!d.kind(z).is_z()) continue;
      if (only_pure_ && !pure(z)) continue;
      std::size_t deg = d.arity(z);
      if (!best || deg < best_deg || (deg == best_deg && z < *best)) {
        best = z;
        best_deg = deg;
      }
    }
    return best;
  }

  void eliminate(NodeId z, NodeId c) {
    Diagram& d = e_.d();
    EdgeId e = detail::edges_between(d, z, c).front();
    RewriteStep ba = e_.run(RuleId::BialgebraZX, Site{{z, c}, {e}});
    if (stamp_.size() < d.node_capacity()) stamp_.resize(d.node_capacity(), kNoEdge);
    std::vector<NodeId> fresh_x, fresh_z;
    for (NodeId n : ba.produced.nodes) {
      (d.kind(n).is_x() ? fresh_x : fresh_z).push_back(n);
      stamp_[n] = 0;
    }
    // The one wire of each fresh spider that leads out of the pattern.
    auto outside = [&](NodeId n) {
      for (const HalfEdge& h : d.incident(n)) {
        NodeId o = d.edge(h.edge).other(n);
        if (stamp_[o] == kNoEdge) return o;
      }
      return n;
    };
    std::vector<std::pair<NodeId, NodeId>> xs, zs;
    for (NodeId n : fresh_x) xs.emplace_back(outside(n), n);
    for (NodeId n : fresh_z) zs.emplace_back(outside(n), n);
    for (NodeId n : ba.produced.nodes) stamp_[n] = kNoEdge;
    for (auto [u, n] : zs) e_.run(RuleId::FuseZ, Site{{u, n}, {}});
    std::vector<NodeId> survivors;
    for (auto [ci, n] : xs) {
      e_.run(RuleId::FuseX, Site{{ci, n}, {}});
      survivors.push_back(ci);
    }
    for (NodeId ci : survivors) {
      hopf(ci);
      scalarize_if_empty(ci);
      refresh(ci);
    }
    for (auto [u, n] : zs) scalarize_if_empty(u);
    StrategyReport& r = e_.report();
    const std::size_t nodes = d.node_count();
    if (d.edge_count() > nodes * nodes) r.edge_bound_held = false;
  }

  static constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);
  Engine& e_;
  bool only_pure_;
  std::set<std::pair<std::size_t, NodeId>> open_;
  std::vector<std::size_t> key_;
  std::vector<EdgeId> stamp_;
};

// ---------------------------------------------------------------------------
// CNF elimination loop.

struct CnfPlan {
  ElimFamily family;
  bool stop_on_zero = true;
  bool enforce_cap = true;       // stop at a resolvent over max_box_arity
  bool check_2sat_bound = false; // decide_2sat's arity bound
};

/// Returns true if rewriting stopped short of an empty diagram by the cap.
inline bool cnf_phase(Engine& e, const CnfPlan& plan) {
  Diagram& d = e.d();
  StrategyReport& rep = e.report();
  Tidy tidy(e);
  Scheduler sched(d, plan.family);
  tidy.mark_everything();
  for (NodeId n : d.node_ids()) sched.touch(n);
  auto touch = [&](NodeId n) { sched.touch(n); };
  while (true) {
    tidy.run(touch);
    if (plan.stop_on_zero && d.scalar().is_zero()) return false;
    auto pick = sched.best();
    if (!pick) return false;
    auto [z, cand] = *pick;
    if (plan.enforce_cap && e.opts().max_box_count != 0 &&
        d.count(NodeType::HBox) + cand.cost > e.opts().max_box_count) {
      rep.stop_reason = "budget";
      return true;
    }
    if (plan.check_2sat_bound) {
      const std::size_t remaining = d.count(NodeType::ZSpider);
      for (NodeId n : d.node_ids())
        if (d.kind(n).is_z() && d.arity(n) > 2 * remaining) rep.arity_bound_held = false;
    }
    if (cand.resolvent_arity > e.opts().max_box_arity) {
      if (plan.enforce_cap) {
        rep.max_resolvent_arity = std::max(rep.max_resolvent_arity, cand.resolvent_arity);
        rep.stop_reason = "cap";
        return true;
      }
      rep.cap_exceeded = true;
    }
    std::vector<NodeId> touched;
    e.run(cand.rule, Site{{z}, {}}, &touched, 2);
    for (NodeId t : touched) {
      if (!d.has_node(t)) continue;
      tidy.mark(t);
      sched.touch(t);
    }
  }
}

/// Final answer from the residual diagram.
inline void finish(Engine& e, Mode mode, bool capped) {
  Diagram& d = e.d();
  StrategyReport& rep = e.report();
  rep.residual_wires = d.edge_count();
  const Carrier carrier = carrier_of(mode);
  if (d.scalar().is_zero() || d.node_count() == 0) {
    rep.answer = carrier == Carrier::Bool ? Natural(project(d.scalar()).value ? 1 : 0)
                                          : d.scalar();
    return;
  }
  if (rep.stop_reason.empty()) rep.stop_reason = "stuck";
  if (!e.opts().allow_fallback) {
    if (capped && rep.stop_reason == "budget") {
      throw ResourceLimitError("H-box count exceeds max_box_count with fallback disabled",
                               d.count(NodeType::HBox), e.opts().max_box_count);
    }
    if (capped) {
      throw ResourceLimitError("resolvent arity exceeds max_box_arity with fallback disabled",
                               rep.max_resolvent_arity, e.opts().max_box_arity);
    }
    if (d.edge_count() > e.opts().wire_limit) {
      throw ResourceLimitError("residual diagram exceeds wire_limit with fallback disabled",
                               d.edge_count(), e.opts().wire_limit);
    }
  }
  rep.fallback_used = true;
  rep.answer = contract_scalar(d, carrier, kUnlimitedWires);
}

inline StrategyReport start_report(const char* name, Mode mode) {
  StrategyReport r;
  r.strategy = name;
  r.carrier = carrier_of(mode);
  return r;
}

}  // namespace detail

/// #XORSAT by bialgebra elimination. The answer is 0 or a power of two.
inline StrategyReport count_xorsat(const Formula& f, const StrategyOptions& opts = {}) {
  if (!f.is_pure_xor()) throw PreconditionError("count_xorsat needs XOR clauses only");
  StrategyReport rep = detail::start_report("xorsat", Mode::Count);
  detail::Engine e(encode(f), f.num_vars, opts, rep);
  detail::XorPhase(e, false).run();
  detail::finish(e, Mode::Count, false);
  return rep;
}

/// 2SAT by repeated Boolean resolution. Every variable is eliminated, so
/// rep.eliminations == f.num_vars.
inline StrategyReport decide_2sat(const Formula& f, const StrategyOptions& opts = {}) {
  if (!f.is_pure_or() || f.max_clause_size() > 2)
    throw PreconditionError("decide_2sat needs OR clauses of at most two literals");
  StrategyReport rep = detail::start_report("2sat", Mode::Decide);
  detail::Engine e(encode(f), f.num_vars, opts, rep);
  detail::CnfPlan plan{detail::ElimFamily::TwoSat, false, false, true};
  detail::cnf_phase(e, plan);
  if (rep.max_resolvent_arity > 2)
    throw PreconditionError("decide_2sat produced a box of arity " +
                            std::to_string(rep.max_resolvent_arity));
  detail::finish(e, Mode::Decide, false);
  return rep;
}

/// Exact model count by counting eliminations, finishing by contraction if
/// the rules get stuck or the resolvent cap is reached.
inline StrategyReport count_sharpsat(const Formula& f, const StrategyOptions& opts = {}) {
  if (!f.is_pure_or()) throw PreconditionError("count_sharpsat needs OR clauses only");
  StrategyReport rep = detail::start_report("sharpsat", Mode::Count);
  detail::Engine e(encode(f), f.num_vars, opts, rep);
  detail::CnfPlan plan{detail::ElimFamily::Counting, true, true, false};
  bool capped = detail::cnf_phase(e, plan);
  detail::finish(e, Mode::Count, capped);
  return rep;
}

/// Rewriting phase of count_sharpsat only: runs the counting eliminations
/// until done, stuck or capped, and returns the residual without
/// contracting it. Used to instrument box growth.
inline StrategyReport sharpsat_rewrite_only(const Formula& f, Diagram* residual,
                                            const StrategyOptions& opts = {}) {
  if (!f.is_pure_or()) throw PreconditionError("count_sharpsat needs OR clauses only");
  StrategyReport rep = detail::start_report("sharpsat", Mode::Count);
  detail::Engine e(encode(f), f.num_vars, opts, rep);
  detail::CnfPlan plan{detail::ElimFamily::Counting, true, true, false};
  detail::cnf_phase(e, plan);
  rep.residual_wires = e.d().edge_count();
  if (e.d().node_count() == 0 || e.d().scalar().is_zero()) {
    rep.answer = e.d().scalar();
  } else if (rep.stop_reason.empty()) {
    rep.stop_reason = "stuck";
  }
  if (residual) *residual = e.d();
  return rep;
}

/// Davis-Putnam: resolution to an empty diagram. max_box_arity is a
/// diagnostic here; rep.cap_exceeded reports whether it was passed.
inline StrategyReport decide_sat(const Formula& f, const StrategyOptions& opts = {}) {
  if (!f.is_pure_or()) throw PreconditionError("decide_sat needs OR clauses only");
  StrategyReport rep = detail::start_report("sat", Mode::Decide);
  detail::Engine e(encode(f), f.num_vars, opts, rep);
  detail::CnfPlan plan{detail::ElimFamily::Resolution, true, false, false};
  detail::cnf_phase(e, plan);
  detail::finish(e, Mode::Decide, false);
  return rep;
}

/// Mixed OR/XOR formulas: XOR pivots on variables that occur only in XOR
/// clauses, then counting elimination, then contraction of what is left.
/// Decisions project the count, since the XOR phase uses counting rules.
inline StrategyReport count_mixed(const Formula& f, const StrategyOptions& opts = {}) {
  StrategyReport rep = detail::start_report("mixed", Mode::Count);
  detail::Engine e(encode(f), f.num_vars, opts, rep);
  detail::XorPhase(e, true).run();
  bool capped = false;
  if (!e.d().scalar().is_zero()) {
    detail::CnfPlan plan{detail::ElimFamily::Counting, true, true, false};
    capped = detail::cnf_phase(e, plan);
  }
  detail::finish(e, Mode::Count, capped);
  return rep;
}

/// Reference contraction of the encoding, bounded by opts.wire_limit.
inline StrategyReport solve_brute(const Formula& f, Mode mode, const StrategyOptions& opts = {}) {
  StrategyReport rep = detail::start_report("brute", mode);
  Diagram d = encode(f);
  rep.peak_box_count = d.count(NodeType::HBox);
  rep.residual_wires = d.edge_count();
  rep.answer = contract_scalar(d, carrier_of(mode), opts.wire_limit);
  rep.fallback_used = true;
  return rep;
}

inline StrategyReport project_report(StrategyReport r) {
  r.carrier = Carrier::Bool;
  r.answer = Natural(r.answer.is_zero() ? 0 : 1);
  return r;
}

/// Dispatcher: pure XOR to count_xorsat, 2-CNF decisions to decide_2sat,
/// other CNF to count_sharpsat / decide_sat, mixed to count_mixed.
/// Decisions from counting strategies are projected.
inline StrategyReport solve_auto(const Formula& f, Mode mode, const StrategyOptions& opts = {}) {
  f.check();
  StrategyReport r;
  if (f.is_pure_xor()) {
    r = count_xorsat(f, opts);
  } else if (f.is_pure_or()) {
    if (mode == Mode::Decide) {
      return f.max_clause_size() <= 2 ? decide_2sat(f, opts) : decide_sat(f, opts);
    }
    return count_sharpsat(f, opts);
  } else {
    r = count_mixed(f, opts);
  }
  return mode == Mode::Decide ? project_report(std::move(r)) : r;
}

}  // namespace zhsat
