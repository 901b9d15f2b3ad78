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

// Catalogue of local rewrites on NatZH diagrams.
//
// Every apply_* function checks its site completely before touching the
// diagram, so a RewriteMismatch leaves the diagram as it was. On success the
// diagram is rewritten in place, its scalar is multiplied by the step's
// scalar_factor, and the returned RewriteStep names the site and whatever
// was created. Nodes and edges that survive a rewrite keep their ids.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zhsat/diagram.hpp"
#include "zhsat/errors.hpp"
#include "zhsat/semiring.hpp"

namespace zhsat {

enum class RuleId : std::uint8_t {
  FuseZ,
  FuseX,
  NotCopy,
  DoubleNegation,
  LoopZero,
  LoopTwo,
  BialgebraZX,
  Hopf,
  DedupParallelH0,
  TautologyH0,
  MergeDuplicateLiteral,
  MergeComplementaryH0,
  UnitPropagate,
  EmptyH0,
  ScalarizeArity0,
  ElimVarSharp2Sat,
  ElimVar2Sat,
  ElimVarSharpSat,
  ElimVarSat,
};

/// Nat rules preserve the value over N (and hence over B). BoolOnly rules
/// preserve it only after projection to B.
enum class Validity : std::uint8_t { Nat, BoolOnly };

struct RuleInfo {
  RuleId id;
  std::string_view name;
  Validity validity;
};

inline constexpr std::array<RuleInfo, 19> kRules = {{
    {RuleId::FuseZ, "FuseZ", Validity::Nat},
    {RuleId::FuseX, "FuseX", Validity::Nat},
    {RuleId::NotCopy, "NotCopy", Validity::Nat},
    {RuleId::DoubleNegation, "DoubleNegation", Validity::Nat},
    {RuleId::LoopZero, "LoopZero", Validity::Nat},
    {RuleId::LoopTwo, "LoopTwo", Validity::Nat},
    {RuleId::BialgebraZX, "BialgebraZX", Validity::Nat},
    {RuleId::Hopf, "Hopf", Validity::Nat},
    {RuleId::DedupParallelH0, "DedupParallelH0", Validity::Nat},
    {RuleId::TautologyH0, "TautologyH0", Validity::Nat},
    {RuleId::MergeDuplicateLiteral, "MergeDuplicateLiteral", Validity::Nat},
    {RuleId::MergeComplementaryH0, "MergeComplementaryH0", Validity::Nat},
    {RuleId::UnitPropagate, "UnitPropagate", Validity::Nat},
    {RuleId::EmptyH0, "EmptyH0", Validity::Nat},
    {RuleId::ScalarizeArity0, "ScalarizeArity0", Validity::Nat},
    {RuleId::ElimVarSharp2Sat, "ElimVarSharp2Sat", Validity::Nat},
    {RuleId::ElimVar2Sat, "ElimVar2Sat", Validity::BoolOnly},
    {RuleId::ElimVarSharpSat, "ElimVarSharpSat", Validity::Nat},
    {RuleId::ElimVarSat, "ElimVarSat", Validity::BoolOnly},
}};

inline const RuleInfo& rule_info(RuleId id) {
  return kRules[static_cast<std::size_t>(id)];
}
inline std::string_view rule_name(RuleId id) { return rule_info(id).name; }
inline Validity rule_validity(RuleId id) { return rule_info(id).validity; }
inline std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const RuleInfo& r : kRules)
    if (r.name == name) return r.id;
  return std::nullopt;
}

struct Site {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;

  friend bool operator==(const Site&, const Site&) = default;
};

struct RewriteStep {
  RuleId rule = RuleId::FuseZ;
  Site site;      // the ids the rule was applied at
  Site produced;  // ids created by the rule
  Natural scalar_factor{1};
};

using RewriteTrace = std::vector<RewriteStep>;

namespace detail {

[[noreturn]] inline void mismatch(RuleId rule, const std::string& why) {
  throw RewriteMismatch(std::string(rule_name(rule)) + ": " + why);
}

inline void require(bool cond, RuleId rule, const char* why) {
  if (!cond) mismatch(rule, why);
}

inline bool live_kind(const Diagram& d, NodeId n, NodeType t) {
  return d.has_node(n) && d.kind(n).type == t;
}

/// Non-loop edges joining a and b, ascending.
inline std::vector<EdgeId> edges_between(const Diagram& d, NodeId a, NodeId b) {
  std::vector<EdgeId> out;
  for (const HalfEdge& h : d.incident(a)) {
    const Edge& e = d.edge(h.edge);
    if (!e.is_loop() && e.other(a) == b) out.push_back(h.edge);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool has_loop(const Diagram& d, NodeId n) {
  for (const HalfEdge& h : d.incident(n))
    if (d.edge(h.edge).is_loop()) return true;
  return false;
}

/// The half-edge of `e` that sits at node `n` (first one for loops).
inline HalfEdge half_at(const Diagram& d, EdgeId e, NodeId n) {
  const Edge& ed = d.edge(e);
  return HalfEdge{e, static_cast<std::uint8_t>(ed.u == n ? 0 : 1)};
}

/// Removes an H-box whose tensor has become all ones. Each remaining leg is
/// then unconstrained: a leg into a Z-spider just disappears, any other leg
/// is capped with an arity-1 Z-spider, and a self-loop on the box leaves a
/// factor 2.
inline Natural drop_all_ones_box(Diagram& d, NodeId box, Site& produced) {
  Natural factor(1);
  for (EdgeId e : d.incident_edges(box)) {
    const Edge& ed = d.edge(e);
    if (ed.is_loop()) {
      factor *= Natural(2);
      d.remove_edge(e);
      continue;
    }
    NodeId other = ed.other(box);
    if (d.kind(other).is_z()) {
      d.remove_edge(e);
    } else {
      NodeId cap = d.add_node(NodeKind::z());
      produced.nodes.push_back(cap);
      d.relink(e, half_at(d, e, box).side, cap);
    }
  }
  d.remove_node(box);
  return factor;
}

}  // namespace detail

/// Spider fusion: two Z-spiders joined by a plain edge merge into `a`. Other
/// edges between them become self-loops on `a` with their flags.
inline RewriteStep apply_fuse_z(Diagram& d, NodeId a, NodeId b) {
  using detail::require;
  const RuleId R = RuleId::FuseZ;
  require(a != b, R, "needs two distinct spiders");
  require(detail::live_kind(d, a, NodeType::ZSpider) &&
              detail::live_kind(d, b, NodeType::ZSpider),
          R, "both nodes must be Z-spiders");
  auto conn = detail::edges_between(d, a, b);
  auto it = std::find_if(conn.begin(), conn.end(),
                         [&](EdgeId e) { return !d.edge(e).negated; });
  require(it != conn.end(), R, "no plain edge between the spiders");
  EdgeId fused = *it;
  d.remove_edge(fused);
  std::vector<HalfEdge> moving(d.incident(b).begin(), d.incident(b).end());
  for (const HalfEdge& h : moving) d.relink(h.edge, h.side, a);
  d.remove_node(b);
  return RewriteStep{R, Site{{a, b}, {fused}}, {}, Natural(1)};
}

/// X-spider fusion: merged parity is the XOR of both parities and the flag
/// of the fused edge.
inline RewriteStep apply_fuse_x(Diagram& d, NodeId a, NodeId b) {
  using detail::require;
  const RuleId R = RuleId::FuseX;
  require(a != b, R, "needs two distinct spiders");
  require(detail::live_kind(d, a, NodeType::XSpider) &&
              detail::live_kind(d, b, NodeType::XSpider),
          R, "both nodes must be X-spiders");
  auto conn = detail::edges_between(d, a, b);
  require(!conn.empty(), R, "spiders are not adjacent");
  EdgeId fused = conn.front();
  bool parity = d.kind(a).parity != d.kind(b).parity;
  parity = parity != d.edge(fused).negated;
  d.remove_edge(fused);
  std::vector<HalfEdge> moving(d.incident(b).begin(), d.incident(b).end());
  for (const HalfEdge& h : moving) d.relink(h.edge, h.side, a);
  d.remove_node(b);
  d.set_kind(a, NodeKind::x(parity));
  return RewriteStep{R, Site{{a, b}, {fused}}, {}, Natural(1)};
}

/// A Z-spider commutes with NOT on all its legs: flips the flag of every
/// non-loop incident edge, clearing the negation on `e`.
inline RewriteStep apply_not_copy(Diagram& d, NodeId z, EdgeId e) {
  using detail::require;
  const RuleId R = RuleId::NotCopy;
  require(detail::live_kind(d, z, NodeType::ZSpider), R, "node must be a Z-spider");
  require(d.has_edge(e), R, "no such edge");
  const Edge& ed = d.edge(e);
  require(!ed.is_loop() && (ed.u == z || ed.v == z), R, "edge is not a leg of the spider");
  require(ed.negated, R, "edge is not negated");
  for (EdgeId g : d.incident_edges(z))
    if (!d.edge(g).is_loop()) d.flip_negation(g);
  return RewriteStep{R, Site{{z}, {e}}, {}, Natural(1)};
}

/// An X-spider absorbs a NOT on one of its legs by flipping its parity.
inline RewriteStep apply_double_negation(Diagram& d, NodeId x, EdgeId e) {
  using detail::require;
  const RuleId R = RuleId::DoubleNegation;
  require(detail::live_kind(d, x, NodeType::XSpider), R, "node must be an X-spider");
  require(d.has_edge(e), R, "no such edge");
  const Edge& ed = d.edge(e);
  require(!ed.is_loop() && (ed.u == x || ed.v == x), R, "edge is not a leg of the spider");
  require(ed.negated, R, "edge is not negated");
  d.set_negated(e, false);
  d.flip_parity(x);
  return RewriteStep{R, Site{{x}, {e}}, {}, Natural(1)};
}

/// Removes a self-loop from a spider. Z-spider: a naked loop is free and a
/// negated one forces the value 0. X-spider: either loop contributes its flag
/// to the parity and a factor 2 from the free wire value.
/// Naked loops are recorded as LoopTwo, negated ones as LoopZero.
inline RewriteStep apply_loop(Diagram& d, EdgeId e) {
  if (!d.has_edge(e)) detail::mismatch(RuleId::LoopTwo, "no such edge");
  const Edge ed = d.edge(e);
  const RuleId R = ed.negated ? RuleId::LoopZero : RuleId::LoopTwo;
  detail::require(ed.is_loop(), R, "edge is not a self-loop");
  NodeId n = ed.u;
  const NodeKind& k = d.kind(n);
  detail::require(k.is_z() || k.is_x(), R, "self-loop must sit on a spider");
  Natural factor;
  if (k.is_z()) {
    factor = Natural(ed.negated ? 0 : 1);
  } else {
    factor = Natural(2);
    if (ed.negated) d.flip_parity(n);
  }
  d.remove_edge(e);
  d.multiply_scalar(factor);
  return RewriteStep{R, Site{{n}, {e}}, {}, factor};
}

/// Z/X bialgebra on the plain edge `e`. The Z-spider's other legs each get a
/// fresh X-spider carrying the old parity, the X-spider's other legs each get
/// a fresh Z-spider, and the fresh spiders are joined as a complete
/// bipartite graph.
inline RewriteStep apply_bialgebra_zx(Diagram& d, EdgeId e) {
  using detail::require;
  const RuleId R = RuleId::BialgebraZX;
  require(d.has_edge(e), R, "no such edge");
  const Edge ed = d.edge(e);
  require(!ed.is_loop(), R, "edge is a self-loop");
  require(!ed.negated, R, "edge must be plain");
  NodeId z = ed.u, x = ed.v;
  if (d.kind(z).is_x()) std::swap(z, x);
  require(d.kind(z).is_z() && d.kind(x).is_x(), R, "edge must join a Z-spider and an X-spider");
  require(detail::edges_between(d, z, x).size() == 1, R, "spiders share more than one edge");
  require(!detail::has_loop(d, z) && !detail::has_loop(d, x), R, "spiders carry self-loops");
  const bool parity = d.kind(x).parity;
  d.remove_edge(e);
  std::vector<HalfEdge> zlegs(d.incident(z).begin(), d.incident(z).end());
  std::vector<HalfEdge> xlegs(d.incident(x).begin(), d.incident(x).end());
  RewriteStep step{R, Site{{z, x}, {e}}, {}, Natural(1)};
  std::vector<NodeId> new_x, new_z;
  for (const HalfEdge& h : zlegs) {
    NodeId nx = d.add_node(NodeKind::x(parity));
    d.relink(h.edge, h.side, nx);
    new_x.push_back(nx);
  }
  for (const HalfEdge& h : xlegs) {
    NodeId nz = d.add_node(NodeKind::z());
    d.relink(h.edge, h.side, nz);
    new_z.push_back(nz);
  }
  step.produced.nodes = new_x;
  step.produced.nodes.insert(step.produced.nodes.end(), new_z.begin(), new_z.end());
  for (NodeId nx : new_x)
    for (NodeId nz : new_z) step.produced.edges.push_back(d.add_edge(nz, nx, false));
  d.remove_node(z);
  d.remove_node(x);
  return step;
}

/// Hopf law: a pair of parallel edges between a Z-spider and an X-spider
/// disconnects; the pair's flags move into the X parity.
inline RewriteStep apply_hopf(Diagram& d, EdgeId e1, EdgeId e2) {
  using detail::require;
  const RuleId R = RuleId::Hopf;
  require(e1 != e2 && d.has_edge(e1) && d.has_edge(e2), R, "needs two distinct edges");
  const Edge a = d.edge(e1), b = d.edge(e2);
  require(!a.is_loop() && !b.is_loop(), R, "edges must not be self-loops");
  NodeId z = a.u, x = a.v;
  if (d.kind(z).is_x()) std::swap(z, x);
  require(d.kind(z).is_z() && d.kind(x).is_x(), R, "edges must join a Z-spider and an X-spider");
  require((b.u == z && b.v == x) || (b.u == x && b.v == z), R, "edges are not parallel");
  if (a.negated != b.negated) d.flip_parity(x);
  d.remove_edge(e1);
  d.remove_edge(e2);
  return RewriteStep{R, Site{{z, x}, {e1, e2}}, {}, Natural(1)};
}

namespace detail {

/// Legs of an H-box as sorted (neighbor, flag) pairs, if every neighbor is a
/// Z-spider other than the box itself.
inline std::optional<std::vector<std::pair<NodeId, bool>>> z_signature(const Diagram& d,
                                                                       NodeId box) {
  std::vector<std::pair<NodeId, bool>> sig;
  for (const HalfEdge& h : d.incident(box)) {
    const Edge& e = d.edge(h.edge);
    if (e.is_loop()) return std::nullopt;
    NodeId o = e.other(box);
    if (!d.kind(o).is_z()) return std::nullopt;
    sig.emplace_back(o, e.negated);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace detail

/// Two H(0) boxes on the same Z-spider legs with the same flags are one
/// repeated clause; `drop` is deleted. Exact over N because the box tensor
/// only takes the values 0 and 1.
inline RewriteStep apply_dedup_parallel_h0(Diagram& d, NodeId keep, NodeId drop) {
  using detail::require;
  const RuleId R = RuleId::DedupParallelH0;
  require(keep != drop, R, "needs two distinct boxes");
  require(d.has_node(keep) && d.has_node(drop) && d.kind(keep).is_h0() &&
              d.kind(drop).is_h0(),
          R, "both nodes must be H(0) boxes");
  auto s1 = detail::z_signature(d, keep);
  auto s2 = detail::z_signature(d, drop);
  require(s1 && s2, R, "boxes must only touch Z-spiders");
  require(*s1 == *s2, R, "boxes differ in their legs");
  d.remove_node(drop);
  return RewriteStep{R, Site{{keep, drop}, {}}, {}, Natural(1)};
}

/// Two legs of one H-box into the same Z-spider. Equal flags: the legs carry
/// the same bit and one is dropped (MergeDuplicateLiteral). Opposite flags:
/// the box can never see all ones, so it is deleted (TautologyH0).
inline RewriteStep apply_h0_selfloop(Diagram& d, NodeId box, EdgeId e1, EdgeId e2) {
  using detail::require;
  const RuleId R0 = RuleId::MergeDuplicateLiteral;
  require(d.has_node(box) && d.kind(box).is_h(), R0, "node must be an H-box");
  require(e1 != e2 && d.has_edge(e1) && d.has_edge(e2), R0, "needs two distinct edges");
  const Edge a = d.edge(e1), b = d.edge(e2);
  require(!a.is_loop() && !b.is_loop(), R0, "edges must not be self-loops");
  require(a.u == box || a.v == box, R0, "first edge is not a leg of the box");
  require(b.u == box || b.v == box, R0, "second edge is not a leg of the box");
  NodeId y = a.other(box);
  require(b.other(box) == y && d.kind(y).is_z(), R0, "legs must reach the same Z-spider");
  if (a.negated == b.negated) {
    d.remove_edge(e2);
    return RewriteStep{R0, Site{{box}, {e1, e2}}, {}, Natural(1)};
  }
  RewriteStep step{RuleId::TautologyH0, Site{{box}, {e1, e2}}, {}, Natural(1)};
  step.scalar_factor = detail::drop_all_ones_box(d, box, step.produced);
  d.multiply_scalar(step.scalar_factor);
  return step;
}

/// Self-subsuming pair: H(0)(R, y) and H(0)(R, not y) multiply to H(0)(R).
/// `b2` is deleted and `b1` loses its leg into y.
inline RewriteStep apply_merge_complementary_h0(Diagram& d, NodeId b1, NodeId b2) {
  using detail::require;
  const RuleId R = RuleId::MergeComplementaryH0;
  require(b1 != b2, R, "needs two distinct boxes");
  require(d.has_node(b1) && d.has_node(b2) && d.kind(b1).is_h0() && d.kind(b2).is_h0(), R,
          "both nodes must be H(0) boxes");
  auto s1 = detail::z_signature(d, b1);
  auto s2 = detail::z_signature(d, b2);
  require(s1 && s2, R, "boxes must only touch Z-spiders");
  require(s1->size() == s2->size() && !s1->empty(), R, "boxes differ in arity");
  for (std::size_t i = 1; i < s1->size(); ++i)
    require((*s1)[i].first != (*s1)[i - 1].first, R, "box has two legs into one spider");
  std::optional<std::size_t> diff;
  for (std::size_t i = 0; i < s1->size(); ++i) {
    if ((*s1)[i] == (*s2)[i]) continue;
    require((*s1)[i].first == (*s2)[i].first && !diff, R,
            "boxes must differ in exactly one flag");
    diff = i;
  }
  require(diff.has_value(), R, "boxes are identical");
  NodeId y = (*s1)[*diff].first;
  EdgeId leg = detail::edges_between(d, b1, y).front();
  d.remove_node(b2);
  d.remove_edge(leg);
  return RewriteStep{R, Site{{b1, b2}, {leg}}, {}, Natural(1)};
}

/// A basis state on a Z-spider leg: either an arity-1 H(0) box (forces the
/// leg to 0) or an arity-1 X-spider with parity c (forces it to c). The
/// spider's value is fixed and copied to all of its other legs: H-boxes
/// seeing a 0 are satisfied and removed, H-boxes seeing a 1 lose the leg,
/// X-spiders absorb the bit into their parity, and any other neighbor gets
/// an arity-1 X-spider holding the bit.
inline RewriteStep apply_unit_propagate(Diagram& d, NodeId unit) {
  using detail::require;
  const RuleId R = RuleId::UnitPropagate;
  require(d.has_node(unit) && d.arity(unit) == 1, R, "unit must have arity 1");
  const NodeKind uk = d.kind(unit);
  require(uk.is_h0() || uk.is_x(), R, "unit must be an H(0) box or an X-spider");
  const EdgeId ue = d.incident(unit)[0].edge;
  const Edge ued = d.edge(ue);
  NodeId z = ued.other(unit);
  require(z != unit && d.kind(z).is_z(), R, "unit must hang off a Z-spider");
  const bool unit_bit = uk.is_x() ? uk.parity : false;
  const bool val = unit_bit != ued.negated;

  RewriteStep step{R, Site{{unit, z}, {ue}}, {}, Natural(1)};
  d.remove_node(unit);
  Natural factor(1);
  for (EdgeId g : d.incident_edges(z)) {
    if (!d.has_edge(g)) continue;  // removed with a satisfied box
    const Edge ged = d.edge(g);
    if (ged.is_loop()) {
      if (ged.negated) factor = Natural(0);
      d.remove_edge(g);
      continue;
    }
    NodeId nb = ged.other(z);
    const bool bit = val != ged.negated;
    const NodeKind& nk = d.kind(nb);
    if (nk.is_h()) {
      if (!bit) {
        d.remove_edge(g);
        factor *= detail::drop_all_ones_box(d, nb, step.produced);
      } else {
        d.remove_edge(g);
      }
    } else if (nk.is_x()) {
      d.remove_edge(g);
      if (bit) d.flip_parity(nb);
    } else {
      NodeId state = d.add_node(NodeKind::x(val));
      step.produced.nodes.push_back(state);
      d.relink(g, detail::half_at(d, g, z).side, state);
    }
  }
  d.remove_node(z);
  step.scalar_factor = factor;
  d.multiply_scalar(factor);
  return step;
}

/// An arity-0 H(0) box is the scalar 0.
inline RewriteStep apply_empty_h0(Diagram& d, NodeId n) {
  const RuleId R = RuleId::EmptyH0;
  detail::require(d.has_node(n) && d.kind(n).is_h0() && d.arity(n) == 0, R,
                  "node must be an arity-0 H(0) box");
  d.remove_node(n);
  d.multiply_scalar(Natural(0));
  return RewriteStep{R, Site{{n}, {}}, {}, Natural(0)};
}

/// Moves an arity-0 generator into the scalar.
inline RewriteStep apply_scalarize_arity0(Diagram& d, NodeId n) {
  const RuleId R = RuleId::ScalarizeArity0;
  detail::require(d.has_node(n) && d.arity(n) == 0 && !d.kind(n).is_boundary(), R,
                  "node must be an arity-0 generator");
  Natural w = arity0_weight(d.kind(n));
  d.remove_node(n);
  d.multiply_scalar(w);
  return RewriteStep{R, Site{{n}, {}}, {}, w};
}

// ---------------------------------------------------------------------------
// Variable elimination.

/// One wire leaving a clause box away from the eliminated spider. The box
/// observes the neighbor's bit XOR `flag`.
struct ElimLeg {
  EdgeId edge;
  NodeId neighbor;
  bool flag;
};

struct ElimBox {
  NodeId box;
  EdgeId spider_edge;
  std::vector<ElimLeg> outer;
};

/// A Z-spider all of whose legs go to distinct H(0) boxes. Boxes in `plain`
/// observe the spider's bit directly, boxes in `negated` its complement.
struct ElimSite {
  NodeId spider = 0;
  std::vector<ElimBox> plain;
  std::vector<ElimBox> negated;

  std::size_t m() const { return plain.size(); }
  std::size_t n() const { return negated.size(); }
  bool all_arity2() const {
    for (const auto* g : {&plain, &negated})
      for (const ElimBox& b : *g)
        if (b.outer.size() != 1) return false;
    return true;
  }
  /// Largest resolvent arity, before any tidying.
  std::size_t max_resolvent_arity() const {
    if (plain.empty() || negated.empty()) return 0;
    std::size_t a = 0, b = 0;
    for (const ElimBox& x : plain) a = std::max(a, x.outer.size());
    for (const ElimBox& x : negated) b = std::max(b, x.outer.size());
    return a + b;
  }
};

/// Checks the elimination precondition at `z`; nullopt if it does not hold.
inline std::optional<ElimSite> analyze_elimination(const Diagram& d, NodeId z) {
  if (!d.has_node(z) || !d.kind(z).is_z()) return std::nullopt;
  ElimSite site;
  site.spider = z;
  std::vector<NodeId> boxes;
  for (const HalfEdge& h : d.incident(z)) {
    const Edge& e = d.edge(h.edge);
    if (e.is_loop()) return std::nullopt;
    NodeId b = e.other(z);
    if (!d.kind(b).is_h0()) return std::nullopt;
    boxes.push_back(b);
  }
  std::vector<NodeId> sorted = boxes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  auto in_site = [&](NodeId n) {
    return n == z || std::binary_search(sorted.begin(), sorted.end(), n);
  };
  for (EdgeId ze : d.incident_edges(z)) {
    const Edge& e = d.edge(ze);
    ElimBox eb;
    eb.box = e.other(z);
    eb.spider_edge = ze;
    for (EdgeId oe : d.incident_edges(eb.box)) {
      if (oe == ze) continue;
      const Edge& o = d.edge(oe);
      if (o.is_loop()) return std::nullopt;
      NodeId nb = o.other(eb.box);
      if (in_site(nb)) return std::nullopt;
      eb.outer.push_back(ElimLeg{oe, nb, o.negated});
    }
    (e.negated ? site.negated : site.plain).push_back(std::move(eb));
  }
  return site;
}

namespace detail {

struct Attach {
  NodeId node;
  bool flag;
};

// Where new boxes hook onto an outer leg. A Z-spider neighbor is shared
// directly. Any other neighbor gets a fresh Z-spider spliced into the leg so
// the wire can be copied.
inline Attach attach_point(Diagram& d, const ElimBox& box, const ElimLeg& leg,
                           Site& produced) {
  if (d.kind(leg.neighbor).is_z()) return {leg.neighbor, leg.flag};
  NodeId copy = d.add_node(NodeKind::z());
  produced.nodes.push_back(copy);
  d.relink(leg.edge, half_at(d, leg.edge, box.box).side, copy);
  return {copy, false};
}

enum class Correction { None, HBox2, Gadget };

inline RewriteStep eliminate(Diagram& d, NodeId z, RuleId rule, bool need_arity2,
                             bool need_both_sides, Correction correction) {
  auto site = analyze_elimination(d, z);
  if (!site) mismatch(rule, "spider legs must go to distinct H(0) boxes");
  if (need_arity2 && !site->all_arity2()) mismatch(rule, "every box must have arity 2");
  if (need_both_sides && (site->m() == 0 || site->n() == 0)) {
    mismatch(rule, "spider must occur on both sides");
  }
  RewriteStep step{rule, Site{{z}, {}}, {}, Natural(1)};
  using LegSet = std::vector<Attach>;
  auto legs_of = [&](const ElimBox& b) {
    LegSet out;
    for (const ElimLeg& l : b.outer) out.push_back(attach_point(d, b, l, step.produced));
    return out;
  };
  std::vector<LegSet> P, N;
  for (const ElimBox& b : site->plain) P.push_back(legs_of(b));
  for (const ElimBox& b : site->negated) N.push_back(legs_of(b));

  auto new_box = [&](const Natural& param) {
    NodeId b = d.add_node(NodeKind::h(param));
    step.produced.nodes.push_back(b);
    return b;
  };
  auto wire = [&](NodeId from, NodeId to, bool flag) {
    step.produced.edges.push_back(d.add_edge(from, to, flag));
  };
  for (const LegSet& p : P) {
    for (const LegSet& q : N) {
      NodeId r = new_box(Natural(0));
      for (const Attach& a : p) wire(a.node, r, a.flag);
      for (const Attach& a : q) wire(a.node, r, a.flag);
    }
  }
  if (correction == Correction::HBox2) {
    NodeId h2 = new_box(Natural(2));
    for (const auto* g : {&P, &N})
      for (const LegSet& s : *g)
        for (const Attach& a : s) wire(a.node, h2, !a.flag);
  } else if (correction == Correction::Gadget) {
    NodeId w = d.add_node(NodeKind::z());
    step.produced.nodes.push_back(w);
    for (const auto* g : {&P, &N}) {
      for (const LegSet& s : *g) {
        NodeId c = new_box(Natural(0));
        wire(w, c, false);
        for (const Attach& a : s) wire(a.node, c, a.flag);
      }
    }
  }
  d.remove_node(z);
  for (const auto* g : {&site->plain, &site->negated})
    for (const ElimBox& b : *g) d.remove_node(b.box);
  return step;
}

}  // namespace detail

/// Counting elimination for 2-clauses: resolvents on every plain/negated
/// pair plus one H(2) box seeing the complement of every outer wire.
inline RewriteStep apply_elim_var_sharp2sat(Diagram& d, NodeId z) {
  return detail::eliminate(d, z, RuleId::ElimVarSharp2Sat, true, false,
                           detail::Correction::HBox2);
}

/// Boolean elimination for 2-clauses: resolvents only.
inline RewriteStep apply_elim_var_2sat(Diagram& d, NodeId z) {
  return detail::eliminate(d, z, RuleId::ElimVar2Sat, true, false,
                           detail::Correction::None);
}

/// Counting elimination for clauses of any arity. Besides the resolvents it
/// adds a fresh Z-spider w with one H(0) copy of every former clause, w in
/// place of the eliminated variable. That gadget evaluates to
/// 1 + [every former clause is satisfied without the variable], which is
/// the H(2) correction when all clauses have two literals.
inline RewriteStep apply_elim_var_sharpsat(Diagram& d, NodeId z) {
  return detail::eliminate(d, z, RuleId::ElimVarSharpSat, false, false,
                           detail::Correction::Gadget);
}

/// Davis-Putnam step: resolvents only.
inline RewriteStep apply_elim_var_sat(Diagram& d, NodeId z) {
  return detail::eliminate(d, z, RuleId::ElimVarSat, false, false,
                           detail::Correction::None);
}

/// Re-applies a recorded step at its site. Used to replay traces.
inline RewriteStep apply(Diagram& d, RuleId rule, const Site& s) {
  auto node = [&](std::size_t i) {
    if (i >= s.nodes.size()) detail::mismatch(rule, "site is missing a node id");
    return s.nodes[i];
  };
  auto edge = [&](std::size_t i) {
    if (i >= s.edges.size()) detail::mismatch(rule, "site is missing an edge id");
    return s.edges[i];
  };
  switch (rule) {
    case RuleId::FuseZ: return apply_fuse_z(d, node(0), node(1));
    case RuleId::FuseX: return apply_fuse_x(d, node(0), node(1));
    case RuleId::NotCopy: return apply_not_copy(d, node(0), edge(0));
    case RuleId::DoubleNegation: return apply_double_negation(d, node(0), edge(0));
    case RuleId::LoopZero:
    case RuleId::LoopTwo: {
      if (d.has_edge(edge(0)) && (d.edge(edge(0)).negated != (rule == RuleId::LoopZero)))
        detail::mismatch(rule, "loop flag does not match the rule");
      return apply_loop(d, edge(0));
    }
    case RuleId::BialgebraZX: return apply_bialgebra_zx(d, edge(0));
    case RuleId::Hopf: return apply_hopf(d, edge(0), edge(1));
    case RuleId::DedupParallelH0: return apply_dedup_parallel_h0(d, node(0), node(1));
    case RuleId::TautologyH0:
    case RuleId::MergeDuplicateLiteral: {
      if (d.has_edge(edge(0)) && d.has_edge(edge(1)) &&
          ((d.edge(edge(0)).negated != d.edge(edge(1)).negated) !=
           (rule == RuleId::TautologyH0)))
        detail::mismatch(rule, "leg flags do not match the rule");
      return apply_h0_selfloop(d, node(0), edge(0), edge(1));
    }
    case RuleId::MergeComplementaryH0: return apply_merge_complementary_h0(d, node(0), node(1));
    case RuleId::UnitPropagate: return apply_unit_propagate(d, node(0));
    case RuleId::EmptyH0: return apply_empty_h0(d, node(0));
    case RuleId::ScalarizeArity0: return apply_scalarize_arity0(d, node(0));
    case RuleId::ElimVarSharp2Sat: return apply_elim_var_sharp2sat(d, node(0));
    case RuleId::ElimVar2Sat: return apply_elim_var_2sat(d, node(0));
    case RuleId::ElimVarSharpSat: return apply_elim_var_sharpsat(d, node(0));
    case RuleId::ElimVarSat: return apply_elim_var_sat(d, node(0));
  }
  detail::mismatch(rule, "unknown rule");
}

/// Replays `trace` from `start`; throws if any step no longer matches or
/// creates different ids than recorded.
inline Diagram replay(Diagram start, const RewriteTrace& trace) {
  for (const RewriteStep& s : trace) {
    RewriteStep again = apply(start, s.rule, s.site);
    if (again.rule != s.rule || again.produced != s.produced ||
        again.scalar_factor != s.scalar_factor) {
      throw RewriteMismatch("replay diverged at " + std::string(rule_name(s.rule)));
    }
  }
  return start;
}

// ---------------------------------------------------------------------------
// Matchers. Each returns every site in ascending id order.

inline std::vector<Site> find_sites(const Diagram& d, RuleId rule) {
  std::vector<Site> out;
  const auto nodes = d.node_ids();
  switch (rule) {
    case RuleId::FuseZ:
    case RuleId::FuseX: {
      NodeType t = rule == RuleId::FuseZ ? NodeType::ZSpider : NodeType::XSpider;
      for (EdgeId e : d.edge_ids()) {
        const Edge& ed = d.edge(e);
        if (ed.is_loop() || d.kind(ed.u).type != t || d.kind(ed.v).type != t) continue;
        if (rule == RuleId::FuseZ && ed.negated) continue;
        out.push_back(Site{{std::min(ed.u, ed.v), std::max(ed.u, ed.v)}, {}});
      }
      std::sort(out.begin(), out.end(), [](const Site& a, const Site& b) { return a.nodes < b.nodes; });
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
    case RuleId::NotCopy:
    case RuleId::DoubleNegation: {
      NodeType t = rule == RuleId::NotCopy ? NodeType::ZSpider : NodeType::XSpider;
      for (NodeId n : nodes) {
        if (d.kind(n).type != t) continue;
        for (EdgeId e : d.incident_edges(n)) {
          const Edge& ed = d.edge(e);
          if (!ed.is_loop() && ed.negated) out.push_back(Site{{n}, {e}});
        }
      }
      break;
    }
    case RuleId::LoopZero:
    case RuleId::LoopTwo:
      for (EdgeId e : d.edge_ids()) {
        const Edge& ed = d.edge(e);
        const NodeKind& k = d.kind(ed.u);
        if (ed.is_loop() && (k.is_z() || k.is_x()) && ed.negated == (rule == RuleId::LoopZero))
          out.push_back(Site{{ed.u}, {e}});
      }
      break;
    case RuleId::BialgebraZX:
      for (EdgeId e : d.edge_ids()) {
        const Edge& ed = d.edge(e);
        if (ed.is_loop() || ed.negated) continue;
        NodeId z = ed.u, x = ed.v;
        if (d.kind(z).is_x()) std::swap(z, x);
        if (!d.kind(z).is_z() || !d.kind(x).is_x()) continue;
        if (detail::edges_between(d, z, x).size() != 1) continue;
        if (detail::has_loop(d, z) || detail::has_loop(d, x)) continue;
        out.push_back(Site{{z, x}, {e}});
      }
      break;
    case RuleId::Hopf:
      for (NodeId z : nodes) {
        if (!d.kind(z).is_z()) continue;
        std::map<NodeId, EdgeId> first;
        for (EdgeId e : d.incident_edges(z)) {
          const Edge& ed = d.edge(e);
          if (ed.is_loop()) continue;
          NodeId x = ed.other(z);
          if (!d.kind(x).is_x()) continue;
          auto [it, fresh] = first.emplace(x, e);
          if (!fresh) {
            out.push_back(Site{{z, x}, {it->second, e}});
            first.erase(it);
          }
        }
      }
      break;
    case RuleId::DedupParallelH0:
    case RuleId::MergeComplementaryH0: {
      std::vector<std::pair<NodeId, std::vector<std::pair<NodeId, bool>>>> boxes;
      for (NodeId n : nodes) {
        if (!d.kind(n).is_h0()) continue;
        if (auto s = detail::z_signature(d, n)) boxes.emplace_back(n, std::move(*s));
      }
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size(); ++j) {
          const auto& a = boxes[i].second;
          const auto& b = boxes[j].second;
          if (rule == RuleId::DedupParallelH0) {
            if (a == b) out.push_back(Site{{boxes[i].first, boxes[j].first}, {}});
            continue;
          }
          if (a.size() != b.size() || a.empty()) continue;
          bool distinct = true;
          for (std::size_t k = 1; k < a.size(); ++k)
            if (a[k].first == a[k - 1].first) distinct = false;
          if (!distinct) continue;
          std::size_t diffs = 0;
          bool ok = true;
          for (std::size_t k = 0; k < a.size() && ok; ++k) {
            if (a[k] == b[k]) continue;
            if (a[k].first != b[k].first) ok = false;
            ++diffs;
          }
          if (ok && diffs == 1) out.push_back(Site{{boxes[i].first, boxes[j].first}, {}});
        }
      }
      break;
    }
    case RuleId::TautologyH0:
    case RuleId::MergeDuplicateLiteral:
      for (NodeId b : nodes) {
        if (!d.kind(b).is_h()) continue;
        auto legs = d.incident_edges(b);
        bool found = false;
        for (std::size_t i = 0; i < legs.size() && !found; ++i) {
          const Edge& a = d.edge(legs[i]);
          if (a.is_loop() || !d.kind(a.other(b)).is_z()) continue;
          for (std::size_t j = i + 1; j < legs.size() && !found; ++j) {
            const Edge& c = d.edge(legs[j]);
            if (c.is_loop() || c.other(b) != a.other(b)) continue;
            if ((a.negated != c.negated) != (rule == RuleId::TautologyH0)) continue;
            out.push_back(Site{{b}, {legs[i], legs[j]}});
            found = true;
          }
        }
      }
      break;
    case RuleId::UnitPropagate:
      for (NodeId n : nodes) {
        const NodeKind& k = d.kind(n);
        if (d.arity(n) != 1 || !(k.is_h0() || k.is_x())) continue;
        const Edge& e = d.edge(d.incident(n)[0].edge);
        if (e.is_loop() || !d.kind(e.other(n)).is_z()) continue;
        out.push_back(Site{{n}, {}});
      }
      break;
    case RuleId::EmptyH0:
      for (NodeId n : nodes)
        if (d.kind(n).is_h0() && d.arity(n) == 0) out.push_back(Site{{n}, {}});
      break;
    case RuleId::ScalarizeArity0:
      for (NodeId n : nodes)
        if (d.arity(n) == 0 && !d.kind(n).is_boundary()) out.push_back(Site{{n}, {}});
      break;
    case RuleId::ElimVarSharp2Sat:
    case RuleId::ElimVar2Sat:
    case RuleId::ElimVarSharpSat:
    case RuleId::ElimVarSat:
      for (NodeId n : nodes) {
        auto s = analyze_elimination(d, n);
        if (!s) continue;
        bool two = rule == RuleId::ElimVarSharp2Sat || rule == RuleId::ElimVar2Sat;
        if (two && !s->all_arity2()) continue;
        out.push_back(Site{{n}, {}});
      }
      break;
  }
  return out;
}

}  // namespace zhsat
