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

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zhsat/errors.hpp"
#include "zhsat/semiring.hpp"

namespace zhsat {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class NodeType : std::uint8_t { ZSpider, HBox, XSpider, Boundary };

/// Generator of a NatZH diagram.
///
///  - ZSpider: Kronecker delta on its legs (arity 0 evaluates to 2).
///  - HBox(param): all ones except param at the all-ones index.
///  - XSpider(parity): 1 when the legs XOR to `parity`; parity 1 is the
///    NOT-spider used for XOR constraints.
///  - Boundary: an open wire end.
struct NodeKind {
  NodeType type = NodeType::ZSpider;
  Natural param;        // HBox only
  bool parity = false;  // XSpider only

  static NodeKind z() { return {NodeType::ZSpider, Natural(0), false}; }
  static NodeKind h(Natural param) {
    return {NodeType::HBox, std::move(param), false};
  }
  static NodeKind x(bool parity) { return {NodeType::XSpider, Natural(0), parity}; }
  static NodeKind boundary() { return {NodeType::Boundary, Natural(0), false}; }

  bool is_z() const { return type == NodeType::ZSpider; }
  bool is_h() const { return type == NodeType::HBox; }
  bool is_h0() const { return type == NodeType::HBox && param.is_zero(); }
  bool is_x() const { return type == NodeType::XSpider; }
  bool is_boundary() const { return type == NodeType::Boundary; }

  friend bool operator==(const NodeKind& a, const NodeKind& b) {
    if (a.type != b.type) return false;
    if (a.type == NodeType::HBox) return a.param == b.param;
    if (a.type == NodeType::XSpider) return a.parity == b.parity;
    return true;
  }
};

inline std::string to_string(const NodeKind& k) {
  switch (k.type) {
    case NodeType::ZSpider: return "Z";
    case NodeType::HBox: return "H(" + k.param.str() + ")";
    case NodeType::XSpider: return k.parity ? "X(1)" : "X(0)";
    case NodeType::Boundary: return "B";
  }
  return "?";
}

/// A wire carrying one bit v. Endpoint `u` observes v and endpoint `v`
/// observes v XOR `negated`. Self-loops and parallel edges are allowed.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  bool negated = false;

  bool is_loop() const { return u == v; }
  NodeId other(NodeId n) const { return n == u ? v : u; }
};

/// One end of an edge as seen from a node. side 0 is Edge::u, side 1 is
/// Edge::v. A self-loop contributes two half-edges to its node.
struct HalfEdge {
  EdgeId edge;
  std::uint8_t side;
};

/// Open multigraph of NatZH generators with a scalar accumulator.
///
/// Node and edge ids are stable and never reused, so a rewrite trace can
/// name them. Removal is O(1) per incident edge.
class Diagram {
 public:
  Diagram() = default;

  NodeId add_node(NodeKind kind) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    ++type_count_[static_cast<std::size_t>(kind.type)];
    nodes_.push_back(NodeSlot{std::move(kind), {}, true});
    ++live_nodes_;
    return id;
  }

  /// Adds a Boundary node and appends it to the boundary list.
  NodeId add_boundary() {
    NodeId id = add_node(NodeKind::boundary());
    boundary_.push_back(id);
    return id;
  }

  EdgeId add_edge(NodeId u, NodeId v, bool negated = false) {
    check_node(u);
    check_node(v);
    EdgeId id = static_cast<EdgeId>(edges_.size());
    EdgeSlot slot;
    slot.edge = Edge{u, v, negated};
    slot.alive = true;
    slot.pos[0] = static_cast<std::uint32_t>(nodes_[u].inc.size());
    nodes_[u].inc.push_back(HalfEdge{id, 0});
    slot.pos[1] = static_cast<std::uint32_t>(nodes_[v].inc.size());
    nodes_[v].inc.push_back(HalfEdge{id, 1});
    edges_.push_back(slot);
    ++live_edges_;
    return id;
  }

  void remove_edge(EdgeId e) {
    check_edge(e);
    EdgeSlot& s = edges_[e];
    detach(e, 0);
    detach(e, 1);
    s.alive = false;
    --live_edges_;
  }

  /// Removes the node together with its incident edges. Boundary nodes are
  /// also dropped from the boundary list.
  void remove_node(NodeId n) {
    check_node(n);
    while (!nodes_[n].inc.empty()) remove_edge(nodes_[n].inc.back().edge);
    if (nodes_[n].kind.is_boundary()) {
      boundary_.erase(std::remove(boundary_.begin(), boundary_.end(), n),
                      boundary_.end());
    }
    --type_count_[static_cast<std::size_t>(nodes_[n].kind.type)];
    nodes_[n].alive = false;
    nodes_[n].inc.clear();
    nodes_[n].inc.shrink_to_fit();
    --live_nodes_;
  }

  /// Moves one end of edge `e` to node `to`, keeping its side and flag.
  void relink(EdgeId e, std::uint8_t side, NodeId to) {
    check_edge(e);
    check_node(to);
    detach(e, side);
    EdgeSlot& s = edges_[e];
    (side == 0 ? s.edge.u : s.edge.v) = to;
    s.pos[side] = static_cast<std::uint32_t>(nodes_[to].inc.size());
    nodes_[to].inc.push_back(HalfEdge{e, side});
  }

  bool has_node(NodeId n) const { return n < nodes_.size() && nodes_[n].alive; }
  bool has_edge(EdgeId e) const { return e < edges_.size() && edges_[e].alive; }

  const NodeKind& kind(NodeId n) const {
    check_node(n);
    return nodes_[n].kind;
  }
  void set_kind(NodeId n, NodeKind k) {
    check_node(n);
    if (nodes_[n].kind.is_boundary() != k.is_boundary()) {
      throw PreconditionError("set_kind cannot change boundary status");
    }
    --type_count_[static_cast<std::size_t>(nodes_[n].kind.type)];
    ++type_count_[static_cast<std::size_t>(k.type)];
    nodes_[n].kind = std::move(k);
  }
  void flip_parity(NodeId n) {
    check_node(n);
    nodes_[n].kind.parity = !nodes_[n].kind.parity;
  }

  const Edge& edge(EdgeId e) const {
    check_edge(e);
    return edges_[e].edge;
  }
  void set_negated(EdgeId e, bool negated) {
    check_edge(e);
    edges_[e].edge.negated = negated;
  }
  void flip_negation(EdgeId e) {
    check_edge(e);
    edges_[e].edge.negated = !edges_[e].edge.negated;
  }

  std::span<const HalfEdge> incident(NodeId n) const {
    check_node(n);
    return nodes_[n].inc;
  }
  std::size_t arity(NodeId n) const { return incident(n).size(); }

  /// Edge ids incident to `n`, self-loops listed once, in ascending order.
  std::vector<EdgeId> incident_edges(NodeId n) const {
    std::vector<EdgeId> out;
    out.reserve(arity(n));
    for (const HalfEdge& h : incident(n)) out.push_back(h.edge);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Live node ids in ascending order.
  std::vector<NodeId> node_ids() const {
    std::vector<NodeId> out;
    out.reserve(live_nodes_);
    for (NodeId i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].alive) out.push_back(i);
    return out;
  }
  std::vector<EdgeId> edge_ids() const {
    std::vector<EdgeId> out;
    out.reserve(live_edges_);
    for (EdgeId i = 0; i < edges_.size(); ++i)
      if (edges_[i].alive) out.push_back(i);
    return out;
  }

  std::size_t node_count() const { return live_nodes_; }
  std::size_t edge_count() const { return live_edges_; }
  /// One past the largest id ever issued; sizes id-indexed scratch arrays.
  std::size_t node_capacity() const { return nodes_.size(); }
  std::size_t edge_capacity() const { return edges_.size(); }

  const std::vector<NodeId>& boundary() const { return boundary_; }
  /// Replaces the boundary list verbatim. Used by deserialization; validate()
  /// reports inconsistencies.
  void set_boundary(std::vector<NodeId> b) { boundary_ = std::move(b); }
  bool is_closed() const { return boundary_.empty(); }

  const Natural& scalar() const { return scalar_; }
  void set_scalar(Natural s) { scalar_ = std::move(s); }
  void multiply_scalar(const Natural& f) { scalar_ *= f; }

  /// Counts of live nodes by type.
  std::size_t count(NodeType t) const {
    return type_count_[static_cast<std::size_t>(t)];
  }

  /// The XOR of the bits observed at the two ends of `e` is its flag; this
  /// returns the flag as seen from `n` (same value either way).
  bool negated(EdgeId e) const { return edge(e).negated; }

  friend bool operator==(const Diagram& a, const Diagram& b) {
    if (a.scalar_ != b.scalar_ || a.boundary_ != b.boundary_) return false;
    if (a.node_ids() != b.node_ids() || a.edge_ids() != b.edge_ids())
      return false;
    for (NodeId n : a.node_ids())
      if (!(a.kind(n) == b.kind(n))) return false;
    for (EdgeId e : a.edge_ids()) {
      const Edge& x = a.edge(e);
      const Edge& y = b.edge(e);
      if (x.u != y.u || x.v != y.v || x.negated != y.negated) return false;
    }
    return true;
  }

 private:
  struct NodeSlot {
    NodeKind kind;
    std::vector<HalfEdge> inc;
    bool alive = false;
  };
  struct EdgeSlot {
    Edge edge;
    std::uint32_t pos[2] = {0, 0};
    bool alive = false;
  };

  void check_node(NodeId n) const {
    if (!has_node(n)) throw PreconditionError("no node " + std::to_string(n));
  }
  void check_edge(EdgeId e) const {
    if (!has_edge(e)) throw PreconditionError("no edge " + std::to_string(e));
  }

  // Removes the half-edge (e, side) from its node's incidence list.
  void detach(EdgeId e, std::uint8_t side) {
    EdgeSlot& s = edges_[e];
    NodeId n = side == 0 ? s.edge.u : s.edge.v;
    auto& inc = nodes_[n].inc;
    std::uint32_t p = s.pos[side];
    assert(p < inc.size() && inc[p].edge == e && inc[p].side == side);
    HalfEdge last = inc.back();
    inc[p] = last;
    edges_[last.edge].pos[last.side] = p;
    inc.pop_back();
  }

  std::vector<NodeSlot> nodes_;
  std::vector<EdgeSlot> edges_;
  std::vector<NodeId> boundary_;
  Natural scalar_{1};
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;
  std::array<std::size_t, 4> type_count_{};
};

/// Bit observed by the node at half-edge `h` when the edge carries `value`.
inline bool observed(const Diagram& d, HalfEdge h, bool value) {
  return h.side == 0 ? value : (value != d.edge(h.edge).negated);
}

/// Tensor entry of a single generator on the given observed bits.
inline Natural node_weight(const NodeKind& kind, std::span<const bool> bits) {
  switch (kind.type) {
    case NodeType::ZSpider: {
      if (bits.empty()) return Natural(2);
      bool first = bits[0];
      for (bool b : bits)
        if (b != first) return Natural(0);
      return Natural(1);
    }
    case NodeType::HBox: {
      for (bool b : bits)
        if (!b) return Natural(1);
      return kind.param;
    }
    case NodeType::XSpider: {
      bool x = false;
      for (bool b : bits) x = x != b;
      return Natural(x == kind.parity ? 1 : 0);
    }
    case NodeType::Boundary:
      if (bits.size() != 1) {
        throw PreconditionError("boundary node observes exactly one bit, got " +
                                std::to_string(bits.size()));
      }
      return Natural(1);
  }
  return Natural(0);
}

/// As above, checking the bit count against the node's arity in `d`.
inline Natural node_weight(const Diagram& d, NodeId n,
                           std::span<const bool> bits) {
  if (bits.size() != d.arity(n)) {
    throw PreconditionError("node " + std::to_string(n) + " has arity " +
                            std::to_string(d.arity(n)) + ", got " +
                            std::to_string(bits.size()) + " bits");
  }
  return node_weight(d.kind(n), bits);
}

/// Weight of an arity-0 node: Z -> 2, H(a) -> a, X(0) -> 1, X(1) -> 0.
inline Natural arity0_weight(const NodeKind& kind) {
  return node_weight(kind, std::span<const bool>{});
}

/// Well-formedness findings; empty means valid.
inline std::vector<std::string> validate(const Diagram& d) {
  std::vector<std::string> report;
  std::vector<int> seen(d.node_capacity(), 0);
  for (NodeId b : d.boundary()) {
    if (!d.has_node(b)) {
      report.push_back("boundary list names missing node " + std::to_string(b));
      continue;
    }
    if (!d.kind(b).is_boundary()) {
      report.push_back("boundary list names non-boundary node " +
                       std::to_string(b));
    }
    if (++seen[b] == 2) {
      report.push_back("boundary node " + std::to_string(b) +
                       " listed more than once");
    }
  }
  for (NodeId n : d.node_ids()) {
    if (!d.kind(n).is_boundary()) continue;
    if (d.arity(n) != 1) {
      report.push_back("boundary node " + std::to_string(n) + " has " +
                       std::to_string(d.arity(n)) + " incident edge ends");
    }
    if (seen[n] == 0) {
      report.push_back("boundary node " + std::to_string(n) +
                       " missing from boundary list");
    }
  }
  return report;
}

}  // namespace zhsat
