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

// Reference contraction: sums the product of node weights over every
// assignment of bits to edges. This is the semantic oracle that rewrites are
// checked against, not a solving method.

#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "zhsat/diagram.hpp"
#include "zhsat/errors.hpp"
#include "zhsat/semiring.hpp"

namespace zhsat {

inline constexpr std::size_t kDefaultWireLimit = 24;
inline constexpr std::size_t kUnlimitedWires =
    std::numeric_limits<std::size_t>::max();

/// Coefficient table of an open diagram. Entry index packs the boundary bits
/// with boundary position 0 as the most significant bit.
struct ValueTensor {
  std::size_t arity = 0;
  std::vector<Natural> coefficients;

  ValueTensor() : coefficients(1) {}
  explicit ValueTensor(std::size_t arity_)
      : arity(arity_), coefficients(std::size_t{1} << arity_) {}

  static std::size_t index_of(std::span<const bool> bits) {
    std::size_t idx = 0;
    for (bool b : bits) idx = (idx << 1) | (b ? 1 : 0);
    return idx;
  }
  static std::vector<bool> bits_of(std::size_t index, std::size_t arity) {
    std::vector<bool> bits(arity);
    for (std::size_t i = 0; i < arity; ++i)
      bits[i] = (index >> (arity - 1 - i)) & 1;
    return bits;
  }

  const Natural& at(std::span<const bool> bits) const {
    if (bits.size() != arity) throw PreconditionError("tensor index arity mismatch");
    return coefficients[index_of(bits)];
  }
  const Natural& scalar() const { return coefficients.at(0); }

  /// Entrywise projection to {0, 1}.
  ValueTensor projected() const {
    ValueTensor t = *this;
    for (Natural& c : t.coefficients) c = Natural(c.is_zero() ? 0 : 1);
    return t;
  }

  friend bool operator==(const ValueTensor&, const ValueTensor&) = default;
};

namespace detail {

// Depth-first enumeration of edge values. Z-spiders and boundary nodes fix
// the value of every later leg once one leg is assigned, which prunes the
// search without changing the sum.
template <class S>
class Contractor {
 public:
  using V = typename S::value_type;

  explicit Contractor(const Diagram& d) : d_(d) {
    order_edges();
    required_.assign(d.node_capacity(), -1);
    value_.assign(d.edge_capacity(), false);
  }

  V run(std::span<const bool> boundary_bits) {
    std::fill(required_.begin(), required_.end(), -1);
    const auto& boundary = d_.boundary();
    for (std::size_t i = 0; i < boundary.size(); ++i)
      required_[boundary[i]] = boundary_bits[i] ? 1 : 0;
    V base = S::embed(d_.scalar());
    if (S::is_zero(base)) return base;
    for (NodeId n : isolated_) base = S::mul(base, S::embed(arity0_weight(d_.kind(n))));
    if (S::is_zero(base)) return base;
    return S::mul(base, recurse(0));
  }

 private:
  bool forcing(NodeId n) const {
    const NodeKind& k = d_.kind(n);
    return k.is_boundary() || k.is_z();
  }

  void order_edges() {
    std::vector<char> node_seen(d_.node_capacity(), 0);
    std::vector<char> edge_seen(d_.edge_capacity(), 0);
    std::vector<NodeId> queue;
    for (NodeId start : d_.node_ids()) {
      if (node_seen[start]) continue;
      if (d_.arity(start) == 0) {
        node_seen[start] = 1;
        isolated_.push_back(start);
        continue;
      }
      queue.clear();
      queue.push_back(start);
      node_seen[start] = 1;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        NodeId n = queue[qi];
        for (const HalfEdge& h : d_.incident(n)) {
          if (!edge_seen[h.edge]) {
            edge_seen[h.edge] = 1;
            order_.push_back(h.edge);
          }
          NodeId o = d_.edge(h.edge).other(n);
          if (!node_seen[o]) {
            node_seen[o] = 1;
            queue.push_back(o);
          }
        }
      }
    }
    // Each node is weighed once the last of its edges is assigned.
    std::vector<std::size_t> pos(d_.edge_capacity(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
    completes_.assign(order_.size(), {});
    for (NodeId n : d_.node_ids()) {
      if (d_.arity(n) == 0) continue;
      std::size_t mx = 0;
      for (const HalfEdge& h : d_.incident(n)) mx = std::max(mx, pos[h.edge]);
      completes_[mx].push_back(n);
      max_arity_ = std::max(max_arity_, d_.arity(n));
    }
    bits_.reset(new bool[max_arity_ + 1]);
  }

  V recurse(std::size_t i) {
    if (i == order_.size()) return S::one();
    EdgeId e = order_[i];
    const Edge& ed = d_.edge(e);
    V total = S::zero();
    for (int b = 0; b < 2; ++b) {
      bool val = b == 1;
      value_[e] = val;
      NodeId set_nodes[2];
      int nset = 0;
      bool ok = true;
      for (std::uint8_t side = 0; side < 2 && ok; ++side) {
        NodeId n = side == 0 ? ed.u : ed.v;
        if (!forcing(n)) continue;
        int obs = (side == 0 ? val : (val != ed.negated)) ? 1 : 0;
        if (required_[n] < 0) {
          required_[n] = obs;
          set_nodes[nset++] = n;
        } else if (required_[n] != obs) {
          ok = false;
        }
      }
      if (ok) {
        V w = S::one();
        for (NodeId n : completes_[i]) {
          if (forcing(n)) continue;
          auto inc = d_.incident(n);
          for (std::size_t j = 0; j < inc.size(); ++j)
            bits_[j] = observed(d_, inc[j], value_[inc[j].edge]);
          w = S::mul(w, S::embed(node_weight(
                            d_.kind(n), std::span<const bool>(bits_.get(), inc.size()))));
          if (S::is_zero(w)) break;
        }
        if (!S::is_zero(w)) total = S::add(total, S::mul(w, recurse(i + 1)));
      }
      for (int k = 0; k < nset; ++k) required_[set_nodes[k]] = -1;
      if constexpr (S::carrier == Carrier::Bool) {
        if (total.value) break;  // OR is saturated
      }
    }
    return total;
  }

  const Diagram& d_;
  std::vector<EdgeId> order_;
  std::vector<NodeId> isolated_;
  std::vector<std::vector<NodeId>> completes_;
  std::vector<int> required_;
  std::vector<bool> value_;
  std::unique_ptr<bool[]> bits_;
  std::size_t max_arity_ = 0;
};

template <class S>
ValueTensor contract_in(const Diagram& d) {
  const std::size_t k = d.boundary().size();
  ValueTensor t(k);
  Contractor<S> c(d);
  for (std::size_t idx = 0; idx < t.coefficients.size(); ++idx) {
    std::vector<bool> bits = ValueTensor::bits_of(idx, k);
    bool buf[64];
    for (std::size_t i = 0; i < k; ++i) buf[i] = bits[i];
    t.coefficients[idx] = S::to_natural(c.run(std::span<const bool>(buf, k)));
  }
  return t;
}

}  // namespace detail

/// Number of wires contract() has to enumerate.
inline std::size_t wire_count(const Diagram& d) { return d.edge_count(); }

/// Exact value tensor of `d` over the carrier. Over Bool the arithmetic is
/// OR/AND throughout, so comparing with the projected Nat result is a real
/// check of the homomorphism.
inline ValueTensor contract(const Diagram& d, Carrier carrier,
                            std::size_t wire_limit = kDefaultWireLimit) {
  const std::size_t wires = wire_count(d);
  if (wires > wire_limit) {
    throw ResourceLimitError(
        "diagram too large for reference contraction; use a strategy", wires,
        wire_limit);
  }
  if (d.boundary().size() > 20) {
    throw ResourceLimitError("too many boundary wires", d.boundary().size(), 20);
  }
  for (NodeId b : d.boundary()) {
    if (!d.has_node(b) || d.arity(b) != 1)
      throw PreconditionError("malformed boundary node " + std::to_string(b));
  }
  return carrier == Carrier::Nat ? detail::contract_in<NatSemiring>(d)
                                 : detail::contract_in<BoolSemiring>(d);
}

/// Scalar of a closed diagram.
inline Natural contract_scalar(const Diagram& d, Carrier carrier,
                               std::size_t wire_limit = kDefaultWireLimit) {
  if (!d.is_closed()) throw PreconditionError("diagram has open wires");
  return contract(d, carrier, wire_limit).scalar();
}

}  // namespace zhsat
