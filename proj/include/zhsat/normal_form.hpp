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

#include <vector>

#include "zhsat/contract.hpp"
#include "zhsat/diagram.hpp"

namespace zhsat {

/// Condensed ZH normal form of `t`: one Z-spider per index, each copying its
/// boundary wire, and one H(a) box per coefficient a != 1. The box for index
/// x is reached through a NOT on every leg where x has a 0, so it sees all
/// ones exactly at x.
inline Diagram build_normal_form(const ValueTensor& t) {
  if (t.coefficients.size() != (std::size_t{1} << t.arity)) {
    throw PreconditionError("tensor must have 2^arity coefficients");
  }
  Diagram d;
  std::vector<NodeId> copies;
  copies.reserve(t.arity);
  for (std::size_t i = 0; i < t.arity; ++i) {
    NodeId b = d.add_boundary();
    NodeId z = d.add_node(NodeKind::z());
    d.add_edge(b, z);
    copies.push_back(z);
  }
  for (std::size_t idx = 0; idx < t.coefficients.size(); ++idx) {
    const Natural& a = t.coefficients[idx];
    if (a.is_one()) continue;
    NodeId box = d.add_node(NodeKind::h(a));
    std::vector<bool> bits = ValueTensor::bits_of(idx, t.arity);
    for (std::size_t i = 0; i < t.arity; ++i) d.add_edge(copies[i], box, !bits[i]);
  }
  return d;
}

/// Fixes boundary wire `boundary_index` to the computational basis state
/// |bit>. The boundary node becomes an arity-1 X-spider with parity `bit`,
/// whose weight is 1 exactly when its wire carries `bit`; later boundary
/// positions shift down by one.
inline Diagram plug_basis(Diagram d, std::size_t boundary_index, bool bit) {
  if (boundary_index >= d.boundary().size()) {
    throw PreconditionError("boundary index " + std::to_string(boundary_index) +
                            " out of range (arity " +
                            std::to_string(d.boundary().size()) + ")");
  }
  NodeId b = d.boundary()[boundary_index];
  if (d.arity(b) != 1) throw PreconditionError("malformed boundary node");
  HalfEdge h = d.incident(b)[0];
  NodeId state = d.add_node(NodeKind::x(bit));
  d.relink(h.edge, h.side, state);
  d.remove_node(b);
  return d;
}

}  // namespace zhsat
