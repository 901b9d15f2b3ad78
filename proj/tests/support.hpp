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

// Fixtures shared by the test binaries.

#pragma once

#include <cstdint>
#include <string>

#include "zhsat/cnf.hpp"
#include "zhsat/contract.hpp"
#include "zhsat/diagram.hpp"

#ifndef ZHSAT_TEST_DATA
#define ZHSAT_TEST_DATA "tests/data"
#endif

namespace zhsat::testing {

inline std::string data_path(const std::string& name) {
  return std::string(ZHSAT_TEST_DATA) + "/" + name;
}

/// Six variables, four clauses, 37 models.
inline Formula example6() {
  return Formula{6,
                 {or_clause({neg(1), pos(2), neg(3), pos(4)}), or_clause({pos(1), neg(3), pos(5)}),
                  or_clause({neg(3), pos(5), pos(6)}), or_clause({pos(2), neg(6)})}};
}

inline Natural nat_value(const Diagram& d) {
  return contract_scalar(d, Carrier::Nat, kUnlimitedWires);
}
inline bool bool_value(const Diagram& d) {
  return !contract_scalar(d, Carrier::Bool, kUnlimitedWires).is_zero();
}

/// A Z-spider with m plain and n negated legs to arity-2 H(0) boxes, each box
/// with an outer wire to a boundary. Boundary order: the m plain boxes first.
inline Diagram elimination_lhs(std::size_t m, std::size_t n, NodeId* spider = nullptr) {
  Diagram d;
  NodeId z = d.add_node(NodeKind::z());
  for (std::size_t i = 0; i < m + n; ++i) {
    NodeId b = d.add_node(NodeKind::h(Natural(0)));
    d.add_edge(z, b, i >= m);
    d.add_edge(b, d.add_boundary());
  }
  if (spider) *spider = z;
  return d;
}

/// Closed form of the elimination gadget: 2 when both groups of outer bits
/// are all zero, 1 when exactly one group is, 0 otherwise.
inline ValueTensor elimination_tensor(std::size_t m, std::size_t n) {
  ValueTensor t(m + n);
  for (std::size_t idx = 0; idx < t.coefficients.size(); ++idx) {
    auto bits = ValueTensor::bits_of(idx, m + n);
    bool y0 = true, z0 = true;
    for (std::size_t i = 0; i < m; ++i) y0 = y0 && !bits[i];
    for (std::size_t i = m; i < m + n; ++i) z0 = z0 && !bits[i];
    t.coefficients[idx] = Natural(static_cast<std::uint64_t>(y0) + static_cast<std::uint64_t>(z0));
  }
  return t;
}

}  // namespace zhsat::testing
