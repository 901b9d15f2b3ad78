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

// JSON exchange formats. Naturals are always decimal strings.
//
//   diagram: {"nodes":[{"id":0,"kind":"zspider"},
//                      {"id":1,"kind":"hbox","param":"2"},
//                      {"id":2,"kind":"xspider","parity":1}, ...],
//             "edges":[{"id":0,"u":0,"v":1,"negated":true}, ...],
//             "boundary":[...], "scalar":"1",
//             "next_node":3, "next_edge":1}
// next_node / next_edge are the next ids the diagram will issue.
//   step:    {"rule":"FuseZ","site":{"nodes":[..],"edges":[..]},
//             "produced":{"nodes":[..],"edges":[..]},"scalar":"1"}

#pragma once

#include <string>

#include "json.hpp"
#include "zhsat/diagram.hpp"
#include "zhsat/errors.hpp"
#include "zhsat/rewrite.hpp"

namespace zhsat {

using Json = nlohmann::ordered_json;

inline Json to_json(const Diagram& d) {
  Json nodes = Json::array();
  for (NodeId n : d.node_ids()) {
    const NodeKind& k = d.kind(n);
    Json j{{"id", n}};
    switch (k.type) {
      case NodeType::ZSpider: j["kind"] = "zspider"; break;
      case NodeType::HBox:
        j["kind"] = "hbox";
        j["param"] = k.param.str();
        break;
      case NodeType::XSpider:
        j["kind"] = "xspider";
        j["parity"] = k.parity ? 1 : 0;
        break;
      case NodeType::Boundary: j["kind"] = "boundary"; break;
    }
    nodes.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (EdgeId e : d.edge_ids()) {
    const Edge& ed = d.edge(e);
    edges.push_back(Json{{"id", e}, {"u", ed.u}, {"v", ed.v}, {"negated", ed.negated}});
  }
  return Json{{"nodes", std::move(nodes)},
              {"edges", std::move(edges)},
              {"boundary", d.boundary()},
              {"scalar", d.scalar().str()},
              {"next_node", d.node_capacity()},
              {"next_edge", d.edge_capacity()}};
}

/// Inverse of to_json. Ids are reproduced exactly, so a serialized diagram
/// can be the start of a trace replay.
inline Diagram diagram_from_json(const Json& j) {
  try {
    Diagram d;
    std::vector<std::pair<NodeId, NodeKind>> nodes;
    for (const Json& n : j.at("nodes")) {
      const std::string kind = n.at("kind").get<std::string>();
      NodeKind k;
      if (kind == "zspider") {
        k = NodeKind::z();
      } else if (kind == "hbox") {
        k = NodeKind::h(Natural::from_string(n.at("param").get<std::string>()));
      } else if (kind == "xspider") {
        k = NodeKind::x(n.at("parity").get<int>() != 0);
      } else if (kind == "boundary") {
        k = NodeKind::boundary();
      } else {
        throw PreconditionError("unknown node kind '" + kind + "'");
      }
      nodes.emplace_back(n.at("id").get<NodeId>(), std::move(k));
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<NodeId> holes;
    for (auto& [id, k] : nodes) {
      if (d.node_capacity() > id) throw PreconditionError("duplicate node id");
      while (d.node_capacity() < id) holes.push_back(d.add_node(NodeKind::z()));
      d.add_node(std::move(k));
    }
    const std::size_t next_node = j.value("next_node", d.node_capacity());
    while (d.node_capacity() < next_node) holes.push_back(d.add_node(NodeKind::z()));
    struct E {
      EdgeId id;
      NodeId u, v;
      bool neg;
    };
    std::vector<E> edges;
    for (const Json& e : j.at("edges"))
      edges.push_back(E{e.at("id").get<EdgeId>(), e.at("u").get<NodeId>(),
                        e.at("v").get<NodeId>(), e.at("negated").get<bool>()});
    std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) { return a.id < b.id; });
    std::vector<EdgeId> dead;
    // Gaps in the edge ids are filled with throwaway self-loops on node 0.
    const NodeId anchor = 0;
    for (const E& e : edges) {
      if (d.edge_capacity() > e.id) throw PreconditionError("duplicate edge id");
      while (d.edge_capacity() < e.id) dead.push_back(d.add_edge(anchor, anchor));
      d.add_edge(e.u, e.v, e.neg);
    }
    const std::size_t next_edge = j.value("next_edge", d.edge_capacity());
    while (d.edge_capacity() < next_edge) dead.push_back(d.add_edge(anchor, anchor));
    for (EdgeId e : dead) d.remove_edge(e);
    for (NodeId h : holes) d.remove_node(h);
    d.set_boundary(j.at("boundary").get<std::vector<NodeId>>());
    d.set_scalar(Natural::from_string(j.at("scalar").get<std::string>()));
    return d;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed diagram JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw PreconditionError(std::string("malformed diagram JSON: ") + e.what());
  }
}

inline Json to_json(const Site& s) { return Json{{"nodes", s.nodes}, {"edges", s.edges}}; }

inline Json to_json(const RewriteStep& s) {
  return Json{{"rule", rule_name(s.rule)},
              {"site", to_json(s.site)},
              {"produced", to_json(s.produced)},
              {"scalar", s.scalar_factor.str()}};
}

inline RewriteStep step_from_json(const Json& j) {
  try {
    auto rule = rule_from_name(j.at("rule").get<std::string>());
    if (!rule) throw PreconditionError("unknown rule in trace");
    auto site = [](const Json& s) {
      return Site{s.at("nodes").get<std::vector<NodeId>>(),
                  s.at("edges").get<std::vector<EdgeId>>()};
    };
    return RewriteStep{*rule, site(j.at("site")), site(j.at("produced")),
                       Natural::from_string(j.at("scalar").get<std::string>())};
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed trace JSON: ") + e.what());
  }
}

}  // namespace zhsat
