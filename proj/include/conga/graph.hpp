// Copyright 2026 The conga Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conga/error.hpp"
#include "conga/latency.hpp"

namespace conga {

using NodeId = std::string;
using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  NodeId from;
  NodeId to;
  std::string label;
  LatencyFunction latency;

  bool operator==(const Edge&) const = default;
};

/// A source-to-sink walk, stored as indices into InfoGraph::edges().
struct Path {
  std::vector<EdgeIndex> edges;

  bool operator==(const Path&) const = default;
};

enum class GraphIssue {
  kOk,
  kEmptyLabel,
  kDuplicateNode,
  kEmptyGraph,
  kSelfLoop,
  kDuplicateEdgeLabel,
  kCycleDetected,
  kUnreachableNode,
  kMultipleSources,
  kSourceMismatch,
  kMultipleSinks,
  kSinkMismatch,
};

constexpr std::string_view to_string(GraphIssue issue) {
  switch (issue) {
    case GraphIssue::kOk: return "OK";
    case GraphIssue::kEmptyLabel: return "EmptyLabel";
    case GraphIssue::kDuplicateNode: return "DuplicateNode";
    case GraphIssue::kEmptyGraph: return "EmptyGraph";
    case GraphIssue::kSelfLoop: return "SelfLoop";
    case GraphIssue::kDuplicateEdgeLabel: return "DuplicateEdgeLabel";
    case GraphIssue::kCycleDetected: return "CycleDetected";
    case GraphIssue::kUnreachableNode: return "UnreachableNode";
    case GraphIssue::kMultipleSources: return "MultipleSources";
    case GraphIssue::kSourceMismatch: return "SourceMismatch";
    case GraphIssue::kMultipleSinks: return "MultipleSinks";
    case GraphIssue::kSinkMismatch: return "SinkMismatch";
  }
  return "Unknown";
}

/// Outcome of validate_graph. `subject` names the offending node or edge.
struct ValidationResult {
  GraphIssue issue = GraphIssue::kOk;
  std::string subject;
  std::string message;

  bool ok() const { return issue == GraphIssue::kOk; }
};

/// Information graph of a parallel algorithm: nodes are macrooperations,
/// edges are data transactions carrying a latency function.
///
/// Construction never fails; it indexes whatever it is given so that
/// validate_graph can report problems precisely. Algorithms that require a
/// valid graph say so, and callers obtain one through make_info_graph().
/// Instances are immutable.
class InfoGraph {
 public:
  InfoGraph(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId source,
            NodeId sink)
      : edges_(std::move(edges)),
        source_(std::move(source)),
        sink_(std::move(sink)) {
    auto add_node = [this](const NodeId& id, bool declared) {
      auto [it, inserted] = node_index_.try_emplace(id, nodes_.size());
      if (inserted) {
        nodes_.push_back(id);
      } else if (declared && duplicate_node_.empty()) {
        duplicate_node_ = id;
      }
    };
    for (const auto& id : nodes) add_node(id, true);
    for (const auto& e : edges_) {
      add_node(e.from, false);
      add_node(e.to, false);
    }
    add_node(source_, false);
    add_node(sink_, false);

    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    tails_.reserve(edges_.size());
    heads_.reserve(edges_.size());
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
      const NodeIndex u = node_index_.at(edges_[e].from);
      const NodeIndex v = node_index_.at(edges_[e].to);
      tails_.push_back(u);
      heads_.push_back(v);
      out_[u].push_back(e);
      in_[v].push_back(e);
      edge_index_.try_emplace(edges_[e].label, e);
    }
    auto by_label = [this](EdgeIndex a, EdgeIndex b) {
      return edges_[a].label < edges_[b].label;
    };
    for (auto& list : out_) std::stable_sort(list.begin(), list.end(), by_label);
    for (auto& list : in_) std::stable_sort(list.begin(), list.end(), by_label);
    build_topological_order();
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const NodeId& source() const { return source_; }
  const NodeId& sink() const { return sink_; }
  NodeIndex source_index() const { return node_index_.at(source_); }
  NodeIndex sink_index() const { return node_index_.at(sink_); }

  std::optional<NodeIndex> find_node(std::string_view id) const {
    auto it = node_index_.find(std::string(id));
    if (it == node_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EdgeIndex> find_edge(std::string_view label) const {
    auto it = edge_index_.find(std::string(label));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex tail(EdgeIndex e) const { return tails_.at(e); }
  NodeIndex head(EdgeIndex e) const { return heads_.at(e); }

  /// Outgoing edges of `v`, sorted by label.
  std::span<const EdgeIndex> out_edges(NodeIndex v) const { return out_[v]; }
  /// Incoming edges of `v`, sorted by label.
  std::span<const EdgeIndex> in_edges(NodeIndex v) const { return in_[v]; }

  bool acyclic() const { return topo_.size() == nodes_.size(); }

  /// Nodes in topological order, ties broken by label. Only complete when
  /// acyclic().
  const std::vector<NodeIndex>& topological_indices() const { return topo_; }

  /// Empty when every declared node is unique; otherwise the first repeat.
  const NodeId& duplicate_node() const { return duplicate_node_; }

  /// Same topology, new latency functions (one per edge, in edge order).
  InfoGraph with_latencies(std::vector<LatencyFunction> latencies) const {
    if (latencies.size() != edges_.size()) {
      throw std::invalid_argument("with_latencies: one function per edge");
    }
    std::vector<Edge> edges = edges_;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i].latency = std::move(latencies[i]);
    }
    return InfoGraph(nodes_, std::move(edges), source_, sink_);
  }

  bool operator==(const InfoGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ &&
           source_ == other.source_ && sink_ == other.sink_;
  }

 private:
  void build_topological_order() {
    std::vector<std::size_t> indegree(nodes_.size());
    for (NodeIndex v = 0; v < nodes_.size(); ++v) indegree[v] = in_[v].size();
    auto later = [this](NodeIndex a, NodeIndex b) {
      return nodes_[a] > nodes_[b];
    };
    std::priority_queue<NodeIndex, std::vector<NodeIndex>, decltype(later)>
        ready(later);
    for (NodeIndex v = 0; v < nodes_.size(); ++v) {
      if (indegree[v] == 0) ready.push(v);
    }
    while (!ready.empty()) {
      const NodeIndex u = ready.top();
      ready.pop();
      topo_.push_back(u);
      for (EdgeIndex e : out_[u]) {
        if (--indegree[heads_[e]] == 0) ready.push(heads_[e]);
      }
    }
  }

  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  NodeId source_;
  NodeId sink_;
  std::map<std::string, NodeIndex, std::less<>> node_index_;
  std::map<std::string, EdgeIndex, std::less<>> edge_index_;
  std::vector<NodeIndex> tails_;
  std::vector<NodeIndex> heads_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::vector<NodeIndex> topo_;
  NodeId duplicate_node_;
};

namespace detail {

inline ValidationResult issue(GraphIssue kind, std::string subject,
                              std::string message) {
  return {kind, std::move(subject), std::move(message)};
}

// Marks nodes reachable from `start` following edges forward (or backward).
inline std::vector<bool> reachable(const InfoGraph& g, NodeIndex start,
                                   bool forward) {
  std::vector<bool> seen(g.num_nodes(), false);
  std::vector<NodeIndex> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    for (EdgeIndex e : forward ? g.out_edges(u) : g.in_edges(u)) {
      const NodeIndex v = forward ? g.head(e) : g.tail(e);
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace detail

/// Checks every InfoGraph invariant, returning the first violation found.
/// Checks run in a fixed order: labels, duplicates, self-loops, cycles,
/// isolated nodes, source/sink uniqueness, reachability.
inline ValidationResult validate_graph(const InfoGraph& g) {
  using detail::issue;
  for (const auto& id : g.nodes()) {
    if (id.empty()) return issue(GraphIssue::kEmptyLabel, "", "node with empty id");
  }
  for (const auto& e : g.edges()) {
    if (e.label.empty()) {
      return issue(GraphIssue::kEmptyLabel, e.from + "->" + e.to,
                   "edge " + e.from + "->" + e.to + " has an empty label");
    }
  }
  if (!g.duplicate_node().empty()) {
    return issue(GraphIssue::kDuplicateNode, g.duplicate_node(),
                 "node " + g.duplicate_node() + " declared twice");
  }
  if (g.num_edges() == 0) {
    return issue(GraphIssue::kEmptyGraph, "", "graph has no edges");
  }
  for (const auto& e : g.edges()) {
    if (e.from == e.to) {
      return issue(GraphIssue::kSelfLoop, e.label,
                   "edge " + e.label + " is a self-loop on " + e.from);
    }
  }
  {
    std::map<std::string_view, int> seen;
    for (const auto& e : g.edges()) {
      if (++seen[e.label] > 1) {
        return issue(GraphIssue::kDuplicateEdgeLabel, e.label,
                     "edge label " + e.label + " used more than once");
      }
    }
  }
  if (!g.acyclic()) {
    std::vector<bool> ordered(g.num_nodes(), false);
    for (NodeIndex v : g.topological_indices()) ordered[v] = true;
    // Every unordered node has an unordered predecessor, so walking
    // backwards must revisit a node; that node lies on a cycle.
    NodeIndex v = 0;
    while (ordered[v]) ++v;
    std::vector<bool> visited(g.num_nodes(), false);
    while (!visited[v]) {
      visited[v] = true;
      for (EdgeIndex e : g.in_edges(v)) {
        if (!ordered[g.tail(e)]) {
          v = g.tail(e);
          break;
        }
      }
    }
    return issue(GraphIssue::kCycleDetected, g.nodes()[v],
                 "cycle through node " + g.nodes()[v]);
  }
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    if (g.in_edges(v).empty() && g.out_edges(v).empty()) {
      return issue(GraphIssue::kUnreachableNode, g.nodes()[v],
                   "node " + g.nodes()[v] + " is isolated");
    }
  }
  std::vector<NodeIndex> sources, sinks;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    if (g.in_edges(v).empty()) sources.push_back(v);
    if (g.out_edges(v).empty()) sinks.push_back(v);
  }
  auto names = [&g](const std::vector<NodeIndex>& list) {
    std::string out;
    for (NodeIndex v : list) out += (out.empty() ? "" : ", ") + g.nodes()[v];
    return out;
  };
  if (sources.size() > 1) {
    const NodeIndex extra =
        sources[0] == g.source_index() ? sources[1] : sources[0];
    return issue(GraphIssue::kMultipleSources, g.nodes()[extra],
                 "nodes without incoming edges: " + names(sources));
  }
  if (sources.front() != g.source_index()) {
    return issue(GraphIssue::kSourceMismatch, g.source(),
                 "declared source " + g.source() + " but the source is " +
                     g.nodes()[sources.front()]);
  }
  if (sinks.size() > 1) {
    const NodeIndex extra = sinks[0] == g.sink_index() ? sinks[1] : sinks[0];
    return issue(GraphIssue::kMultipleSinks, g.nodes()[extra],
                 "nodes without outgoing edges: " + names(sinks));
  }
  if (sinks.front() != g.sink_index()) {
    return issue(GraphIssue::kSinkMismatch, g.sink(),
                 "declared sink " + g.sink() + " but the sink is " +
                     g.nodes()[sinks.front()]);
  }
  const auto from_source = detail::reachable(g, g.source_index(), true);
  const auto to_sink = detail::reachable(g, g.sink_index(), false);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    if (!from_source[v] || !to_sink[v]) {
      return issue(GraphIssue::kUnreachableNode, g.nodes()[v],
                   "node " + g.nodes()[v] + " lies on no source-sink path");
    }
  }
  return {};
}

/// Throws kInvalidGraph unless `g` passes validate_graph.
inline const InfoGraph& require_valid(const InfoGraph& g) {
  if (auto r = validate_graph(g); !r.ok()) {
    throw Error(ErrorCode::kInvalidGraph,
                std::string(to_string(r.issue)) + ": " + r.message);
  }
  return g;
}

inline InfoGraph make_info_graph(std::vector<NodeId> nodes,
                                 std::vector<Edge> edges, NodeId source,
                                 NodeId sink) {
  InfoGraph g(std::move(nodes), std::move(edges), std::move(source),
              std::move(sink));
  require_valid(g);
  return g;
}

inline std::vector<NodeId> topological_order(const InfoGraph& g) {
  std::vector<NodeId> order;
  order.reserve(g.num_nodes());
  for (NodeIndex v : g.topological_indices()) order.push_back(g.nodes()[v]);
  return order;
}

inline std::vector<std::string> path_labels(const InfoGraph& g,
                                            const Path& p) {
  std::vector<std::string> labels;
  labels.reserve(p.edges.size());
  for (EdgeIndex e : p.edges) labels.push_back(g.edge(e).label);
  return labels;
}

inline std::vector<NodeId> path_nodes(const InfoGraph& g, const Path& p) {
  std::vector<NodeId> nodes;
  if (p.edges.empty()) return nodes;
  nodes.push_back(g.edge(p.edges.front()).from);
  for (EdgeIndex e : p.edges) nodes.push_back(g.edge(e).to);
  return nodes;
}

/// "A->B->D"; parallel edges make this ambiguous, so reports also carry labels.
inline std::string path_to_string(const InfoGraph& g, const Path& p) {
  std::string out;
  for (const auto& id : path_nodes(g, p)) out += (out.empty() ? "" : "->") + id;
  return out;
}

/// Lexicographic order on edge-label sequences.
inline bool path_less(const InfoGraph& g, const Path& a, const Path& b) {
  return std::lexicographical_compare(
      a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
      [&g](EdgeIndex x, EdgeIndex y) {
        return g.edge(x).label < g.edge(y).label;
      });
}

inline bool is_valid_path(const InfoGraph& g, const Path& p) {
  if (p.edges.empty()) return false;
  NodeIndex at = g.source_index();
  std::vector<bool> visited(g.num_nodes(), false);
  visited[at] = true;
  for (EdgeIndex e : p.edges) {
    if (e >= g.num_edges() || g.tail(e) != at) return false;
    at = g.head(e);
    if (visited[at]) return false;
    visited[at] = true;
  }
  return at == g.sink_index();
}

/// Number of source-sink paths, saturating at `limit`.
inline std::uint64_t count_paths(const InfoGraph& g,
                                 std::uint64_t limit =
                                     std::numeric_limits<std::uint64_t>::max()) {
  std::vector<std::uint64_t> to_sink(g.num_nodes(), 0);
  to_sink[g.sink_index()] = 1;
  const auto& order = g.topological_indices();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it == g.sink_index()) continue;
    std::uint64_t total = 0;
    for (EdgeIndex e : g.out_edges(*it)) {
      total = std::min(limit, total + std::min(limit, to_sink[g.head(e)]));
    }
    to_sink[*it] = total;
  }
  return to_sink[g.source_index()];
}

/// All source-sink paths in lexicographic order of their edge labels.
/// Throws kPathExplosion when there are more than `cap`.
inline std::vector<Path> enumerate_paths(const InfoGraph& g, std::size_t cap) {
  const std::uint64_t count = count_paths(g, std::uint64_t{cap} + 1);
  if (count > cap) {
    throw Error(ErrorCode::kPathExplosion,
                "more than " + std::to_string(cap) + " source-sink paths");
  }
  std::vector<Path> paths;
  paths.reserve(count);
  Path current;
  // Out-edges are label-sorted, so depth-first order is lexicographic.
  std::function<void(NodeIndex)> walk = [&](NodeIndex u) {
    if (u == g.sink_index()) {
      paths.push_back(current);
      return;
    }
    for (EdgeIndex e : g.out_edges(u)) {
      current.edges.push_back(e);
      walk(g.head(e));
      current.edges.pop_back();
    }
  };
  walk(g.source_index());
  return paths;
}

struct RoutedPath {
  Path path;
  double cost = 0.0;
};

/// Sum of `edge_costs` along `p`, accumulated from the source end.
inline double path_cost(const Path& p, std::span<const double> edge_costs) {
  double total = 0.0;
  for (EdgeIndex e : p.edges) total += edge_costs[e];
  return total;
}

/// Minimum-cost source-sink path under nonnegative per-edge costs (indexed by
/// edge). One relaxation pass over the reverse topological order computes
/// cost-to-sink; the path is then traced from the source taking the
/// smallest-label edge among those that stay optimal, so among equal-cost
/// paths the lexicographically smallest one wins.
inline RoutedPath shortest_path(const InfoGraph& g,
                                std::span<const double> edge_costs) {
  if (edge_costs.size() != g.num_edges()) {
    throw std::invalid_argument("shortest_path: one cost per edge required");
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (!(edge_costs[e] >= 0.0)) {
      throw Error(ErrorCode::kNegativeCost,
                  "edge " + g.edge(e).label + " has cost " +
                      std::to_string(edge_costs[e]));
    }
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> to_sink(g.num_nodes(), kInf);
  std::vector<EdgeIndex> next(g.num_nodes(), 0);
  to_sink[g.sink_index()] = 0.0;
  const auto& order = g.topological_indices();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (EdgeIndex e : g.out_edges(*it)) {
      const double c = edge_costs[e] + to_sink[g.head(e)];
      // Strict comparison over label-sorted edges keeps the smallest label.
      if (c < to_sink[*it]) {
        to_sink[*it] = c;
        next[*it] = e;
      }
    }
  }
  RoutedPath best;
  for (NodeIndex at = g.source_index(); at != g.sink_index();) {
    best.path.edges.push_back(next[at]);
    at = g.head(next[at]);
  }
  best.cost = path_cost(best.path, edge_costs);
  return best;
}

/// The graph with edge `label` removed and then restricted to the nodes and
/// edges that still lie on some source-sink path. nullopt when the removal
/// disconnects the sink from the source. Requires a valid graph.
inline std::optional<InfoGraph> without_edge(const InfoGraph& g,
                                             std::string_view label) {
  const auto removed = g.find_edge(label);
  std::vector<Edge> kept;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (!removed || e != *removed) kept.push_back(g.edge(e));
  }
  InfoGraph reduced(g.nodes(), kept, g.source(), g.sink());
  const auto from_source = detail::reachable(reduced, reduced.source_index(), true);
  if (!from_source[reduced.sink_index()]) return std::nullopt;
  const auto to_sink = detail::reachable(reduced, reduced.sink_index(), false);
  auto live = [&](const NodeId& id) {
    const NodeIndex v = *reduced.find_node(id);
    return from_source[v] && to_sink[v];
  };
  std::vector<NodeId> nodes;
  for (const auto& id : g.nodes()) {
    if (live(id)) nodes.push_back(id);
  }
  std::vector<Edge> edges;
  for (const auto& e : kept) {
    if (live(e.from) && live(e.to)) edges.push_back(e);
  }
  return InfoGraph(std::move(nodes), std::move(edges), g.source(), g.sink());
}

}  // namespace conga
