#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "attackforge/scenario.hpp"

namespace attackforge {

/// Dense node identifier, assigned in insertion order starting at 0.
using NodeId = std::uint32_t;

namespace node_label {
inline constexpr std::string_view kResource = "resource";
inline constexpr std::string_view kAgent = "agent";
inline constexpr std::string_view kFunctionality = "functionality";
inline constexpr std::string_view kTransition = "transition";
inline constexpr std::string_view kAttackPath = "attack_path";
inline constexpr std::string_view kPropertyResource = "property_resource";
inline constexpr std::string_view kPropertyBetween =
    "property_betweenresources";
inline constexpr std::string_view kState = "state";
}  // namespace node_label

namespace edge_label {
/// Subject -> reified property node.
inline constexpr std::string_view kSource = "SOURCE";
/// Reified property node -> object.
inline constexpr std::string_view kTarget = "TARGET";
/// Agent -> transition it performs.
inline constexpr std::string_view kTriggers = "TRIGGERS";
/// Transition -> functionality it calls.
inline constexpr std::string_view kInvokes = "INVOKES";
/// Software/Service -> functionality.
inline constexpr std::string_view kOffers = "OFFERS";
/// Attack path -> each of its transitions.
inline constexpr std::string_view kHasStep = "HAS_STEP";
/// Transition -> following transition on the path.
inline constexpr std::string_view kNext = "NEXT";
/// Property node -> state node of every position where it holds.
inline constexpr std::string_view kHoldsAt = "HOLDS_AT";
}  // namespace edge_label

using Attributes = std::map<std::string, std::string, std::less<>>;

struct GraphNode {
  NodeId id = 0;
  std::string label;
  Attributes attrs;

  /// Value of `key`, or empty.
  std::string_view attr(std::string_view key) const;
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  NodeId src = 0;
  NodeId dst = 0;
  std::string label;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

/// In-memory labeled property graph. Edges form a set: inserting an existing
/// (src, label, dst) triple is a no-op.
class PropertyGraph {
 public:
  NodeId add_node(std::string label, Attributes attrs = {});
  /// Throws std::out_of_range if an endpoint does not exist.
  void add_edge(NodeId src, std::string_view label, NodeId dst);
  void set_attr(NodeId id, const std::string& key, std::string value);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphNode& node(NodeId id) const;
  bool contains(NodeId id) const { return id < nodes_.size(); }

  /// Ids of nodes carrying `label`, ascending.
  std::span<const NodeId> nodes_with_label(std::string_view label) const;
  /// Nodes with the given label and `name` attribute, ascending.
  std::span<const NodeId> find_named(std::string_view label,
                                     std::string_view name) const;
  /// First node with the given label and name, if any.
  std::optional<NodeId> find_one(std::string_view label,
                                 std::string_view name) const;
  bool has_edge(NodeId src, std::string_view label, NodeId dst) const;
  /// Indices into edges().
  std::span<const std::size_t> out_edges(NodeId id) const;
  std::span<const std::size_t> in_edges(NodeId id) const;

  friend bool operator==(const PropertyGraph& a, const PropertyGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  static std::string edge_key(NodeId src, std::string_view label, NodeId dst);
  static std::string name_key(std::string_view label, std::string_view name);

  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::unordered_map<std::string, std::vector<NodeId>> by_label_;
  std::unordered_map<std::string, std::vector<NodeId>> by_name_;
  std::unordered_set<std::string> edge_keys_;
};

/// One variable of a conjunctive pattern. An empty label matches any node.
struct PatternNode {
  std::string variable;
  std::string label;
  std::vector<std::pair<std::string, std::string>> attrs;
};

struct PatternEdge {
  std::string src;
  std::string label;
  std::string dst;
};

/// Conjunctive subgraph query: node constraints plus required edges.
/// Matching has homomorphism semantics (two variables may bind one node).
struct Pattern {
  std::vector<PatternNode> nodes;
  std::vector<PatternEdge> edges;

  Pattern& node(std::string variable, std::string_view label,
                std::vector<std::pair<std::string, std::string>> attrs = {});
  Pattern& edge(std::string src, std::string_view label, std::string dst);
  /// Throws std::invalid_argument on duplicate or undeclared variables.
  void check() const;
  std::size_t index_of(std::string_view variable) const;
};

/// Total assignment of a pattern's variables, in declaration order.
class Binding {
 public:
  Binding() = default;
  Binding(std::vector<std::string> variables, std::vector<NodeId> ids);

  NodeId operator[](std::string_view variable) const;
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<NodeId>& ids() const { return ids_; }

  friend bool operator==(const Binding&, const Binding&) = default;

 private:
  std::vector<std::string> variables_;
  std::vector<NodeId> ids_;
};

/// Every assignment satisfying all constraints, sorted lexicographically by
/// the bound ids in variable declaration order.
std::vector<Binding> match_pattern(const PropertyGraph& graph,
                                   const Pattern& pattern);

/// Knowledge graph of the operating mode and declared context facts. The
/// document must validate cleanly.
PropertyGraph build_graph(const ScenarioDocument& doc);

enum class GraphFormat { kDot, kJson };

/// Throws std::invalid_argument for an unknown format name.
GraphFormat parse_graph_format(std::string_view name);
std::string export_graph(const PropertyGraph& graph, GraphFormat format);
/// Reads the json export back. Throws SyntaxError on malformed input.
PropertyGraph import_graph_json(std::string_view text);

}  // namespace attackforge
