#include "attackforge/graph.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace attackforge {

std::string_view GraphNode::attr(std::string_view key) const {
  auto it = attrs.find(key);
  return it == attrs.end() ? std::string_view{} : std::string_view(it->second);
}

// ---------------------------------------------------------------------------
// PropertyGraph

std::string PropertyGraph::edge_key(NodeId src, std::string_view label,
                                    NodeId dst) {
  std::string key = std::to_string(src);
  key += '\x1f';
  key += label;
  key += '\x1f';
  key += std::to_string(dst);
  return key;
}

std::string PropertyGraph::name_key(std::string_view label,
                                    std::string_view name) {
  std::string key(label);
  key += '\x1f';
  key += name;
  return key;
}

NodeId PropertyGraph::add_node(std::string label, Attributes attrs) {
  const auto id = static_cast<NodeId>(nodes_.size());
  by_label_[label].push_back(id);
  if (auto it = attrs.find("name"); it != attrs.end()) {
    by_name_[name_key(label, it->second)].push_back(id);
  }
  nodes_.push_back({id, std::move(label), std::move(attrs)});
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

void PropertyGraph::add_edge(NodeId src, std::string_view label, NodeId dst) {
  if (!contains(src) || !contains(dst)) {
    throw std::out_of_range("edge endpoint does not exist");
  }
  if (!edge_keys_.insert(edge_key(src, label, dst)).second) return;
  edges_.push_back({src, dst, std::string(label)});
  out_[src].push_back(edges_.size() - 1);
  in_[dst].push_back(edges_.size() - 1);
}

void PropertyGraph::set_attr(NodeId id, const std::string& key,
                             std::string value) {
  GraphNode& n = nodes_.at(id);
  if (key == "name") {
    if (auto it = n.attrs.find(key); it != n.attrs.end()) {
      auto& ids = by_name_[name_key(n.label, it->second)];
      std::erase(ids, id);
    }
    auto& ids = by_name_[name_key(n.label, value)];
    ids.insert(std::lower_bound(ids.begin(), ids.end(), id), id);
  }
  n.attrs.insert_or_assign(key, std::move(value));
}

const GraphNode& PropertyGraph::node(NodeId id) const { return nodes_.at(id); }

std::span<const NodeId> PropertyGraph::nodes_with_label(
    std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return {};
  return it->second;
}

std::span<const NodeId> PropertyGraph::find_named(std::string_view label,
                                                  std::string_view name) const {
  auto it = by_name_.find(name_key(label, name));
  if (it == by_name_.end()) return {};
  return it->second;
}

std::optional<NodeId> PropertyGraph::find_one(std::string_view label,
                                              std::string_view name) const {
  auto ids = find_named(label, name);
  if (ids.empty()) return std::nullopt;
  return ids.front();
}

bool PropertyGraph::has_edge(NodeId src, std::string_view label,
                             NodeId dst) const {
  return edge_keys_.contains(edge_key(src, label, dst));
}

std::span<const std::size_t> PropertyGraph::out_edges(NodeId id) const {
  return out_.at(id);
}

std::span<const std::size_t> PropertyGraph::in_edges(NodeId id) const {
  return in_.at(id);
}

// ---------------------------------------------------------------------------
// Pattern and Binding

Pattern& Pattern::node(std::string variable, std::string_view label,
                       std::vector<std::pair<std::string, std::string>> attrs) {
  nodes.push_back({std::move(variable), std::string(label), std::move(attrs)});
  return *this;
}

Pattern& Pattern::edge(std::string src, std::string_view label,
                       std::string dst) {
  edges.push_back({std::move(src), std::string(label), std::move(dst)});
  return *this;
}

std::size_t Pattern::index_of(std::string_view variable) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].variable == variable) return i;
  }
  return nodes.size();
}

void Pattern::check() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (index_of(nodes[i].variable) != i) {
      throw std::invalid_argument("duplicate pattern variable '" +
                                  nodes[i].variable + "'");
    }
  }
  for (const auto& e : edges) {
    if (index_of(e.src) == nodes.size() || index_of(e.dst) == nodes.size()) {
      throw std::invalid_argument("pattern edge uses an undeclared variable");
    }
  }
}

Binding::Binding(std::vector<std::string> variables, std::vector<NodeId> ids)
    : variables_(std::move(variables)), ids_(std::move(ids)) {}

NodeId Binding::operator[](std::string_view variable) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == variable) return ids_[i];
  }
  throw std::out_of_range("unbound variable '" + std::string(variable) + "'");
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct EdgeConstraint {
  std::size_t src;
  std::size_t dst;
  std::string label;
};

class Matcher {
 public:
  Matcher(const PropertyGraph& graph, const Pattern& pattern)
      : graph_(graph), pattern_(pattern), k_(pattern.nodes.size()) {
    for (const auto& e : pattern.edges) {
      edges_.push_back(
          {pattern.index_of(e.src), pattern.index_of(e.dst), e.label});
    }
  }

  std::vector<std::vector<NodeId>> run() {
    if (k_ == 0) return {{}};
    if (!collect_candidates()) return {};
    plan();
    assignment_.assign(k_, 0);
    search(0);
    std::sort(results_.begin(), results_.end());
    results_.erase(std::unique(results_.begin(), results_.end()),
                   results_.end());
    return std::move(results_);
  }

 private:
  bool satisfies_node(std::size_t var, const GraphNode& n) const {
    const PatternNode& pn = pattern_.nodes[var];
    if (!pn.label.empty() && n.label != pn.label) return false;
    for (const auto& [key, value] : pn.attrs) {
      auto it = n.attrs.find(key);
      if (it == n.attrs.end() || it->second != value) return false;
    }
    return true;
  }

  bool collect_candidates() {
    candidates_.resize(k_);
    allowed_.assign(k_, std::vector<char>(graph_.node_count(), 0));
    for (std::size_t v = 0; v < k_; ++v) {
      const PatternNode& pn = pattern_.nodes[v];
      auto consider = [&](NodeId id) {
        if (satisfies_node(v, graph_.node(id))) {
          candidates_[v].push_back(id);
          allowed_[v][id] = 1;
        }
      };
      if (pn.label.empty()) {
        for (const auto& n : graph_.nodes()) consider(n.id);
      } else {
        for (NodeId id : graph_.nodes_with_label(pn.label)) consider(id);
      }
      if (candidates_[v].empty()) return false;
    }
    return true;
  }

  // Orders variables so each one (where possible) is reachable through an
  // edge from an earlier one, then assigns every edge constraint to the
  // step where its last endpoint gets bound.
  void plan() {
    std::vector<char> placed(k_, 0);
    std::vector<std::size_t> rank(k_, 0);
    auto connected = [&](std::size_t v) {
      for (const auto& e : edges_) {
        if ((e.src == v && placed[e.dst]) || (e.dst == v && placed[e.src])) {
          return true;
        }
      }
      return false;
    };
    for (std::size_t step = 0; step < k_; ++step) {
      std::size_t best = k_;
      bool best_connected = false;
      for (std::size_t v = 0; v < k_; ++v) {
        if (placed[v]) continue;
        bool c = connected(v);
        if (best == k_ || (c && !best_connected) ||
            (c == best_connected &&
             candidates_[v].size() < candidates_[best].size())) {
          best = v;
          best_connected = c;
        }
      }
      placed[best] = 1;
      rank[best] = step;
      order_.push_back(best);
    }
    checks_.assign(k_, {});
    generator_.assign(k_, std::nullopt);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      std::size_t step = std::max(rank[e.src], rank[e.dst]);
      checks_[step].push_back(i);
      if (!generator_[step] && e.src != e.dst &&
          std::min(rank[e.src], rank[e.dst]) < step) {
        generator_[step] = i;
      }
    }
  }

  void search(std::size_t step) {
    if (step == k_) {
      results_.push_back(assignment_);
      return;
    }
    const std::size_t var = order_[step];
    auto try_node = [&](NodeId id) {
      if (!allowed_[var][id]) return;
      assignment_[var] = id;
      for (std::size_t ei : checks_[step]) {
        const auto& e = edges_[ei];
        if (!graph_.has_edge(assignment_[e.src], e.label, assignment_[e.dst])) {
          return;
        }
      }
      search(step + 1);
    };
    if (generator_[step]) {
      const auto& e = edges_[*generator_[step]];
      if (e.dst == var) {
        for (std::size_t idx : graph_.out_edges(assignment_[e.src])) {
          const auto& ge = graph_.edges()[idx];
          if (ge.label == e.label) try_node(ge.dst);
        }
      } else {
        for (std::size_t idx : graph_.in_edges(assignment_[e.dst])) {
          const auto& ge = graph_.edges()[idx];
          if (ge.label == e.label) try_node(ge.src);
        }
      }
    } else {
      for (NodeId id : candidates_[var]) try_node(id);
    }
  }

  const PropertyGraph& graph_;
  const Pattern& pattern_;
  std::size_t k_;
  std::vector<EdgeConstraint> edges_;
  std::vector<std::vector<NodeId>> candidates_;
  std::vector<std::vector<char>> allowed_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> checks_;
  std::vector<std::optional<std::size_t>> generator_;
  std::vector<NodeId> assignment_;
  std::vector<std::vector<NodeId>> results_;
};

}  // namespace

std::vector<Binding> match_pattern(const PropertyGraph& graph,
                                   const Pattern& pattern) {
  pattern.check();
  std::vector<std::string> vars;
  for (const auto& n : pattern.nodes) vars.push_back(n.variable);
  std::vector<Binding> out;
  for (auto& ids : Matcher(graph, pattern).run()) {
    out.emplace_back(vars, std::move(ids));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction

PropertyGraph build_graph(const ScenarioDocument& doc) {
  PropertyGraph g;
  std::unordered_map<std::string, NodeId> ids;

  for (const auto& r : doc.resources) {
    ids[r.name] = g.add_node(std::string(node_label::kResource),
                             {{"name", r.name}, {"resource_type", r.kind}});
  }
  for (const auto& a : doc.agents) {
    ids[a.name] =
        g.add_node(std::string(node_label::kAgent), {{"name", a.name}});
  }
  for (const auto& f : doc.functionalities) {
    ids[f.name] =
        g.add_node(std::string(node_label::kFunctionality), {{"name", f.name}});
  }
  std::unordered_map<std::string, NodeId> steps;
  for (const auto& t : doc.transitions) {
    steps[t.name] = g.add_node(std::string(node_label::kTransition),
                               {{"name", t.name},
                                {"trigger", t.trigger},
                                {"description", t.description}});
  }
  const NodeId path = g.add_node(std::string(node_label::kAttackPath),
                                 {{"name", doc.name}, {"goal", doc.goal}});

  for (const auto& f : doc.functionalities) {
    g.add_edge(ids.at(f.offered_by), edge_label::kOffers, ids.at(f.name));
  }
  for (const auto& t : doc.transitions) {
    g.add_edge(ids.at(t.agent), edge_label::kTriggers, steps.at(t.name));
    g.add_edge(steps.at(t.name), edge_label::kInvokes, ids.at(t.trigger));
  }
  std::optional<NodeId> previous;
  for (const auto& name : doc.path_order) {
    const NodeId step = steps.at(name);
    g.add_edge(path, edge_label::kHasStep, step);
    if (previous) g.add_edge(*previous, edge_label::kNext, step);
    previous = step;
  }

  for (const auto& f : doc.facts) {
    if (f.object_is_literal) {
      const NodeId p = g.add_node(std::string(node_label::kPropertyResource),
                                  {{"label", f.label}, {"value", f.object}});
      g.add_edge(ids.at(f.subject), edge_label::kSource, p);
    } else {
      const NodeId p = g.add_node(std::string(node_label::kPropertyBetween),
                                  {{"label", f.label}});
      g.add_edge(ids.at(f.subject), edge_label::kSource, p);
      g.add_edge(p, edge_label::kTarget, ids.at(f.object));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Export / import

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "dot") return GraphFormat::kDot;
  if (name == "json") return GraphFormat::kJson;
  throw std::invalid_argument("unknown graph format '" + std::string(name) +
                              "' (expected dot or json)");
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string display_name(const GraphNode& n) {
  for (std::string_view key : {"name", "label", "position"}) {
    auto v = n.attr(key);
    if (!v.empty()) return std::string(v);
  }
  return std::to_string(n.id);
}

}  // namespace

std::string export_graph(const PropertyGraph& graph, GraphFormat format) {
  if (format == GraphFormat::kDot) {
    std::ostringstream out;
    out << "digraph knowledge_graph {\n";
    for (const auto& n : graph.nodes()) {
      out << "  n" << n.id << " [label=\""
          << dot_escape(display_name(n) + ":" + n.label) << "\"];\n";
    }
    for (const auto& e : graph.edges()) {
      out << "  n" << e.src << " -> n" << e.dst << " [label=\""
          << dot_escape(e.label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& n : graph.nodes()) {
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    for (const auto& [k, v] : n.attrs) attrs[k] = v;
    doc["nodes"].push_back(
        {{"id", n.id}, {"label", n.label}, {"attrs", std::move(attrs)}});
  }
  for (const auto& e : graph.edges()) {
    doc["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label}});
  }
  return doc.dump(2) + "\n";
}

PropertyGraph import_graph_json(std::string_view text) {
  auto bad = [](const std::string& what) {
    return SyntaxError(make_error("E-GRAPH-JSON", what, {1, 1}));
  };
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw bad(e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges") ||
      !doc["nodes"].is_array() || !doc["edges"].is_array()) {
    throw bad("expected an object with 'nodes' and 'edges' arrays");
  }
  PropertyGraph g;
  try {
    for (const auto& n : doc["nodes"]) {
      Attributes attrs;
      for (const auto& [k, v] : n.at("attrs").items()) {
        attrs[k] = v.get<std::string>();
      }
      NodeId id = g.add_node(n.at("label").get<std::string>(), std::move(attrs));
      if (n.at("id").get<NodeId>() != id) {
        throw bad("node ids must be dense and in order");
      }
    }
    for (const auto& e : doc["edges"]) {
      g.add_edge(e.at("src").get<NodeId>(), e.at("label").get<std::string>(),
                 e.at("dst").get<NodeId>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  } catch (const std::out_of_range&) {
    throw bad("edge references a missing node");
  }
  return g;
}

}  // namespace attackforge
