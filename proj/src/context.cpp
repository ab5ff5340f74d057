#include "attackforge/context.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace attackforge {

FactAssertion FactAssertion::from(const FactDecl& decl) {
  return {decl.subject, decl.label, decl.object, decl.object_is_literal};
}

std::string to_string(const FactAssertion& fact) {
  std::string out = fact.subject + ' ' + fact.label + ' ';
  out += fact.object_is_literal ? '"' + fact.object + '"' : fact.object;
  return out;
}

namespace {

FactSet to_set(const std::vector<FactDecl>& decls) {
  FactSet out;
  for (const auto& d : decls) out.insert(FactAssertion::from(d));
  return out;
}

FactSet initial_facts(const ScenarioDocument& doc) {
  FactSet out;
  for (const auto& f : doc.facts) {
    if (f.holds_initially) out.insert(FactAssertion::from(f));
  }
  return out;
}

}  // namespace

StateChain compute_chain(const ScenarioDocument& doc,
                         std::span<const std::string> order,
                         const ContextOptions& options,
                         std::vector<Diagnostic>* notes) {
  StateChain chain;
  chain.states.push_back({0, initial_facts(doc)});
  for (const auto& name : order) {
    const TransitionDecl* t = doc.find_transition(name);
    if (!t) throw std::invalid_argument("unknown step '" + name + "'");
    ChainStep step{t->name, t->agent, t->trigger, to_set(t->preconditions),
                   to_set(t->post_add), to_set(t->post_remove)};
    FactSet facts = chain.states.back().facts;
    for (const auto& f : step.removed) {
      if (facts.erase(f) == 0 && notes) {
        std::string message = "step '" + t->name + "' removes '" +
                              to_string(f) + "' which does not hold";
        Location at = t->location.empty() ? doc.location : t->location;
        notes->push_back(options.strict_remove
                             ? make_error("E-REMOVE-ABSENT", message, at)
                             : make_warning("W-REMOVE-ABSENT", message, at));
      }
    }
    facts.insert(step.added.begin(), step.added.end());
    chain.states.push_back({chain.states.size(), std::move(facts)});
    chain.transition_names.push_back(t->name);
    chain.steps.push_back(std::move(step));
  }
  return chain;
}

StateChain compute_chain(const ScenarioDocument& doc,
                         const ContextOptions& options,
                         std::vector<Diagnostic>* notes) {
  return compute_chain(doc, doc.path_order, options, notes);
}

std::set<std::string> context_resources(const ScenarioDocument& doc) {
  std::set<std::string> out;
  std::deque<std::string> work;
  auto mark = [&](const std::string& name) {
    if (doc.find_resource(name) && out.insert(name).second) {
      work.push_back(name);
    }
  };
  auto mark_fact = [&](const FactDecl& f) {
    mark(f.subject);
    if (!f.object_is_literal) mark(f.object);
  };
  for (const auto& f : doc.facts) mark_fact(f);
  for (const auto& t : doc.transitions) {
    for (const auto& f : t.preconditions) mark_fact(f);
    for (const auto& f : t.post_add) mark_fact(f);
    for (const auto& f : t.post_remove) mark_fact(f);
    if (const auto* func = doc.find_functionality(t.trigger)) {
      mark(func->offered_by);
    }
  }
  // A context element pulls in whatever hosts it.
  while (!work.empty()) {
    std::string name = std::move(work.front());
    work.pop_front();
    for (const auto& f : doc.facts) {
      if (f.subject == name && !f.object_is_literal &&
          (f.label == label::kInstalledOn || f.label == label::kProvidedBy)) {
        mark(f.object);
      }
    }
  }
  return out;
}

ContextResult derive_context(const PropertyGraph& graph,
                             const ScenarioDocument& doc,
                             const ContextOptions& options) {
  ContextResult result{graph, {}, {}};
  std::vector<Diagnostic> notes;
  result.chain = compute_chain(doc, options, &notes);

  std::vector<Diagnostic> errors;
  for (std::size_t i = 0; i < result.chain.steps.size(); ++i) {
    const ChainStep& step = result.chain.steps[i];
    const FactSet& before = result.chain.states[i].facts;
    const TransitionDecl* t = doc.find_transition(step.name);
    for (const auto& f : step.preconditions) {
      if (!before.contains(f)) {
        errors.push_back(make_error(
            "E-PRE-UNSATISFIED",
            "step '" + step.name + "' at position " + std::to_string(i + 1) +
                " requires '" + to_string(f) + "' which does not hold at "
                "position " + std::to_string(i),
            t->location.empty() ? doc.location : t->location));
      }
    }
  }
  for (auto& n : notes) {
    (n.is_error() ? errors : result.warnings).push_back(std::move(n));
  }
  if (!errors.empty()) {
    errors.insert(errors.end(), result.warnings.begin(),
                  result.warnings.end());
    throw DiagnosticError(std::move(errors));
  }

  PropertyGraph& g = result.graph;
  for (const auto& name : context_resources(doc)) {
    if (auto id = g.find_one(node_label::kResource, name)) {
      g.set_attr(*id, "context", "true");
    }
  }

  std::vector<NodeId> states;
  for (const auto& s : result.chain.states) {
    states.push_back(g.add_node(std::string(node_label::kState),
                                {{"position", std::to_string(s.position)}}));
  }

  // Reuse the property nodes of declared facts, reify the others.
  std::map<FactAssertion, NodeId> property;
  for (const auto& n : graph.nodes()) {
    if (n.label != node_label::kPropertyBetween &&
        n.label != node_label::kPropertyResource) {
      continue;
    }
    NodeId subject = 0, object = 0;
    bool has_object = false;
    for (std::size_t idx : graph.in_edges(n.id)) {
      if (graph.edges()[idx].label == edge_label::kSource) {
        subject = graph.edges()[idx].src;
      }
    }
    for (std::size_t idx : graph.out_edges(n.id)) {
      if (graph.edges()[idx].label == edge_label::kTarget) {
        object = graph.edges()[idx].dst;
        has_object = true;
      }
    }
    FactAssertion key;
    key.subject = std::string(graph.node(subject).attr("name"));
    key.label = std::string(n.attr("label"));
    if (has_object) {
      key.object = std::string(graph.node(object).attr("name"));
    } else {
      key.object = std::string(n.attr("value"));
      key.object_is_literal = true;
    }
    property.emplace(std::move(key), n.id);
  }
  auto element = [&](const std::string& name) -> NodeId {
    for (auto lbl : {node_label::kResource, node_label::kAgent,
                     node_label::kFunctionality}) {
      if (auto id = g.find_one(lbl, name)) return *id;
    }
    throw std::invalid_argument("unknown element '" + name + "'");
  };
  auto property_node = [&](const FactAssertion& f) -> NodeId {
    if (auto it = property.find(f); it != property.end()) return it->second;
    NodeId p;
    if (f.object_is_literal) {
      p = g.add_node(std::string(node_label::kPropertyResource),
                     {{"label", f.label}, {"value", f.object}});
      g.add_edge(element(f.subject), edge_label::kSource, p);
    } else {
      p = g.add_node(std::string(node_label::kPropertyBetween),
                     {{"label", f.label}});
      g.add_edge(element(f.subject), edge_label::kSource, p);
      g.add_edge(p, edge_label::kTarget, element(f.object));
    }
    property.emplace(f, p);
    return p;
  };

  for (std::size_t i = 0; i < result.chain.steps.size(); ++i) {
    const ChainStep& step = result.chain.steps[i];
    const NodeId tr = *g.find_one(node_label::kTransition, step.name);
    for (const auto& f : step.preconditions) {
      g.add_edge(tr, "REQUIRES", property_node(f));
    }
    for (const auto& f : step.added) g.add_edge(tr, "ADDS", property_node(f));
    for (const auto& f : step.removed) {
      g.add_edge(tr, "REMOVES", property_node(f));
    }
    g.add_edge(tr, "PRODUCES", states[i + 1]);
  }
  for (const auto& s : result.chain.states) {
    for (const auto& f : s.facts) {
      g.add_edge(property_node(f), edge_label::kHoldsAt, states[s.position]);
    }
  }
  return result;
}

FactSet state_at(const StateChain& chain, std::size_t position) {
  if (position >= chain.states.size()) {
    throw std::out_of_range("position " + std::to_string(position) +
                            " is outside a chain of " +
                            std::to_string(chain.states.size()) + " states");
  }
  return chain.states[position].facts;
}

std::vector<Diagnostic> check_chain(const StateChain& chain,
                                    const ScenarioDocument& doc) {
  std::vector<Diagnostic> out;
  const Location origin = doc.location.empty() ? Location{1, 1} : doc.location;
  if (chain.states.empty() ||
      chain.transition_names.size() + 1 != chain.states.size()) {
    out.push_back(make_error("E-CHAIN-SHAPE",
                             "chain must hold one state more than it has "
                             "transitions",
                             origin));
    return out;
  }
  for (std::size_t i = 0; i < chain.states.size(); ++i) {
    if (chain.states[i].position != i) {
      out.push_back(make_error("E-CHAIN-POSITION",
                               "state " + std::to_string(i) +
                                   " carries position " +
                                   std::to_string(chain.states[i].position),
                               origin));
    }
  }
  for (std::size_t i = 1; i < chain.states.size(); ++i) {
    const std::string& name = chain.transition_names[i - 1];
    const TransitionDecl* t = doc.find_transition(name);
    if (!t) {
      out.push_back(make_error("E-CHAIN-UNKNOWN-STEP",
                               "chain names undeclared step '" + name + "'",
                               origin));
      continue;
    }
    const Location at = t->location.empty() ? origin : t->location;
    const FactSet& before = chain.states[i - 1].facts;
    for (const auto& d : t->preconditions) {
      FactAssertion f = FactAssertion::from(d);
      if (!before.contains(f)) {
        out.push_back(make_error(
            "E-PRE-UNSATISFIED",
            "step '" + name + "' at position " + std::to_string(i) +
                " requires '" + to_string(f) + "' which does not hold at "
                "position " + std::to_string(i - 1),
            at));
      }
    }
    FactSet expected = before;
    for (const auto& d : t->post_remove) expected.erase(FactAssertion::from(d));
    for (const auto& d : t->post_add) expected.insert(FactAssertion::from(d));
    if (expected != chain.states[i].facts) {
      std::string detail;
      for (const auto& f : expected) {
        if (!chain.states[i].facts.contains(f)) {
          detail = "missing '" + to_string(f) + "'";
          break;
        }
      }
      if (detail.empty()) {
        for (const auto& f : chain.states[i].facts) {
          if (!expected.contains(f)) {
            detail = "unexpected '" + to_string(f) + "'";
            break;
          }
        }
      }
      out.push_back(make_error("E-CHAIN-RECURRENCE",
                               "state " + std::to_string(i) +
                                   " does not follow from state " +
                                   std::to_string(i - 1) + " through '" +
                                   name + "': " + detail,
                               at));
    }
  }
  return out;
}

std::string dump_chain(const StateChain& chain) {
  std::ostringstream out;
  for (const auto& s : chain.states) {
    out << "state " << s.position;
    if (s.position == 0) {
      out << " (initial)";
    } else if (s.position - 1 < chain.transition_names.size()) {
      out << " (after " << chain.transition_names[s.position - 1] << ")";
    }
    out << '\n';
    for (const auto& f : s.facts) out << "  " << to_string(f) << '\n';
  }
  return out.str();
}

std::vector<std::size_t> holding_positions(const StateChain& chain,
                                           const FactAssertion& fact) {
  std::vector<std::size_t> out;
  for (const auto& s : chain.states) {
    if (s.facts.contains(fact)) out.push_back(s.position);
  }
  return out;
}

}  // namespace attackforge
