#include "attackforge/pim.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "attackforge/yaml.hpp"
#include "json.hpp"

namespace attackforge {

// ---------------------------------------------------------------------------
// Template model

namespace {

template <typename T>
auto* find_named(std::vector<T>& items, std::string_view name) {
  for (auto& item : items) {
    if (item.name == name) return &item;
  }
  return static_cast<T*>(nullptr);
}

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
  for (const auto& item : items) {
    if (item.name == name) return &item;
  }
  return nullptr;
}

}  // namespace

const std::string* InterfaceType::operation(std::string_view name) const {
  for (const auto& [op, description] : operations) {
    if (op == name) return &description;
  }
  return nullptr;
}

std::string_view to_string(RequirementKind kind) {
  switch (kind) {
    case RequirementKind::kLink: return "link";
    case RequirementKind::kBinding: return "binding";
    case RequirementKind::kHost: return "host";
  }
  return "";
}

std::optional<RequirementKind> parse_requirement_kind(std::string_view text) {
  if (text == "link") return RequirementKind::kLink;
  if (text == "binding") return RequirementKind::kBinding;
  if (text == "host") return RequirementKind::kHost;
  return std::nullopt;
}

const WorkflowStep* Workflow::step(std::string_view n) const {
  return find_named(steps, n);
}
WorkflowStep* Workflow::step(std::string_view n) { return find_named(steps, n); }

const InterfaceType* ServiceTemplate::interface_type(std::string_view n) const {
  return find_named(interface_types, n);
}
InterfaceType* ServiceTemplate::interface_type(std::string_view n) {
  return find_named(interface_types, n);
}
const NodeType* ServiceTemplate::node_type(std::string_view n) const {
  return find_named(node_types, n);
}
const NodeTemplate* ServiceTemplate::node_template(std::string_view n) const {
  return find_named(node_templates, n);
}
NodeTemplate* ServiceTemplate::node_template(std::string_view n) {
  return find_named(node_templates, n);
}
const Workflow* ServiceTemplate::workflow(std::string_view n) const {
  return find_named(workflows, n);
}
Workflow* ServiceTemplate::workflow(std::string_view n) {
  return find_named(workflows, n);
}

std::string RuleTrace::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json binding = nlohmann::ordered_json::object();
    for (const auto& [var, value] : e.binding) binding[var] = value;
    nlohmann::ordered_json entry;
    entry["rule"] = e.rule;
    if (!e.hypothesis.empty()) entry["hypothesis"] = e.hypothesis;
    entry["binding"] = std::move(binding);
    entry["element"] = e.element;
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> kRules = {
      {"R1", "runtime-host resource -> HostSystem node template"},
      {"R2", "network resource -> Network node template"},
      {"R3", "initial connectedToNetwork property -> Port with link/binding"},
      {"R4", "transition trigger -> AttackTransitions operation"},
      {"R5", "attack path -> AbstractScript workflow with goal description"},
      {"R6", "path step -> workflow step calling action.<trigger>"},
      {"R7", "consecutive path steps -> on_success sequencing"},
      {"R8", "hypothesis iao -> step target"},
      {"R9", "hypothesis extended iao -> step target"},
      {"R10", "hypothesis ig -> step target"},
      {"R11", "hosted software/service -> SoftwareComponent with host"},
      {"R12", "initial characterizing property -> template property"},
  };
  return kRules;
}

ServiceTemplate init_template() {
  ServiceTemplate tpl;
  tpl.definitions_version = std::string(tosca::kDefinitionsVersion);
  tpl.interface_types.push_back({std::string(tosca::kAttackTransitions),
                                 std::string(tosca::kInterfaceRoot),
                                 {}});
  tpl.node_types.push_back(
      {std::string(tosca::kHostSystem),
       std::string(tosca::kCompute),
       {{std::string(tosca::kActionSlot),
         std::string(tosca::kAttackTransitions)}}});
  return tpl;
}

// ---------------------------------------------------------------------------
// Rule machinery

namespace {

std::string display(const PropertyGraph& g, NodeId id) {
  const GraphNode& n = g.node(id);
  if (auto v = n.attr("name"); !v.empty()) return std::string(v);
  if (n.label == node_label::kState) {
    return "state@" + std::string(n.attr("position"));
  }
  if (auto v = n.attr("label"); !v.empty()) {
    std::string out(v);
    if (auto value = n.attr("value"); !value.empty()) {
      out += "=" + std::string(value);
    }
    return out;
  }
  return "#" + std::to_string(id);
}

std::string name_of(const PropertyGraph& g, NodeId id) {
  return std::string(g.node(id).attr("name"));
}

void record(RuleTrace* trace, const PropertyGraph& g, std::string rule,
            const Binding& b, std::string element,
            std::string hypothesis = {}) {
  if (!trace) return;
  RuleApplication app{std::move(rule), {}, std::move(element),
                      std::move(hypothesis)};
  for (std::size_t i = 0; i < b.variables().size(); ++i) {
    app.binding.emplace_back(b.variables()[i], display(g, b.ids()[i]));
  }
  trace->entries.push_back(std::move(app));
}

using Attrs = std::vector<std::pair<std::string, std::string>>;

Attrs resource_of(std::string_view type, bool context = true) {
  Attrs a{{"resource_type", std::string(type)}};
  if (context) a.emplace_back("context", "true");
  return a;
}

Attrs labelled(std::string_view label) {
  return {{"label", std::string(label)}};
}

Attrs at_position(std::size_t position) {
  return {{"position", std::to_string(position)}};
}

bool is_context(const PropertyGraph& g, NodeId id) {
  return g.node(id).attr("context") == "true";
}

// Hosting relation between a software/service and its runtime host that
// holds at state `s`.
void add_hosting(Pattern& p, std::string_view hosting_label,
                 const std::string& component, const std::string& host,
                 const std::string& state, const std::string& prop) {
  p.node(prop, node_label::kPropertyBetween, labelled(hosting_label))
      .edge(component, edge_label::kSource, prop)
      .edge(prop, edge_label::kTarget, host)
      .edge(prop, edge_label::kHoldsAt, state);
}

}  // namespace

ServiceTemplate generate_topology(const PropertyGraph& graph,
                                  ServiceTemplate tpl, RuleTrace* trace) {
  // R1
  {
    Pattern p;
    p.node("n", node_label::kResource, resource_of(kind::kRuntimeHost));
    for (const auto& b : match_pattern(graph, p)) {
      const std::string name = name_of(graph, b["n"]);
      tpl.node_templates.push_back({name, std::string(tosca::kHostSystem)});
      record(trace, graph, "R1", b, "node_templates." + name);
    }
  }
  // R2
  {
    Pattern p;
    p.node("n", node_label::kResource, resource_of(kind::kNetwork));
    for (const auto& b : match_pattern(graph, p)) {
      const std::string name = name_of(graph, b["n"]);
      tpl.node_templates.push_back({name, std::string(tosca::kNetwork)});
      record(trace, graph, "R2", b, "node_templates." + name);
    }
  }
  // R3
  {
    Pattern p;
    p.node("n1", node_label::kResource, resource_of(kind::kRuntimeHost, false))
        .node("n2", node_label::kResource, resource_of(kind::kNetwork, false))
        .node("s0", node_label::kState, at_position(0));
    add_hosting(p, label::kConnectedToNetwork, "n1", "n2", "s0", "c");
    std::vector<Diagnostic> dangling;
    for (const auto& b : match_pattern(graph, p)) {
      const std::string host = name_of(graph, b["n1"]);
      const std::string net = name_of(graph, b["n2"]);
      if (!is_context(graph, b["n1"]) || !is_context(graph, b["n2"])) {
        dangling.push_back(make_error(
            "E-DANGLING-CONNECTION",
            "connection " + host + " -> " + net +
                " references a resource outside the attack context"));
        continue;
      }
      const std::string name =
          host + "_" + std::string(label::kConnectedToNetwork) + "_" + net;
      tpl.node_templates.push_back({name,
                                    std::string(tosca::kPort),
                                    {{RequirementKind::kLink, net},
                                     {RequirementKind::kBinding, host}},
                                    {}});
      record(trace, graph, "R3", b, "node_templates." + name);
    }
    if (!dangling.empty()) throw DiagnosticError(std::move(dangling));
  }
  // R11
  for (auto [kind_name, hosting] :
       {std::pair{kind::kSoftware, label::kInstalledOn},
        std::pair{kind::kService, label::kProvidedBy}}) {
    Pattern p;
    p.node("sw", node_label::kResource, resource_of(kind_name))
        .node("host", node_label::kResource, resource_of(kind::kRuntimeHost))
        .node("s0", node_label::kState, at_position(0));
    add_hosting(p, hosting, "sw", "host", "s0", "h");
    for (const auto& b : match_pattern(graph, p)) {
      const std::string name = name_of(graph, b["sw"]);
      const std::string host = name_of(graph, b["host"]);
      NodeTemplate* t = tpl.node_template(name);
      if (!t) {
        tpl.node_templates.push_back(
            {name, std::string(tosca::kSoftwareComponent)});
        t = &tpl.node_templates.back();
      }
      t->requirements.push_back({RequirementKind::kHost, host});
      record(trace, graph, "R11", b,
             "node_templates." + name + ".requirements.host: " + host);
    }
  }
  // R12
  {
    Pattern p;
    p.node("n", node_label::kResource, {{"context", "true"}})
        .node("prop", node_label::kPropertyResource)
        .node("s0", node_label::kState, at_position(0))
        .edge("n", edge_label::kSource, "prop")
        .edge("prop", edge_label::kHoldsAt, "s0");
    for (const auto& b : match_pattern(graph, p)) {
      NodeTemplate* t = tpl.node_template(name_of(graph, b["n"]));
      if (!t) continue;
      const GraphNode& prop = graph.node(b["prop"]);
      std::string key(prop.attr("label"));
      bool present = std::any_of(t->properties.begin(), t->properties.end(),
                                 [&](const auto& kv) { return kv.first == key; });
      if (present) continue;
      t->properties.emplace_back(key, std::string(prop.attr("value")));
      record(trace, graph, "R12", b,
             "node_templates." + t->name + ".properties." + key);
    }
  }
  return tpl;
}

ServiceTemplate generate_workflow(const PropertyGraph& graph,
                                  ServiceTemplate tpl,
                                  const PimOptions& options, RuleTrace* trace,
                                  std::vector<Diagnostic>* warnings) {
  InterfaceType* attack = tpl.interface_type(tosca::kAttackTransitions);
  if (!attack) {
    throw DiagnosticError(make_error(
        "E-PREAMBLE-MISSING", "template lacks the AttackTransitions interface"));
  }
  // R4
  {
    Pattern p;
    p.node("tr", node_label::kTransition);
    std::vector<Diagnostic> conflicts;
    for (const auto& b : match_pattern(graph, p)) {
      const GraphNode& tr = graph.node(b["tr"]);
      const std::string trigger(tr.attr("trigger"));
      const std::string description(tr.attr("description"));
      if (const std::string* existing = attack->operation(trigger)) {
        if (*existing != description) {
          auto d = make_error("E-DUP-TRIGGER-DESC",
                              "trigger '" + trigger +
                                  "' carries conflicting descriptions "
                                  "(step '" +
                                  std::string(tr.attr("name")) + "')");
          if (options.lenient) {
            d.severity = Severity::kWarning;
            d.code = "W-DUP-TRIGGER-DESC";
            if (warnings) warnings->push_back(std::move(d));
          } else {
            conflicts.push_back(std::move(d));
          }
        }
        continue;
      }
      attack->operations.emplace_back(trigger, description);
      record(trace, graph, "R4", b,
             "interface_types.AttackTransitions." + trigger);
    }
    if (!conflicts.empty()) throw DiagnosticError(std::move(conflicts));
  }
  // R5
  {
    Pattern p;
    p.node("ap", node_label::kAttackPath);
    for (const auto& b : match_pattern(graph, p)) {
      tpl.workflows.push_back({std::string(tosca::kAbstractScript),
                               std::string(graph.node(b["ap"]).attr("goal")),
                               {}});
      record(trace, graph, "R5", b, "workflows.AbstractScript.description");
    }
  }
  Workflow* script = tpl.workflow(tosca::kAbstractScript);
  if (!script) return tpl;
  // R6
  {
    Pattern p;
    p.node("ap", node_label::kAttackPath)
        .node("tr", node_label::kTransition)
        .edge("ap", edge_label::kHasStep, "tr");
    for (const auto& b : match_pattern(graph, p)) {
      const GraphNode& tr = graph.node(b["tr"]);
      const std::string name(tr.attr("name"));
      const std::string op =
          std::string(tosca::kActionSlot) + "." + std::string(tr.attr("trigger"));
      script->steps.push_back({name, {}, {op}, {}});
      record(trace, graph, "R6", b,
             "workflows.AbstractScript.steps." + name + ".activities");
    }
  }
  // R7
  {
    Pattern p;
    p.node("prior", node_label::kTransition)
        .node("ensuing", node_label::kTransition)
        .edge("prior", edge_label::kNext, "ensuing");
    for (const auto& b : match_pattern(graph, p)) {
      const std::string prior = name_of(graph, b["prior"]);
      if (WorkflowStep* s = script->step(prior)) {
        s->on_success.push_back(name_of(graph, b["ensuing"]));
        record(trace, graph, "R7", b,
               "workflows.AbstractScript.steps." + prior + ".on_success");
      }
    }
  }
  // Steps are kept in chain order, starting from the unique entry.
  std::set<std::string> has_predecessor;
  for (const auto& s : script->steps) {
    for (const auto& next : s.on_success) has_predecessor.insert(next);
  }
  std::vector<WorkflowStep> ordered;
  std::set<std::string> visited;
  for (const auto& s : script->steps) {
    if (has_predecessor.contains(s.name)) continue;
    for (const WorkflowStep* cur = &s; cur && visited.insert(cur->name).second;
         cur = cur->on_success.empty() ? nullptr
                                       : script->step(cur->on_success.front())) {
      ordered.push_back(*cur);
    }
  }
  for (const auto& s : script->steps) {
    if (!visited.contains(s.name)) ordered.push_back(s);
  }
  script->steps = std::move(ordered);
  return tpl;
}

// ---------------------------------------------------------------------------
// Target inference

namespace {

// Shared core of the step-anchored hypotheses: transition `tr` (named
// `step`) triggered by `agt`, invoking `func`, at state `s`.
Pattern step_anchor(std::string_view step, std::size_t position) {
  Pattern p;
  p.node("tr", node_label::kTransition, {{"name", std::string(step)}})
      .node("agt", node_label::kAgent)
      .node("func", node_label::kFunctionality)
      .node("s", node_label::kState, at_position(position))
      .edge("agt", edge_label::kTriggers, "tr")
      .edge("tr", edge_label::kInvokes, "func");
  return p;
}

void add_agent_relation(Pattern& p, std::string_view relation,
                        const std::string& host, const std::string& prop,
                        const std::string& state) {
  p.node(prop, node_label::kPropertyBetween, labelled(relation))
      .edge("agt", edge_label::kSource, prop)
      .edge(prop, edge_label::kTarget, host)
      .edge(prop, edge_label::kHoldsAt, state);
}

struct HypothesisMatch {
  std::set<std::string> hosts;
  std::vector<Binding> bindings;
};

// iao: the functionality is offered by software hosted on a host where the
// agent is perceived as administrator.
HypothesisMatch match_iao(const PropertyGraph& g, std::string_view step,
                          std::size_t position) {
  HypothesisMatch m;
  for (auto hosting : {label::kInstalledOn, label::kProvidedBy}) {
    Pattern p = step_anchor(step, position);
    p.node("sw", node_label::kResource)
        .node("sys", node_label::kResource,
              resource_of(kind::kRuntimeHost, false))
        .edge("sw", edge_label::kOffers, "func");
    add_hosting(p, hosting, "sw", "sys", "s", "hosted");
    add_agent_relation(p, label::kPerceivedAsAdministrator, "sys", "admin",
                       "s");
    for (auto& b : match_pattern(g, p)) {
      m.hosts.insert(name_of(g, b["sys"]));
      m.bindings.push_back(std::move(b));
    }
  }
  return m;
}

// Hosts where the agent is perceived as administrator in the initial state.
std::vector<std::pair<std::string, Binding>> home_hosts(const PropertyGraph& g,
                                                        NodeId agent) {
  Pattern p;
  p.node("agt", node_label::kAgent, {{"name", name_of(g, agent)}})
      .node("home", node_label::kResource,
            resource_of(kind::kRuntimeHost, false))
      .node("s0", node_label::kState, at_position(0));
  add_agent_relation(p, label::kPerceivedAsAdministrator, "home", "admin",
                     "s0");
  std::vector<std::pair<std::string, Binding>> out;
  for (auto& b : match_pattern(g, p)) {
    out.emplace_back(name_of(g, b["home"]), std::move(b));
  }
  return out;
}

// Extended iao: the functionality is offered by software hosted on a remote
// host the agent controls; the call is issued from the agent's home host.
HypothesisMatch match_iao_extended(const PropertyGraph& g,
                                   std::string_view step,
                                   std::size_t position) {
  HypothesisMatch m;
  std::vector<Binding> remote;
  for (auto hosting : {label::kInstalledOn, label::kProvidedBy}) {
    Pattern p = step_anchor(step, position);
    p.node("sw", node_label::kResource)
        .node("remote", node_label::kResource,
              resource_of(kind::kRuntimeHost, false))
        .edge("sw", edge_label::kOffers, "func");
    add_hosting(p, hosting, "sw", "remote", "s", "hosted");
    add_agent_relation(p, label::kControls, "remote", "control", "s");
    for (auto& b : match_pattern(g, p)) remote.push_back(std::move(b));
  }
  if (remote.empty()) return m;
  for (auto& [home, b] : home_hosts(g, remote.front()["agt"])) {
    m.hosts.insert(home);
    m.bindings.push_back(std::move(b));
  }
  if (!m.hosts.empty()) {
    m.bindings.insert(m.bindings.begin(), remote.begin(), remote.end());
  }
  return m;
}

// ig: the functionality is granted to the agent through an interface
// accessible from a host where the agent is perceived as administrator.
HypothesisMatch match_ig(const PropertyGraph& g, std::string_view step,
                         std::size_t position) {
  Pattern p = step_anchor(step, position);
  p.node("itf", node_label::kResource, resource_of(kind::kInterface, false))
      .node("sys", node_label::kResource,
            resource_of(kind::kRuntimeHost, false))
      .node("grant", node_label::kPropertyBetween, labelled(label::kGrantsTo))
      .node("grant_func", node_label::kPropertyBetween,
            labelled(label::kGrantsFunc))
      .node("access", node_label::kPropertyBetween,
            labelled(label::kAccessibleFrom))
      .edge("itf", edge_label::kSource, "grant")
      .edge("grant", edge_label::kTarget, "agt")
      .edge("grant", edge_label::kHoldsAt, "s")
      .edge("itf", edge_label::kSource, "grant_func")
      .edge("grant_func", edge_label::kTarget, "func")
      .edge("grant_func", edge_label::kHoldsAt, "s")
      .edge("itf", edge_label::kSource, "access")
      .edge("access", edge_label::kTarget, "sys")
      .edge("access", edge_label::kHoldsAt, "s");
  add_agent_relation(p, label::kPerceivedAsAdministrator, "sys", "admin", "s");
  HypothesisMatch m;
  for (auto& b : match_pattern(g, p)) {
    m.hosts.insert(name_of(g, b["sys"]));
    m.bindings.push_back(std::move(b));
  }
  return m;
}

struct Hypothesis {
  std::string_view rule;
  std::string_view name;
  HypothesisMatch (*match)(const PropertyGraph&, std::string_view,
                           std::size_t);
};

constexpr Hypothesis kHypotheses[] = {
    {"R8", "iao", &match_iao},
    {"R9", "iao-extended", &match_iao_extended},
    {"R10", "ig", &match_ig},
};

}  // namespace

TargetInference evaluate_hypotheses(const PropertyGraph& graph,
                                    std::string_view step,
                                    std::size_t position) {
  TargetInference out{std::string(step), position, {}, {}};
  for (const auto& h : kHypotheses) {
    HypothesisMatch m = h.match(graph, step, position);
    if (m.hosts.empty()) continue;
    out.hypothesis = h.name;
    out.hosts.assign(m.hosts.begin(), m.hosts.end());
    break;
  }
  return out;
}

ServiceTemplate infer_targets(const PropertyGraph& graph,
                              const StateChain& chain, ServiceTemplate tpl,
                              const PimOptions& options, RuleTrace* trace,
                              std::vector<Diagnostic>* warnings) {
  Workflow* script = tpl.workflow(tosca::kAbstractScript);
  if (!script) return tpl;
  std::vector<Diagnostic> errors;
  for (auto& step : script->steps) {
    auto it = std::find(chain.transition_names.begin(),
                        chain.transition_names.end(), step.name);
    if (it == chain.transition_names.end()) {
      errors.push_back(make_error(
          "E-NO-TARGET",
          "step '" + step.name + "' does not appear in the state chain"));
      continue;
    }
    const auto position =
        static_cast<std::size_t>(it - chain.transition_names.begin());
    bool decided = false;
    for (const auto& h : kHypotheses) {
      HypothesisMatch m = h.match(graph, step.name, position);
      if (m.hosts.empty()) continue;
      decided = true;
      if (m.hosts.size() > 1) {
        std::string hosts;
        for (const auto& host : m.hosts) {
          hosts += (hosts.empty() ? "" : ", ") + host;
        }
        std::string message = "hypothesis " + std::string(h.name) +
                              " yields several hosts for step '" + step.name +
                              "' at position " + std::to_string(position) +
                              ": " + hosts;
        if (options.tie_break == TieBreak::kError) {
          errors.push_back(make_error("E-AMBIGUOUS-TARGET", message));
          break;
        }
        if (warnings) {
          warnings->push_back(make_warning("W-AMBIGUOUS-TARGET",
                                           message + "; choosing " +
                                               *m.hosts.begin()));
        }
      }
      step.target = *m.hosts.begin();
      for (const auto& b : m.bindings) {
        record(trace, graph, std::string(h.rule), b,
               "workflows.AbstractScript.steps." + step.name +
                   ".target: " + step.target,
               std::string(h.name));
      }
      break;
    }
    if (!decided) {
      errors.push_back(make_error(
          "E-NO-TARGET", "no hypothesis infers a target for step '" +
                             step.name + "' at position " +
                             std::to_string(position)));
    }
  }
  if (!errors.empty()) throw DiagnosticError(std::move(errors));
  return tpl;
}

// ---------------------------------------------------------------------------
// Emission

std::string emit_service_template(const ServiceTemplate& tpl) {
  using yaml::Node;
  Node root = Node::mapping();
  root.add("tosca_definitions_version", Node::scalar(tpl.definitions_version));
  if (!tpl.interface_types.empty()) {
    Node& types = root.add("interface_types", Node::mapping());
    for (const auto& it : tpl.interface_types) {
      Node& t = types.add(it.name, Node::mapping());
      t.add("derived_from", Node::scalar(it.derived_from));
      for (const auto& [op, description] : it.operations) {
        Node& o = t.add(op, Node::mapping());
        o.add("description", Node::scalar(description));
      }
    }
  }
  if (!tpl.node_types.empty()) {
    Node& types = root.add("node_types", Node::mapping());
    for (const auto& nt : tpl.node_types) {
      Node& t = types.add(nt.name, Node::mapping());
      t.add("derived_from", Node::scalar(nt.derived_from));
      if (!nt.interfaces.empty()) {
        Node& slots = t.add("interfaces", Node::mapping());
        for (const auto& [slot, type] : nt.interfaces) {
          slots.add(slot, Node::mapping()).add("type", Node::scalar(type));
        }
      }
    }
  }
  if (!tpl.node_templates.empty() || !tpl.workflows.empty()) {
    Node& topology = root.add("topology_template", Node::mapping());
    if (!tpl.node_templates.empty()) {
      Node& templates = topology.add("node_templates", Node::mapping());
      for (const auto& nt : tpl.node_templates) {
        Node& t = templates.add(nt.name, Node::mapping());
        t.add("type", Node::scalar(nt.type));
        if (!nt.properties.empty()) {
          Node& props = t.add("properties", Node::mapping());
          for (const auto& [k, v] : nt.properties) {
            props.add(k, Node::scalar(v));
          }
        }
        if (!nt.requirements.empty()) {
          Node& reqs = t.add("requirements", Node::sequence());
          for (const auto& r : nt.requirements) {
            reqs.push_back(Node::mapping(
                {{std::string(to_string(r.kind)), Node::scalar(r.target)}}));
          }
        }
      }
    }
    if (!tpl.workflows.empty()) {
      Node& workflows = topology.add("workflows", Node::mapping());
      for (const auto& wf : tpl.workflows) {
        Node& w = workflows.add(wf.name, Node::mapping());
        w.add("description", Node::scalar(wf.description));
        if (wf.steps.empty()) continue;
        Node& steps = w.add("steps", Node::mapping());
        for (const auto& s : wf.steps) {
          Node& step = steps.add(s.name, Node::mapping());
          if (!s.activities.empty()) {
            Node& acts = step.add("activities", Node::sequence());
            for (const auto& a : s.activities) {
              acts.push_back(
                  Node::mapping({{"call_operation", Node::scalar(a)}}));
            }
          }
          if (!s.on_success.empty()) {
            Node& next = step.add("on_success", Node::sequence());
            for (const auto& n : s.on_success) next.push_back(Node::scalar(n));
          }
          if (!s.target.empty()) step.add("target", Node::scalar(s.target));
        }
      }
    }
  }
  return yaml::emit(root);
}

}  // namespace attackforge
