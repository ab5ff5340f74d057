#include "attackforge/tosca_validator.hpp"

#include <map>
#include <set>

#include "attackforge/yaml.hpp"

namespace attackforge {

// ---------------------------------------------------------------------------
// Validation

namespace {

class TemplateChecker {
 public:
  explicit TemplateChecker(const ServiceTemplate& tpl) : tpl_(tpl) {}

  std::vector<Diagnostic> run() {
    check_preamble();
    check_templates();
    for (const auto& wf : tpl_.workflows) check_workflow(wf);
    return std::move(out_);
  }

 private:
  void error(std::string code, std::string message) {
    out_.push_back(make_error(std::move(code), std::move(message)));
  }

  void check_preamble() {
    if (tpl_.definitions_version != tosca::kDefinitionsVersion) {
      error("E-PREAMBLE-MISSING", "definitions version must be " +
                                      std::string(tosca::kDefinitionsVersion));
    }
    const auto* attack = tpl_.interface_type(tosca::kAttackTransitions);
    if (!attack || attack->derived_from != tosca::kInterfaceRoot) {
      error("E-PREAMBLE-MISSING",
            "interface type AttackTransitions derived from " +
                std::string(tosca::kInterfaceRoot) + " is required");
    }
    const auto* host = tpl_.node_type(tosca::kHostSystem);
    bool slot = false;
    if (host) {
      for (const auto& [name, type] : host->interfaces) {
        slot |= name == tosca::kActionSlot && type == tosca::kAttackTransitions;
      }
    }
    if (!host || host->derived_from != tosca::kCompute || !slot) {
      error("E-PREAMBLE-MISSING",
            "node type HostSystem derived from Compute with interface "
            "'action: AttackTransitions' is required");
    }
  }

  void check_templates() {
    std::set<std::string> names;
    for (const auto& t : tpl_.node_templates) {
      if (!names.insert(t.name).second) {
        error("E-DUP-TEMPLATE", "node template '" + t.name + "' is repeated");
      }
    }
    for (const auto& t : tpl_.node_templates) {
      std::size_t links = 0, bindings = 0;
      for (const auto& r : t.requirements) {
        const NodeTemplate* target = tpl_.node_template(r.target);
        if (!target) {
          error("E-DANGLING-REQUIREMENT",
                "'" + t.name + "' requires missing template '" + r.target +
                    "'");
          continue;
        }
        switch (r.kind) {
          case RequirementKind::kLink:
            ++links;
            if (target->type != tosca::kNetwork) {
              error("E-PORT-SHAPE", "link of '" + t.name +
                                        "' must name a Network, '" +
                                        r.target + "' is " + target->type);
            }
            break;
          case RequirementKind::kBinding:
            ++bindings;
            if (target->type != tosca::kHostSystem) {
              error("E-PORT-SHAPE", "binding of '" + t.name +
                                        "' must name a HostSystem, '" +
                                        r.target + "' is " + target->type);
            }
            break;
          case RequirementKind::kHost:
            if (target->type != tosca::kHostSystem) {
              error("E-HOST-REQUIREMENT", "host of '" + t.name +
                                              "' must name a HostSystem, '" +
                                              r.target + "' is " +
                                              target->type);
            }
            break;
        }
      }
      if (t.type == tosca::kPort && (links != 1 || bindings != 1)) {
        error("E-PORT-SHAPE", "Port '" + t.name +
                                  "' needs exactly one link and one binding");
      }
    }
  }

  void check_workflow(const Workflow& wf) {
    const InterfaceType* attack = tpl_.interface_type(tosca::kAttackTransitions);
    std::map<std::string, std::size_t> predecessors;
    std::set<std::string> names;
    for (const auto& s : wf.steps) {
      if (!names.insert(s.name).second) {
        error("E-DUP-STEP", "workflow step '" + s.name + "' is repeated");
      }
      predecessors.emplace(s.name, 0);
    }
    for (const auto& s : wf.steps) {
      if (s.target.empty()) {
        error("E-MISSING-TARGET", "step '" + s.name + "' has no target");
      } else {
        const NodeTemplate* t = tpl_.node_template(s.target);
        if (!t || t->type != tosca::kHostSystem) {
          error("E-TARGET-NOT-HOST", "step '" + s.name + "' targets '" +
                                         s.target +
                                         "' which is not a HostSystem template");
        }
      }
      for (const auto& a : s.activities) {
        const std::string prefix = std::string(tosca::kActionSlot) + ".";
        bool declared = a.starts_with(prefix) && attack &&
                        attack->operation(a.substr(prefix.size()));
        if (!declared) {
          error("E-UNDECLARED-OPERATION",
                "step '" + s.name + "' calls undeclared operation '" + a + "'");
        }
      }
      if (s.on_success.size() > 1) {
        error("E-BRANCHING-STEP",
              "step '" + s.name + "' has more than one successor");
      }
      for (const auto& next : s.on_success) {
        auto it = predecessors.find(next);
        if (it == predecessors.end()) {
          error("E-DANGLING-SUCCESSOR", "step '" + s.name +
                                            "' continues with missing step '" +
                                            next + "'");
        } else if (++it->second > 1) {
          error("E-MERGING-STEP",
                "step '" + next + "' has more than one predecessor");
        }
      }
    }
    if (wf.steps.empty()) return;
    std::vector<std::string> entries;
    for (const auto& [name, count] : predecessors) {
      if (count == 0) entries.push_back(name);
    }
    if (entries.size() != 1) {
      error(entries.empty() ? "E-NO-ENTRY" : "E-MULTIPLE-ENTRIES",
            "workflow '" + wf.name + "' must have exactly one entry step, "
            "found " + std::to_string(entries.size()));
    }
    // Walk from each entry; a revisit or an unreached step means a cycle.
    std::set<std::string> reached;
    bool revisit = false;
    for (const auto& entry : entries) {
      const WorkflowStep* cur = wf.step(entry);
      while (cur && reached.insert(cur->name).second) {
        cur = cur->on_success.empty() ? nullptr
                                      : wf.step(cur->on_success.front());
      }
      revisit |= cur != nullptr;
    }
    if (revisit || reached.size() != names.size()) {
      error("E-CYCLE", "workflow '" + wf.name + "' contains a cycle");
    }
  }

  const ServiceTemplate& tpl_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_template(const ServiceTemplate& tpl) {
  return TemplateChecker(tpl).run();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

using yaml::Node;

[[noreturn]] void unsupported(const std::string& where) {
  throw SyntaxError(make_error("E-TOSCA-UNSUPPORTED",
                               "unsupported construct at " + where, {1, 1}));
}

const std::string& scalar(const Node& n, const std::string& where) {
  if (!n.is_scalar()) unsupported(where + " (expected a scalar)");
  return n.value();
}

const std::vector<Node::Entry>& entries(const Node& n,
                                        const std::string& where) {
  static const std::vector<Node::Entry> kEmpty;
  if (n.is_null()) return kEmpty;
  if (!n.is_mapping()) unsupported(where + " (expected a mapping)");
  return n.entries();
}

const std::vector<Node>& items(const Node& n, const std::string& where) {
  static const std::vector<Node> kEmpty;
  if (n.is_null()) return kEmpty;
  if (!n.is_sequence()) unsupported(where + " (expected a sequence)");
  return n.items();
}

InterfaceType parse_interface_type(const std::string& name, const Node& n) {
  InterfaceType t{name, {}, {}};
  const std::string where = "interface_types." + name;
  for (const auto& [key, value] : entries(n, where)) {
    if (key == "derived_from") {
      t.derived_from = scalar(value, where + ".derived_from");
      continue;
    }
    const std::string op_where = where + "." + key;
    std::string description;
    for (const auto& [k, v] : entries(value, op_where)) {
      if (k != "description") unsupported(op_where + "." + k);
      description = scalar(v, op_where + ".description");
    }
    t.operations.emplace_back(key, std::move(description));
  }
  return t;
}

NodeType parse_node_type(const std::string& name, const Node& n) {
  NodeType t{name, {}, {}};
  const std::string where = "node_types." + name;
  for (const auto& [key, value] : entries(n, where)) {
    if (key == "derived_from") {
      t.derived_from = scalar(value, where + ".derived_from");
    } else if (key == "interfaces") {
      for (const auto& [slot, body] : entries(value, where + ".interfaces")) {
        const std::string slot_where = where + ".interfaces." + slot;
        std::string type;
        for (const auto& [k, v] : entries(body, slot_where)) {
          if (k != "type") unsupported(slot_where + "." + k);
          type = scalar(v, slot_where + ".type");
        }
        t.interfaces.emplace_back(slot, std::move(type));
      }
    } else {
      unsupported(where + "." + key);
    }
  }
  return t;
}

NodeTemplate parse_node_template(const std::string& name, const Node& n) {
  NodeTemplate t{name, {}, {}, {}};
  const std::string where = "node_templates." + name;
  for (const auto& [key, value] : entries(n, where)) {
    if (key == "type") {
      t.type = scalar(value, where + ".type");
    } else if (key == "properties") {
      for (const auto& [k, v] : entries(value, where + ".properties")) {
        t.properties.emplace_back(k, scalar(v, where + ".properties." + k));
      }
    } else if (key == "requirements") {
      for (const auto& req : items(value, where + ".requirements")) {
        const auto& kv = entries(req, where + ".requirements[]");
        if (kv.size() != 1) unsupported(where + ".requirements[]");
        auto kind = parse_requirement_kind(kv.front().first);
        if (!kind) unsupported(where + ".requirements." + kv.front().first);
        t.requirements.push_back(
            {*kind, scalar(kv.front().second, where + ".requirements[]")});
      }
    } else {
      unsupported(where + "." + key);
    }
  }
  return t;
}

Workflow parse_workflow(const std::string& name, const Node& n) {
  Workflow wf{name, {}, {}};
  const std::string where = "workflows." + name;
  for (const auto& [key, value] : entries(n, where)) {
    if (key == "description") {
      wf.description = scalar(value, where + ".description");
    } else if (key == "steps") {
      for (const auto& [step_name, body] : entries(value, where + ".steps")) {
        const std::string sw = where + ".steps." + step_name;
        WorkflowStep step{step_name, {}, {}, {}};
        for (const auto& [k, v] : entries(body, sw)) {
          if (k == "target") {
            step.target = scalar(v, sw + ".target");
          } else if (k == "activities") {
            for (const auto& act : items(v, sw + ".activities")) {
              const auto& kv = entries(act, sw + ".activities[]");
              if (kv.size() != 1 || kv.front().first != "call_operation") {
                unsupported(sw + ".activities[]");
              }
              step.activities.push_back(
                  scalar(kv.front().second, sw + ".activities[]"));
            }
          } else if (k == "on_success") {
            for (const auto& next : items(v, sw + ".on_success")) {
              step.on_success.push_back(scalar(next, sw + ".on_success[]"));
            }
          } else {
            unsupported(sw + "." + k);
          }
        }
        wf.steps.push_back(std::move(step));
      }
    } else {
      unsupported(where + "." + key);
    }
  }
  return wf;
}

}  // namespace

ServiceTemplate parse_service_template(std::string_view text) {
  const Node root = yaml::parse(text);
  ServiceTemplate tpl;
  for (const auto& [key, value] : entries(root, "document root")) {
    if (key == "tosca_definitions_version") {
      tpl.definitions_version = scalar(value, key);
    } else if (key == "interface_types") {
      for (const auto& [name, body] : entries(value, key)) {
        tpl.interface_types.push_back(parse_interface_type(name, body));
      }
    } else if (key == "node_types") {
      for (const auto& [name, body] : entries(value, key)) {
        tpl.node_types.push_back(parse_node_type(name, body));
      }
    } else if (key == "topology_template") {
      for (const auto& [section, body] : entries(value, key)) {
        if (section == "node_templates") {
          for (const auto& [name, t] : entries(body, section)) {
            tpl.node_templates.push_back(parse_node_template(name, t));
          }
        } else if (section == "workflows") {
          for (const auto& [name, w] : entries(body, section)) {
            tpl.workflows.push_back(parse_workflow(name, w));
          }
        } else {
          unsupported("topology_template." + section);
        }
      }
    } else {
      unsupported(key);
    }
  }
  return tpl;
}

}  // namespace attackforge
