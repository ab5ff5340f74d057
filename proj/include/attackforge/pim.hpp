#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attackforge/context.hpp"
#include "attackforge/diagnostic.hpp"
#include "attackforge/graph.hpp"

namespace attackforge {

namespace tosca {
inline constexpr std::string_view kDefinitionsVersion = "tosca_simple_yaml_1_3";
inline constexpr std::string_view kAttackTransitions = "AttackTransitions";
inline constexpr std::string_view kInterfaceRoot = "tosca.interfaces.Root";
inline constexpr std::string_view kHostSystem = "HostSystem";
inline constexpr std::string_view kCompute = "Compute";
inline constexpr std::string_view kActionSlot = "action";
inline constexpr std::string_view kNetwork = "Network";
inline constexpr std::string_view kPort = "Port";
inline constexpr std::string_view kSoftwareComponent = "SoftwareComponent";
inline constexpr std::string_view kAbstractScript = "AbstractScript";
}  // namespace tosca

using OrderedStrings = std::vector<std::pair<std::string, std::string>>;

struct InterfaceType {
  std::string name;
  std::string derived_from;
  /// Operation name -> description, in insertion order.
  OrderedStrings operations;

  const std::string* operation(std::string_view name) const;
  friend bool operator==(const InterfaceType&, const InterfaceType&) = default;
};

struct NodeType {
  std::string name;
  std::string derived_from;
  /// Interface slot -> interface type.
  OrderedStrings interfaces;
  friend bool operator==(const NodeType&, const NodeType&) = default;
};

enum class RequirementKind { kLink, kBinding, kHost };

std::string_view to_string(RequirementKind kind);
std::optional<RequirementKind> parse_requirement_kind(std::string_view text);

struct Requirement {
  RequirementKind kind;
  std::string target;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

struct NodeTemplate {
  std::string name;
  std::string type;
  std::vector<Requirement> requirements;
  OrderedStrings properties;
  friend bool operator==(const NodeTemplate&, const NodeTemplate&) = default;
};

struct WorkflowStep {
  std::string name;
  /// HostSystem template the step's operation is called on; empty until
  /// targets are inferred.
  std::string target;
  /// `call_operation` references, e.g. "action.scans".
  std::vector<std::string> activities;
  std::vector<std::string> on_success;
  friend bool operator==(const WorkflowStep&, const WorkflowStep&) = default;
};

struct Workflow {
  std::string name;
  std::string description;
  std::vector<WorkflowStep> steps;

  const WorkflowStep* step(std::string_view name) const;
  WorkflowStep* step(std::string_view name);
  friend bool operator==(const Workflow&, const Workflow&) = default;
};

struct ServiceTemplate {
  std::string definitions_version;
  std::vector<InterfaceType> interface_types;
  std::vector<NodeType> node_types;
  std::vector<NodeTemplate> node_templates;
  std::vector<Workflow> workflows;

  const InterfaceType* interface_type(std::string_view name) const;
  InterfaceType* interface_type(std::string_view name);
  const NodeType* node_type(std::string_view name) const;
  const NodeTemplate* node_template(std::string_view name) const;
  NodeTemplate* node_template(std::string_view name);
  const Workflow* workflow(std::string_view name) const;
  Workflow* workflow(std::string_view name);

  friend bool operator==(const ServiceTemplate&,
                         const ServiceTemplate&) = default;
};

/// One rule firing: which rule, the binding it fired on (variable -> node
/// display name) and the template element it produced.
struct RuleApplication {
  std::string rule;
  std::vector<std::pair<std::string, std::string>> binding;
  std::string element;
  /// Hypothesis name for target rules (iao, iao-extended, ig).
  std::string hypothesis;
};

struct RuleTrace {
  std::vector<RuleApplication> entries;

  std::string to_json() const;
};

enum class TieBreak { kError, kFirst };

struct PimOptions {
  TieBreak tie_break = TieBreak::kError;
  /// First description wins when one trigger carries two descriptions.
  bool lenient = false;
};

/// Catalog entry describing one of the twelve transformation rules.
struct RuleInfo {
  std::string_view id;
  std::string_view summary;
};

const std::vector<RuleInfo>& rule_catalog();

/// The fixed preamble: definitions version, AttackTransitions interface
/// type and HostSystem node type exposing it through `action`.
ServiceTemplate init_template();

/// Rules R1, R2, R3, R11, R12 over the initial context. Throws
/// DiagnosticError (E-DANGLING-CONNECTION) when a connection touches a
/// resource outside the context.
ServiceTemplate generate_topology(const PropertyGraph& graph,
                                  ServiceTemplate tpl,
                                  RuleTrace* trace = nullptr);

/// Rules R4 to R7. Throws DiagnosticError (E-DUP-TRIGGER-DESC) unless
/// options.lenient, in which case a warning is appended to `warnings`.
ServiceTemplate generate_workflow(const PropertyGraph& graph,
                                  ServiceTemplate tpl,
                                  const PimOptions& options = {},
                                  RuleTrace* trace = nullptr,
                                  std::vector<Diagnostic>* warnings = nullptr);

/// Hypothesis outcome for one step, exposed for auditing.
struct TargetInference {
  std::string step;
  std::size_t position = 0;
  /// "iao", "iao-extended", "ig", or empty when nothing matched.
  std::string hypothesis;
  /// Candidate hosts of the deciding hypothesis, sorted.
  std::vector<std::string> hosts;
};

/// Evaluates the hypotheses for one step against the state preceding it.
TargetInference evaluate_hypotheses(const PropertyGraph& graph,
                                    std::string_view step,
                                    std::size_t position);

/// Rules R8 to R10: fills every workflow step target. Throws
/// DiagnosticError with E-NO-TARGET / E-AMBIGUOUS-TARGET.
ServiceTemplate infer_targets(const PropertyGraph& graph,
                              const StateChain& chain, ServiceTemplate tpl,
                              const PimOptions& options = {},
                              RuleTrace* trace = nullptr,
                              std::vector<Diagnostic>* warnings = nullptr);

std::string emit_service_template(const ServiceTemplate& tpl);

}  // namespace attackforge
