#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "attackforge/diagnostic.hpp"

namespace attackforge {

/// Resource kinds with built-in meaning. Kinds are open: any identifier is a
/// valid kind, these are the ones the transformation rules recognize.
namespace kind {
inline constexpr std::string_view kRuntimeHost = "RuntimeHost";
inline constexpr std::string_view kNetwork = "Network";
inline constexpr std::string_view kSoftware = "Software";
inline constexpr std::string_view kService = "Service";
inline constexpr std::string_view kInterface = "Interface";
inline constexpr std::string_view kData = "Data";
// Pseudo-kinds used in label signatures for non-resource operands.
inline constexpr std::string_view kAgent = "Agent";
inline constexpr std::string_view kFunctionality = "Functionality";
}  // namespace kind

/// Labels the generators and target inference rely on.
namespace label {
inline constexpr std::string_view kConnectedToNetwork = "connectedToNetwork";
inline constexpr std::string_view kInstalledOn = "installedOn";
inline constexpr std::string_view kProvidedBy = "providedBy";
inline constexpr std::string_view kOffers = "offers";
inline constexpr std::string_view kPerceivedAsAdministrator =
    "perceivedAsAdministrator";
inline constexpr std::string_view kGrantsTo = "grantsTo";
inline constexpr std::string_view kGrantsFunc = "grantsFunc";
inline constexpr std::string_view kAccessibleFrom = "accessibleFrom";
inline constexpr std::string_view kControls = "controls";
}  // namespace label

struct AgentDecl {
  std::string name;
  Location location;
};

struct ResourceDecl {
  std::string name;
  std::string kind;
  Location location;
};

struct FunctionalityDecl {
  std::string name;
  std::string offered_by;
  Location location;
};

/// A property statement. With `object_is_literal` it characterizes the
/// subject; otherwise it relates two declared elements.
struct FactDecl {
  std::string subject;
  std::string label;
  std::string object;
  bool object_is_literal = false;
  bool holds_initially = true;
  Location location;
};

struct TransitionDecl {
  std::string name;
  std::string agent;
  std::string trigger;
  std::string description;
  /// Preparatory task notes run before the trigger in generated roles.
  std::vector<std::string> internal_tasks;
  std::vector<FactDecl> preconditions;
  std::vector<FactDecl> post_add;
  std::vector<FactDecl> post_remove;
  Location location;
};

struct ScenarioDocument {
  std::string name;
  std::string goal;
  std::vector<AgentDecl> agents;
  std::vector<ResourceDecl> resources;
  std::vector<FunctionalityDecl> functionalities;
  std::vector<FactDecl> facts;
  std::vector<TransitionDecl> transitions;
  std::vector<std::string> path_order;
  Location location;        // of the `scenario` keyword
  Location order_location;  // of the `order` statement, empty if absent

  const AgentDecl* find_agent(std::string_view name) const;
  const ResourceDecl* find_resource(std::string_view name) const;
  const FunctionalityDecl* find_functionality(std::string_view name) const;
  const TransitionDecl* find_transition(std::string_view name) const;
  /// Transitions in path order; names missing from the document are skipped.
  std::vector<const TransitionDecl*> ordered_transitions() const;
};

/// Operand constraint of a vocabulary label.
struct LabelSignature {
  std::string label;
  std::set<std::string, std::less<>> subject_kinds;
  /// Empty together with `literal_object` means "literal only".
  std::set<std::string, std::less<>> object_kinds;
  bool literal_object = false;
};

/// Controlled vocabulary of fact labels. Data driven: callers may register
/// extra labels; labels absent from the registry only raise a warning.
class Vocabulary {
 public:
  /// Core labels plus the extension labels used by the bundled scenarios.
  static const Vocabulary& standard();

  void add(LabelSignature signature);
  const LabelSignature* find(std::string_view label) const;
  std::vector<std::string> labels() const;

 private:
  std::map<std::string, LabelSignature, std::less<>> signatures_;
};

/// Parses scenario text. Throws SyntaxError (E-SYNTAX, E-DUP-DECL) with the
/// offending location; performs no name resolution.
ScenarioDocument parse_scenario(std::string_view source);

/// Checks every well-formedness rule of a parsed document. The result is
/// empty iff the document is valid; warnings are included.
std::vector<Diagnostic> validate_scenario(
    const ScenarioDocument& doc,
    const Vocabulary& vocabulary = Vocabulary::standard());

/// Canonical one-line form of a fact: `subject label object` with literal
/// objects double quoted.
std::string to_string(const FactDecl& fact);

}  // namespace attackforge
