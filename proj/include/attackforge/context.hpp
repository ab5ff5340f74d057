#pragma once

#include <compare>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "attackforge/diagnostic.hpp"
#include "attackforge/graph.hpp"
#include "attackforge/scenario.hpp"

namespace attackforge {

/// Runtime instance of a fact. Element names are unique across agents,
/// resources and functionalities in a valid document, so names identify
/// graph nodes canonically.
struct FactAssertion {
  std::string subject;
  std::string label;
  std::string object;
  bool object_is_literal = false;

  static FactAssertion from(const FactDecl& decl);
  friend auto operator<=>(const FactAssertion&, const FactAssertion&) = default;
  friend bool operator==(const FactAssertion&, const FactAssertion&) = default;
};

std::string to_string(const FactAssertion& fact);

using FactSet = std::set<FactAssertion>;

struct ContextState {
  std::size_t position = 0;
  FactSet facts;
  friend bool operator==(const ContextState&, const ContextState&) = default;
};

/// Effects of one transition as resolved onto the chain.
struct ChainStep {
  std::string name;
  std::string agent;
  std::string trigger;
  FactSet preconditions;
  FactSet added;
  FactSet removed;

  bool changes_state() const { return !added.empty() || !removed.empty(); }
  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

/// states[0] is the initial context; states[i] holds after transition i.
struct StateChain {
  std::vector<ContextState> states;
  std::vector<std::string> transition_names;
  std::vector<ChainStep> steps;

  std::size_t size() const { return states.size(); }
  friend bool operator==(const StateChain&, const StateChain&) = default;
};

struct ContextOptions {
  /// Removing a fact that does not hold is an error instead of a warning.
  bool strict_remove = false;
};

struct ContextResult {
  PropertyGraph graph;
  StateChain chain;
  std::vector<Diagnostic> warnings;
};

/// Folds the transitions in `order` over the initial facts without checking
/// preconditions. Removal of absent facts is reported through `notes`
/// (W-REMOVE-ABSENT, or E-REMOVE-ABSENT under strict_remove).
StateChain compute_chain(const ScenarioDocument& doc,
                         std::span<const std::string> order,
                         const ContextOptions& options = {},
                         std::vector<Diagnostic>* notes = nullptr);
StateChain compute_chain(const ScenarioDocument& doc,
                         const ContextOptions& options = {},
                         std::vector<Diagnostic>* notes = nullptr);

/// Derives the attack context: marks context resources (attr context=true),
/// adds one `state` node per position, reifies every assertion the chain
/// mentions and links it to the states where it holds. Throws
/// DiagnosticError with E-PRE-UNSATISFIED for every unmet precondition.
ContextResult derive_context(const PropertyGraph& graph,
                             const ScenarioDocument& doc,
                             const ContextOptions& options = {});

/// Names of the resources that make up the attack context.
std::set<std::string> context_resources(const ScenarioDocument& doc);

/// Copy of the facts at `position`. Throws std::out_of_range.
FactSet state_at(const StateChain& chain, std::size_t position);

/// Audits a chain against the document: every precondition holds in the
/// preceding state and every state follows from its predecessor.
std::vector<Diagnostic> check_chain(const StateChain& chain,
                                    const ScenarioDocument& doc);

/// One block per state with sorted assertions.
std::string dump_chain(const StateChain& chain);

/// Positions at which `fact` holds, recomputed from the chain.
std::vector<std::size_t> holding_positions(const StateChain& chain,
                                           const FactAssertion& fact);

}  // namespace attackforge
