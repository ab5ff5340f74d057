#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "attackforge/context.hpp"
#include "attackforge/graph.hpp"
#include "attackforge/pim.hpp"
#include "attackforge/psm.hpp"
#include "attackforge/scenario.hpp"

namespace attackforge {

struct BuildOptions {
  TieBreak tie_break = TieBreak::kError;
  bool strict_remove = false;
  bool emit_dot = false;
  /// Skips validate_template on the generated service template.
  bool skip_validate = false;
  bool lenient = false;
};

struct PipelineResult {
  ScenarioDocument doc;
  /// Knowledge graph with the derived context.
  PropertyGraph graph;
  StateChain chain;
  ServiceTemplate tpl;
  RuleTrace trace;
  PsmBundle bundle;
  std::vector<Diagnostic> warnings;
};

/// Parses and validates a scenario. Throws SyntaxError, or DiagnosticError
/// carrying every finding when the document has errors; warnings are
/// appended to `warnings`.
ScenarioDocument load_scenario(std::string_view source,
                               std::vector<Diagnostic>* warnings = nullptr);

/// parse, validate, graph, context, PIM rules, template validation, PSM.
PipelineResult run_pipeline(std::string_view source,
                            const BuildOptions& options = {});

/// Writes the full output layout and returns the written paths relative to
/// `out_dir`.
std::vector<std::string> write_outputs(const PipelineResult& result,
                                       const std::filesystem::path& out_dir,
                                       const BuildOptions& options = {});

/// Output file for the knowledge graph export under `--emit-dot`.
inline constexpr std::string_view kGraphDot = "graph/knowledge_graph.dot";

}  // namespace attackforge
