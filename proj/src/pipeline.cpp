#include "attackforge/pipeline.hpp"

#include "attackforge/tosca_validator.hpp"

namespace attackforge {

ScenarioDocument load_scenario(std::string_view source,
                               std::vector<Diagnostic>* warnings) {
  ScenarioDocument doc = parse_scenario(source);
  std::vector<Diagnostic> found = validate_scenario(doc);
  if (has_errors(found)) throw DiagnosticError(std::move(found));
  if (warnings) warnings->insert(warnings->end(), found.begin(), found.end());
  return doc;
}

PipelineResult run_pipeline(std::string_view source,
                            const BuildOptions& options) {
  PipelineResult r;
  r.doc = load_scenario(source, &r.warnings);

  ContextResult ctx = derive_context(build_graph(r.doc), r.doc,
                                     {.strict_remove = options.strict_remove});
  r.graph = std::move(ctx.graph);
  r.chain = std::move(ctx.chain);
  r.warnings.insert(r.warnings.end(), ctx.warnings.begin(), ctx.warnings.end());

  const PimOptions pim{options.tie_break, options.lenient};
  r.tpl = generate_topology(r.graph, init_template(), &r.trace);
  r.tpl = generate_workflow(r.graph, std::move(r.tpl), pim, &r.trace,
                            &r.warnings);
  r.tpl = infer_targets(r.graph, r.chain, std::move(r.tpl), pim, &r.trace,
                        &r.warnings);

  if (!options.skip_validate) {
    std::vector<Diagnostic> found = validate_template(r.tpl);
    if (has_errors(found)) throw DiagnosticError(std::move(found));
  }

  r.bundle.inventory = generate_inventory(r.tpl, r.doc);
  r.bundle.attack_playbook = generate_attack_playbook(r.tpl, r.doc);
  r.bundle.roles = generate_roles(r.bundle.attack_playbook, r.doc);
  r.bundle.enrichment_playbook = generate_enrichment_playbook(r.tpl);
  return r;
}

std::vector<std::string> write_outputs(const PipelineResult& result,
                                       const std::filesystem::path& out_dir,
                                       const BuildOptions& options) {
  ArchiveManifest manifest =
      package_bundle(result.bundle, result.tpl, result.doc.name, out_dir);
  std::vector<std::string> files = std::move(manifest.files);
  auto put = [&](std::string_view rel, const std::string& bytes) {
    write_file(out_dir / rel, bytes);
    files.emplace_back(rel);
  };
  put(layout::kRulesTrace, result.trace.to_json());
  put(layout::kChainDump, dump_chain(result.chain));
  if (options.emit_dot) {
    put(kGraphDot, export_graph(result.graph, GraphFormat::kDot));
  }
  return files;
}

}  // namespace attackforge
