#include "attackforge/cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "attackforge/simulator.hpp"

namespace attackforge::cli {

namespace {

void print(std::ostream& err, const std::vector<Diagnostic>& diagnostics,
           bool color) {
  for (const auto& d : diagnostics) {
    if (color) {
      err << (d.is_error() ? "\033[31m" : "\033[33m") << render(d)
          << "\033[0m\n";
    } else {
      err << render(d) << '\n';
    }
  }
}

/// Runs `body`, mapping exceptions onto exit codes.
template <typename F>
int guarded(const RunConfig& config, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SyntaxError& e) {
    print(err, e.diagnostics(), config.color);
    return kEnvironment;
  } catch (const DiagnosticError& e) {
    print(err, e.diagnostics(), config.color);
    return kDiagnostics;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kEnvironment;
  }
}

bool has_artifacts(const std::filesystem::path& dir) {
  return std::filesystem::is_regular_file(dir / layout::kInventory) &&
         std::filesystem::is_regular_file(dir / layout::kAttackScript);
}

std::vector<RoleSkeleton> load_roles(const std::filesystem::path& dir,
                                     const Playbook& playbook) {
  std::vector<RoleSkeleton> roles;
  for (const auto& play : playbook.plays) {
    for (const auto& name : play.roles) {
      const auto path = dir / layout::role_tasks(name);
      if (!std::filesystem::exists(path)) continue;
      roles.push_back(parse_role_tasks(name, read_file(path)));
    }
  }
  return roles;
}

}  // namespace

bool color_enabled() {
  return std::getenv("ATTACKFORGE_NO_COLOR") == nullptr && isatty(2);
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(config, err, [&] {
    ScenarioDocument doc = parse_scenario(read_file(config.input));
    std::vector<Diagnostic> found = validate_scenario(doc);
    print(err, found, config.color);
    if (has_errors(found)) return kDiagnostics;
    out << doc.name << ": " << doc.transitions.size() << " steps, "
        << doc.resources.size() << " resources, ok\n";
    return kOk;
  });
}

int cmd_graph(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(config, err, [&] {
    GraphFormat format;
    try {
      format = parse_graph_format(config.graph_format);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kEnvironment;
    }
    std::vector<Diagnostic> warnings;
    ScenarioDocument doc = load_scenario(read_file(config.input), &warnings);
    ContextResult ctx = derive_context(
        build_graph(doc), doc, {.strict_remove = config.build.strict_remove});
    warnings.insert(warnings.end(), ctx.warnings.begin(), ctx.warnings.end());
    print(err, warnings, config.color);
    const std::string text = export_graph(ctx.graph, format);
    if (config.output_dir.empty()) {
      out << text;
    } else {
      write_file(config.output_dir / ("graph/knowledge_graph." +
                                      config.graph_format),
                 text);
    }
    return kOk;
  });
}

int cmd_build(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(config, err, [&] {
    PipelineResult result = run_pipeline(read_file(config.input), config.build);
    print(err, result.warnings, config.color);
    const auto dir = config.output_dir.empty() ? std::filesystem::path("out")
                                               : config.output_dir;
    for (const auto& f : write_outputs(result, dir, config.build)) {
      out << (dir / f).string() << '\n';
    }
    return kOk;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  return guarded(config, err, [&] {
    const std::string source = read_file(config.input);
    InventoryTree inventory;
    Playbook playbook;
    std::vector<RoleSkeleton> roles;
    StateChain chain;
    if (!config.output_dir.empty() && has_artifacts(config.output_dir)) {
      std::vector<Diagnostic> notes;
      ScenarioDocument doc = load_scenario(source, &notes);
      chain = compute_chain(doc, {.strict_remove = config.build.strict_remove},
                            &notes);
      print(err, notes, config.color);
      if (has_errors(notes)) return kDiagnostics;
      inventory =
          parse_inventory(read_file(config.output_dir / layout::kInventory));
      playbook =
          parse_playbook(read_file(config.output_dir / layout::kAttackScript));
      roles = load_roles(config.output_dir, playbook);
    } else {
      PipelineResult result = run_pipeline(source, config.build);
      print(err, result.warnings, config.color);
      chain = std::move(result.chain);
      inventory = std::move(result.bundle.inventory);
      playbook = std::move(result.bundle.attack_playbook);
      roles = std::move(result.bundle.roles);
    }
    const ExecutionTrace trace = simulate(chain, playbook, roles, inventory);
    const std::string text = render_trace(trace);
    out << text;
    if (!config.output_dir.empty()) {
      write_file(config.output_dir / layout::kTrace, text);
    }
    return trace.succeeded() ? kOk : kDiagnostics;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, bool color) {
  CLI::App app{"attack scenario to TOSCA and playbook compiler", "attackforge"};
  app.require_subcommand(1);

  RunConfig config;
  config.color = color;
  std::string tie_break = "error";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", config.input, "scenario file (.atk)")
        ->required();
    sub->add_option("-o,--output", config.output_dir, "output directory");
    sub->add_option("--tie-break", tie_break, "ambiguous targets: error|first")
        ->check(CLI::IsMember({"error", "first"}));
    sub->add_flag("--strict-remove", config.build.strict_remove,
                  "removing an absent fact is an error");
    sub->add_flag("--emit-dot", config.build.emit_dot,
                  "also write the knowledge graph as dot");
    sub->add_flag("--skip-validate", config.build.skip_validate,
                  "skip service template validation");
    sub->add_flag("--lenient", config.build.lenient,
                  "first description wins for repeated triggers");
  };
  CLI::App* check = app.add_subcommand("check", "parse and validate");
  CLI::App* graph = app.add_subcommand("graph", "export the knowledge graph");
  CLI::App* build = app.add_subcommand("build", "generate PIM and PSM");
  CLI::App* sim = app.add_subcommand("simulate", "dry-run the attack script");
  for (CLI::App* sub : {check, graph, build, sim}) add_common(sub);
  graph->add_option("--format", config.graph_format, "dot|json")
      ->check(CLI::IsMember({"dot", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kEnvironment;
  }
  config.build.tie_break =
      tie_break == "first" ? TieBreak::kFirst : TieBreak::kError;

  if (check->parsed()) return cmd_check(config, out, err);
  if (graph->parsed()) return cmd_graph(config, out, err);
  if (build->parsed()) return cmd_build(config, out, err);
  return cmd_simulate(config, out, err);
}

}  // namespace attackforge::cli
