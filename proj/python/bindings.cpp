#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "attackforge/pipeline.hpp"
#include "attackforge/simulator.hpp"

namespace py = pybind11;
using namespace attackforge;

namespace {

py::dict to_dict(const Diagnostic& d) {
  py::dict out;
  out["severity"] = d.is_error() ? "error" : "warning";
  out["code"] = d.code;
  out["line"] = d.location.line;
  out["column"] = d.location.column;
  out["message"] = d.message;
  return out;
}

py::list to_list(const std::vector<Diagnostic>& diagnostics) {
  py::list out;
  for (const auto& d : diagnostics) out.append(to_dict(d));
  return out;
}

BuildOptions options(const std::string& tie_break, bool strict_remove,
                     bool lenient, bool emit_dot) {
  BuildOptions o;
  if (tie_break == "first") {
    o.tie_break = TieBreak::kFirst;
  } else if (tie_break != "error") {
    throw std::invalid_argument("tie_break must be 'error' or 'first'");
  }
  o.strict_remove = strict_remove;
  o.lenient = lenient;
  o.emit_dot = emit_dot;
  return o;
}

}  // namespace

PYBIND11_MODULE(_attackforge, m) {
  m.doc() = "Attack scenario compiler: DSL to TOSCA and Ansible-style artifacts";

  static PyObject* diagnostic_error =
      py::exception<DiagnosticError>(m, "DiagnosticError").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DiagnosticError& e) {
      py::object exc = py::handle(diagnostic_error)(
          render(e.diagnostics().front()));
      exc.attr("diagnostics") = to_list(e.diagnostics());
      PyErr_SetObject(diagnostic_error, exc.ptr());
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    }
  });

  m.def(
      "check",
      [](const std::string& source) {
        std::vector<Diagnostic> warnings;
        ScenarioDocument doc = load_scenario(source, &warnings);
        py::dict out;
        out["name"] = doc.name;
        out["steps"] = doc.path_order.size();
        out["resources"] = doc.resources.size();
        out["warnings"] = to_list(warnings);
        return out;
      },
      py::arg("source"),
      "Parse and validate a scenario; raises DiagnosticError on errors.");

  m.def("emit_preamble", [] { return emit_service_template(init_template()); });

  m.def(
      "service_template",
      [](const std::string& source, const std::string& tie_break) {
        return emit_service_template(
            run_pipeline(source, options(tie_break, false, false, false)).tpl);
      },
      py::arg("source"), py::arg("tie_break") = "error");

  m.def(
      "build",
      [](const std::string& source, const std::filesystem::path& out_dir,
         const std::string& tie_break, bool strict_remove, bool lenient,
         bool emit_dot) {
        const BuildOptions o = options(tie_break, strict_remove, lenient, emit_dot);
        return write_outputs(run_pipeline(source, o), out_dir, o);
      },
      py::arg("source"), py::arg("out_dir"), py::arg("tie_break") = "error",
      py::arg("strict_remove") = false, py::arg("lenient") = false,
      py::arg("emit_dot") = false,
      "Compile a scenario and write the output layout; returns written paths.");

  m.def(
      "simulate",
      [](const std::string& source) {
        PipelineResult r = run_pipeline(source);
        ExecutionTrace t = simulate(r.chain, r.bundle.attack_playbook,
                                    r.bundle.roles, r.bundle.inventory);
        py::dict recap;
        for (const auto& h : t.recap) {
          py::dict counts;
          counts["ok"] = h.ok;
          counts["changed"] = h.changed;
          counts["failed"] = h.failed;
          counts["skipped"] = h.skipped;
          recap[py::str(h.host)] = counts;
        }
        py::dict out;
        out["succeeded"] = t.succeeded();
        out["recap"] = recap;
        out["text"] = render_trace(t);
        return out;
      },
      py::arg("source"));

  m.def(
      "export_graph",
      [](const std::string& source, const std::string& format) {
        PipelineResult r = run_pipeline(source);
        return export_graph(r.graph, parse_graph_format(format));
      },
      py::arg("source"), py::arg("format") = "dot");
}
