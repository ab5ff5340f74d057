#include "attackforge/diagnostic.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

namespace attackforge {

Diagnostic make_error(std::string code, std::string message,
                      Location location) {
  return {Severity::kError, location, std::move(code), std::move(message)};
}

Diagnostic make_warning(std::string code, std::string message,
                        Location location) {
  return {Severity::kWarning, location, std::move(code), std::move(message)};
}

std::string render(const Diagnostic& diagnostic) {
  std::ostringstream out;
  out << (diagnostic.is_error() ? "error" : "warning") << ' '
      << diagnostic.code << ' ' << diagnostic.location.line << ':'
      << diagnostic.location.column << ' ' << diagnostic.message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.is_error()) return true;
  }
  return false;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.is_error()) return render(d);
  }
  return diagnostics.empty() ? "diagnostic error" : render(diagnostics.front());
}

}  // namespace

DiagnosticError::DiagnosticError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

DiagnosticError::DiagnosticError(Diagnostic diagnostic)
    : DiagnosticError(std::vector<Diagnostic>{std::move(diagnostic)}) {}

IoError::IoError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(path) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string bytes{std::istreambuf_iterator<char>(in),
                    std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError(path, "read failed");
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path(), ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace attackforge
