#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace attackforge {

enum class Severity { kError, kWarning };

/// Line/column span in a source text. Line 0 means "no location".
struct Location {
  std::size_t line = 0;
  std::size_t column = 0;

  bool empty() const { return line == 0; }
  friend bool operator==(const Location&, const Location&) = default;
};

/// A single finding produced by a checker.
///
/// Codes are stable identifiers (E-* for errors, W-* for warnings) and are
/// listed in docs/diagnostics.md.
struct Diagnostic {
  Severity severity = Severity::kError;
  Location location;
  std::string code;
  std::string message;

  bool is_error() const { return severity == Severity::kError; }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Diagnostic make_error(std::string code, std::string message,
                      Location location = {});
Diagnostic make_warning(std::string code, std::string message,
                        Location location = {});

/// `<severity> <code> <line>:<col> <message>`
std::string render(const Diagnostic& diagnostic);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Raised when a pipeline stage cannot produce its output. Carries every
/// diagnostic collected up to the failure, warnings included.
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(std::vector<Diagnostic> diagnostics);
  explicit DiagnosticError(Diagnostic diagnostic);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Malformed input text (scenario source or YAML outside the supported
/// subset).
class SyntaxError : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

/// Filesystem failure; the message names the offending path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace attackforge
