#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "attackforge/diagnostic.hpp"
#include "attackforge/pipeline.hpp"

namespace attackforge::testing {

inline std::filesystem::path source_dir() { return ATTACKFORGE_SOURCE_DIR; }

inline std::filesystem::path snifattack_path() {
  return source_dir() / "scenarios" / "snifattack.atk";
}

inline std::string snifattack_source() { return read_file(snifattack_path()); }

inline std::string golden(const std::string& name) {
  return read_file(source_dir() / "tests" / "golden" / name);
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  auto dir = std::filesystem::temp_directory_path() /
             ("attackforge-" + tag + "-" + std::to_string(rng()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Relative path -> bytes for every regular file under `root`.
inline std::map<std::string, std::string> read_tree(
    const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), root).generic_string()] =
          read_file(e.path());
    }
  }
  return out;
}

/// Replaces the first occurrence of `from`; fails loudly when absent.
inline std::string replace_once(std::string text, const std::string& from,
                                const std::string& to) {
  auto pos = text.find(from);
  if (pos == std::string::npos) {
    throw std::logic_error("fixture text not found: " + from);
  }
  return text.replace(pos, from.size(), to);
}

/// SnifAttack with UseOfDefaults no longer granting control of the router.
inline std::string mutated_snifattack() {
  return replace_once(snifattack_source(),
                      "    add {\n      fact Attacker controls Router\n    }\n",
                      "");
}

}  // namespace attackforge::testing
