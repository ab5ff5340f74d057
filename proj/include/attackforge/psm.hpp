#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "attackforge/pim.hpp"
#include "attackforge/scenario.hpp"

namespace attackforge {

inline constexpr std::string_view kAgentGroup = "Agent";
inline constexpr std::string_view kUnassignedGroup = "Unassigned";
inline constexpr std::string_view kRolePrefix = "AttackTransition_";
inline constexpr std::string_view kNoopModule = "ansible.builtin.meta";
inline constexpr std::string_view kNoopArgs = "noop";

struct InventoryGroup {
  std::string name;
  std::vector<std::string> hosts;
  std::vector<std::string> children;
  friend bool operator==(const InventoryGroup&, const InventoryGroup&) = default;
};

/// Children of the implicit `all` group, in emission order: the `Agent`
/// group (whose children are the agent groups), one group per agent, then
/// `Unassigned` for hosts no agent owns.
struct InventoryTree {
  std::vector<InventoryGroup> groups;

  const InventoryGroup* group(std::string_view name) const;
  friend bool operator==(const InventoryTree&, const InventoryTree&) = default;
};

struct Task {
  std::string name;
  OrderedStrings vars;
  std::string module = std::string(kNoopModule);
  std::string args = std::string(kNoopArgs);
  friend bool operator==(const Task&, const Task&) = default;
};

struct Play {
  std::string name;
  std::string hosts;
  std::vector<std::string> roles;
  std::vector<Task> tasks;
  friend bool operator==(const Play&, const Play&) = default;
};

struct Playbook {
  std::vector<Play> plays;
  friend bool operator==(const Playbook&, const Playbook&) = default;
};

struct RoleSkeleton {
  std::string name;
  /// Echoed as a comment at the top of the task file.
  std::string description;
  std::vector<Task> tasks;
  friend bool operator==(const RoleSkeleton&, const RoleSkeleton&) = default;
};

struct ArchiveManifest {
  /// Paths written, relative to the output directory, in write order.
  std::vector<std::string> files;
  /// Members of the CSAR archive, in archive order.
  std::vector<std::string> archive_members;
};

struct PsmBundle {
  InventoryTree inventory;
  Playbook attack_playbook;
  Playbook enrichment_playbook;
  std::vector<RoleSkeleton> roles;
  ArchiveManifest package_descriptor;
};

/// `--- internal: <note> ---`, the task name of a preparatory task.
std::string internal_task_name(std::string_view note);
/// `{step} ({agent} {trigger}) - {description}`
std::string play_name(const TransitionDecl& step);

/// Throws DiagnosticError (E-HOST-TWO-AGENTS) if two agent groups would
/// claim one host.
InventoryTree generate_inventory(const ServiceTemplate& tpl,
                                 const ScenarioDocument& doc);
Playbook generate_attack_playbook(const ServiceTemplate& tpl,
                                  const ScenarioDocument& doc);
std::vector<RoleSkeleton> generate_roles(const Playbook& playbook,
                                         const ScenarioDocument& doc);
Playbook generate_enrichment_playbook(const ServiceTemplate& tpl);

std::string emit_inventory(const InventoryTree& inventory);
std::string emit_playbook(const Playbook& playbook);
std::string emit_role_tasks(const RoleSkeleton& role);

/// Readers for the emitted formats; they accept exactly what the emitters
/// write (plus comments) and throw SyntaxError otherwise.
InventoryTree parse_inventory(std::string_view text);
Playbook parse_playbook(std::string_view text);
RoleSkeleton parse_role_tasks(std::string_view role_name, std::string_view text);

/// TOSCA.meta block of the CSAR archive.
std::string csar_metadata(std::string_view entry_definitions);

/// Deterministic zip (stored entries, fixed timestamps).
std::string build_zip(
    const std::vector<std::pair<std::string, std::string>>& members);
/// Member names and contents of a zip written by build_zip.
std::vector<std::pair<std::string, std::string>> read_zip(
    std::string_view bytes);

/// Relative paths of the output layout.
namespace layout {
inline constexpr std::string_view kServiceTemplate =
    "pim/service_template.yaml";
inline constexpr std::string_view kRulesTrace = "pim/rules_trace.json";
inline constexpr std::string_view kChainDump = "pim/context_chain.txt";
inline constexpr std::string_view kInventory = "psm/00_inventory.yaml";
inline constexpr std::string_view kAttackScript = "psm/AttackScript.yaml";
inline constexpr std::string_view kEnrichment = "psm/EnrichNetworking.yaml";
inline constexpr std::string_view kRolesDir = "psm/roles";
inline constexpr std::string_view kTrace = "psm/trace.txt";
inline constexpr std::string_view kCsarDir = "csar";
std::string role_tasks(std::string_view role);
std::string csar(std::string_view scenario);
}  // namespace layout

/// Writes the service template, inventory, both playbooks, role task files
/// and the CSAR archive under `out_dir`. Throws IoError naming the failing
/// path.
ArchiveManifest package_bundle(const PsmBundle& bundle,
                               const ServiceTemplate& tpl,
                               std::string_view scenario_name,
                               const std::filesystem::path& out_dir);

}  // namespace attackforge
