#pragma once

#include <string>
#include <vector>

#include "attackforge/context.hpp"
#include "attackforge/psm.hpp"

namespace attackforge {

enum class TaskStatus { kOk, kFailed, kSkipped };

std::string_view to_string(TaskStatus status);

struct TaskResult {
  std::string play;
  std::string role;
  std::string task;
  std::string host;
  TaskStatus status = TaskStatus::kOk;
  bool changed = false;
  /// Failure reason, empty otherwise.
  std::string message;
};

struct HostRecap {
  std::string host;
  std::size_t ok = 0;
  std::size_t changed = 0;
  std::size_t unreachable = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::size_t rescued = 0;
  std::size_t ignored = 0;
};

struct ExecutionTrace {
  std::vector<TaskResult> results;
  /// One entry per host, in order of first appearance.
  std::vector<HostRecap> recap;

  const HostRecap* host(std::string_view name) const;
  bool succeeded() const;
};

/// Hosts of `group`, expanding child groups depth first. Throws
/// DiagnosticError (E-INVENTORY-MISS) if the group does not exist.
std::vector<std::string> resolve_hosts(const InventoryTree& inventory,
                                       std::string_view group);

/// Dry run of the attack playbook. Each play runs its role's tasks on every
/// host of its group; before the trigger task the step's preconditions are
/// checked against the chain state preceding the step. The first failure
/// ends the run.
ExecutionTrace simulate(const StateChain& chain, const Playbook& playbook,
                        const std::vector<RoleSkeleton>& roles,
                        const InventoryTree& inventory);

std::string render_trace(const ExecutionTrace& trace);

}  // namespace attackforge
