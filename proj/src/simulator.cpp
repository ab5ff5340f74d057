#include "attackforge/simulator.hpp"

#include <algorithm>
#include <set>

namespace attackforge {

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::kOk:
      return "ok";
    case TaskStatus::kFailed:
      return "failed";
    case TaskStatus::kSkipped:
      return "skipped";
  }
  return "ok";
}

const HostRecap* ExecutionTrace::host(std::string_view name) const {
  for (const auto& r : recap) {
    if (r.host == name) return &r;
  }
  return nullptr;
}

bool ExecutionTrace::succeeded() const {
  return std::none_of(recap.begin(), recap.end(),
                      [](const HostRecap& r) { return r.failed > 0; });
}

namespace {

void collect_hosts(const InventoryTree& inventory, std::string_view group,
                   std::set<std::string>& visiting,
                   std::vector<std::string>& out) {
  const InventoryGroup* g = inventory.group(group);
  if (!g) {
    throw DiagnosticError(make_error(
        "E-INVENTORY-MISS",
        "inventory has no group '" + std::string(group) + "'"));
  }
  if (!visiting.insert(g->name).second) return;
  for (const auto& h : g->hosts) {
    if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
  }
  for (const auto& child : g->children) {
    collect_hosts(inventory, child, visiting, out);
  }
}

std::string missing_preconditions(const ChainStep& step, const FactSet& state) {
  std::string out;
  for (const auto& f : step.preconditions) {
    if (state.contains(f)) continue;
    out += out.empty() ? "" : "; ";
    out += to_string(f);
  }
  return out;
}

void tally(ExecutionTrace& trace, const TaskResult& r) {
  auto it = std::find_if(trace.recap.begin(), trace.recap.end(),
                         [&](const HostRecap& h) { return h.host == r.host; });
  if (it == trace.recap.end()) {
    trace.recap.push_back({r.host});
    it = std::prev(trace.recap.end());
  }
  switch (r.status) {
    case TaskStatus::kOk:
      ++it->ok;
      break;
    case TaskStatus::kFailed:
      ++it->failed;
      break;
    case TaskStatus::kSkipped:
      ++it->skipped;
      break;
  }
  if (r.changed) ++it->changed;
}

}  // namespace

std::vector<std::string> resolve_hosts(const InventoryTree& inventory,
                                       std::string_view group) {
  std::set<std::string> visiting;
  std::vector<std::string> out;
  collect_hosts(inventory, group, visiting, out);
  return out;
}

ExecutionTrace simulate(const StateChain& chain, const Playbook& playbook,
                        const std::vector<RoleSkeleton>& roles,
                        const InventoryTree& inventory) {
  ExecutionTrace trace;
  auto emit = [&](TaskResult r) {
    tally(trace, r);
    const bool failed = r.status == TaskStatus::kFailed;
    trace.results.push_back(std::move(r));
    return !failed;
  };

  for (const auto& play : playbook.plays) {
    const std::vector<std::string> hosts = resolve_hosts(inventory, play.hosts);
    for (const auto& role_name : play.roles) {
      auto role = std::find_if(roles.begin(), roles.end(),
                               [&](const RoleSkeleton& r) {
                                 return r.name == role_name;
                               });
      std::string_view step_name = role_name;
      if (step_name.starts_with(kRolePrefix)) {
        step_name.remove_prefix(kRolePrefix.size());
      }
      auto pos = std::find(chain.transition_names.begin(),
                           chain.transition_names.end(), step_name);
      const ChainStep* step = nullptr;
      std::size_t index = 0;
      if (pos != chain.transition_names.end()) {
        index = static_cast<std::size_t>(pos - chain.transition_names.begin());
        step = &chain.steps[index];
      }

      for (const auto& host : hosts) {
        if (role == roles.end()) {
          if (!emit({play.name, role_name, "", host, TaskStatus::kFailed, false,
                     "role '" + role_name + "' not found"})) {
            return trace;
          }
          continue;
        }
        for (const auto& task : role->tasks) {
          TaskResult r{play.name, role_name, task.name, host};
          const bool trigger = step && task.name == step->trigger;
          if (!step) {
            r.status = TaskStatus::kFailed;
            r.message = "no attack step for role '" + role_name + "'";
          } else if (trigger) {
            std::string missing =
                missing_preconditions(*step, chain.states[index].facts);
            if (!missing.empty()) {
              r.status = TaskStatus::kFailed;
              r.message = "precondition not satisfied at position " +
                          std::to_string(index) + ": " + missing;
            } else {
              r.changed = step->changes_state();
            }
          }
          if (!emit(std::move(r))) return trace;
        }
      }
    }
  }
  return trace;
}

std::string render_trace(const ExecutionTrace& trace) {
  std::string out;
  const std::string* play = nullptr;
  for (const auto& r : trace.results) {
    if (!play || *play != r.play) {
      play = &r.play;
      out += "PLAY [" + r.play + "] ***\n\n";
    }
    out += "TASK [" + r.role + " : " + r.task + "] ***\n";
    switch (r.status) {
      case TaskStatus::kOk:
        out += (r.changed ? "changed: [" : "ok: [") + r.host + "]\n\n";
        break;
      case TaskStatus::kFailed:
        out += "fatal: [" + r.host + "]: FAILED! => " + r.message + "\n\n";
        break;
      case TaskStatus::kSkipped:
        out += "skipping: [" + r.host + "]\n\n";
        break;
    }
  }
  out += "PLAY RECAP ***\n";
  for (const auto& h : trace.recap) {
    out += h.host + " : ok=" + std::to_string(h.ok) +
           " changed=" + std::to_string(h.changed) +
           " unreachable=" + std::to_string(h.unreachable) +
           " failed=" + std::to_string(h.failed) +
           " skipped=" + std::to_string(h.skipped) +
           " rescued=" + std::to_string(h.rescued) +
           " ignored=" + std::to_string(h.ignored) + "\n";
  }
  return out;
}

}  // namespace attackforge
