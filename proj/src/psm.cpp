#include "attackforge/psm.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <system_error>

#include "attackforge/yaml.hpp"

namespace attackforge {

const InventoryGroup* InventoryTree::group(std::string_view name) const {
  for (const auto& g : groups) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::string internal_task_name(std::string_view note) {
  return "--- internal: " + std::string(note) + " ---";
}

std::string play_name(const TransitionDecl& step) {
  return step.name + " (" + step.agent + " " + step.trigger + ") - " +
         step.description;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

void append_unique(std::vector<std::string>& list, const std::string& value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) {
    list.push_back(value);
  }
}

const Workflow* abstract_script(const ServiceTemplate& tpl) {
  return tpl.workflow(tosca::kAbstractScript);
}

}  // namespace

InventoryTree generate_inventory(const ServiceTemplate& tpl,
                                 const ScenarioDocument& doc) {
  InventoryTree tree;
  InventoryGroup agents{std::string(kAgentGroup), {}, {}};
  for (const auto& a : doc.agents) agents.children.push_back(a.name);
  tree.groups.push_back(agents);

  const Workflow* script = abstract_script(tpl);
  std::map<std::string, std::string> owner;
  std::vector<Diagnostic> conflicts;
  for (const auto& a : doc.agents) {
    InventoryGroup group{a.name, {}, {}};
    for (const auto& f : doc.facts) {
      if (f.holds_initially && f.subject == a.name &&
          f.label == label::kPerceivedAsAdministrator &&
          tpl.node_template(f.object)) {
        append_unique(group.hosts, f.object);
      }
    }
    if (script) {
      for (const auto& step : script->steps) {
        const TransitionDecl* t = doc.find_transition(step.name);
        if (t && t->agent == a.name && !step.target.empty()) {
          append_unique(group.hosts, step.target);
        }
      }
    }
    for (const auto& host : group.hosts) {
      auto [it, inserted] = owner.emplace(host, a.name);
      if (!inserted) {
        conflicts.push_back(make_error(
            "E-HOST-TWO-AGENTS", "host '" + host + "' belongs to agents '" +
                                     it->second + "' and '" + a.name + "'"));
      }
    }
    tree.groups.push_back(std::move(group));
  }
  if (!conflicts.empty()) throw DiagnosticError(std::move(conflicts));

  InventoryGroup unassigned{std::string(kUnassignedGroup), {}, {}};
  for (const auto& t : tpl.node_templates) {
    if (t.type == tosca::kHostSystem && !owner.contains(t.name)) {
      unassigned.hosts.push_back(t.name);
    }
  }
  if (!unassigned.hosts.empty()) tree.groups.push_back(std::move(unassigned));
  return tree;
}

Playbook generate_attack_playbook(const ServiceTemplate& tpl,
                                  const ScenarioDocument& doc) {
  Playbook book;
  const Workflow* script = abstract_script(tpl);
  if (!script) return book;
  for (const auto& step : script->steps) {
    const TransitionDecl* t = doc.find_transition(step.name);
    if (!t) continue;
    book.plays.push_back(
        {play_name(*t), t->agent, {std::string(kRolePrefix) + t->name}, {}});
  }
  return book;
}

std::vector<RoleSkeleton> generate_roles(const Playbook& playbook,
                                         const ScenarioDocument& doc) {
  std::vector<RoleSkeleton> roles;
  for (const auto& play : playbook.plays) {
    for (const auto& role_name : play.roles) {
      RoleSkeleton role{role_name, {}, {}};
      std::string_view step_name = role_name;
      if (step_name.starts_with(kRolePrefix)) {
        step_name.remove_prefix(kRolePrefix.size());
      }
      if (const TransitionDecl* t = doc.find_transition(step_name)) {
        role.description = t->description;
        for (const auto& note : t->internal_tasks) {
          role.tasks.push_back({internal_task_name(note)});
        }
        role.tasks.push_back({t->trigger});
      }
      roles.push_back(std::move(role));
    }
  }
  return roles;
}

Playbook generate_enrichment_playbook(const ServiceTemplate& tpl) {
  Playbook book;
  for (const auto& host : tpl.node_templates) {
    if (host.type != tosca::kHostSystem) continue;
    Play play{"Enrich networking of " + host.name, host.name, {}, {}};
    for (const auto& port : tpl.node_templates) {
      if (port.type != tosca::kPort) continue;
      std::string link, binding;
      for (const auto& r : port.requirements) {
        if (r.kind == RequirementKind::kLink) link = r.target;
        if (r.kind == RequirementKind::kBinding) binding = r.target;
      }
      if (binding != host.name) continue;
      play.tasks.push_back({"attach " + port.name, {{"network", link}}});
    }
    book.plays.push_back(std::move(play));
  }
  return book;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

using yaml::Node;

Node task_node(const Task& task) {
  Node n = Node::mapping();
  n.add("name", Node::scalar(task.name));
  if (!task.vars.empty()) {
    Node& vars = n.add("vars", Node::mapping());
    for (const auto& [k, v] : task.vars) vars.add(k, Node::scalar(v));
  }
  n.add(task.module, Node::scalar(task.args));
  return n;
}

std::string comment_block(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out += "# ";
    out += text.substr(start, end - start);
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string emit_inventory(const InventoryTree& inventory) {
  Node children = Node::mapping();
  for (const auto& g : inventory.groups) {
    Node group = Node::null();
    if (!g.children.empty()) {
      Node& c = group.add("children", Node::mapping());
      for (const auto& child : g.children) c.add(child, Node::null());
    }
    if (!g.hosts.empty()) {
      Node& h = group.add("hosts", Node::mapping());
      for (const auto& host : g.hosts) h.add(host, Node::null());
    }
    children.add(g.name, std::move(group));
  }
  Node all = Node::mapping();
  all.add("children", std::move(children));
  Node root = Node::mapping();
  root.add("all", std::move(all));
  return yaml::emit(root);
}

std::string emit_playbook(const Playbook& playbook) {
  Node root = Node::sequence();
  for (const auto& play : playbook.plays) {
    Node p = Node::mapping();
    p.add("name", Node::scalar(play.name));
    p.add("hosts", Node::scalar(play.hosts));
    if (!play.roles.empty()) {
      Node& roles = p.add("roles", Node::sequence());
      for (const auto& r : play.roles) roles.push_back(Node::scalar(r));
    }
    if (!play.tasks.empty()) {
      Node& tasks = p.add("tasks", Node::sequence());
      for (const auto& t : play.tasks) tasks.push_back(task_node(t));
    }
    root.push_back(std::move(p));
  }
  return "---\n" + yaml::emit(root);
}

std::string emit_role_tasks(const RoleSkeleton& role) {
  Node root = Node::sequence();
  for (const auto& t : role.tasks) root.push_back(task_node(t));
  std::string out = "---\n";
  if (!role.description.empty()) out += comment_block(role.description);
  return out + yaml::emit(root);
}

// ---------------------------------------------------------------------------
// Reading

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw SyntaxError(make_error("E-PSM-FORMAT", what, {1, 1}));
}

const std::vector<Node::Entry>& mapping_entries(const Node& n,
                                                const std::string& where) {
  static const std::vector<Node::Entry> kEmpty;
  if (n.is_null()) return kEmpty;
  if (!n.is_mapping()) malformed(where + ": expected a mapping");
  return n.entries();
}

const std::vector<Node>& sequence_items(const Node& n,
                                        const std::string& where) {
  static const std::vector<Node> kEmpty;
  if (n.is_null()) return kEmpty;
  if (!n.is_sequence()) malformed(where + ": expected a sequence");
  return n.items();
}

std::string scalar_of(const Node& n, const std::string& where) {
  if (!n.is_scalar()) malformed(where + ": expected a scalar");
  return n.value();
}

Task parse_task(const Node& n, const std::string& where) {
  Task task{"", {}, "", ""};
  for (const auto& [key, value] : mapping_entries(n, where)) {
    if (key == "name") {
      task.name = scalar_of(value, where + ".name");
    } else if (key == "vars") {
      for (const auto& [k, v] : mapping_entries(value, where + ".vars")) {
        task.vars.emplace_back(k, scalar_of(v, where + ".vars." + k));
      }
    } else if (task.module.empty()) {
      task.module = key;
      task.args = value.is_null() ? "" : scalar_of(value, where + "." + key);
    } else {
      malformed(where + ": more than one module call");
    }
  }
  return task;
}

}  // namespace

InventoryTree parse_inventory(std::string_view text) {
  const Node root = yaml::parse(text);
  const auto& top = mapping_entries(root, "inventory");
  if (top.size() != 1 || top.front().first != "all") {
    malformed("inventory must have the single root group 'all'");
  }
  InventoryTree tree;
  for (const auto& [key, value] : mapping_entries(top.front().second, "all")) {
    if (key != "children") malformed("all: unsupported key '" + key + "'");
    for (const auto& [name, body] : mapping_entries(value, "all.children")) {
      InventoryGroup g{name, {}, {}};
      for (const auto& [k, v] : mapping_entries(body, name)) {
        if (k == "hosts") {
          for (const auto& [host, ignored] : mapping_entries(v, name)) {
            g.hosts.push_back(host);
          }
        } else if (k == "children") {
          for (const auto& [child, ignored] : mapping_entries(v, name)) {
            g.children.push_back(child);
          }
        } else {
          malformed(name + ": unsupported key '" + k + "'");
        }
      }
      tree.groups.push_back(std::move(g));
    }
  }
  return tree;
}

Playbook parse_playbook(std::string_view text) {
  const Node root = yaml::parse(text);
  Playbook book;
  std::size_t index = 0;
  for (const auto& item : sequence_items(root, "playbook")) {
    const std::string where = "play " + std::to_string(index++);
    Play play;
    for (const auto& [key, value] : mapping_entries(item, where)) {
      if (key == "name") {
        play.name = scalar_of(value, where + ".name");
      } else if (key == "hosts") {
        play.hosts = scalar_of(value, where + ".hosts");
      } else if (key == "roles") {
        for (const auto& r : sequence_items(value, where + ".roles")) {
          play.roles.push_back(scalar_of(r, where + ".roles[]"));
        }
      } else if (key == "tasks") {
        for (const auto& t : sequence_items(value, where + ".tasks")) {
          play.tasks.push_back(parse_task(t, where + ".tasks[]"));
        }
      } else {
        malformed(where + ": unsupported key '" + key + "'");
      }
    }
    book.plays.push_back(std::move(play));
  }
  return book;
}

RoleSkeleton parse_role_tasks(std::string_view role_name,
                              std::string_view text) {
  RoleSkeleton role{std::string(role_name), {}, {}};
  // The leading comment block carries the description.
  std::size_t pos = 0;
  std::vector<std::string> lines;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line == "---") continue;
    if (!line.starts_with("# ")) break;
    lines.emplace_back(line.substr(2));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    role.description += (i ? "\n" : "") + lines[i];
  }
  const Node root = yaml::parse(text);
  for (const auto& t : sequence_items(root, std::string(role_name))) {
    role.tasks.push_back(parse_task(t, std::string(role_name) + ".tasks[]"));
  }
  return role;
}

// ---------------------------------------------------------------------------
// Packaging

std::string csar_metadata(std::string_view entry_definitions) {
  return "TOSCA-Meta-File-Version: 1.1\n"
         "CSAR-Version: 1.1\n"
         "Created-By: attackforge\n"
         "Entry-Definitions: " +
         std::string(entry_definitions) + "\n";
}

namespace {

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint16_t get16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) malformed("truncated zip archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t get32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(get16(b, at)) |
         (static_cast<std::uint32_t>(get16(b, at + 2)) << 16);
}

// 1980-01-01 00:00:00, the zip epoch.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (1 << 5) | 1;

}  // namespace

std::string build_zip(
    const std::vector<std::pair<std::string, std::string>>& members) {
  std::string out, central;
  for (const auto& [name, data] : members) {
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size())));
    const auto size = static_cast<std::uint32_t>(data.size());
    const auto name_len = static_cast<std::uint16_t>(name.size());

    put32(out, 0x04034b50);
    put16(out, 20);  // version needed
    put16(out, 0);   // flags
    put16(out, 0);   // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);
    out += name;
    out += data;

    put32(central, 0x02014b50);
    put16(central, 20);  // made by
    put16(central, 20);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, 0);  // external attrs
    put32(central, offset);
    central += name;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  const auto cd_size = static_cast<std::uint32_t>(central.size());
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(members.size()));
  put16(out, static_cast<std::uint16_t>(members.size()));
  put32(out, cd_size);
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

std::vector<std::pair<std::string, std::string>> read_zip(
    std::string_view bytes) {
  if (bytes.size() < 22) malformed("zip archive too short");
  const std::size_t eocd = bytes.size() - 22;
  if (get32(bytes, eocd) != 0x06054b50) {
    malformed("zip end-of-central-directory record not found");
  }
  const std::uint16_t count = get16(bytes, eocd + 10);
  std::size_t at = get32(bytes, eocd + 16);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (get32(bytes, at) != 0x02014b50) malformed("bad central directory");
    if (get16(bytes, at + 10) != 0) malformed("compressed zip member");
    const std::uint32_t crc = get32(bytes, at + 16);
    const std::uint32_t size = get32(bytes, at + 20);
    const std::uint16_t name_len = get16(bytes, at + 28);
    const std::uint16_t extra_len = get16(bytes, at + 30);
    const std::uint16_t comment_len = get16(bytes, at + 32);
    const std::uint32_t local = get32(bytes, at + 42);
    if (at + 46 + name_len > bytes.size()) malformed("truncated zip archive");
    std::string name(bytes.substr(at + 46, name_len));
    const std::size_t data_at =
        local + 30 + get16(bytes, local + 26) + get16(bytes, local + 28);
    if (data_at + size > bytes.size()) malformed("truncated zip member");
    std::string data(bytes.substr(data_at, size));
    if (static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                  static_cast<uInt>(data.size()))) != crc) {
      malformed("crc mismatch for '" + name + "'");
    }
    out.emplace_back(std::move(name), std::move(data));
    at += 46 + name_len + extra_len + comment_len;
  }
  return out;
}

std::string layout::role_tasks(std::string_view role) {
  return std::string(kRolesDir) + "/" + std::string(role) + "/tasks/main.yaml";
}

std::string layout::csar(std::string_view scenario) {
  return std::string(kCsarDir) + "/" + std::string(scenario) + ".csar";
}

ArchiveManifest package_bundle(const PsmBundle& bundle,
                               const ServiceTemplate& tpl,
                               std::string_view scenario_name,
                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError(out_dir, ec ? ec.message() : "not a directory");
  }
  ArchiveManifest manifest;
  auto put = [&](const std::string& rel, const std::string& bytes) {
    write_file(out_dir / rel, bytes);
    manifest.files.push_back(rel);
  };
  const std::string service_template = emit_service_template(tpl);
  put(std::string(layout::kServiceTemplate), service_template);
  put(std::string(layout::kInventory), emit_inventory(bundle.inventory));
  put(std::string(layout::kAttackScript), emit_playbook(bundle.attack_playbook));
  put(std::string(layout::kEnrichment),
      emit_playbook(bundle.enrichment_playbook));
  for (const auto& role : bundle.roles) {
    put(layout::role_tasks(role.name), emit_role_tasks(role));
  }
  const std::string entry = "Definitions/" + std::string(scenario_name) + ".yaml";
  std::vector<std::pair<std::string, std::string>> members = {
      {"TOSCA-Metadata/TOSCA.meta", csar_metadata(entry)},
      {entry, service_template},
  };
  put(layout::csar(scenario_name), build_zip(members));
  for (const auto& [name, data] : members) {
    manifest.archive_members.push_back(name);
  }
  return manifest;
}

}  // namespace attackforge
