#include <gtest/gtest.h>

#include <set>

#include "attackforge/pipeline.hpp"
#include "attackforge/tosca_validator.hpp"
#include "support.hpp"

namespace attackforge {
namespace {

using testing::golden;
using testing::snifattack_source;

const PipelineResult& snifattack() {
  static const PipelineResult r = run_pipeline(snifattack_source());
  return r;
}

std::vector<Diagnostic> failure(const std::string& source,
                                const BuildOptions& options = {}) {
  try {
    run_pipeline(source, options);
  } catch (const DiagnosticError& e) {
    return e.diagnostics();
  }
  return {};
}

constexpr const char* kTwoHosts = R"(
  scenario Twin {
    agent A
    resource H1 : RuntimeHost
    resource H2 : RuntimeHost
    resource P : Software
    functionality f offeredBy P
    fact A perceivedAsAdministrator H1
    fact A perceivedAsAdministrator H2
    fact P installedOn H1
    fact P installedOn H2
    step T { agent: A trigger: f description: "d" }
    order T
  })";

TEST(Preamble, MatchesGolden) {
  EXPECT_EQ(emit_service_template(init_template()), golden("preamble.yaml"));
  EXPECT_EQ(emit_service_template(init_template()),
            emit_service_template(init_template()));
  EXPECT_TRUE(validate_template(init_template()).empty());
}

TEST(RuleCatalog, TwelveRules) {
  const auto& rules = rule_catalog();
  ASSERT_EQ(rules.size(), 12u);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_EQ(rules[i].id, "R" + std::to_string(i + 1));
    EXPECT_FALSE(rules[i].summary.empty());
  }
}

TEST(Topology, SnifAttackFragments) {
  const std::string text = emit_service_template(snifattack().tpl);
  std::string fragments = golden("topology_fragments.yaml");
  std::size_t start = 0;
  for (auto pos = fragments.find("---\n"); start < fragments.size();
       pos = fragments.find("---\n", start)) {
    if (pos == std::string::npos) pos = fragments.size();
    const std::string block = fragments.substr(start, pos - start);
    EXPECT_NE(text.find(block), std::string::npos) << block;
    start = pos + 4;
  }
}

TEST(Topology, HostsAndNetworksBijectWithContext) {
  const PipelineResult& r = snifattack();
  std::set<std::string> hosts, networks, ports;
  for (const auto& t : r.tpl.node_templates) {
    if (t.type == tosca::kHostSystem) hosts.insert(t.name);
    if (t.type == tosca::kNetwork) networks.insert(t.name);
    if (t.type == tosca::kPort) ports.insert(t.name);
  }
  EXPECT_EQ(hosts, (std::set<std::string>{"AttackerHost", "Router", "PC",
                                          "ShopServer"}));
  EXPECT_EQ(networks,
            (std::set<std::string>{"LocalLAN", "AdjacentLAN", "Internet"}));
  EXPECT_EQ(ports.size(), 6u);
}

TEST(Topology, HostedSoftwareAndProperties) {
  const ServiceTemplate& tpl = snifattack().tpl;
  const NodeTemplate* ssh = tpl.node_template("SSHService");
  ASSERT_NE(ssh, nullptr);
  EXPECT_EQ(ssh->type, tosca::kSoftwareComponent);
  EXPECT_EQ(ssh->requirements,
            (std::vector<Requirement>{{RequirementKind::kHost, "Router"}}));
  EXPECT_EQ(ssh->properties, (OrderedStrings{{"exposure", "listening"},
                                             {"credentials", "default"}}));
}

TEST(Workflow, OperationsStepsAndSuccessors) {
  const ServiceTemplate& tpl = snifattack().tpl;
  const InterfaceType* attack = tpl.interface_type(tosca::kAttackTransitions);
  ASSERT_NE(attack, nullptr);
  EXPECT_EQ(attack->operations.size(), 6u);
  ASSERT_NE(attack->operation("scans"), nullptr);
  EXPECT_EQ(*attack->operation("scans"),
            "The attacker scans its local network gateway, then finds a "
            "listening SSH service.");
  const Workflow* wf = tpl.workflow(tosca::kAbstractScript);
  ASSERT_NE(wf, nullptr);
  EXPECT_EQ(wf->description, snifattack().doc.goal);
  ASSERT_EQ(wf->steps.size(), 6u);
  EXPECT_EQ(wf->steps[0].on_success, std::vector<std::string>{"UseOfDefaults"});
  EXPECT_TRUE(wf->steps[5].on_success.empty());
  const std::string text = emit_service_template(tpl);
  EXPECT_NE(text.find(golden("workflow_fragment.yaml")), std::string::npos);
  EXPECT_NE(text.find(golden("workflow_steps.yaml")), std::string::npos);
}

TEST(Workflow, SingleStepPath) {
  PipelineResult r = run_pipeline(R"(
    scenario One {
      goal: "g"
      agent A
      resource H : RuntimeHost
      resource P : Software
      functionality f offeredBy P
      fact A perceivedAsAdministrator H
      fact P installedOn H
      step T { agent: A trigger: f description: "d" }
      order T
    })");
  const Workflow* wf = r.tpl.workflow(tosca::kAbstractScript);
  ASSERT_NE(wf, nullptr);
  ASSERT_EQ(wf->steps.size(), 1u);
  EXPECT_EQ(wf->steps[0].target, "H");
  EXPECT_TRUE(wf->steps[0].on_success.empty());
  EXPECT_EQ(wf->description, "g");
  EXPECT_TRUE(validate_template(r.tpl).empty());
}

constexpr const char* kSharedTrigger = R"(
  scenario Shared {
    agent A
    resource H : RuntimeHost
    resource P : Software
    functionality f offeredBy P
    fact A perceivedAsAdministrator H
    fact P installedOn H
    step T1 { agent: A trigger: f description: "first" }
    step T2 { agent: A trigger: f description: "second" }
    order T1 -> T2
  })";

TEST(Workflow, ConflictingTriggerDescriptions) {
  auto d = failure(kSharedTrigger);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "E-DUP-TRIGGER-DESC");
  PipelineResult r = run_pipeline(kSharedTrigger, {.lenient = true});
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].code, "W-DUP-TRIGGER-DESC");
  EXPECT_EQ(*r.tpl.interface_type(tosca::kAttackTransitions)->operation("f"),
            "first");
}

TEST(Targets, SnifAttack) {
  const Workflow* wf = snifattack().tpl.workflow(tosca::kAbstractScript);
  for (const auto& s : wf->steps) {
    EXPECT_EQ(s.target, s.name == "Disclosure" ? "PC" : "AttackerHost")
        << s.name;
  }
}

TEST(Targets, HypothesisPerStep) {
  const PipelineResult& r = snifattack();
  const std::map<std::string, std::string> want = {
      {"Scan", "iao"},          {"UseOfDefaults", "iao"},
      {"Sniffing", "iao-extended"}, {"Disclosure", "iao-extended"},
      {"Discovery", "ig"},      {"Checkmate", "ig"}};
  for (std::size_t i = 0; i < r.chain.transition_names.size(); ++i) {
    const auto& step = r.chain.transition_names[i];
    TargetInference t = evaluate_hypotheses(r.graph, step, i);
    EXPECT_EQ(t.hypothesis, want.at(step)) << step;
    EXPECT_EQ(t.position, i);
  }
}

TEST(Targets, NoHypothesis) {
  auto d = failure(R"(
    scenario Lost {
      agent A
      resource H : RuntimeHost
      resource P : Software
      functionality f offeredBy P
      fact P installedOn H
      step T { agent: A trigger: f description: "d" }
      order T
    })");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "E-NO-TARGET");
  EXPECT_NE(d[0].message.find("'T'"), std::string::npos);
}

TEST(Targets, AmbiguousUnlessTieBreak) {
  auto d = failure(kTwoHosts);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "E-AMBIGUOUS-TARGET");
  EXPECT_NE(d[0].message.find("H1, H2"), std::string::npos);
  PipelineResult r = run_pipeline(kTwoHosts, {.tie_break = TieBreak::kFirst});
  EXPECT_EQ(r.tpl.workflow(tosca::kAbstractScript)->steps[0].target, "H1");
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].code, "W-AMBIGUOUS-TARGET");
}

TEST(RuleTrace, EveryRuleFiresOnSnifAttack) {
  std::set<std::string> fired;
  for (const auto& e : snifattack().trace.entries) {
    fired.insert(e.rule);
    EXPECT_FALSE(e.element.empty());
    EXPECT_FALSE(e.binding.empty());
  }
  EXPECT_EQ(fired.size(), 12u);
  const std::string json = snifattack().trace.to_json();
  EXPECT_EQ(json.front(), '[');
  EXPECT_NE(json.find("\"hypothesis\": \"iao-extended\""), std::string::npos);
}

TEST(RuleTrace, DisclosureBinding) {
  bool found = false;
  for (const auto& e : snifattack().trace.entries) {
    if (e.rule != "R9" || e.element.find(".Disclosure.") == std::string::npos) {
      continue;
    }
    found = true;
    std::map<std::string, std::string> b(e.binding.begin(), e.binding.end());
    EXPECT_EQ(b["agt"], "ActingVictim");
  }
  EXPECT_TRUE(found);
}

TEST(Emission, Deterministic) {
  PipelineResult again = run_pipeline(snifattack_source());
  EXPECT_EQ(emit_service_template(again.tpl),
            emit_service_template(snifattack().tpl));
  EXPECT_EQ(again.trace.to_json(), snifattack().trace.to_json());
}

TEST(Topology, MissingPreamble) {
  ServiceTemplate bare;
  try {
    generate_workflow(snifattack().graph, bare);
    FAIL();
  } catch (const DiagnosticError& e) {
    EXPECT_EQ(e.diagnostics().front().code, "E-PREAMBLE-MISSING");
  }
}

}  // namespace
}  // namespace attackforge
