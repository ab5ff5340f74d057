#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"

namespace attackforge {
namespace {

TEST(TargetOracle, AgreesWithBruteForce) {
  const auto report = oracle::check_target_inference(2024, 300);
  EXPECT_EQ(report.agreed, report.cases) << report.first_mismatch;
}

// Every outcome class shows up in the random corpus.
TEST(TargetOracle, CorpusCoversEveryOutcome) {
  std::mt19937 rng(2024);
  std::map<std::string, int> outcomes;
  for (int i = 0; i < 300; ++i) {
    ScenarioDocument doc =
        parse_scenario(oracle::random_target_scenario(rng, i));
    ASSERT_FALSE(has_errors(validate_scenario(doc)));
    for (const auto& t : oracle::brute_force_targets(doc)) {
      if (t.hosts.empty()) {
        ++outcomes["none"];
      } else {
        ++outcomes[t.hypothesis + (t.hosts.size() > 1 ? "/ambiguous" : "")];
      }
    }
  }
  for (const char* key : {"none", "iao", "iao-extended", "ig", "iao/ambiguous",
                          "iao-extended/ambiguous"}) {
    EXPECT_GT(outcomes[key], 5) << key;
  }
}

TEST(TargetOracle, BruteForceOnHandWrittenScenario) {
  ScenarioDocument doc = parse_scenario(R"(
    scenario S {
      agent A
      resource H : RuntimeHost
      resource R : RuntimeHost
      resource P : Software
      functionality f offeredBy P
      fact P installedOn R
      fact A perceivedAsAdministrator H
      step T1 { agent: A trigger: f description: "d" add { fact A controls R } }
      step T2 { agent: A trigger: f description: "d" }
      order T1 -> T2
    })");
  const auto got = oracle::brute_force_targets(doc);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_TRUE(got[0].hosts.empty());
  EXPECT_EQ(got[1].hypothesis, "iao-extended");
  EXPECT_EQ(got[1].hosts, std::vector<std::string>{"H"});
}

}  // namespace
}  // namespace attackforge
