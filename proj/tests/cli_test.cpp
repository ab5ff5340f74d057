#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "attackforge/cli.hpp"
#include "support.hpp"

namespace attackforge {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_scenario(const fs::path& dir, const std::string& name,
                        const std::string& text) {
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::scratch_dir(
        ::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  const std::string input_ = testing::snifattack_path().string();
};

TEST_F(Cli, CheckOk) {
  Result r = invoke({"check", input_});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "SnifAttack: 6 steps, 18 resources, ok\n");
}

TEST_F(Cli, CheckReportsDiagnostics) {
  const fs::path bad = write_scenario(
      dir_, "bad.atk",
      testing::replace_once(testing::snifattack_source(), "agent: Attacker",
                            "agent: Nobody"));
  Result r = invoke({"check", bad.string()});
  EXPECT_EQ(r.code, cli::kDiagnostics);
  EXPECT_NE(r.err.find("E-UNRESOLVED-AGENT"), std::string::npos);
  EXPECT_NE(r.err.find("error E-UNRESOLVED-AGENT 67:8 "), std::string::npos);
}

TEST_F(Cli, CheckSyntaxErrorIsEnvironment) {
  const fs::path bad = write_scenario(dir_, "broken.atk", "scenario {");
  EXPECT_EQ(invoke({"check", bad.string()}).code, cli::kEnvironment);
}

TEST_F(Cli, MissingInput) {
  Result r = invoke({"check", (dir_ / "absent.atk").string()});
  EXPECT_EQ(r.code, cli::kEnvironment);
  EXPECT_NE(r.err.find("absent.atk"), std::string::npos);
  EXPECT_EQ(invoke({"simulate", (dir_ / "absent.atk").string()}).code,
            cli::kEnvironment);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kEnvironment);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kEnvironment);
  EXPECT_EQ(invoke({"build", input_, "--tie-break", "random"}).code,
            cli::kEnvironment);
  EXPECT_EQ(invoke({"graph", input_, "--format", "xml"}).code,
            cli::kEnvironment);
}

TEST_F(Cli, BuildWritesLayout) {
  Result r = invoke({"build", input_, "-o", dir_.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  for (const char* f :
       {"pim/service_template.yaml", "pim/rules_trace.json",
        "pim/context_chain.txt", "psm/00_inventory.yaml",
        "psm/AttackScript.yaml", "psm/EnrichNetworking.yaml",
        "psm/roles/AttackTransition_Scan/tasks/main.yaml",
        "csar/SnifAttack.csar"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
    EXPECT_NE(r.out.find(f), std::string::npos) << f;
  }
  EXPECT_FALSE(fs::exists(dir_ / kGraphDot));
}

TEST_F(Cli, BuildEmitDot) {
  ASSERT_EQ(invoke({"build", input_, "-o", dir_.string(), "--emit-dot"}).code,
            cli::kOk);
  std::ifstream in(dir_ / kGraphDot);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.rfind("digraph", 0), 0u);
}

TEST_F(Cli, BuildWithoutTarget) {
  const fs::path lost = write_scenario(dir_, "lost.atk", R"(
    scenario Lost {
      agent A
      resource H : RuntimeHost
      resource P : Software
      functionality f offeredBy P
      fact P installedOn H
      step T { agent: A trigger: f description: "d" }
      order T
    })");
  Result r = invoke({"build", lost.string(), "-o", (dir_ / "out").string()});
  EXPECT_EQ(r.code, cli::kDiagnostics);
  EXPECT_NE(r.err.find("E-NO-TARGET"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(Cli, BuildIntoUnwritableDirectory) {
  std::ofstream(dir_ / "file") << "x";
  Result r = invoke({"build", input_, "-o", (dir_ / "file" / "out").string()});
  EXPECT_EQ(r.code, cli::kEnvironment);
}

TEST_F(Cli, SimulateFreshAndFromArtifacts) {
  Result fresh = invoke({"simulate", input_});
  ASSERT_EQ(fresh.code, cli::kOk) << fresh.err;
  EXPECT_NE(fresh.out.find("AttackerHost : ok=6 changed=3"), std::string::npos);
  ASSERT_EQ(invoke({"build", input_, "-o", dir_.string()}).code, cli::kOk);
  Result reused = invoke({"simulate", input_, "-o", dir_.string()});
  EXPECT_EQ(reused.code, cli::kOk);
  EXPECT_EQ(reused.out, fresh.out);
  std::ifstream in(dir_ / "psm/trace.txt");
  EXPECT_EQ(std::string((std::istreambuf_iterator<char>(in)), {}), fresh.out);
}

TEST_F(Cli, SimulateMutatedAgainstPriorBuild) {
  ASSERT_EQ(invoke({"build", input_, "-o", dir_.string()}).code, cli::kOk);
  const fs::path mutated =
      write_scenario(dir_, "mutated.atk", testing::mutated_snifattack());
  Result r = invoke({"simulate", mutated.string(), "-o", dir_.string()});
  EXPECT_EQ(r.code, cli::kDiagnostics);
  EXPECT_NE(r.out.find("fatal: [AttackerHost]: FAILED!"), std::string::npos);
  EXPECT_NE(r.out.find("failed=1"), std::string::npos);
}

TEST_F(Cli, GraphFormats) {
  Result dot = invoke({"graph", input_});
  EXPECT_EQ(dot.code, cli::kOk);
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
  Result json = invoke({"graph", input_, "--format", "json"});
  EXPECT_EQ(json.code, cli::kOk);
  PropertyGraph g = import_graph_json(json.out);
  EXPECT_EQ(g.nodes_with_label("state").size(), 7u);
}

TEST_F(Cli, TieBreakOption) {
  const fs::path twin = write_scenario(dir_, "twin.atk", R"(
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
    })");
  const std::string out = (dir_ / "out").string();
  EXPECT_EQ(invoke({"build", twin.string(), "-o", out}).code,
            cli::kDiagnostics);
  Result r = invoke({"build", twin.string(), "-o", out, "--tie-break", "first"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.err.find("W-AMBIGUOUS-TARGET"), std::string::npos);
}

}  // namespace
}  // namespace attackforge
