#include <gtest/gtest.h>

#include "attackforge/diagnostic.hpp"
#include "support.hpp"

namespace attackforge {
namespace {

TEST(Diagnostic, RendersSeverityCodeLocationMessage) {
  EXPECT_EQ(render(make_error("E-SYNTAX", "expected '}'", {3, 7})),
            "error E-SYNTAX 3:7 expected '}'");
  EXPECT_EQ(render(make_warning("W-UNKNOWN-LABEL", "label 'likes'", {12, 3})),
            "warning W-UNKNOWN-LABEL 12:3 label 'likes'");
}

TEST(Diagnostic, HasErrorsIgnoresWarnings) {
  EXPECT_FALSE(has_errors({}));
  EXPECT_FALSE(has_errors({make_warning("W-DUP-FACT", "x")}));
  EXPECT_TRUE(has_errors({make_warning("W-DUP-FACT", "x"),
                          make_error("E-PATH-INCOMPLETE", "y")}));
}

TEST(Diagnostic, ErrorCarriesAllDiagnostics) {
  DiagnosticError e({make_error("E-A", "first"), make_error("E-B", "second")});
  ASSERT_EQ(e.diagnostics().size(), 2u);
  EXPECT_EQ(e.diagnostics()[1].code, "E-B");
  EXPECT_NE(std::string(e.what()).find("E-A"), std::string::npos);
}

TEST(FileIo, WriteCreatesParentsAndReadsBack) {
  const auto dir = testing::scratch_dir("io");
  write_file(dir / "a" / "b" / "c.txt", "bytes\n");
  EXPECT_EQ(read_file(dir / "a" / "b" / "c.txt"), "bytes\n");
  std::filesystem::remove_all(dir);
}

TEST(FileIo, MissingFileNamesPath) {
  const auto path = std::filesystem::path("/nonexistent/attackforge/x.atk");
  try {
    read_file(path);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), path);
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
}

TEST(FileIo, WriteUnderRegularFileFails) {
  const auto dir = testing::scratch_dir("io-file");
  write_file(dir / "blocker", "x");
  EXPECT_THROW(write_file(dir / "blocker" / "child.txt", "y"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace attackforge
