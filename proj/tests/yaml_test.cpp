#include <gtest/gtest.h>

#include <random>

#include "attackforge/diagnostic.hpp"
#include "attackforge/yaml.hpp"

namespace attackforge::yaml {
namespace {

std::string code_of(std::string_view text) {
  try {
    parse(text);
  } catch (const SyntaxError& e) {
    return e.diagnostics().front().code;
  }
  return "";
}

TEST(YamlEmit, NestedMappingsAndSequences) {
  Node root = Node::mapping();
  Node& a = root.add("a", Node::mapping());
  a.add("b", Node::scalar("c"));
  Node& seq = a.add("items", Node::sequence());
  seq.push_back(Node::scalar("x"));
  Node item = Node::mapping();
  item.add("k", Node::scalar("v"));
  item.add("l", Node::scalar("w"));
  seq.push_back(std::move(item));
  root.add("empty", Node::null());
  EXPECT_EQ(emit(root),
            "a:\n"
            "  b: c\n"
            "  items:\n"
            "    - x\n"
            "    - k: v\n"
            "      l: w\n"
            "empty:\n");
}

TEST(YamlEmit, EmptyCollectionsAreNull) {
  Node root = Node::mapping();
  root.add("m", Node::mapping());
  root.add("s", Node::sequence());
  EXPECT_EQ(emit(root), "m:\ns:\n");
}

TEST(YamlEmit, TopLevelSequence) {
  Node root = Node::sequence();
  Node play = Node::mapping();
  play.add("name", Node::scalar("p"));
  Node& roles = play.add("roles", Node::sequence());
  roles.push_back(Node::scalar("r"));
  root.push_back(std::move(play));
  EXPECT_EQ(emit(root), "- name: p\n  roles:\n    - r\n");
}

TEST(YamlScalar, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(format_scalar("AttackerHost"), "AttackerHost");
  EXPECT_EQ(format_scalar("The attacker's plan, then more."),
            "The attacker's plan, then more.");
  EXPECT_EQ(format_scalar("null"), "'null'");
  EXPECT_EQ(format_scalar("yes"), "'yes'");
  EXPECT_EQ(format_scalar(""), "''");
  EXPECT_EQ(format_scalar("a: b"), "'a: b'");
  EXPECT_EQ(format_scalar("--- internal: x ---"), "'--- internal: x ---'");
  EXPECT_EQ(format_scalar("it's [x]"), "it's [x]");
  EXPECT_EQ(format_scalar("'quoted'"), "'''quoted'''");
  EXPECT_EQ(format_scalar("trailing:"), "'trailing:'");
}

TEST(YamlParse, ReadsEmittedSubset) {
  const Node n = parse(
      "# comment\n"
      "a:\n"
      "  b: c\n"
      "  seq:\n"
      "    - x\n"
      "    - k: v\n"
      "      l: 'w: z'\n"
      "  none:\n"
      "  tilde: ~\n");
  ASSERT_TRUE(n.is_mapping());
  const Node* a = n.find("a");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->find("b")->value(), "c");
  const Node* seq = a->find("seq");
  ASSERT_TRUE(seq->is_sequence());
  ASSERT_EQ(seq->items().size(), 2u);
  EXPECT_EQ(seq->items()[1].find("l")->value(), "w: z");
  EXPECT_TRUE(a->find("none")->is_null());
  EXPECT_TRUE(a->find("tilde")->is_null());
}

TEST(YamlParse, SequenceAtKeyIndentation) {
  const Node n = parse("a:\n- x\n- y\nb: z\n");
  ASSERT_TRUE(n.find("a")->is_sequence());
  EXPECT_EQ(n.find("a")->items().size(), 2u);
  EXPECT_EQ(n.find("b")->value(), "z");
}

TEST(YamlParse, DocumentMarkerIsSkipped) {
  EXPECT_EQ(parse("---\n- a\n").items().size(), 1u);
}

TEST(YamlParse, RejectsOutsideSubset) {
  EXPECT_EQ(code_of("a: [ x ]\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a: { b: c }\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a: &anchor x\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a: *alias\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a: !tag x\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a: |\n  text\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a: x\n---\nb: y\n"), "E-YAML-UNSUPPORTED");
  EXPECT_EQ(code_of("a:\n\tb: c\n"), "E-YAML-TAB");
  EXPECT_EQ(code_of("a: x\na: y\n"), "E-YAML-DUPLICATE-KEY");
  EXPECT_EQ(code_of("a: 'unterminated\n"), "E-YAML-SYNTAX");
  EXPECT_EQ(code_of("a:\n    b: c\n  d: e\n"), "E-YAML-INDENT");
}

TEST(YamlParse, ErrorsCarryLocation) {
  try {
    parse("a: b\nc: [x]\n");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.diagnostics().front().location.line, 2u);
  }
}

// Random trees survive emit -> parse unchanged.
Node random_tree(std::mt19937& rng, int depth) {
  static const std::vector<std::string> words = {
      "a", "b c", "null", "x: y", "", "'q'", "-dash", "- item", "#hash",
      "tail #c", "Attack", "1.0", "true", "k:", "[x]", "{y}", "it's"};
  std::uniform_int_distribution<int> kind(0, depth > 2 ? 1 : 3);
  std::uniform_int_distribution<std::size_t> word(0, words.size() - 1);
  std::uniform_int_distribution<int> count(1, 3);
  switch (kind(rng)) {
    case 0:
      return Node::null();
    case 1:
      return Node::scalar(words[word(rng)]);
    case 2: {
      Node seq = Node::sequence();
      for (int i = count(rng); i > 0; --i) {
        seq.push_back(random_tree(rng, depth + 1));
      }
      return seq;
    }
    default: {
      Node map = Node::mapping();
      const int n = count(rng);
      for (int i = 0; i < n; ++i) {
        map.add(words[word(rng)] + std::to_string(i),
                random_tree(rng, depth + 1));
      }
      return map;
    }
  }
}

TEST(YamlRoundTrip, RandomTrees) {
  std::mt19937 rng(99);
  int collections = 0;
  for (int i = 0; i < 300; ++i) {
    Node tree = Node::mapping();
    tree.add("root", random_tree(rng, 0));
    const std::string text = emit(tree);
    Node back = parse(text);
    ASSERT_EQ(back, tree) << text;
    ASSERT_EQ(emit(back), text);
    collections += !tree.find("root")->is_scalar();
  }
  EXPECT_GT(collections, 100);
}

}  // namespace
}  // namespace attackforge::yaml
