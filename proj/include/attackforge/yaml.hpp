#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attackforge::yaml {

/// Minimal YAML document tree: block mappings with ordered keys, block
/// sequences, string scalars and null. All scalars are strings; no typed
/// values, anchors, tags or flow collections.
class Node {
 public:
  enum class Kind { kNull, kScalar, kSequence, kMapping };
  using Entry = std::pair<std::string, Node>;

  Node() = default;

  static Node null() { return Node(); }
  static Node scalar(std::string value);
  static Node sequence(std::vector<Node> items = {});
  static Node mapping(std::vector<Entry> entries = {});

  Kind kind() const { return kind_; }
  bool is_null() const { return kind_ == Kind::kNull; }
  bool is_scalar() const { return kind_ == Kind::kScalar; }
  bool is_sequence() const { return kind_ == Kind::kSequence; }
  bool is_mapping() const { return kind_ == Kind::kMapping; }

  const std::string& value() const { return scalar_; }
  const std::vector<Node>& items() const { return items_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Appends to a sequence (a null node is promoted to an empty sequence).
  Node& push_back(Node item);
  /// Appends a key to a mapping (a null node is promoted to an empty
  /// mapping). Keys are not deduplicated here; emitters own key order.
  Node& add(std::string key, Node value);
  /// Returns the entry for `key`, or nullptr.
  const Node* find(std::string_view key) const;
  Node* find(std::string_view key);

  friend bool operator==(const Node&, const Node&) = default;

 private:
  Kind kind_ = Kind::kNull;
  std::string scalar_;
  std::vector<Node> items_;
  std::vector<Entry> entries_;
};

/// Block-style emission with two-space indentation. Sequence items under a
/// mapping key are indented one level; empty collections are written as
/// null. Output always ends with a newline.
std::string emit(const Node& root);

/// Plain if the scalar reads back unchanged as a string, otherwise single
/// quoted.
std::string format_scalar(std::string_view value);

/// Parses the subset produced by `emit`. Throws SyntaxError for malformed
/// text and for flow collections, anchors, aliases, tags and block scalars.
Node parse(std::string_view text);

}  // namespace attackforge::yaml
