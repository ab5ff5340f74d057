#include "attackforge/yaml.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "attackforge/diagnostic.hpp"

namespace attackforge::yaml {

Node Node::scalar(std::string value) {
  Node n;
  n.kind_ = Kind::kScalar;
  n.scalar_ = std::move(value);
  return n;
}

Node Node::sequence(std::vector<Node> items) {
  Node n;
  n.kind_ = Kind::kSequence;
  n.items_ = std::move(items);
  return n;
}

Node Node::mapping(std::vector<Entry> entries) {
  Node n;
  n.kind_ = Kind::kMapping;
  n.entries_ = std::move(entries);
  return n;
}

Node& Node::push_back(Node item) {
  if (kind_ == Kind::kNull) kind_ = Kind::kSequence;
  items_.push_back(std::move(item));
  return items_.back();
}

Node& Node::add(std::string key, Node value) {
  if (kind_ == Kind::kNull) kind_ = Kind::kMapping;
  entries_.emplace_back(std::move(key), std::move(value));
  return entries_.back().second;
}

const Node* Node::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

Node* Node::find(std::string_view key) {
  for (auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

bool is_reserved_word(std::string_view s) {
  static const std::set<std::string, std::less<>> kReserved = {
      "null", "Null", "NULL", "~",  "true", "True", "TRUE", "false",
      "False", "FALSE", "yes", "Yes", "YES", "no", "No", "NO",
      "on", "On", "ON", "off", "Off", "OFF"};
  return kReserved.contains(s);
}

bool needs_quotes(std::string_view s) {
  if (s.empty() || is_reserved_word(s)) return true;
  if (s.front() == ' ' || s.back() == ' ') return true;
  constexpr std::string_view kIndicators = "-?:,[]{}#&*!|>'\"%@`";
  if (kIndicators.find(s.front()) != std::string_view::npos) {
    // "-x", "?x", ":x" are plain in block context; keep it strict anyway
    // except for a lone leading dash followed by a non-space.
    bool benign_dash = s.front() == '-' && s.size() > 1 && s[1] != ' ' &&
                       s != "---";
    if (!benign_dash) return true;
  }
  if (s.back() == ':') return true;
  if (s.find(": ") != std::string_view::npos) return true;
  if (s.find(" #") != std::string_view::npos) return true;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7f) return true;
  }
  return false;
}

void emit_node(const Node& node, int indent, std::string& out);

void emit_sequence_items(const Node& seq, int indent, std::string& out);

void emit_mapping_entries(const Node& map, int indent, bool skip_first_indent,
                          std::string& out) {
  bool first = true;
  for (const auto& [key, value] : map.entries()) {
    if (!(first && skip_first_indent)) out.append(indent, ' ');
    first = false;
    out += format_scalar(key);
    out += ':';
    switch (value.kind()) {
      case Node::Kind::kNull:
        out += '\n';
        break;
      case Node::Kind::kScalar:
        out += ' ';
        out += format_scalar(value.value());
        out += '\n';
        break;
      case Node::Kind::kSequence:
        out += '\n';
        if (!value.items().empty()) emit_sequence_items(value, indent + 2, out);
        break;
      case Node::Kind::kMapping:
        out += '\n';
        if (!value.entries().empty())
          emit_mapping_entries(value, indent + 2, false, out);
        break;
    }
  }
}

void emit_sequence_items(const Node& seq, int indent, std::string& out) {
  for (const auto& item : seq.items()) {
    out.append(indent, ' ');
    out += '-';
    switch (item.kind()) {
      case Node::Kind::kNull:
        out += '\n';
        break;
      case Node::Kind::kScalar:
        out += ' ';
        out += format_scalar(item.value());
        out += '\n';
        break;
      case Node::Kind::kSequence:
        if (item.items().empty()) {
          out += '\n';
        } else {
          out += '\n';
          emit_sequence_items(item, indent + 2, out);
        }
        break;
      case Node::Kind::kMapping:
        if (item.entries().empty()) {
          out += '\n';
        } else {
          out += ' ';
          emit_mapping_entries(item, indent + 2, true, out);
        }
        break;
    }
  }
}

void emit_node(const Node& node, int indent, std::string& out) {
  switch (node.kind()) {
    case Node::Kind::kNull:
      out += "null\n";
      break;
    case Node::Kind::kScalar:
      out += format_scalar(node.value());
      out += '\n';
      break;
    case Node::Kind::kSequence:
      emit_sequence_items(node, indent, out);
      break;
    case Node::Kind::kMapping:
      emit_mapping_entries(node, indent, false, out);
      break;
  }
}

}  // namespace

std::string format_scalar(std::string_view value) {
  if (!needs_quotes(value)) return std::string(value);
  std::string quoted = "'";
  for (char c : value) {
    if (c == '\'') quoted += '\'';
    quoted += c;
  }
  quoted += '\'';
  return quoted;
}

std::string emit(const Node& root) {
  std::string out;
  if ((root.is_mapping() && root.entries().empty()) ||
      (root.is_sequence() && root.items().empty())) {
    return out;
  }
  emit_node(root, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
  std::size_t number;  // 1-based
  int indent;
  std::string content;  // without indentation, comments and trailing blanks
};

[[noreturn]] void fail(std::size_t line, std::size_t column,
                       const std::string& code, const std::string& message) {
  throw SyntaxError(make_error(code, message, {line, column}));
}

// Index of a comment start ('#' preceded by blank or at line start) outside
// quotes, or npos.
std::size_t comment_start(std::string_view s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == quote) {
        if (quote == '\'' && i + 1 < s.size() && s[i + 1] == '\'') {
          ++i;
        } else {
          quote = 0;
        }
      } else if (quote == '"' && c == '\\') {
        ++i;
      }
      continue;
    }
    if (c == '#' && (i == 0 || s[i - 1] == ' ')) return i;
    // Quotes only open a quoted scalar at token start.
    if ((c == '\'' || c == '"') &&
        (i == 0 || s[i - 1] == ' ' || s[i - 1] == '-' || s[i - 1] == ':')) {
      quote = c;
    }
  }
  return std::string_view::npos;
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  bool seen_content = false;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    std::size_t indent = 0;
    while (indent < raw.size() && raw[indent] == ' ') ++indent;
    if (indent < raw.size() && raw[indent] == '\t') {
      fail(number, indent + 1, "E-YAML-TAB", "tab character in indentation");
    }
    std::string_view body = raw.substr(indent);
    std::size_t hash = comment_start(body);
    if (hash != std::string_view::npos) body = body.substr(0, hash);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t')) {
      body.remove_suffix(1);
    }
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (indent == 0 && (body == "---" || body == "...")) {
      if (body == "---" && seen_content) {
        fail(number, 1, "E-YAML-UNSUPPORTED", "multiple documents");
      }
      if (end == text.size()) break;
      continue;
    }
    if (body.starts_with("%")) {
      fail(number, indent + 1, "E-YAML-UNSUPPORTED", "directives");
    }
    seen_content = true;
    lines.push_back({number, static_cast<int>(indent), std::string(body)});
    if (end == text.size()) break;
  }
  return lines;
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  Node parse_document() {
    if (lines_.empty()) return Node::null();
    Node root = parse_block(lines_.front().indent);
    if (pos_ < lines_.size()) {
      const Line& l = lines_[pos_];
      fail(l.number, static_cast<std::size_t>(l.indent) + 1, "E-YAML-SYNTAX",
           "unexpected content after document root");
    }
    return root;
  }

 private:
  static bool is_sequence_line(const std::string& content) {
    return content == "-" || content.starts_with("- ");
  }

  Node parse_block(int indent) {
    const Line& first = lines_[pos_];
    if (first.indent != indent) {
      fail(first.number, static_cast<std::size_t>(first.indent) + 1,
           "E-YAML-INDENT", "inconsistent indentation");
    }
    if (is_sequence_line(first.content)) return parse_sequence(indent);
    if (find_key_separator(first.content) != std::string::npos) {
      return parse_mapping(indent);
    }
    // A bare scalar block (only valid as a sole value).
    Node n = parse_scalar(first.content, first.number,
                          static_cast<std::size_t>(indent) + 1);
    ++pos_;
    return n;
  }

  Node parse_sequence(int indent) {
    Node seq = Node::sequence();
    while (pos_ < lines_.size() && lines_[pos_].indent == indent &&
           is_sequence_line(lines_[pos_].content)) {
      Line& line = lines_[pos_];
      if (line.content == "-") {
        ++pos_;
        if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
          seq.push_back(parse_block(lines_[pos_].indent));
        } else {
          seq.push_back(Node::null());
        }
        continue;
      }
      // Re-seat the item body as its own line two columns deeper.
      std::string rest = line.content.substr(2);
      std::size_t extra = 0;
      while (extra < rest.size() && rest[extra] == ' ') ++extra;
      line.indent = indent + 2 + static_cast<int>(extra);
      line.content = rest.substr(extra);
      seq.push_back(parse_block(line.indent));
    }
    if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
      const Line& l = lines_[pos_];
      fail(l.number, static_cast<std::size_t>(l.indent) + 1, "E-YAML-INDENT",
           "unexpected indentation");
    }
    return seq;
  }

  Node parse_mapping(int indent) {
    Node map = Node::mapping();
    std::set<std::string> keys;
    while (pos_ < lines_.size() && lines_[pos_].indent == indent) {
      const Line& line = lines_[pos_];
      std::size_t column = static_cast<std::size_t>(indent) + 1;
      if (is_sequence_line(line.content)) {
        fail(line.number, column, "E-YAML-SYNTAX",
             "sequence item where a mapping key was expected");
      }
      std::size_t sep = find_key_separator(line.content);
      if (sep == std::string::npos) {
        fail(line.number, column, "E-YAML-SYNTAX", "expected 'key: value'");
      }
      std::string key =
          parse_scalar(line.content.substr(0, sep), line.number, column)
              .value();
      if (!keys.insert(key).second) {
        fail(line.number, column, "E-YAML-DUPLICATE-KEY",
             "duplicate key '" + key + "'");
      }
      std::string rest = line.content.substr(sep + 1);
      std::size_t lead = rest.find_first_not_of(' ');
      std::size_t line_number = line.number;
      ++pos_;
      if (lead == std::string::npos) {
        if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
          map.add(std::move(key), parse_block(lines_[pos_].indent));
        } else if (pos_ < lines_.size() && lines_[pos_].indent == indent &&
                   is_sequence_line(lines_[pos_].content)) {
          map.add(std::move(key), parse_sequence(indent));
        } else {
          map.add(std::move(key), Node::null());
        }
      } else {
        map.add(std::move(key),
                parse_scalar(rest.substr(lead), line_number,
                             column + sep + 1 + lead));
        if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
          const Line& l = lines_[pos_];
          fail(l.number, static_cast<std::size_t>(l.indent) + 1,
               "E-YAML-INDENT", "unexpected indentation after scalar value");
        }
      }
    }
    if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
      const Line& l = lines_[pos_];
      fail(l.number, static_cast<std::size_t>(l.indent) + 1, "E-YAML-INDENT",
           "unexpected indentation");
    }
    return map;
  }

  // Position of the ':' ending a mapping key, or npos.
  static std::size_t find_key_separator(const std::string& s) {
    if (s.empty()) return std::string::npos;
    std::size_t i = 0;
    if (s[0] == '\'' || s[0] == '"') {
      char q = s[0];
      for (i = 1; i < s.size(); ++i) {
        if (s[i] == q) {
          if (q == '\'' && i + 1 < s.size() && s[i + 1] == '\'') {
            ++i;
            continue;
          }
          break;
        }
        if (q == '"' && s[i] == '\\') ++i;
      }
      ++i;
      if (i < s.size() && s[i] == ':' &&
          (i + 1 == s.size() || s[i + 1] == ' ')) {
        return i;
      }
      return std::string::npos;
    }
    for (; i < s.size(); ++i) {
      if (s[i] == ':' && (i + 1 == s.size() || s[i + 1] == ' ')) return i;
    }
    return std::string::npos;
  }

  static Node parse_scalar(std::string_view s, std::size_t line,
                           std::size_t column) {
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return Node::null();
    char c = s.front();
    if (c == '[' || c == '{') {
      fail(line, column, "E-YAML-UNSUPPORTED",
           "flow collections are outside the supported subset");
    }
    if (c == '&' || c == '*' || c == '!') {
      fail(line, column, "E-YAML-UNSUPPORTED",
           "anchors, aliases and tags are outside the supported subset");
    }
    if (c == '|' || c == '>') {
      fail(line, column, "E-YAML-UNSUPPORTED",
           "block scalars are outside the supported subset");
    }
    if (c == '\'') {
      std::string out;
      std::size_t i = 1;
      for (; i < s.size(); ++i) {
        if (s[i] == '\'') {
          if (i + 1 < s.size() && s[i + 1] == '\'') {
            out += '\'';
            ++i;
            continue;
          }
          break;
        }
        out += s[i];
      }
      if (i != s.size() - 1) {
        fail(line, column, "E-YAML-SYNTAX", "malformed single-quoted scalar");
      }
      return Node::scalar(std::move(out));
    }
    if (c == '"') {
      std::string out;
      std::size_t i = 1;
      for (; i < s.size(); ++i) {
        if (s[i] == '"') break;
        if (s[i] == '\\' && i + 1 < s.size()) {
          ++i;
          switch (s[i]) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case '/': out += '/'; break;
            default:
              fail(line, column + i, "E-YAML-SYNTAX",
                   "unsupported escape sequence");
          }
          continue;
        }
        out += s[i];
      }
      if (i != s.size() - 1) {
        fail(line, column, "E-YAML-SYNTAX", "malformed double-quoted scalar");
      }
      return Node::scalar(std::move(out));
    }
    if (s == "~" || s == "null" || s == "Null" || s == "NULL") {
      return Node::null();
    }
    return Node::scalar(std::string(s));
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view text) {
  return Parser(split_lines(text)).parse_document();
}

}  // namespace attackforge::yaml
