#include "attackforge/scenario.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace attackforge {

// ---------------------------------------------------------------------------
// Document lookups

namespace {

template <typename Decl>
const Decl* find_by_name(const std::vector<Decl>& decls, std::string_view name) {
  for (const auto& d : decls) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

}  // namespace

const AgentDecl* ScenarioDocument::find_agent(std::string_view n) const {
  return find_by_name(agents, n);
}
const ResourceDecl* ScenarioDocument::find_resource(std::string_view n) const {
  return find_by_name(resources, n);
}
const FunctionalityDecl* ScenarioDocument::find_functionality(
    std::string_view n) const {
  return find_by_name(functionalities, n);
}
const TransitionDecl* ScenarioDocument::find_transition(
    std::string_view n) const {
  return find_by_name(transitions, n);
}

std::vector<const TransitionDecl*> ScenarioDocument::ordered_transitions()
    const {
  std::vector<const TransitionDecl*> out;
  for (const auto& name : path_order) {
    if (const auto* t = find_transition(name)) out.push_back(t);
  }
  return out;
}

std::string to_string(const FactDecl& fact) {
  std::string out = fact.subject + ' ' + fact.label + ' ';
  if (fact.object_is_literal) {
    out += '"' + fact.object + '"';
  } else {
    out += fact.object;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary

namespace {

LabelSignature relation(std::string label,
                        std::set<std::string, std::less<>> subjects,
                        std::set<std::string, std::less<>> objects) {
  return {std::move(label), std::move(subjects), std::move(objects), false};
}

LabelSignature characteristic(std::string label,
                              std::set<std::string, std::less<>> subjects) {
  return {std::move(label), std::move(subjects), {}, true};
}

Vocabulary make_standard_vocabulary() {
  const std::string host(kind::kRuntimeHost), net(kind::kNetwork),
      sw(kind::kSoftware), svc(kind::kService), itf(kind::kInterface),
      data(kind::kData), agent(kind::kAgent), func(kind::kFunctionality);
  Vocabulary v;
  // Core relations.
  v.add(relation(std::string(label::kConnectedToNetwork), {host}, {net}));
  v.add(relation(std::string(label::kInstalledOn), {sw}, {host}));
  v.add(relation(std::string(label::kProvidedBy), {svc}, {host}));
  v.add(relation(std::string(label::kOffers), {sw, svc}, {func}));
  v.add(relation(std::string(label::kPerceivedAsAdministrator), {agent},
                 {host}));
  v.add(relation(std::string(label::kGrantsTo), {itf}, {agent}));
  v.add(relation(std::string(label::kGrantsFunc), {itf}, {func}));
  v.add(relation(std::string(label::kAccessibleFrom), {itf}, {host}));
  v.add(relation(std::string(label::kControls), {agent}, {host}));
  // Extension relations.
  v.add(relation("collects", {host, sw, svc}, {net}));
  v.add(relation("contains", {data}, {data}));
  v.add(relation("possesses", {agent}, {data}));
  v.add(relation("stores", {host}, {data}));
  v.add(relation("dependsOn", {sw, svc}, {sw, svc}));
  // Characterizing labels.
  v.add(characteristic("exposure", {sw, svc, itf}));
  v.add(characteristic("credentials", {host, sw, svc, itf}));
  v.add(characteristic("version", {sw, svc}));
  v.add(characteristic("os", {host}));
  v.add(characteristic("address", {host}));
  v.add(characteristic("cidr", {net}));
  v.add(characteristic("state", {host, net, sw, svc, itf, data}));
  return v;
}

}  // namespace

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary kStandard = make_standard_vocabulary();
  return kStandard;
}

void Vocabulary::add(LabelSignature signature) {
  std::string key = signature.label;
  signatures_.insert_or_assign(std::move(key), std::move(signature));
}

const LabelSignature* Vocabulary::find(std::string_view label) const {
  auto it = signatures_.find(label);
  return it == signatures_.end() ? nullptr : &it->second;
}

std::vector<std::string> Vocabulary::labels() const {
  std::vector<std::string> out;
  for (const auto& [name, sig] : signatures_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { kIdent, kString, kLBrace, kRBrace, kColon, kArrow, kEnd };

struct Token {
  Tok kind;
  std::string text;
  Location location;
};

[[noreturn]] void syntax_error(Location at, const std::string& message) {
  throw SyntaxError(make_error("E-SYNTAX", message, at));
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kIdent: return "identifier '" + t.text + "'";
    case Tok::kString: return "string literal";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kColon: return "':'";
    case Tok::kArrow: return "'->'";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    Location here{line, col};
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';') {
      advance(1);
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (c == '{') {
      out.push_back({Tok::kLBrace, "{", here});
      advance(1);
    } else if (c == '}') {
      out.push_back({Tok::kRBrace, "}", here});
      advance(1);
    } else if (c == ':') {
      out.push_back({Tok::kColon, ":", here});
      advance(1);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::kArrow, "->", here});
      advance(2);
    } else if (c == '"') {
      advance(1);
      std::string text;
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < src.size()) {
          char e = src[i + 1];
          if (e == '"' || e == '\\') {
            text += e;
          } else if (e == 'n') {
            text += '\n';
          } else {
            syntax_error({line, col}, "unknown escape sequence");
          }
          advance(2);
          continue;
        }
        text += d;
        advance(1);
      }
      if (!closed) syntax_error(here, "unterminated string literal");
      out.push_back({Tok::kString, std::move(text), here});
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && ident_char(src[i])) advance(1);
      out.push_back(
          {Tok::kIdent, std::string(src.substr(start, i - start)), here});
    } else {
      syntax_error(here, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::kEnd, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class ScenarioParser {
 public:
  explicit ScenarioParser(std::vector<Token> tokens)
      : tokens_(std::move(tokens)) {}

  ScenarioDocument parse() {
    ScenarioDocument doc;
    doc.location = peek().location;
    expect_keyword("scenario");
    doc.name = expect(Tok::kIdent, "scenario name").text;
    expect(Tok::kLBrace, "'{' after scenario name");
    bool has_goal = false;
    while (!at(Tok::kRBrace)) {
      if (at(Tok::kEnd)) {
        syntax_error(peek().location, "missing '}' closing the scenario");
      }
      const Token& kw = expect(Tok::kIdent, "declaration keyword");
      if (kw.text == "goal") {
        if (has_goal) dup(kw.location, "goal");
        expect(Tok::kColon, "':' after goal");
        doc.goal = expect(Tok::kString, "goal text").text;
        has_goal = true;
      } else if (kw.text == "agent") {
        const Token& name = expect(Tok::kIdent, "agent name");
        claim(agents_, name, "agent");
        doc.agents.push_back({name.text, name.location});
      } else if (kw.text == "resource") {
        const Token& name = expect(Tok::kIdent, "resource name");
        expect(Tok::kColon, "':' before resource kind");
        const Token& k = expect(Tok::kIdent, "resource kind");
        claim(resources_, name, "resource");
        doc.resources.push_back({name.text, k.text, name.location});
      } else if (kw.text == "functionality") {
        const Token& name = expect(Tok::kIdent, "functionality name");
        expect_keyword("offeredBy");
        const Token& by = expect(Tok::kIdent, "offering resource");
        claim(functionalities_, name, "functionality");
        doc.functionalities.push_back({name.text, by.text, name.location});
      } else if (kw.text == "fact") {
        doc.facts.push_back(parse_fact_body(kw.location, true));
      } else if (kw.text == "latent") {
        const Token& f = expect(Tok::kIdent, "'fact' after 'latent'");
        if (f.text != "fact") {
          syntax_error(f.location, "expected 'fact' after 'latent'");
        }
        doc.facts.push_back(parse_fact_body(kw.location, false));
      } else if (kw.text == "step") {
        doc.transitions.push_back(parse_step(kw.location));
      } else if (kw.text == "order") {
        if (!doc.order_location.empty()) dup(kw.location, "order");
        doc.order_location = kw.location;
        doc.path_order.push_back(expect(Tok::kIdent, "step name").text);
        while (at(Tok::kArrow)) {
          next();
          doc.path_order.push_back(expect(Tok::kIdent, "step name").text);
        }
      } else {
        syntax_error(kw.location, "unknown declaration '" + kw.text + "'");
      }
    }
    next();  // '}'
    if (!at(Tok::kEnd)) {
      syntax_error(peek().location, "unexpected " + describe(peek()) +
                                        " after the scenario block");
    }
    return doc;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  const Token& next() { return tokens_[pos_++]; }

  const Token& expect(Tok kind, const std::string& what) {
    if (!at(kind)) {
      syntax_error(peek().location,
                   "expected " + what + ", found " + describe(peek()));
    }
    return next();
  }

  void expect_keyword(std::string_view word) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || t.text != word) {
      syntax_error(t.location, "expected '" + std::string(word) +
                                   "', found " + describe(t));
    }
    next();
  }

  [[noreturn]] static void dup(Location at, const std::string& what) {
    throw SyntaxError(
        make_error("E-DUP-DECL", "duplicate declaration of " + what, at));
  }

  static void claim(std::unordered_set<std::string>& seen, const Token& name,
                    const std::string& what) {
    if (!seen.insert(name.text).second) {
      dup(name.location, what + " '" + name.text + "'");
    }
  }

  FactDecl parse_fact_body(Location where, bool holds_initially) {
    FactDecl fact;
    fact.location = where;
    fact.holds_initially = holds_initially;
    fact.subject = expect(Tok::kIdent, "fact subject").text;
    fact.label = expect(Tok::kIdent, "fact label").text;
    if (at(Tok::kString)) {
      fact.object = next().text;
      fact.object_is_literal = true;
    } else {
      fact.object = expect(Tok::kIdent, "fact object").text;
    }
    return fact;
  }

  std::vector<FactDecl> parse_fact_block() {
    expect(Tok::kLBrace, "'{'");
    std::vector<FactDecl> facts;
    while (!at(Tok::kRBrace)) {
      if (at(Tok::kEnd)) syntax_error(peek().location, "missing '}'");
      const Token& kw = expect(Tok::kIdent, "'fact'");
      if (kw.text != "fact") {
        syntax_error(kw.location, "expected 'fact', found " + describe(kw));
      }
      facts.push_back(parse_fact_body(kw.location, true));
    }
    next();
    return facts;
  }

  TransitionDecl parse_step(Location where) {
    TransitionDecl step;
    step.location = where;
    const Token& name = expect(Tok::kIdent, "step name");
    claim(steps_, name, "step");
    step.name = name.text;
    step.location = name.location;
    expect(Tok::kLBrace, "'{' after step name");
    std::unordered_set<std::string> fields;
    while (!at(Tok::kRBrace)) {
      if (at(Tok::kEnd)) {
        syntax_error(peek().location,
                     "missing '}' closing step '" + step.name + "'");
      }
      const Token& kw = expect(Tok::kIdent, "step field");
      if (kw.text != "internal" && !fields.insert(kw.text).second) {
        dup(kw.location, "step field '" + kw.text + "'");
      }
      if (kw.text == "agent") {
        expect(Tok::kColon, "':'");
        step.agent = expect(Tok::kIdent, "agent name").text;
      } else if (kw.text == "trigger") {
        expect(Tok::kColon, "':'");
        step.trigger = expect(Tok::kIdent, "functionality name").text;
      } else if (kw.text == "description") {
        expect(Tok::kColon, "':'");
        step.description = expect(Tok::kString, "description text").text;
      } else if (kw.text == "internal") {
        expect(Tok::kColon, "':'");
        step.internal_tasks.push_back(
            expect(Tok::kString, "internal task text").text);
      } else if (kw.text == "pre") {
        step.preconditions = parse_fact_block();
      } else if (kw.text == "add") {
        step.post_add = parse_fact_block();
      } else if (kw.text == "remove") {
        step.post_remove = parse_fact_block();
      } else {
        syntax_error(kw.location, "unknown step field '" + kw.text + "'");
      }
    }
    next();
    if (!fields.contains("agent")) {
      syntax_error(step.location, "step '" + step.name + "' lacks 'agent:'");
    }
    if (!fields.contains("trigger")) {
      syntax_error(step.location, "step '" + step.name + "' lacks 'trigger:'");
    }
    return step;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::unordered_set<std::string> agents_, resources_, functionalities_,
      steps_;
};

}  // namespace

ScenarioDocument parse_scenario(std::string_view source) {
  return ScenarioParser(tokenize(source)).parse();
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  Validator(const ScenarioDocument& doc, const Vocabulary& vocabulary)
      : doc_(doc), vocabulary_(vocabulary) {}

  std::vector<Diagnostic> run() {
    index_names();
    check_functionalities();
    std::set<std::string> seen_facts;
    for (const auto& f : doc_.facts) {
      check_fact(f, "fact");
      if (!seen_facts.insert(to_string(f)).second) {
        warn("W-DUP-FACT", "fact '" + to_string(f) + "' is declared twice",
             f.location);
      }
    }
    for (const auto& t : doc_.transitions) check_transition(t);
    check_path();
    return std::move(out_);
  }

 private:
  void error(std::string code, std::string message, Location at) {
    if (at.empty()) at = doc_.location;
    out_.push_back(make_error(std::move(code), std::move(message), at));
  }
  void warn(std::string code, std::string message, Location at) {
    if (at.empty()) at = doc_.location;
    out_.push_back(make_warning(std::move(code), std::move(message), at));
  }

  void index_names() {
    auto claim = [&](const std::string& name, std::string what, Location at) {
      auto [it, inserted] = owners_.emplace(name, what);
      if (!inserted) {
        error("E-NAME-CLASH",
              "'" + name + "' is declared both as " + it->second + " and as " +
                  what,
              at);
      }
    };
    for (const auto& a : doc_.agents) {
      claim(a.name, "agent", a.location);
      kinds_.emplace(a.name, std::string(kind::kAgent));
    }
    for (const auto& r : doc_.resources) {
      claim(r.name, "resource", r.location);
      kinds_.emplace(r.name, r.kind);
    }
    for (const auto& f : doc_.functionalities) {
      claim(f.name, "functionality", f.location);
      kinds_.emplace(f.name, std::string(kind::kFunctionality));
    }
    for (const auto& t : doc_.transitions) claim(t.name, "step", t.location);
  }

  void check_functionalities() {
    for (const auto& f : doc_.functionalities) {
      const auto* r = doc_.find_resource(f.offered_by);
      if (!r) {
        error("E-UNRESOLVED-OFFERER",
              "functionality '" + f.name + "' is offered by undeclared '" +
                  f.offered_by + "'",
              f.location);
      } else if (r->kind != kind::kSoftware && r->kind != kind::kService) {
        error("E-OFFERER-KIND",
              "functionality '" + f.name + "' must be offered by Software or "
              "Service, '" + r->name + "' is " + r->kind,
              f.location);
      }
    }
  }

  void check_fact(const FactDecl& f, const std::string& where) {
    const std::string text = to_string(f);
    std::string subject_kind;
    if (doc_.find_agent(f.subject)) {
      subject_kind = kind::kAgent;
    } else if (const auto* r = doc_.find_resource(f.subject)) {
      subject_kind = r->kind;
    } else {
      error("E-UNRESOLVED-SUBJECT",
            where + " '" + text + "': subject '" + f.subject +
                "' is not a declared agent or resource",
            f.location);
    }
    std::string object_kind;
    if (!f.object_is_literal) {
      auto it = kinds_.find(f.object);
      if (it == kinds_.end()) {
        error("E-UNRESOLVED-OBJECT",
              where + " '" + text + "': object '" + f.object +
                  "' is not declared",
              f.location);
      } else {
        object_kind = it->second;
      }
    }
    const LabelSignature* sig = vocabulary_.find(f.label);
    if (!sig) {
      warn("W-UNKNOWN-LABEL",
           "label '" + f.label + "' is not in the controlled vocabulary",
           f.location);
      return;
    }
    if (!subject_kind.empty() && !sig->subject_kinds.contains(subject_kind)) {
      error("E-FACT-SIGNATURE",
            where + " '" + text + "': '" + f.label +
                "' does not accept a subject of kind " + subject_kind,
            f.location);
    }
    if (f.object_is_literal != sig->literal_object) {
      error("E-FACT-SIGNATURE",
            where + " '" + text + "': '" + f.label +
                (sig->literal_object ? "' expects a literal value"
                                     : "' expects a declared element"),
            f.location);
    } else if (!object_kind.empty() &&
               !sig->object_kinds.contains(object_kind)) {
      error("E-FACT-SIGNATURE",
            where + " '" + text + "': '" + f.label +
                "' does not accept an object of kind " + object_kind,
            f.location);
    }
  }

  void check_transition(const TransitionDecl& t) {
    if (!doc_.find_agent(t.agent)) {
      error("E-UNRESOLVED-AGENT",
            "step '" + t.name + "' names undeclared agent '" + t.agent + "'",
            t.location);
    }
    if (!doc_.find_functionality(t.trigger)) {
      error("E-UNRESOLVED-TRIGGER",
            "step '" + t.name + "' triggers undeclared functionality '" +
                t.trigger + "'",
            t.location);
    }
    const std::string where = "step '" + t.name + "'";
    for (const auto& f : t.preconditions) check_fact(f, where + " pre");
    for (const auto& f : t.post_add) check_fact(f, where + " add");
    for (const auto& f : t.post_remove) check_fact(f, where + " remove");
    std::set<std::string> added;
    for (const auto& f : t.post_add) added.insert(to_string(f));
    for (const auto& f : t.post_remove) {
      if (added.contains(to_string(f))) {
        error("E-ADD-REMOVE-CONFLICT",
              where + " both adds and removes '" + to_string(f) + "'",
              f.location);
      }
    }
  }

  void check_path() {
    Location at = doc_.order_location;
    std::set<std::string> listed;
    for (const auto& name : doc_.path_order) {
      if (!doc_.find_transition(name)) {
        error("E-PATH-UNKNOWN", "order names undeclared step '" + name + "'",
              at);
      } else if (!listed.insert(name).second) {
        error("E-PATH-DUPLICATE",
              "order lists step '" + name + "' more than once", at);
      }
    }
    for (const auto& t : doc_.transitions) {
      if (!listed.contains(t.name)) {
        error("E-PATH-INCOMPLETE",
              "step '" + t.name + "' is missing from the order", at);
      }
    }
  }

  const ScenarioDocument& doc_;
  const Vocabulary& vocabulary_;
  std::unordered_map<std::string, std::string> owners_;
  std::unordered_map<std::string, std::string> kinds_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_scenario(const ScenarioDocument& doc,
                                          const Vocabulary& vocabulary) {
  return Validator(doc, vocabulary).run();
}

}  // namespace attackforge
