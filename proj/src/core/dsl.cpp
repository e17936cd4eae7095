// SPDX-License-Identifier: Apache-2.0
#include "tmkit/dsl.hpp"

#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tmkit/dynamics.hpp"

namespace tmkit {

namespace {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // unescaped for strings
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    case Tok::String: return "string";
    case Tok::Punct: return "'" + t.text + "'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view text, std::string file)
      : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (at_end()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = peek();
      if (ident_start(c)) {
        t.kind = Tok::Ident;
        while (!at_end() && ident_char(peek())) t.text += advance();
      } else if (digit(c)) {
        t.kind = Tok::Int;
        while (!at_end() && digit(peek())) t.text += advance();
      } else if (c == '"') {
        t.kind = Tok::String;
        t.text = string_literal(t);
      } else if (c == '-' && next_is('>')) {
        t.kind = Tok::Punct;
        t.text = "->";
        advance();
        advance();
      } else if (c == '<' && next_is('=')) {
        t.kind = Tok::Punct;
        t.text = "<=";
        advance();
        advance();
      } else if (std::string_view("{};,.@[]:").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, advance());
      } else {
        throw Error(ErrorCode::Parse,
                    "unexpected character '" + std::string(1, c) + "'",
                    SourceSpan{file_, t.line, t.column});
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
  [[nodiscard]] char peek() const { return text_[pos_]; }
  [[nodiscard]] bool next_is(char c) const {
    return pos_ + 1 < text_.size() && text_[pos_ + 1] == c;
  }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      // Count code points, not UTF-8 continuation bytes.
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && next_is('/')) {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string string_literal(const Token& start) {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') {
        throw Error(ErrorCode::Parse, "unterminated string",
                    SourceSpan{file_, start.line, start.column});
      }
      char c = advance();
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) continue;
        const int line = line_;
        const int col = column_;
        c = advance();
        switch (c) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            throw Error(ErrorCode::Parse,
                        "unknown escape '\\" + std::string(1, c) + "'",
                        SourceSpan{file_, line, col});
        }
        continue;
      }
      out += c;
    }
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------

struct ActionDecl {
  ActionKind kind;
  std::string name;
  std::optional<std::string> label;
  SourceSpan span;
};

struct ThimacDecl {
  std::string name;
  SourceSpan span;
  std::vector<ActionDecl> actions;
  std::vector<ThimacDecl> children;
};

struct PathRef {
  std::string path;
  SourceSpan span;
};

struct EdgeDecl {
  EdgeKind kind;
  PathRef src;
  PathRef dst;
  std::optional<int> marker;
};

struct EventDecl {
  std::string id;
  std::optional<std::string> label;
  std::vector<PathRef> region;
  std::optional<std::string> time;
  SourceSpan span;
};

struct BehaviorDecl {
  std::string from;
  SourceSpan from_span;
  std::string to;
  SourceSpan to_span;
  std::optional<int> repeat;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file)
      : tokens_(std::move(tokens)), file_(std::move(file)) {}

  ModelBundle run(const ParseOptions& options) {
    expect_word("model");
    const std::string name = ident("model name").text;
    Mode mode = Mode::Strict;
    if (peek().kind == Tok::Ident && (peek().text == "strict" || peek().text == "simplified")) {
      mode = take().text == "strict" ? Mode::Strict : Mode::Simplified;
    }
    expect_punct("{");
    while (!is_punct("}")) {
      if (is_word("thimac")) {
        thimacs_.push_back(thimac());
      } else if (is_word("flow") || is_word("trigger")) {
        edges_.push_back(edge());
      } else {
        fail("'thimac', 'flow', 'trigger' or '}'");
      }
    }
    expect_punct("}");
    if (is_word("events")) events();
    if (is_word("behavior")) behavior();
    if (peek().kind != Tok::End) fail("'events', 'behavior' or end of input");

    return build(name, mode, options);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  SourceSpan span_of(const Token& t) const { return SourceSpan{file_, t.line, t.column}; }

  bool is_word(std::string_view w) const {
    return peek().kind == Tok::Ident && peek().text == w;
  }
  bool is_punct(std::string_view p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw Error(ErrorCode::Parse,
                "expected " + expected + ", found " + describe(peek()),
                span_of(peek()));
  }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("'" + std::string(w) + "'");
    take();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("'" + std::string(p) + "'");
    take();
  }
  Token ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail(what + " (identifier)");
    return take();
  }
  std::string string_lit(const std::string& what) {
    if (peek().kind != Tok::String) fail(what + " (string)");
    return take().text;
  }
  int integer(const std::string& what) {
    if (peek().kind != Tok::Int) fail(what + " (integer)");
    const Token t = take();
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{}) {
      throw Error(ErrorCode::Parse, "integer out of range", span_of(t));
    }
    return value;
  }

  PathRef path() {
    const Token first = ident("path");
    PathRef ref{first.text, span_of(first)};
    while (is_punct(".")) {
      take();
      ref.path += "." + ident("path segment").text;
    }
    return ref;
  }

  ThimacDecl thimac() {
    expect_word("thimac");
    const Token name = ident("thimac name");
    ThimacDecl decl{name.text, span_of(name), {}, {}};
    expect_punct("{");
    while (!is_punct("}")) {
      if (is_word("thimac")) {
        decl.children.push_back(thimac());
        continue;
      }
      if (peek().kind != Tok::Ident || !parse_action_kind(peek().text)) {
        fail("'thimac', an action kind or '}'");
      }
      const ActionKind kind = *parse_action_kind(take().text);
      const Token action_name = ident("action name");
      ActionDecl action{kind, action_name.text, std::nullopt, span_of(action_name)};
      if (peek().kind == Tok::String) action.label = take().text;
      expect_punct(";");
      decl.actions.push_back(std::move(action));
    }
    expect_punct("}");
    return decl;
  }

  EdgeDecl edge() {
    const EdgeKind kind = take().text == "flow" ? EdgeKind::Flow : EdgeKind::Trigger;
    EdgeDecl decl{kind, path(), {}, std::nullopt};
    expect_punct("->");
    decl.dst = path();
    if (is_punct("@")) {
      take();
      decl.marker = integer("marker");
    }
    expect_punct(";");
    return decl;
  }

  void events() {
    expect_word("events");
    expect_punct("{");
    while (!is_punct("}")) {
      expect_word("event");
      const Token id = ident("event name");
      EventDecl decl{id.text, std::nullopt, {}, std::nullopt, span_of(id)};
      if (peek().kind == Tok::String) decl.label = take().text;
      expect_punct("{");
      expect_word("region");
      expect_punct(":");
      decl.region.push_back(path());
      while (is_punct(",")) {
        take();
        decl.region.push_back(path());
      }
      expect_punct(";");
      if (is_word("time")) {
        take();
        expect_punct(":");
        decl.time = string_lit("time annotation");
        expect_punct(";");
      }
      expect_punct("}");
      events_.push_back(std::move(decl));
    }
    expect_punct("}");
  }

  void behavior() {
    expect_word("behavior");
    expect_punct("{");
    while (!is_punct("}")) {
      const Token from = ident("event name");
      expect_punct("->");
      const Token to = ident("event name");
      BehaviorDecl decl{from.text, span_of(from), to.text, span_of(to), std::nullopt};
      if (is_punct("[")) {
        take();
        expect_word("repeat");
        expect_punct("<=");
        const Token bound_tok = peek();
        decl.repeat = integer("repeat bound");
        if (*decl.repeat < 1) {
          throw Error(ErrorCode::Parse, "repeat bound must be at least 1",
                      span_of(bound_tok));
        }
        expect_punct("]");
      }
      expect_punct(";");
      behavior_.push_back(std::move(decl));
    }
    expect_punct("}");
  }

  // -------------------------------------------------------------------------

  void declare(const std::string& id, const SourceSpan& span,
               std::map<std::string, SourceSpan>& spans) {
    auto [it, fresh] = spans.emplace(id, span);
    if (!fresh) {
      throw Error(ErrorCode::DupId,
                  "duplicate identifier '" + id + "' (first declared at " +
                      to_string(it->second) + ")",
                  span);
    }
  }

  void add_thimac(ModelBuilder& builder, const ThimacDecl& decl,
                  const std::optional<ThimacId>& parent,
                  std::map<std::string, SourceSpan>& spans) {
    declare(join_path(parent, decl.name), decl.span, spans);
    const ThimacId id = builder.add_thimac(decl.name, parent);
    for (const auto& a : decl.actions) {
      declare(join_path(id, a.name), a.span, spans);
      builder.add_action(id, a.kind, a.name, a.label);
    }
    for (const auto& c : decl.children) add_thimac(builder, c, id, spans);
  }

  ModelBundle build(const std::string& name, Mode mode, const ParseOptions& options) {
    ModelBuilder builder(name, mode);
    std::map<std::string, SourceSpan> spans;
    for (const auto& t : thimacs_) add_thimac(builder, t, std::nullopt, spans);
    for (const auto& e : edges_) {
      for (const PathRef* end : {&e.src, &e.dst}) {
        if (!builder.has_action(ActionId{end->path})) {
          throw Error(ErrorCode::Undef,
                      "'" + end->path + "' does not name an action", end->span);
        }
      }
      builder.add_edge(ActionId{e.src.path}, ActionId{e.dst.path}, e.kind, e.marker);
    }

    ModelBundle bundle;
    bundle.model = std::move(builder).build();

    // Spans of thimacs are only needed for duplicate reporting.
    ModelIndex index(bundle.model);
    for (auto& [id, span] : spans) {
      if (index.action(ActionId{id}) != nullptr) bundle.spans.emplace(id, span);
    }

    std::unordered_map<std::string, SourceSpan> event_spans;
    for (const auto& decl : events_) {
      auto [it, fresh] = event_spans.emplace(decl.id, decl.span);
      if (!fresh) {
        throw Error(ErrorCode::DupId,
                    "duplicate event '" + decl.id + "' (first declared at " +
                        to_string(it->second) + ")",
                    decl.span);
      }
      std::vector<std::string> paths;
      for (const auto& p : decl.region) {
        if (index.action(ActionId{p.path}) == nullptr &&
            index.thimac(ThimacId{p.path}) == nullptr) {
          throw Error(ErrorCode::Undef, "region path '" + p.path + "' is undefined",
                      p.span);
        }
        paths.push_back(p.path);
      }
      Event event;
      try {
        event = define_event(bundle.model, decl.id, paths,
                             {.allow_disconnected_regions = options.allow_disconnected_regions});
      } catch (const Error& err) {
        throw Error(err.code(), err.detail(), decl.span);
      }
      event.label = decl.label;
      event.time = decl.time;
      bundle.behavior.events.push_back(event.id);
      bundle.events.push_back(std::move(event));
      bundle.spans.emplace(decl.id, decl.span);
    }

    for (const auto& b : behavior_) {
      if (!event_spans.contains(b.from)) {
        throw Error(ErrorCode::Undef, "unknown event '" + b.from + "'", b.from_span);
      }
      if (!event_spans.contains(b.to)) {
        throw Error(ErrorCode::Undef, "unknown event '" + b.to + "'", b.to_span);
      }
      bundle.behavior.edges.push_back(BehaviorEdge{EventId{b.from}, EventId{b.to}, b.repeat});
    }
    return bundle;
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::size_t pos_ = 0;

  std::vector<ThimacDecl> thimacs_;
  std::vector<EdgeDecl> edges_;
  std::vector<EventDecl> events_;
  std::vector<BehaviorDecl> behavior_;
};

// ---------------------------------------------------------------------------

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void print_thimac(std::ostringstream& os, const StaticModel& model,
                  const ModelIndex& index, const Thimac& t, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  os << pad << "thimac " << t.name << " {\n";
  for (const auto& id : t.actions) {
    const ActionNode& a = *index.action(id);
    os << pad << "  " << to_string(a.kind) << ' ' << a.name();
    if (a.label) os << ' ' << quote(*a.label);
    os << ";\n";
  }
  for (const auto& c : t.children) {
    print_thimac(os, model, index, *index.thimac(c), depth + 1);
  }
  os << pad << "}\n";
}

}  // namespace

ModelBundle parse(std::string_view text, const ParseOptions& options) {
  Lexer lexer(text, options.file);
  Parser parser(lexer.run(), options.file);
  return parser.run(options);
}

std::string print(const ModelBundle& bundle) {
  const StaticModel& model = bundle.model;
  ModelIndex index(model);
  std::ostringstream os;
  os << "model " << model.name;
  if (model.mode == Mode::Simplified) os << " simplified";
  os << " {\n";
  for (const auto& t : model.thimacs) {
    if (!t.parent) print_thimac(os, model, index, t, 1);
  }
  for (const auto& e : model.edges) {
    os << "  " << to_string(e.kind) << ' ' << e.src.str() << " -> " << e.dst.str();
    if (e.marker) os << " @" << *e.marker;
    os << ";\n";
  }
  os << "}\n";

  if (!bundle.events.empty()) {
    os << "events {\n";
    for (const auto& ev : bundle.events) {
      os << "  event " << ev.id.str();
      if (ev.label) os << ' ' << quote(*ev.label);
      os << " {\n    region: ";
      for (std::size_t i = 0; i < ev.paths.size(); ++i) {
        if (i) os << ", ";
        os << ev.paths[i];
      }
      os << ";\n";
      if (ev.time) os << "    time: " << quote(*ev.time) << ";\n";
      os << "  }\n";
    }
    os << "}\n";
  }
  if (!bundle.behavior.edges.empty()) {
    os << "behavior {\n";
    for (const auto& e : bundle.behavior.edges) {
      os << "  " << e.from.str() << " -> " << e.to.str();
      if (e.repeat) os << " [repeat <= " << *e.repeat << "]";
      os << ";\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace tmkit
