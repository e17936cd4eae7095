// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <sstream>

#include "tmkit/interop.hpp"

namespace tmkit {

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r' || c == '\t') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out + "\"";
}

void emit_cluster(std::ostringstream& os, const ModelIndex& index,
                  const Thimac& t, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  os << pad << "subgraph " << dot_quote("cluster_" + t.id.str()) << " {\n";
  os << pad << "  label=" << dot_quote(t.name) << ";\n";
  for (const auto& id : t.actions) {
    const ActionNode& a = *index.action(id);
    const std::string label =
        std::string(to_string(a.kind)) + ": " + a.label.value_or(std::string(a.name()));
    os << pad << "  " << dot_quote(id.str()) << " [label=" << dot_quote(label) << "];\n";
  }
  for (const auto& c : t.children) emit_cluster(os, index, *index.thimac(c), depth + 1);
  os << pad << "}\n";
}

}  // namespace

std::string export_dot(const ModelBundle& bundle, const DotOptions& options) {
  const StaticModel& model = bundle.model;
  ModelIndex index(model);
  std::ostringstream os;
  os << "digraph " << dot_quote(model.name) << " {\n";
  os << "  compound=true;\n";
  os << "  node [shape=box];\n";
  for (const auto& t : model.thimacs) {
    if (!t.parent) emit_cluster(os, index, t, 1);
  }
  for (const auto& e : model.edges) {
    os << "  " << dot_quote(e.src.str()) << " -> " << dot_quote(e.dst.str());
    std::vector<std::string> attrs;
    if (e.kind == EdgeKind::Trigger) attrs.emplace_back("style=dashed");
    if (e.marker) attrs.push_back("xlabel=" + dot_quote(std::to_string(*e.marker)));
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
      os << ']';
    }
    os << ";\n";
  }
  if (options.show_events) {
    for (const auto& ev : bundle.events) {
      const std::string node = "event:" + ev.id.str();
      std::string label = ev.id.str();
      if (ev.label) label += ": " + *ev.label;
      if (ev.time) label += "\n@ " + *ev.time;
      os << "  " << dot_quote(node) << " [shape=note, label=" << dot_quote(label) << "];\n";
      for (const auto& a : ev.region.actions) {
        os << "  " << dot_quote(node) << " -> " << dot_quote(a.str())
           << " [style=dotted, arrowhead=none];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Syntax checker for the DOT subset the emitter can produce, plus the plain
// forms hand-written files commonly use.

namespace {

class DotChecker {
 public:
  explicit DotChecker(std::string_view text) : text_(text) {}

  std::optional<std::string> run() {
    try {
      skip();
      if (word_is("strict")) take_word();
      if (!word_is("digraph") && !word_is("graph")) fail("expected 'graph' or 'digraph'");
      directed_ = take_word() == "digraph";
      if (!at('{')) id();
      block();
      skip();
      if (pos_ != text_.size()) fail("trailing input");
      return std::nullopt;
    } catch (const std::string& message) {
      return message;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw what + " at offset " + std::to_string(pos_);
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (text_.substr(pos_, 2) == "/*") {
        const auto end = text_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 2;
      } else {
        break;
      }
    }
  }

  bool at(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           (static_cast<unsigned char>(c) & 0x80) != 0;
  }

  bool word_is(std::string_view w) {
    skip();
    if (text_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    return end >= text_.size() || !word_char(text_[end]);
  }

  std::string take_word() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void id() {
    skip();
    if (pos_ >= text_.size()) fail("expected identifier");
    const char c = text_[pos_];
    if (c == '"') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
    } else if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      if (c == '-') ++pos_;
      bool any = false;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
        any = true;
      }
      if (!any) fail("malformed numeral");
    } else if (word_char(c)) {
      take_word();
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
  }

  void attr_list() {
    while (at('[')) {
      ++pos_;
      while (!at(']')) {
        id();
        expect('=');
        id();
        if (at(',') || at(';')) ++pos_;
      }
      ++pos_;
    }
  }

  bool edge_op() {
    skip();
    const std::string_view op = directed_ ? "->" : "--";
    if (text_.substr(pos_, 2) == op) {
      pos_ += 2;
      return true;
    }
    return false;
  }

  void operand() {
    if (word_is("subgraph") || at('{')) {
      subgraph();
    } else {
      id();
      if (at(':')) {  // port
        ++pos_;
        id();
      }
    }
  }

  void subgraph() {
    if (word_is("subgraph")) {
      take_word();
      if (!at('{')) id();
    }
    block();
  }

  void block() {
    expect('{');
    while (!at('}')) {
      if (pos_ >= text_.size()) fail("unterminated block");
      statement();
      if (at(';')) ++pos_;
    }
    ++pos_;
  }

  void statement() {
    if (word_is("graph") || word_is("node") || word_is("edge")) {
      take_word();
      if (!at('[')) fail("expected attribute list");
      attr_list();
      return;
    }
    operand();
    if (at('=')) {
      ++pos_;
      id();
      return;
    }
    bool edge = false;
    while (edge_op()) {
      operand();
      edge = true;
    }
    (void)edge;
    attr_list();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  bool directed_ = true;
};

}  // namespace

std::optional<std::string> check_dot_syntax(std::string_view text) {
  return DotChecker(text).run();
}

}  // namespace tmkit
