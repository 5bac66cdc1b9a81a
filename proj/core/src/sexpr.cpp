#include "fop/sexpr.hpp"

#include <cctype>

#include "fop/error.hpp"

namespace fop {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    const std::size_t line = line_, col = col_;
    const char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line, col);
    if (c == '(') {
      advance();
      SExpr list = SExpr::make_list({});
      list.line = line;
      list.column = col;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unterminated list", line, col);
        if (text_[pos_] == ')') {
          advance();
          return list;
        }
        list.items.push_back(read());
      }
    }
    SExpr atom;
    atom.line = line;
    atom.column = col;
    if (c == '|') {
      advance();
      while (pos_ < text_.size() && text_[pos_] != '|') atom.atom += advance();
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", line, col);
      advance();
      atom.quoted = true;
      return atom;
    }
    while (pos_ < text_.size() && !is_delim(text_[pos_])) atom.atom += advance();
    return atom;
  }

  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '|';
  }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '|')
      return true;
  return false;
}

void render(const SExpr& e, std::string& out) {
  if (e.is_atom()) {
    if (e.quoted || needs_quotes(e.atom)) {
      out += '|';
      out += e.atom;
      out += '|';
    } else {
      out += e.atom;
    }
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ' ';
    render(e.items[i], out);
  }
  out += ')';
}

void render_pretty(const SExpr& e, std::size_t indent, std::size_t width, std::string& out) {
  std::string flat = to_string(e);
  if (e.is_atom() || indent + flat.size() <= width || e.items.size() < 2) {
    out += flat;
    return;
  }
  out += '(';
  render(e.items[0], out);
  // Keep short heads like "forall ((x Proc))" on the opening line.
  std::size_t first_child = 1;
  if (e.items[0].is_atom() && (e.items[0].atom == "forall" || e.items[0].atom == "exists") &&
      e.items.size() > 2) {
    out += ' ';
    render(e.items[1], out);
    first_child = 2;
  }
  for (std::size_t i = first_child; i < e.items.size(); ++i) {
    out += '\n';
    out.append(indent + 2, ' ');
    render_pretty(e.items[i], indent + 2, width, out);
  }
  out += ')';
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1) {
    std::size_t line = all.size() > 1 ? all[1].line : 1, col = all.size() > 1 ? all[1].column : 1;
    throw ParseError(all.empty() ? "empty input" : "expected a single expression", line, col);
  }
  return std::move(all.front());
}

std::string to_string(const SExpr& e) {
  std::string out;
  render(e, out);
  return out;
}

std::string to_pretty_string(const SExpr& e, std::size_t width) {
  std::string out;
  render_pretty(e, 0, width, out);
  return out;
}

}  // namespace fop
