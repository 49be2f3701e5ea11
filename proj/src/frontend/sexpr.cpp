#include "powsum/sexpr.hpp"

#include <cctype>

namespace powsum {

const std::string& SExpr::head() const {
  static const std::string none;
  if (!is_list || items.empty() || items[0].is_list) return none;
  return items[0].atom;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = text_[pos_];
    if (c == ')') throw SyntaxError("unexpected ')'", line_, col_);
    if (c == '(') {
      e.is_list = true;
      advance();
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw SyntaxError("unbalanced '(' opened here", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      e.atom.push_back(c);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

}  // namespace powsum
