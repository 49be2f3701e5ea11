#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace powsum {

/// Error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateDeclarationError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DimensionMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  /// True for a list whose first item is the atom `head`.
  bool is_call(std::string_view head) const { return is_list && !items.empty() && items[0].is_atom(head); }
  const std::string& head() const;
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line, column); }
};

/// Every top-level expression of `text`. `;` starts a comment.
std::vector<SExpr> parse_sexprs(std::string_view text);

}  // namespace powsum
