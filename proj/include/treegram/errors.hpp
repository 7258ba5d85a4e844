#pragma once

#include <stdexcept>
#include <string>

namespace treegram {

// Bad input data (malformed files, kind conflicts, invalid configs).
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed bracketing; carries a 1-based line/column position.
class TreebankParseError : public InputError {
 public:
  TreebankParseError(const std::string& msg, int line, int column)
      : InputError(msg + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
        bare_(msg),
        line_(line),
        column_(column) {}

  const std::string& bare_message() const { return bare_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string bare_;
  int line_;
  int column_;
};

// A grammar whose probability-1 unary cycles make Viterbi ill-defined.
class DegenerateGrammarError : public InputError {
 public:
  explicit DegenerateGrammarError(const std::string& msg) : InputError(msg) {}
};

// Broken internal invariant. The CLI maps this to exit code 1.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace treegram
