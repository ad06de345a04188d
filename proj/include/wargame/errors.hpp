#pragma once

#include <stdexcept>
#include <string>

namespace wargame {

// Violated precondition or game rule (illegal order, stepping a terminal
// state, bad placement, ...).
class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario text that fails to parse or validate. `line()` is 1-based; 0 when
// the problem is not tied to one line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Search agents raise this when the budget cannot cover even one unit of work.
class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wargame
