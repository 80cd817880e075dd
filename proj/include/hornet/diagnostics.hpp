// Error taxonomy. Every failure mode the library reports deliberately is one
// of these; anything else escaping is a bug.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hornet {

// Ill-formed input handed to a library entry point: unknown predicate,
// unassigned variable during evaluation, arity mismatch at the API level.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source text rejected by a frontend. Position is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// The clause system has a dependency cycle; the solver only handles
// recursion-free systems. Carries one witnessing cycle.
class RecursionError : public std::runtime_error {
 public:
  explicit RecursionError(std::vector<std::string> cycle)
      : std::runtime_error("recursive predicate dependency: " + join(cycle)), cycle_(std::move(cycle)) {}

  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  static std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
      if (!out.empty()) out += " -> ";
      out += n;
    }
    return out;
  }

  std::vector<std::string> cycle_;
};

// A body atom's predicate has no clause with a matching head, so resolution
// cannot discharge it.
class UnresolvableAtomError : public std::runtime_error {
 public:
  explicit UnresolvableAtomError(const std::string& predicate)
      : std::runtime_error("predicate " + predicate + " occurs in a body but heads no clause"),
        predicate_(predicate) {}

  const std::string& predicate() const { return predicate_; }

 private:
  std::string predicate_;
};

// A configured cap (derivation count, constraint count, wall time) was hit.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invariant violation inside the library. Never expected on any input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hornet
