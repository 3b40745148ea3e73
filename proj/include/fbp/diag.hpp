// Shared error and diagnostic types.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fbp {

// Thrown by operations whose documented preconditions are violated
// (ill-sorted input, wrong proof-tree arity, double priming, ...).
// The CLI maps these to a nonzero "input error" exit, tests assert on them.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A diagnostic with an optional source position (used by the parser and by
// well-sortedness checking; line/col are 1-based, 0 = unknown).
struct Diag {
  std::string message;
  int line = 0;
  int col = 0;
};

inline std::string to_string(const Diag& d) {
  if (d.line == 0) return d.message;
  return std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
}

} // namespace fbp
