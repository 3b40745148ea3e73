// Outcome of checking a single proof obligation.
#pragma once

#include <optional>
#include <string>

#include "fbp/model.hpp"

namespace fbp {

enum class VerdictKind {
  Valid,           // claim holds in all models of the axioms
  ValidUpToBound,  // holds in all models within the finite bounds tried
  Counterexample,  // a model of the axioms falsifying the claim
  Unknown,         // backend could not decide (timeout, solver failure, ...)
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<FiniteModel> model;  // present for Counterexample when finite
  std::string detail;                // reason for Unknown, solver notes, ...

  bool accepted() const { return kind == VerdictKind::Valid || kind == VerdictKind::ValidUpToBound; }
};

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Valid: return "valid";
    case VerdictKind::ValidUpToBound: return "valid-up-to-bound";
    case VerdictKind::Counterexample: return "counterexample";
    case VerdictKind::Unknown: return "unknown";
  }
  return "unknown";
}

} // namespace fbp
