// First-order terms: variables and applications of function symbols.
//
// Terms are immutable values sharing structure through shared_ptr; copying a
// Term is O(1).  A primed application refers to the next-state interpretation
// of a mutable symbol — priming is a flag on the occurrence.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fbp/vocab.hpp"

namespace fbp {

class Term {
public:
  enum class Kind { Var, App };

  struct Node {
    Kind kind;
    // Var
    std::string var;
    SortId var_sort = -1;
    // App
    SymId sym = -1;
    bool primed = false;
    std::vector<Term> args;
  };

  Term() = default;  // empty; only valid as a placeholder

  static Term var(std::string name, SortId sort) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var = std::move(name);
    n->var_sort = sort;
    return Term(std::move(n));
  }

  static Term app(SymId sym, std::vector<Term> args, bool primed = false) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->sym = sym;
    n->primed = primed;
    n->args = std::move(args);
    return Term(std::move(n));
  }

  static Term constant(SymId sym, bool primed = false) { return app(sym, {}, primed); }

  bool empty() const { return !node_; }
  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_ && node_->kind == Kind::Var; }
  bool is_app() const { return node_ && node_->kind == Kind::App; }

  const std::string& var_name() const { return node_->var; }
  SortId var_sort() const { return node_->var_sort; }
  SymId sym() const { return node_->sym; }
  bool primed() const { return node_->primed; }
  const std::vector<Term>& args() const { return node_->args; }

  const Node* raw() const { return node_.get(); }

private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Structural equality (variable names compared literally).
inline bool term_eq(const Term& a, const Term& b) {
  if (a.raw() == b.raw()) return true;
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Term::Kind::Var)
    return a.var_name() == b.var_name() && a.var_sort() == b.var_sort();
  if (a.sym() != b.sym() || a.primed() != b.primed()) return false;
  if (a.args().size() != b.args().size()) return false;
  for (size_t i = 0; i < a.args().size(); ++i)
    if (!term_eq(a.args()[i], b.args()[i])) return false;
  return true;
}

} // namespace fbp
