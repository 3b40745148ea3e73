// First-order formulas over a many-sorted vocabulary with equality.
//
// Formulas are immutable, structurally shared values.  Connectives 'and'/'or'
// are n-ary (kept as written; builders do not flatten or simplify), which the
// syntactic complexity measures rely on.  Quantifiers bind a nonempty block of
// typed variables.
#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "fbp/term.hpp"

namespace fbp {

struct VarDecl {
  std::string name;
  SortId sort = -1;
  bool operator==(const VarDecl& o) const { return name == o.name && sort == o.sort; }
};

class Formula {
public:
  enum class Kind { True, False, Eq, Rel, Not, And, Or, Implies, Iff, Forall, Exists };

  struct Node {
    Kind kind;
    // Eq
    Term lhs, rhs;
    // Rel
    SymId sym = -1;
    bool primed = false;
    std::vector<Term> args;
    // Not/And/Or/Implies/Iff and quantifier bodies
    std::vector<Formula> kids;
    // Forall/Exists
    std::vector<VarDecl> vars;
  };

  Formula() = default;  // empty placeholder; not a valid formula

  bool empty() const { return !node_; }
  Kind kind() const { return node_->kind; }
  const Term& lhs() const { return node_->lhs; }
  const Term& rhs() const { return node_->rhs; }
  SymId sym() const { return node_->sym; }
  bool primed() const { return node_->primed; }
  const std::vector<Term>& args() const { return node_->args; }
  const std::vector<Formula>& kids() const { return node_->kids; }
  const Formula& kid(size_t i) const { return node_->kids[i]; }
  const std::vector<VarDecl>& vars() const { return node_->vars; }
  const Node* raw() const { return node_.get(); }

  bool is(Kind k) const { return node_ && node_->kind == k; }
  bool is_quant() const { return is(Kind::Forall) || is(Kind::Exists); }

  static Formula make(Node n) { return Formula(std::make_shared<Node>(std::move(n))); }

private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---- builders -------------------------------------------------------------

inline Formula f_true() {
  static const Formula t = Formula::make({Formula::Kind::True});
  return t;
}
inline Formula f_false() {
  static const Formula f = Formula::make({Formula::Kind::False});
  return f;
}

inline Formula f_eq(Term l, Term r) {
  Formula::Node n{Formula::Kind::Eq};
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return Formula::make(std::move(n));
}

inline Formula f_rel(SymId sym, std::vector<Term> args = {}, bool primed = false) {
  Formula::Node n{Formula::Kind::Rel};
  n.sym = sym;
  n.primed = primed;
  n.args = std::move(args);
  return Formula::make(std::move(n));
}

inline Formula f_not(Formula a) {
  Formula::Node n{Formula::Kind::Not};
  n.kids = {std::move(a)};
  return Formula::make(std::move(n));
}

inline Formula f_and(std::vector<Formula> kids) {
  if (kids.empty()) return f_true();
  if (kids.size() == 1) return kids[0];
  Formula::Node n{Formula::Kind::And};
  n.kids = std::move(kids);
  return Formula::make(std::move(n));
}
inline Formula f_and(Formula a, Formula b) { return f_and(std::vector<Formula>{std::move(a), std::move(b)}); }

inline Formula f_or(std::vector<Formula> kids) {
  if (kids.empty()) return f_false();
  if (kids.size() == 1) return kids[0];
  Formula::Node n{Formula::Kind::Or};
  n.kids = std::move(kids);
  return Formula::make(std::move(n));
}
inline Formula f_or(Formula a, Formula b) { return f_or(std::vector<Formula>{std::move(a), std::move(b)}); }

inline Formula f_implies(Formula a, Formula b) {
  Formula::Node n{Formula::Kind::Implies};
  n.kids = {std::move(a), std::move(b)};
  return Formula::make(std::move(n));
}

inline Formula f_iff(Formula a, Formula b) {
  Formula::Node n{Formula::Kind::Iff};
  n.kids = {std::move(a), std::move(b)};
  return Formula::make(std::move(n));
}

inline Formula f_quant(Formula::Kind k, std::vector<VarDecl> vars, Formula body) {
  if (k != Formula::Kind::Forall && k != Formula::Kind::Exists)
    throw Error("f_quant: not a quantifier kind");
  if (vars.empty()) return body;
  Formula::Node n{k};
  n.vars = std::move(vars);
  n.kids = {std::move(body)};
  return Formula::make(std::move(n));
}
inline Formula f_forall(std::vector<VarDecl> vars, Formula body) {
  return f_quant(Formula::Kind::Forall, std::move(vars), std::move(body));
}
inline Formula f_exists(std::vector<VarDecl> vars, Formula body) {
  return f_quant(Formula::Kind::Exists, std::move(vars), std::move(body));
}

// ---- structural equality ----------------------------------------------------

inline bool formula_eq(const Formula& a, const Formula& b) {
  if (a.raw() == b.raw()) return true;
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return true;
    case Formula::Kind::Eq:
      return term_eq(a.lhs(), b.lhs()) && term_eq(a.rhs(), b.rhs());
    case Formula::Kind::Rel: {
      if (a.sym() != b.sym() || a.primed() != b.primed()) return false;
      if (a.args().size() != b.args().size()) return false;
      for (size_t i = 0; i < a.args().size(); ++i)
        if (!term_eq(a.args()[i], b.args()[i])) return false;
      return true;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (!(a.vars() == b.vars())) return false;
      [[fallthrough]];
    default: {
      if (a.kids().size() != b.kids().size()) return false;
      for (size_t i = 0; i < a.kids().size(); ++i)
        if (!formula_eq(a.kids()[i], b.kids()[i])) return false;
      return true;
    }
  }
}

// True iff `f` is the negation of `g` (structurally).
inline bool is_negation_of(const Formula& f, const Formula& g) {
  return f.is(Formula::Kind::Not) && formula_eq(f.kid(0), g);
}

} // namespace fbp
