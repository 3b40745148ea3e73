// Extraction of an inductive safety invariant from an accepted proof tree,
// plus the light syntactic simplifier used when presenting it.
//
// Time-reversed rules are first normalized into Reverse-wrapped forward
// rules (double reversals cancel); the invariant then falls out of a single
// recursion.  For prophecy rules the witness subproblem's invariant mentions
// the witness constants and (for the primitive rule) the tracker relation;
// witnesses are turned back into bound variables and tracker applications
// are replaced by the witness invariant itself.
#pragma once

#include "fbp/proof.hpp"

namespace fbp {

namespace detail {

// Wrap in Reverse, cancelling an immediate double reversal.
inline ProofTree rev_wrap(ProofTree t) {
  if (t.rule == Rule::Reverse) return std::move(t.children[0]);
  std::string label = t.label;
  ProofTree r{Rule::Reverse, f_true(), {}, {}, "", {}, std::move(label)};
  r.children.push_back(std::move(t));
  return r;
}

} // namespace detail

// Rewrite every time-reversed rule as Reverse over the forward rule.  The
// result proves the same problem and extracts the same invariant; it contains
// no Back* rules and no Reverse(Reverse(..)) chains.
inline ProofTree normalize(const ProofTree& t) {
  std::vector<ProofTree> kids;
  kids.reserve(t.children.size());
  for (const ProofTree& c : t.children) kids.push_back(normalize(c));
  switch (t.rule) {
    case Rule::BackInduction: {
      ProofTree ind{Rule::Induction, t.payload, {}, {}, "", {}, t.label};
      return detail::rev_wrap(std::move(ind));
    }
    case Rule::BackConsequence: {
      ProofTree cons{Rule::Consequence, t.payload, {}, {}, "",
                     {detail::rev_wrap(std::move(kids[0]))}, t.label};
      return detail::rev_wrap(std::move(cons));
    }
    case Rule::BackIncremental: {
      ProofTree inc{Rule::Incremental, t.payload, {}, {}, "",
                    {detail::rev_wrap(std::move(kids[0])), detail::rev_wrap(std::move(kids[1]))},
                    t.label};
      return detail::rev_wrap(std::move(inc));
    }
    case Rule::Reverse:
      return detail::rev_wrap(std::move(kids[0]));
    default: {
      ProofTree out = t;
      out.children = std::move(kids);
      return out;
    }
  }
}

namespace detail {

// Invariant of a normalized tree against its premise problem.
inline Formula invariant_rec(const SafetyProblem& p, const ProofTree& t) {
  if (t.children.size() != rule_arity(t.rule)) throw Error("extract: malformed tree");
  switch (t.rule) {
    case Rule::Induction:
      return t.payload;
    case Rule::Consequence: {
      SafetyProblem c = p;
      c.bad = f_not(t.payload);
      return invariant_rec(c, t.children[0]);
    }
    case Rule::Incremental: {
      SafetyProblem c = p;
      c.bad = f_not(t.payload);
      return f_and(invariant_rec(c, t.children[0]),
                   invariant_rec(restrict(p, t.payload), t.children[1]));
    }
    case Rule::Reverse:
      return f_not(invariant_rec(reverse(p), t.children[0]));
    case Rule::Prophecy:
    case Rule::ProphecyForward:
    case Rule::ProphecySelect: {
      check_prophecy_payload(p, t, "prophecy formula");
      // Invariant of the witness subproblem, with witness constants turned
      // back into variables named like the witnesses.
      SafetyProblem ext = prophecy_extend(p, t.payload, t.witnesses);
      const ProofTree& wchild = t.children.back();
      Formula psi = invariant_rec(ext, wchild);
      for (const VarDecl& w : t.witnesses) {
        SymId c = *ext.voc.find_symbol(w.name);
        psi = subst_symbol(ext.voc, psi, c, Term::var(w.name, w.sort));
      }
      if (t.rule == Rule::ProphecyForward)
        return f_exists(t.witnesses, f_and(t.payload, psi));
      if (t.rule == Rule::ProphecySelect)
        return f_or(f_and(f_not(t.selector), f_forall(t.witnesses, psi)),
                    f_and(t.selector, f_exists(t.witnesses, f_and(t.payload, psi))));
      // Primitive rule: take the soundness child's invariant over the tracker
      // and substitute the witness invariant for tracker applications.
      SymId tracker = -1;
      SafetyProblem snd = prophecy_soundness(p, t.payload, t.witnesses, &tracker,
                                             t.tracker.empty() ? "tracker" : t.tracker);
      Formula xi = invariant_rec(snd, t.children[0]);
      return subst_relation(snd.voc, xi, tracker, psi, t.witnesses);
    }
    default:
      throw Error("extract: tree not normalized");
  }
}

} // namespace detail

// The inductive safety invariant certified by an accepted proof tree, at the
// root problem.  The result is a closed one-state formula over p's
// vocabulary; no simplification is applied.
inline Formula extract_invariant(const SafetyProblem& p, const ProofTree& t) {
  return detail::invariant_rec(p, normalize(t));
}

inline Formula extract_invariant(const SafetyProblem& p, const ProofScript& s) {
  return extract_invariant(p, elaborate(s));
}

// ---- simplification ---------------------------------------------------------------

// Conservative clean-up for presentation: flattens nested conjunctions and
// disjunctions, drops neutral elements, folds constants, removes double
// negations, and pushes a negation over a conjunction/disjunction one level
// when that uncovers a negation or constant underneath.  Never moves a
// negation through a quantifier.
inline Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      return f;
    case Formula::Kind::Not: {
      Formula k = simplify(f.kid(0));
      if (k.is(Formula::Kind::True)) return f_false();
      if (k.is(Formula::Kind::False)) return f_true();
      if (k.is(Formula::Kind::Not)) return k.kid(0);
      if (k.is(Formula::Kind::And) || k.is(Formula::Kind::Or)) {
        bool worthwhile = false;
        for (const Formula& c : k.kids())
          if (c.is(Formula::Kind::Not) || c.is(Formula::Kind::True) || c.is(Formula::Kind::False))
            worthwhile = true;
        if (worthwhile) {
          std::vector<Formula> kids;
          for (const Formula& c : k.kids()) kids.push_back(simplify(f_not(c)));
          return k.is(Formula::Kind::And) ? simplify(f_or(std::move(kids)))
                                          : simplify(f_and(std::move(kids)));
        }
      }
      return f_not(k);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool is_and = f.is(Formula::Kind::And);
      std::vector<Formula> kids;
      bool absorbed = false;
      std::function<void(const Formula&)> add = [&](const Formula& g) {
        Formula s = simplify(g);
        if (s.kind() == f.kind()) {
          for (const Formula& k : s.kids()) add(k);
          return;
        }
        if (s.is(is_and ? Formula::Kind::True : Formula::Kind::False)) return;  // neutral
        if (s.is(is_and ? Formula::Kind::False : Formula::Kind::True)) absorbed = true;
        kids.push_back(std::move(s));
      };
      for (const Formula& k : f.kids()) add(k);
      if (absorbed) return is_and ? f_false() : f_true();
      return is_and ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case Formula::Kind::Implies: {
      Formula a = simplify(f.kid(0)), b = simplify(f.kid(1));
      if (a.is(Formula::Kind::True)) return b;
      if (a.is(Formula::Kind::False)) return f_true();
      if (b.is(Formula::Kind::True)) return f_true();
      if (b.is(Formula::Kind::False)) return simplify(f_not(a));
      return f_implies(std::move(a), std::move(b));
    }
    case Formula::Kind::Iff: {
      Formula a = simplify(f.kid(0)), b = simplify(f.kid(1));
      if (a.is(Formula::Kind::True)) return b;
      if (b.is(Formula::Kind::True)) return a;
      if (a.is(Formula::Kind::False)) return simplify(f_not(b));
      if (b.is(Formula::Kind::False)) return simplify(f_not(a));
      return f_iff(std::move(a), std::move(b));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Formula b = simplify(f.kid(0));
      // Carriers are nonempty, so a constant body absorbs the quantifier.
      if (b.is(Formula::Kind::True) || b.is(Formula::Kind::False)) return b;
      return f_quant(f.kind(), f.vars(), std::move(b));
    }
  }
  throw Error("simplify: unreachable");
}

} // namespace fbp
