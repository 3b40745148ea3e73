// Symbolic transition systems and constructions on them.
//
// A safety problem packages a many-sorted vocabulary, background axioms over
// the immutable symbols, an initial-states formula, a list of named
// transitions (their disjunction is the step relation), and a bad-states
// formula.  All formulas are closed; init/bad/axioms are one-state.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbp/ops.hpp"

namespace fbp {

struct Transition {
  std::string name;
  Formula formula;  // closed two-state formula
};

struct SafetyProblem {
  Vocabulary voc;
  std::vector<Formula> axioms;
  Formula init;
  std::vector<Transition> transitions;
  Formula bad;
};

// Structural equality of problems (used by involution properties).
inline bool problem_eq(const SafetyProblem& a, const SafetyProblem& b) {
  if (a.voc != b.voc) return false;
  if (a.axioms.size() != b.axioms.size() || a.transitions.size() != b.transitions.size()) return false;
  for (size_t i = 0; i < a.axioms.size(); ++i)
    if (!formula_eq(a.axioms[i], b.axioms[i])) return false;
  if (!formula_eq(a.init, b.init) || !formula_eq(a.bad, b.bad)) return false;
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    if (a.transitions[i].name != b.transitions[i].name) return false;
    if (!formula_eq(a.transitions[i].formula, b.transitions[i].formula)) return false;
  }
  return true;
}

// Well-formedness of a safety problem.  Empty result = OK.
inline std::vector<Diag> validate(const SafetyProblem& p) {
  std::vector<Diag> diags;
  auto check_formula = [&](const Formula& f, const std::string& what, bool allow_primed) {
    if (f.empty()) {
      diags.push_back({what + ": missing formula"});
      return;
    }
    for (Diag d : well_sorted(p.voc, f)) {
      d.message = what + ": " + d.message;
      diags.push_back(d);
    }
    if (!free_vars(f).empty()) diags.push_back({what + ": formula is not closed"});
    if (!allow_primed && has_primed_occurrence(f))
      diags.push_back({what + ": next-state occurrence in a one-state formula"});
  };
  for (size_t i = 0; i < p.axioms.size(); ++i) {
    const Formula& ax = p.axioms[i];
    std::string what = "axiom " + std::to_string(i + 1);
    check_formula(ax, what, false);
    if (!ax.empty())
      for (SymId s : symbols_of(ax))
        if (p.voc.symbol(s).mut)
          diags.push_back({what + ": mentions mutable symbol '" + p.voc.symbol(s).name + "'"});
  }
  check_formula(p.init, "init", false);
  check_formula(p.bad, "bad", false);
  std::set<std::string> names;
  for (const Transition& t : p.transitions) {
    if (t.name.empty()) diags.push_back({"transition with empty name"});
    if (!names.insert(t.name).second) diags.push_back({"duplicate transition name '" + t.name + "'"});
    check_formula(t.formula, "transition " + t.name, true);
  }
  return diags;
}

inline void require_valid(const SafetyProblem& p, const std::string& what = "safety problem") {
  auto diags = validate(p);
  if (!diags.empty()) throw Error("invalid " + what + ": " + diags.front().message);
}

// ---- reversal -----------------------------------------------------------------

// Run the system backwards: initial and bad states trade places and every
// transition is flipped by exchanging current- and next-state occurrences.
inline SafetyProblem reverse(const SafetyProblem& p) {
  SafetyProblem r = p;
  std::swap(r.init, r.bad);
  for (Transition& t : r.transitions) t.formula = swap_state(p.voc, t.formula);
  return r;
}

// ---- restriction ---------------------------------------------------------------

// Restrict the system to states satisfying the closed one-state formula phi:
// new init/bad are conjoined with phi and every transition must start and end
// inside phi.
inline SafetyProblem restrict(const SafetyProblem& p, const Formula& phi) {
  require_well_sorted(p.voc, phi, {}, "restriction");
  if (!free_vars(phi).empty()) throw Error("restrict: formula is not closed");
  if (has_primed_occurrence(phi)) throw Error("restrict: formula mentions the next state");
  SafetyProblem r = p;
  Formula phi_next = prime(p.voc, phi);
  r.init = f_and(p.init, phi);
  for (Transition& t : r.transitions)
    t.formula = f_and({t.formula, phi, phi_next});
  r.bad = f_and(p.bad, phi);
  return r;
}

// ---- prophecy ------------------------------------------------------------------

// Extend the system with immutable witness constants w and require phi(w) to
// hold in every state: init, bad, and both endpoints of every transition are
// conjoined with phi(w).  phi's free variables must be exactly the witness
// names; they become the fresh constants.  Immutability of the witnesses
// encodes w' = w.
inline SafetyProblem prophecy_extend(const SafetyProblem& p, const Formula& phi,
                                     const std::vector<VarDecl>& witnesses) {
  if (witnesses.empty()) throw Error("prophecy_extend: no witnesses");
  if (has_primed_occurrence(phi)) throw Error("prophecy_extend: formula mentions the next state");
  std::map<std::string, SortId> env;
  for (const VarDecl& w : witnesses) {
    if (env.count(w.name)) throw Error("prophecy_extend: duplicate witness '" + w.name + "'");
    env[w.name] = w.sort;
  }
  require_well_sorted(p.voc, phi, env, "prophecy formula");
  for (auto& [n, s] : free_vars(phi))
    if (!env.count(n)) throw Error("prophecy_extend: stray free variable '" + n + "'");

  SafetyProblem r = p;
  std::map<std::string, Term> to_const;
  for (const VarDecl& w : witnesses) {
    if (r.voc.find_symbol(w.name) || r.voc.find_sort(w.name))
      throw Error("prophecy_extend: witness name '" + w.name + "' is already declared");
    SymId c = r.voc.add_constant(w.name, w.sort, /*mut=*/false);
    to_const[w.name] = Term::constant(c);
  }
  Formula phi_w = subst_vars(phi, to_const);
  Formula phi_w_next = prime(r.voc, phi_w);
  r.init = f_and(p.init, phi_w);
  for (Transition& t : r.transitions)
    t.formula = f_and({t.formula, phi_w, phi_w_next});
  r.bad = f_and(p.bad, phi_w);
  return r;
}

// The soundness side of a prophecy step, as a safety problem of its own.
// A fresh mutable tracker relation m over the witness sorts over-approximates
// "phi(v) held in every state so far".  The construction is unsafe exactly
// when some bad state is reachable with no surviving candidate value, i.e.
// when introducing the witness would lose a counterexample.
//
// Returns the extended problem; `tracker_out`, when non-null, receives the
// tracker's symbol id.
inline SafetyProblem prophecy_soundness(const SafetyProblem& p, const Formula& phi,
                                        const std::vector<VarDecl>& params,
                                        SymId* tracker_out = nullptr,
                                        const std::string& tracker_base = "tracker") {
  if (params.empty()) throw Error("prophecy_soundness: no parameters");
  std::map<std::string, SortId> env;
  std::vector<SortId> sorts;
  for (const VarDecl& w : params) {
    if (env.count(w.name)) throw Error("prophecy_soundness: duplicate parameter '" + w.name + "'");
    env[w.name] = w.sort;
    sorts.push_back(w.sort);
  }
  if (has_primed_occurrence(phi)) throw Error("prophecy_soundness: formula mentions the next state");
  require_well_sorted(p.voc, phi, env, "prophecy formula");
  for (auto& [n, s] : free_vars(phi))
    if (!env.count(n)) throw Error("prophecy_soundness: stray free variable '" + n + "'");

  SafetyProblem r = p;
  // The tracker is always the next symbol id; callers that need to refer to
  // it before building the problem rely on that.
  SymId m = r.voc.add_relation(r.voc.fresh_name(tracker_base), sorts, /*mut=*/true);
  if (tracker_out) *tracker_out = m;
  std::vector<Term> args;
  for (const VarDecl& w : params) args.push_back(Term::var(w.name, w.sort));
  Formula m_now = f_rel(m, args);
  Formula m_next = f_rel(m, args, /*primed=*/true);
  Formula phi_next = prime(r.voc, phi);

  r.init = f_and(p.init, f_forall(params, f_implies(phi, m_now)));
  for (Transition& t : r.transitions)
    t.formula = f_and(t.formula,
                      f_forall(params, f_implies(f_and({m_now, phi, phi_next}), m_next)));
  r.bad = f_and(p.bad, f_forall(params, f_implies(phi, f_not(m_now))));
  return r;
}

// ---- frame sugar -----------------------------------------------------------------

// One application of a mutable symbol, as written in a `modifies` set.
struct ModApp {
  SymId sym = -1;
  std::vector<Term> args;
};

// Desugar  exists binders. [ body ] modifies apps  into a plain two-state
// formula: body is conjoined, inside the binders, with a frame condition for
// every mutable symbol — arguments distinct from each listed application are
// unchanged.  A mutable symbol with no listed application is fully framed; a
// listed 0-ary symbol is fully unframed.
inline Formula desugar_frame(const Vocabulary& voc, const std::vector<VarDecl>& binders,
                             const Formula& body, const std::vector<ModApp>& modifies) {
  std::map<std::string, SortId> env;
  for (const VarDecl& b : binders) env[b.name] = b.sort;
  require_well_sorted(voc, body, env, "transition body");

  // Group listed applications by symbol.
  std::map<SymId, std::vector<const ModApp*>> listed;
  for (const ModApp& a : modifies) {
    const Symbol& s = voc.symbol(a.sym);
    if (!s.mut) throw Error("modifies: symbol '" + s.name + "' is immutable");
    if (a.args.size() != s.args.size())
      throw Error("modifies: wrong arity for '" + s.name + "'");
    for (const Term& t : a.args) {
      std::vector<Diag> diags;
      detail::term_sort_rec(voc, t, env, diags);
      if (!diags.empty()) throw Error("modifies: " + diags.front().message);
    }
    listed[a.sym].push_back(&a);
  }

  // Fresh frame variable names, avoiding the binders and everything in sight.
  std::set<std::string> forbidden = used_var_names(body);
  for (const VarDecl& b : binders) forbidden.insert(b.name);
  for (const ModApp& a : modifies)
    for (const Term& t : a.args) {
      std::map<std::string, SortId> vs;
      collect_term_vars(t, vs);
      for (auto& [n, s] : vs) forbidden.insert(n);
    }

  std::vector<Formula> parts{body};
  for (SymId s = 0; s < voc.num_symbols(); ++s) {
    const Symbol& sym = voc.symbol(s);
    if (!sym.mut) continue;
    auto it = listed.find(s);
    const std::vector<const ModApp*>* apps = it == listed.end() ? nullptr : &it->second;

    if (sym.args.empty()) {
      if (apps) continue;  // listed 0-ary symbol: unconstrained
      Formula eq = sym.kind == SymKind::Function
                       ? f_eq(Term::constant(s, true), Term::constant(s))
                       : f_iff(f_rel(s, {}, true), f_rel(s, {}));
      parts.push_back(eq);
      continue;
    }

    std::vector<VarDecl> zs;
    std::vector<Term> z_terms;
    for (SortId as : sym.args) {
      std::string zn = fresh_var_name("z", forbidden);
      zs.push_back({zn, as});
      z_terms.push_back(Term::var(zn, as));
    }
    Formula agree = sym.kind == SymKind::Function
                        ? f_eq(Term::app(s, z_terms, true), Term::app(s, z_terms))
                        : f_iff(f_rel(s, z_terms, true), f_rel(s, z_terms));
    Formula frame;
    if (!apps) {
      frame = f_forall(zs, agree);
    } else {
      // distinct from every listed application => unchanged
      std::vector<Formula> guards;
      for (const ModApp* a : *apps) {
        std::vector<Formula> eqs;
        for (size_t i = 0; i < z_terms.size(); ++i) eqs.push_back(f_eq(z_terms[i], a->args[i]));
        guards.push_back(f_not(f_and(std::move(eqs))));
      }
      frame = f_forall(zs, f_implies(f_and(std::move(guards)), agree));
    }
    parts.push_back(std::move(frame));
  }
  return f_exists(binders, f_and(std::move(parts)));
}

// ---- safety herbrandization --------------------------------------------------------

// Strip a universal prefix from the safety property by introducing fresh
// immutable constants for the bound variables.  When the resulting body is an
// implication whose antecedent mentions only immutable symbols, the antecedent
// becomes a background axiom and the consequent the new property.  Safety of
// the result is equivalent to safety of the input.  Quantifier-free properties
// are returned unchanged; any other shape is refused.
inline SafetyProblem herbrandize_safety(const SafetyProblem& p) {
  Formula property = p.bad.is(Formula::Kind::Not) ? p.bad.kid(0) : f_not(p.bad);
  if (!property.is(Formula::Kind::Forall)) {
    if (metric_quantifiers(property) == 0) return p;
    throw Error("herbrandize_safety: property is not a universally prefixed formula");
  }
  SafetyProblem r = p;
  Formula body = property;
  std::map<std::string, Term> to_const;
  while (body.is(Formula::Kind::Forall)) {
    for (const VarDecl& v : body.vars()) {
      std::string cn = r.voc.fresh_name(v.name);
      SymId c = r.voc.add_constant(cn, v.sort, /*mut=*/false);
      to_const[v.name] = Term::constant(c);
    }
    body = body.kid(0);
  }
  body = subst_vars(body, to_const);

  if (body.is(Formula::Kind::Implies)) {
    const Formula& guard = body.kid(0);
    bool guard_immutable = !has_primed_occurrence(guard);
    for (SymId s : symbols_of(guard))
      if (r.voc.symbol(s).mut) guard_immutable = false;
    if (guard_immutable) {
      r.axioms.push_back(guard);
      r.bad = f_not(body.kid(1));
      return r;
    }
  }
  r.bad = f_not(body);
  return r;
}

} // namespace fbp
