// Syntactic operations on terms and formulas: variable bookkeeping,
// capture-avoiding substitution, state priming/swapping, well-sortedness,
// negation normal form, prenexing, and complexity measures.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fbp/formula.hpp"

namespace fbp {

// ---- variable bookkeeping ---------------------------------------------------

inline void collect_term_vars(const Term& t, std::map<std::string, SortId>& out) {
  if (t.empty()) return;
  if (t.is_var()) {
    out.emplace(t.var_name(), t.var_sort());
    return;
  }
  for (const Term& a : t.args()) collect_term_vars(a, out);
}

namespace detail {
inline void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                          std::map<std::string, SortId>& out) {
  auto term_free = [&](const Term& t) {
    std::map<std::string, SortId> vs;
    collect_term_vars(t, vs);
    for (auto& [n, s] : vs)
      if (!bound.count(n)) out.emplace(n, s);
  };
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Eq:
      term_free(f.lhs());
      term_free(f.rhs());
      return;
    case Formula::Kind::Rel:
      for (const Term& a : f.args()) term_free(a);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::vector<std::string> added;
      for (const VarDecl& v : f.vars())
        if (bound.insert(v.name).second) added.push_back(v.name);
      free_vars_rec(f.kid(0), bound, out);
      for (const std::string& n : added) bound.erase(n);
      return;
    }
    default:
      for (const Formula& k : f.kids()) free_vars_rec(k, bound, out);
      return;
  }
}

inline void used_var_names_rec(const Formula& f, std::set<std::string>& out) {
  auto term_vars = [&](const Term& t) {
    std::map<std::string, SortId> vs;
    collect_term_vars(t, vs);
    for (auto& [n, s] : vs) out.insert(n);
  };
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Eq:
      term_vars(f.lhs());
      term_vars(f.rhs());
      return;
    case Formula::Kind::Rel:
      for (const Term& a : f.args()) term_vars(a);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      for (const VarDecl& v : f.vars()) out.insert(v.name);
      used_var_names_rec(f.kid(0), out);
      return;
    default:
      for (const Formula& k : f.kids()) used_var_names_rec(k, out);
      return;
  }
}
} // namespace detail

// Free variables of a formula with their sorts.
inline std::map<std::string, SortId> free_vars(const Formula& f) {
  std::map<std::string, SortId> out;
  std::set<std::string> bound;
  detail::free_vars_rec(f, bound, out);
  return out;
}

inline bool is_closed(const Formula& f) { return free_vars(f).empty(); }

// All variable names occurring in f, free or bound.
inline std::set<std::string> used_var_names(const Formula& f) {
  std::set<std::string> out;
  detail::used_var_names_rec(f, out);
  return out;
}

inline std::string fresh_var_name(const std::string& base, std::set<std::string>& forbidden) {
  std::string cand = base;
  for (int i = 1; forbidden.count(cand); ++i) cand = base + std::to_string(i);
  forbidden.insert(cand);
  return cand;
}

// ---- symbol occurrence queries ----------------------------------------------

namespace detail {
inline void term_symbols(const Term& t, std::set<SymId>& out, bool& primed_seen) {
  if (t.empty() || t.is_var()) return;
  out.insert(t.sym());
  if (t.primed()) primed_seen = true;
  for (const Term& a : t.args()) term_symbols(a, out, primed_seen);
}
inline void formula_symbols(const Formula& f, std::set<SymId>& out, bool& primed_seen) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Eq:
      term_symbols(f.lhs(), out, primed_seen);
      term_symbols(f.rhs(), out, primed_seen);
      return;
    case Formula::Kind::Rel:
      out.insert(f.sym());
      if (f.primed()) primed_seen = true;
      for (const Term& a : f.args()) term_symbols(a, out, primed_seen);
      return;
    default:
      for (const Formula& k : f.kids()) formula_symbols(k, out, primed_seen);
      return;
  }
}
} // namespace detail

inline std::set<SymId> symbols_of(const Formula& f) {
  std::set<SymId> out;
  bool dummy = false;
  detail::formula_symbols(f, out, dummy);
  return out;
}

// True iff some occurrence in f is primed (f mentions the next state).
inline bool has_primed_occurrence(const Formula& f) {
  std::set<SymId> out;
  bool primed = false;
  detail::formula_symbols(f, out, primed);
  return primed;
}

// ---- priming and state swapping ----------------------------------------------

namespace detail {
enum class PrimeMode { Prime, Swap };

inline Term prime_term(const Vocabulary& voc, const Term& t, PrimeMode mode) {
  if (t.empty() || t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(prime_term(voc, a, mode));
  bool primed = t.primed();
  if (voc.symbol(t.sym()).mut) {
    if (mode == PrimeMode::Prime) {
      if (primed) throw Error("prime: occurrence of '" + voc.symbol(t.sym()).name + "' is already primed");
      primed = true;
    } else {
      primed = !primed;
    }
  } else if (primed) {
    throw Error("primed occurrence of immutable symbol '" + voc.symbol(t.sym()).name + "'");
  }
  return Term::app(t.sym(), std::move(args), primed);
}

inline Formula prime_formula(const Vocabulary& voc, const Formula& f, PrimeMode mode) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Eq:
      return f_eq(prime_term(voc, f.lhs(), mode), prime_term(voc, f.rhs(), mode));
    case Formula::Kind::Rel: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& a : f.args()) args.push_back(prime_term(voc, a, mode));
      bool primed = f.primed();
      if (voc.symbol(f.sym()).mut) {
        if (mode == PrimeMode::Prime) {
          if (primed) throw Error("prime: occurrence of '" + voc.symbol(f.sym()).name + "' is already primed");
          primed = true;
        } else {
          primed = !primed;
        }
      } else if (primed) {
        throw Error("primed occurrence of immutable symbol '" + voc.symbol(f.sym()).name + "'");
      }
      return f_rel(f.sym(), std::move(args), primed);
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return f_quant(f.kind(), f.vars(), prime_formula(voc, f.kid(0), mode));
    default: {
      Formula::Node n{f.kind()};
      n.kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) n.kids.push_back(prime_formula(voc, k, mode));
      return Formula::make(std::move(n));
    }
  }
}
} // namespace detail

// Mark every occurrence of a mutable symbol as next-state.  Errors if the
// input already mentions the next state (no double priming).
inline Formula prime(const Vocabulary& voc, const Formula& f) {
  return detail::prime_formula(voc, f, detail::PrimeMode::Prime);
}
inline Term prime(const Vocabulary& voc, const Term& t) {
  return detail::prime_term(voc, t, detail::PrimeMode::Prime);
}

// Exchange current- and next-state occurrences of mutable symbols.
// An involution; used to reverse transitions.
inline Formula swap_state(const Vocabulary& voc, const Formula& f) {
  return detail::prime_formula(voc, f, detail::PrimeMode::Swap);
}

// ---- capture-avoiding substitution -------------------------------------------

namespace detail {
inline Term subst_term_vars(const Term& t, const std::map<std::string, Term>& env) {
  if (t.empty()) return t;
  if (t.is_var()) {
    auto it = env.find(t.var_name());
    return it == env.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(subst_term_vars(a, env));
  return Term::app(t.sym(), std::move(args), t.primed());
}

inline Formula subst_vars_rec(const Formula& f, std::map<std::string, Term> env,
                              std::set<std::string>& forbidden) {
  if (env.empty()) return f;
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Eq:
      return f_eq(subst_term_vars(f.lhs(), env), subst_term_vars(f.rhs(), env));
    case Formula::Kind::Rel: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& a : f.args()) args.push_back(subst_term_vars(a, env));
      return f_rel(f.sym(), std::move(args), f.primed());
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      // Binder variables shadow outer substitutions.
      for (const VarDecl& v : f.vars()) env.erase(v.name);
      if (env.empty()) return f;
      // Rename binders that would capture a variable free in a replacement.
      std::set<std::string> replacement_free;
      for (auto& [k, t] : env) {
        std::map<std::string, SortId> vs;
        collect_term_vars(t, vs);
        for (auto& [n, s] : vs) replacement_free.insert(n);
      }
      std::vector<VarDecl> vars;
      vars.reserve(f.vars().size());
      for (const VarDecl& v : f.vars()) {
        if (replacement_free.count(v.name)) {
          std::string nv = fresh_var_name(v.name, forbidden);
          env[v.name] = Term::var(nv, v.sort);
          vars.push_back({nv, v.sort});
        } else {
          vars.push_back(v);
        }
      }
      return f_quant(f.kind(), std::move(vars), subst_vars_rec(f.kid(0), std::move(env), forbidden));
    }
    default: {
      Formula::Node n{f.kind()};
      n.kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) n.kids.push_back(subst_vars_rec(k, env, forbidden));
      return Formula::make(std::move(n));
    }
  }
}
} // namespace detail

// Simultaneous capture-avoiding substitution of free variables by terms.
inline Formula subst_vars(const Formula& f, const std::map<std::string, Term>& env) {
  std::set<std::string> forbidden = used_var_names(f);
  for (auto& [k, t] : env) {
    std::map<std::string, SortId> vs;
    collect_term_vars(t, vs);
    for (auto& [n, s] : vs) forbidden.insert(n);
  }
  return detail::subst_vars_rec(f, env, forbidden);
}

// Substitute one free variable by a term.
inline Formula subst_term(const Formula& f, const std::string& var, const Term& t) {
  return subst_vars(f, {{var, t}});
}

// Replace every occurrence of the constant symbol `c` by the term `t`.
// Used to turn designated witness constants back into variables.
inline Term subst_symbol(const Vocabulary& voc, const Term& tm, SymId c, const Term& t) {
  if (tm.empty() || tm.is_var()) return tm;
  if (tm.sym() == c && tm.args().empty()) {
    if (tm.primed()) throw Error("subst_symbol: primed occurrence of replaced constant");
    return t;
  }
  std::vector<Term> args;
  args.reserve(tm.args().size());
  for (const Term& a : tm.args()) args.push_back(subst_symbol(voc, a, c, t));
  return Term::app(tm.sym(), std::move(args), tm.primed());
}

inline Formula subst_symbol(const Vocabulary& voc, const Formula& f, SymId c, const Term& t) {
  std::map<std::string, SortId> tv;
  collect_term_vars(t, tv);
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Eq:
      return f_eq(subst_symbol(voc, f.lhs(), c, t), subst_symbol(voc, f.rhs(), c, t));
    case Formula::Kind::Rel: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& a : f.args()) args.push_back(subst_symbol(voc, a, c, t));
      return f_rel(f.sym(), std::move(args), f.primed());
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      // Rename binders that would capture a variable of the replacement term.
      std::map<std::string, Term> renames;
      std::set<std::string> forbidden = used_var_names(f.kid(0));
      for (auto& [n, s] : tv) forbidden.insert(n);
      std::vector<VarDecl> vars;
      for (const VarDecl& v : f.vars()) {
        if (tv.count(v.name)) {
          std::string nv = fresh_var_name(v.name, forbidden);
          renames[v.name] = Term::var(nv, v.sort);
          vars.push_back({nv, v.sort});
        } else {
          vars.push_back(v);
        }
      }
      Formula body = f.kid(0);
      if (!renames.empty()) body = subst_vars(body, renames);
      return f_quant(f.kind(), std::move(vars), subst_symbol(voc, body, c, t));
    }
    default: {
      Formula::Node n{f.kind()};
      n.kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) n.kids.push_back(subst_symbol(voc, k, c, t));
      return Formula::make(std::move(n));
    }
  }
}

// Replace applications of relation `r` by the formula `body` whose designated
// parameters `params` stand for the application's arguments.  A primed
// application r'(t) becomes prime(body)[t/params].  Capture of body's other
// free variables by binders of `f` is avoided by renaming those binders.
inline Formula subst_relation(const Vocabulary& voc, const Formula& f, SymId r,
                              const Formula& body, const std::vector<VarDecl>& params) {
  if (voc.symbol(r).kind != SymKind::Relation)
    throw Error("subst_relation: symbol '" + voc.symbol(r).name + "' is not a relation");
  if (voc.symbol(r).args.size() != params.size())
    throw Error("subst_relation: parameter count does not match arity of '" + voc.symbol(r).name + "'");

  std::set<std::string> param_names;
  for (const VarDecl& p : params) param_names.insert(p.name);
  std::map<std::string, SortId> body_free = free_vars(body);
  std::set<std::string> body_extra;  // free in body but not a parameter
  for (auto& [n, s] : body_free)
    if (!param_names.count(n)) body_extra.insert(n);

  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False:
      case Formula::Kind::Eq:
        return g;
      case Formula::Kind::Rel: {
        if (g.sym() != r) return g;
        Formula b = g.primed() ? prime(voc, body) : body;
        std::map<std::string, Term> env;
        for (size_t i = 0; i < params.size(); ++i) env[params[i].name] = g.args()[i];
        return subst_vars(b, env);
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        std::map<std::string, Term> renames;
        std::set<std::string> forbidden = used_var_names(g.kid(0));
        forbidden.insert(body_extra.begin(), body_extra.end());
        std::vector<VarDecl> vars;
        for (const VarDecl& v : g.vars()) {
          if (body_extra.count(v.name)) {
            std::string nv = fresh_var_name(v.name, forbidden);
            renames[v.name] = Term::var(nv, v.sort);
            vars.push_back({nv, v.sort});
          } else {
            vars.push_back(v);
          }
        }
        Formula b = g.kid(0);
        if (!renames.empty()) b = subst_vars(b, renames);
        return f_quant(g.kind(), std::move(vars), rec(b));
      }
      default: {
        Formula::Node n{g.kind()};
        n.kids.reserve(g.kids().size());
        for (const Formula& k : g.kids()) n.kids.push_back(rec(k));
        return Formula::make(std::move(n));
      }
    }
  };
  return rec(f);
}

// ---- well-sortedness ----------------------------------------------------------

namespace detail {
// Returns the sort of t, or -1 after recording a diagnostic.
inline SortId term_sort_rec(const Vocabulary& voc, const Term& t,
                            const std::map<std::string, SortId>& env,
                            std::vector<Diag>& diags) {
  if (t.empty()) {
    diags.push_back({"empty term"});
    return -1;
  }
  if (t.is_var()) {
    auto it = env.find(t.var_name());
    if (it == env.end()) {
      diags.push_back({"unbound variable '" + t.var_name() + "'"});
      return t.var_sort();
    }
    if (it->second != t.var_sort()) {
      diags.push_back({"variable '" + t.var_name() + "' used at a different sort than its binding"});
    }
    return it->second;
  }
  if (t.sym() < 0 || t.sym() >= voc.num_symbols()) {
    diags.push_back({"unknown symbol id in term"});
    return -1;
  }
  const Symbol& s = voc.symbol(t.sym());
  if (s.kind != SymKind::Function)
    diags.push_back({"relation symbol '" + s.name + "' used as a function"});
  if (t.primed() && !s.mut)
    diags.push_back({"primed occurrence of immutable symbol '" + s.name + "'"});
  if (t.args().size() != s.args.size()) {
    diags.push_back({"symbol '" + s.name + "' expects " + std::to_string(s.args.size()) +
                     " arguments, got " + std::to_string(t.args().size())});
  } else {
    for (size_t i = 0; i < t.args().size(); ++i) {
      SortId got = term_sort_rec(voc, t.args()[i], env, diags);
      if (got != -1 && got != s.args[i])
        diags.push_back({"argument " + std::to_string(i + 1) + " of '" + s.name + "' has wrong sort"});
    }
  }
  return s.result;
}

inline void well_sorted_rec(const Vocabulary& voc, const Formula& f,
                            std::map<std::string, SortId> env, std::vector<Diag>& diags) {
  if (f.empty()) {
    diags.push_back({"empty formula"});
    return;
  }
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Eq: {
      SortId a = term_sort_rec(voc, f.lhs(), env, diags);
      SortId b = term_sort_rec(voc, f.rhs(), env, diags);
      if (a != -1 && b != -1 && a != b)
        diags.push_back({"equality between different sorts"});
      return;
    }
    case Formula::Kind::Rel: {
      if (f.sym() < 0 || f.sym() >= voc.num_symbols()) {
        diags.push_back({"unknown symbol id in atom"});
        return;
      }
      const Symbol& s = voc.symbol(f.sym());
      if (s.kind != SymKind::Relation)
        diags.push_back({"function symbol '" + s.name + "' used as a relation"});
      if (f.primed() && !s.mut)
        diags.push_back({"primed occurrence of immutable symbol '" + s.name + "'"});
      if (f.args().size() != s.args.size()) {
        diags.push_back({"symbol '" + s.name + "' expects " + std::to_string(s.args.size()) +
                         " arguments, got " + std::to_string(f.args().size())});
      } else {
        for (size_t i = 0; i < f.args().size(); ++i) {
          SortId got = term_sort_rec(voc, f.args()[i], env, diags);
          if (got != -1 && got != s.args[i])
            diags.push_back({"argument " + std::to_string(i + 1) + " of '" + s.name + "' has wrong sort"});
        }
      }
      return;
    }
    case Formula::Kind::Not:
      well_sorted_rec(voc, f.kid(0), env, diags);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      for (const VarDecl& v : f.vars()) {
        if (v.sort < 0 || v.sort >= voc.num_sorts())
          diags.push_back({"binder '" + v.name + "' has unknown sort"});
        env[v.name] = v.sort;
      }
      well_sorted_rec(voc, f.kid(0), env, diags);
      return;
    }
    default:
      for (const Formula& k : f.kids()) well_sorted_rec(voc, k, env, diags);
      return;
  }
}
} // namespace detail

// Check f over voc with allowed free variables `env`.  Empty result = OK.
inline std::vector<Diag> well_sorted(const Vocabulary& voc, const Formula& f,
                                     const std::map<std::string, SortId>& env = {}) {
  std::vector<Diag> diags;
  detail::well_sorted_rec(voc, f, env, diags);
  return diags;
}

// Throwing variant for internal construction paths.
inline void require_well_sorted(const Vocabulary& voc, const Formula& f,
                                const std::map<std::string, SortId>& env = {},
                                const std::string& what = "formula") {
  auto diags = well_sorted(voc, f, env);
  if (!diags.empty()) throw Error("ill-sorted " + what + ": " + diags.front().message);
}

// ---- negation normal form ------------------------------------------------------

namespace detail {
inline Formula nnf_rec(const Formula& f, bool pos) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return pos ? f_true() : f_false();
    case Formula::Kind::False:
      return pos ? f_false() : f_true();
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      return pos ? f : f_not(f);
    case Formula::Kind::Not:
      return nnf_rec(f.kid(0), !pos);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool is_and = (f.kind() == Formula::Kind::And) == pos;
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) kids.push_back(nnf_rec(k, pos));
      return is_and ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case Formula::Kind::Implies: {
      if (pos) return f_or(nnf_rec(f.kid(0), false), nnf_rec(f.kid(1), true));
      return f_and(nnf_rec(f.kid(0), true), nnf_rec(f.kid(1), false));
    }
    case Formula::Kind::Iff: {
      // a<->b  =>  (!a|b) & (a|!b);   !(a<->b)  =>  (a|b) & (!a|!b)
      if (pos)
        return f_and(f_or(nnf_rec(f.kid(0), false), nnf_rec(f.kid(1), true)),
                     f_or(nnf_rec(f.kid(0), true), nnf_rec(f.kid(1), false)));
      return f_and(f_or(nnf_rec(f.kid(0), true), nnf_rec(f.kid(1), true)),
                   f_or(nnf_rec(f.kid(0), false), nnf_rec(f.kid(1), false)));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool is_forall = (f.kind() == Formula::Kind::Forall) == pos;
      return f_quant(is_forall ? Formula::Kind::Forall : Formula::Kind::Exists,
                     f.vars(), nnf_rec(f.kid(0), pos));
    }
  }
  throw Error("nnf: unreachable");
}
} // namespace detail

inline Formula nnf(const Formula& f) { return detail::nnf_rec(f, true); }

// ---- prenex form ----------------------------------------------------------------

// Rename every binder so that binder names are pairwise distinct and disjoint
// from free variables; free occurrences are untouched.
inline Formula rectify(const Formula& f) {
  // Fresh binder names must avoid free variables and all earlier choices;
  // a binder keeps its own name when nothing else has claimed it yet.
  std::set<std::string> used;
  for (auto& [n, s] : free_vars(f)) used.insert(n);
  std::function<Formula(const Formula&, std::map<std::string, Term>)> rec =
      [&](const Formula& g, std::map<std::string, Term> env) -> Formula {
    switch (g.kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False:
        return g;
      case Formula::Kind::Eq:
        return f_eq(detail::subst_term_vars(g.lhs(), env), detail::subst_term_vars(g.rhs(), env));
      case Formula::Kind::Rel: {
        std::vector<Term> args;
        for (const Term& a : g.args()) args.push_back(detail::subst_term_vars(a, env));
        return f_rel(g.sym(), std::move(args), g.primed());
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        std::vector<VarDecl> vars;
        for (const VarDecl& v : g.vars()) {
          std::string nv = fresh_var_name(v.name, used);
          env[v.name] = Term::var(nv, v.sort);
          vars.push_back({nv, v.sort});
        }
        return f_quant(g.kind(), std::move(vars), rec(g.kid(0), std::move(env)));
      }
      default: {
        Formula::Node n{g.kind()};
        for (const Formula& k : g.kids()) n.kids.push_back(rec(k, env));
        return Formula::make(std::move(n));
      }
    }
  };
  return rec(f, {});
}

struct PrenexForm {
  std::vector<std::pair<Formula::Kind, VarDecl>> prefix;  // outermost first
  Formula matrix;  // quantifier-free
};

// Prenex a formula already in NNF.  Quantifiers are pulled left-to-right;
// the input is rectified first, so pulling cannot capture.
inline PrenexForm prenex(const Formula& f) {
  std::function<PrenexForm(const Formula&)> rec = [&](const Formula& g) -> PrenexForm {
    switch (g.kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False:
      case Formula::Kind::Eq:
      case Formula::Kind::Rel:
        return {{}, g};
      case Formula::Kind::Not: {
        if (g.kid(0).is_quant()) throw Error("prenex: input not in NNF");
        return {{}, g};
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        PrenexForm out;
        std::vector<Formula> matrices;
        for (const Formula& k : g.kids()) {
          PrenexForm p = rec(k);
          out.prefix.insert(out.prefix.end(), p.prefix.begin(), p.prefix.end());
          matrices.push_back(p.matrix);
        }
        out.matrix = g.kind() == Formula::Kind::And ? f_and(std::move(matrices))
                                                    : f_or(std::move(matrices));
        return out;
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        PrenexForm p = rec(g.kid(0));
        std::vector<std::pair<Formula::Kind, VarDecl>> prefix;
        for (const VarDecl& v : g.vars()) prefix.emplace_back(g.kind(), v);
        prefix.insert(prefix.end(), p.prefix.begin(), p.prefix.end());
        return {std::move(prefix), p.matrix};
      }
      default:
        throw Error("prenex: input not in NNF");
    }
  };
  return rec(rectify(f));
}

// ---- complexity measures ---------------------------------------------------------

struct ComplexityMetrics {
  int quantifiers = 0;   // total bound variables, as written
  int alternations = 0;  // max quantifier polarity switches on a root-to-leaf path of the NNF
  int boolean = 0;       // boolean connective weight, as written
  bool clausal = false;  // prenex matrix is a disjunction of literals
};

inline int metric_quantifiers(const Formula& f) {
  int n = f.is_quant() ? static_cast<int>(f.vars().size()) : 0;
  for (const Formula& k : f.kids()) n += metric_quantifiers(k);
  return n;
}

inline int metric_boolean(const Formula& f) {
  int n = 0;
  switch (f.kind()) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
      n = static_cast<int>(f.kids().size()) - 1;
      break;
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      n = 1;
      break;
    default:
      break;  // negations and atoms are free
  }
  for (const Formula& k : f.kids()) n += metric_boolean(k);
  return n;
}

namespace detail {
enum class QPol { None, Univ, Exist };
inline int alternations_rec(const Formula& f, QPol last) {
  switch (f.kind()) {
    case Formula::Kind::Forall: {
      int sw = last == QPol::Exist ? 1 : 0;
      return sw + alternations_rec(f.kid(0), QPol::Univ);
    }
    case Formula::Kind::Exists: {
      int sw = last == QPol::Univ ? 1 : 0;
      return sw + alternations_rec(f.kid(0), QPol::Exist);
    }
    default: {
      int m = 0;
      for (const Formula& k : f.kids()) m = std::max(m, alternations_rec(k, last));
      return m;
    }
  }
}
} // namespace detail

inline int metric_alternations(const Formula& f) {
  return detail::alternations_rec(nnf(f), detail::QPol::None);
}

inline bool is_literal(const Formula& f) {
  if (f.is(Formula::Kind::Eq) || f.is(Formula::Kind::Rel) ||
      f.is(Formula::Kind::True) || f.is(Formula::Kind::False))
    return true;
  return f.is(Formula::Kind::Not) &&
         (f.kid(0).is(Formula::Kind::Eq) || f.kid(0).is(Formula::Kind::Rel) ||
          f.kid(0).is(Formula::Kind::True) || f.kid(0).is(Formula::Kind::False));
}

inline bool metric_clausal(const Formula& f) {
  PrenexForm p = prenex(nnf(f));
  std::function<bool(const Formula&)> disj = [&](const Formula& m) -> bool {
    if (is_literal(m)) return true;
    if (!m.is(Formula::Kind::Or)) return false;
    for (const Formula& k : m.kids())
      if (!disj(k)) return false;
    return true;
  };
  return disj(p.matrix);
}

inline ComplexityMetrics metrics(const Formula& f) {
  return {metric_quantifiers(f), metric_alternations(f), metric_boolean(f), metric_clausal(f)};
}

} // namespace fbp
