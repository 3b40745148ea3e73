// Shared scaffolding for the test suite and the acceptance gate: environment
// lookups, deterministic random generators for terms, formulas, finite models,
// small transition systems and proof scripts, plus a few structural measures
// used by several suites.  Everything is seeded by the caller, so failures
// reproduce exactly.
#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbp/check.hpp"
#include "fbp/extract.hpp"
#include "fbp/oracle.hpp"
#include "fbp/parser.hpp"
#include "fbp/powergen.hpp"
#include "fbp/reach.hpp"
#include "fbp/report.hpp"

namespace th {

using Rng = std::mt19937_64;

// ---- environment -----------------------------------------------------------------

inline std::string env_or(const char* key, const std::string& dflt) {
  const char* v = std::getenv(key);
  return v && *v ? std::string(v) : dflt;
}

inline std::string repo_root() { return env_or("FBP_ROOT", "."); }

inline std::string corpus_file(const std::string& name) {
  return repo_root() + "/corpus/" + name;
}

inline std::string solver_cmd() { return env_or("FBP_SOLVER_CMD", "z3"); }

inline fbp::CheckOptions enum_options(unsigned bound, int jobs = 4) {
  fbp::CheckOptions o;
  o.backend = fbp::CheckOptions::Backend::Enum;
  o.bounds.fallback = bound;
  o.jobs = jobs;
  return o;
}

inline fbp::CheckOptions smt_options(double timeout_s = 60.0, int jobs = 4) {
  fbp::CheckOptions o;
  o.backend = fbp::CheckOptions::Backend::Smt;
  o.smt.solver_cmd = solver_cmd();
  o.smt.timeout_s = timeout_s;
  o.jobs = jobs;
  return o;
}

// Run a command, capture stdout, return its exit code.
inline int run_command(const std::string& cmd, std::string& out) {
  out.clear();
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) throw std::runtime_error("popen failed: " + cmd);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return status < 0 ? status : (status & 0x7f ? 128 + (status & 0x7f) : (status >> 8));
}

// ---- randomness ------------------------------------------------------------------

inline unsigned rnd(Rng& g, unsigned lo, unsigned hi) {  // inclusive
  return std::uniform_int_distribution<unsigned>(lo, hi)(g);
}

inline bool coin(Rng& g, double p = 0.5) { return std::bernoulli_distribution(p)(g); }

template <class T>
const T& pick(Rng& g, const std::vector<T>& xs) {
  return xs[rnd(g, 0, static_cast<unsigned>(xs.size()) - 1)];
}

// ---- random terms and formulas -----------------------------------------------------

struct GenOpts {
  unsigned depth = 4;       // maximum connective nesting
  unsigned term_depth = 1;  // maximum function nesting inside terms
  bool primed = false;      // allow primed occurrences of mutable symbols
  bool quant = true;        // allow quantifiers
};

// A term of the given sort from in-scope variables, constants and functions;
// nullopt when the sort is uninhabited in this scope.
inline std::optional<fbp::Term> gen_term(Rng& g, const fbp::Vocabulary& voc, fbp::SortId sort,
                                         const std::vector<fbp::VarDecl>& scope,
                                         const GenOpts& o, unsigned tdepth) {
  struct Choice {
    int kind;  // 0 = variable, 1 = constant, 2 = function application
    size_t idx;
  };
  std::vector<Choice> choices;
  for (size_t i = 0; i < scope.size(); ++i)
    if (scope[i].sort == sort) choices.push_back({0, i});
  for (fbp::SymId s = 0; s < static_cast<fbp::SymId>(voc.num_symbols()); ++s) {
    const fbp::Symbol& sym = voc.symbol(s);
    if (sym.kind != fbp::SymKind::Function || sym.result != sort) continue;
    if (sym.args.empty())
      choices.push_back({1, static_cast<size_t>(s)});
    else if (tdepth > 0)
      choices.push_back({2, static_cast<size_t>(s)});
  }
  std::shuffle(choices.begin(), choices.end(), g);
  for (const Choice& c : choices) {
    if (c.kind == 0) return fbp::Term::var(scope[c.idx].name, sort);
    fbp::SymId s = static_cast<fbp::SymId>(c.idx);
    const fbp::Symbol& sym = voc.symbol(s);
    bool primed = o.primed && sym.mut && coin(g, 0.4);
    if (c.kind == 1) return fbp::Term::constant(s, primed);
    std::vector<fbp::Term> args;
    bool ok = true;
    for (fbp::SortId as : sym.args) {
      auto t = gen_term(g, voc, as, scope, o, tdepth - 1);
      if (!t) {
        ok = false;
        break;
      }
      args.push_back(std::move(*t));
    }
    if (ok) return fbp::Term::app(s, std::move(args), primed);
  }
  return std::nullopt;
}

inline fbp::Formula gen_atom(Rng& g, const fbp::Vocabulary& voc,
                             const std::vector<fbp::VarDecl>& scope, const GenOpts& o) {
  std::vector<fbp::SymId> rels;
  for (fbp::SymId s = 0; s < static_cast<fbp::SymId>(voc.num_symbols()); ++s)
    if (voc.symbol(s).kind == fbp::SymKind::Relation) rels.push_back(s);
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (!rels.empty() && (voc.num_sorts() == 0 || rnd(g, 0, 2) != 0)) {
      fbp::SymId r = pick(g, rels);
      const fbp::Symbol& sym = voc.symbol(r);
      std::vector<fbp::Term> args;
      bool ok = true;
      for (fbp::SortId as : sym.args) {
        auto t = gen_term(g, voc, as, scope, o, o.term_depth);
        if (!t) {
          ok = false;
          break;
        }
        args.push_back(std::move(*t));
      }
      if (!ok) continue;
      bool primed = o.primed && sym.mut && coin(g, 0.4);
      return fbp::f_rel(r, std::move(args), primed);
    }
    if (voc.num_sorts() > 0) {
      fbp::SortId s = rnd(g, 0, static_cast<unsigned>(voc.num_sorts()) - 1);
      auto a = gen_term(g, voc, s, scope, o, o.term_depth);
      auto b = gen_term(g, voc, s, scope, o, o.term_depth);
      if (a && b) return fbp::f_eq(std::move(*a), std::move(*b));
    }
  }
  return coin(g) ? fbp::f_true() : fbp::f_false();
}

namespace detail {
inline fbp::Formula gen_formula_rec(Rng& g, const fbp::Vocabulary& voc,
                                    std::vector<fbp::VarDecl>& scope, const GenOpts& o,
                                    unsigned depth, unsigned& fresh) {
  if (depth == 0 || coin(g, 0.18)) {
    if (coin(g, 0.06)) return coin(g) ? fbp::f_true() : fbp::f_false();
    return gen_atom(g, voc, scope, o);
  }
  auto rec = [&]() { return gen_formula_rec(g, voc, scope, o, depth - 1, fresh); };
  unsigned top = (o.quant && voc.num_sorts() > 0) ? 6u : 4u;
  switch (rnd(g, 0, top)) {
    case 0:
      return fbp::f_not(rec());
    case 1:
    case 2: {
      unsigned n = rnd(g, 2, 3);
      std::vector<fbp::Formula> kids;
      for (unsigned i = 0; i < n; ++i) kids.push_back(rec());
      return coin(g) ? fbp::f_and(std::move(kids)) : fbp::f_or(std::move(kids));
    }
    case 3: {
      fbp::Formula a = rec(), b = rec();
      return fbp::f_implies(std::move(a), std::move(b));
    }
    case 4: {
      fbp::Formula a = rec(), b = rec();
      return fbp::f_iff(std::move(a), std::move(b));
    }
    default: {
      fbp::SortId s = rnd(g, 0, static_cast<unsigned>(voc.num_sorts()) - 1);
      std::string name = "u" + std::to_string(fresh++);
      scope.push_back({name, s});
      fbp::Formula body = gen_formula_rec(g, voc, scope, o, depth - 1, fresh);
      fbp::VarDecl v = scope.back();
      scope.pop_back();
      return coin(g) ? fbp::f_forall({v}, std::move(body))
                     : fbp::f_exists({v}, std::move(body));
    }
  }
}
}  // namespace detail

// A well-sorted formula whose free variables are drawn from `scope`.
inline fbp::Formula gen_formula(Rng& g, const fbp::Vocabulary& voc, const GenOpts& o,
                                std::vector<fbp::VarDecl> scope = {}) {
  unsigned fresh = 0;
  return detail::gen_formula_rec(g, voc, scope, o, o.depth, fresh);
}

// ---- random models ----------------------------------------------------------------

inline fbp::FiniteModel gen_model(Rng& g, const fbp::Vocabulary& voc, const fbp::Bounds& b,
                                  bool two_state) {
  fbp::FiniteModel m = fbp::blank_model(voc, b, two_state);
  for (fbp::SymId s = 0; s < static_cast<fbp::SymId>(voc.num_symbols()); ++s) {
    const fbp::Symbol& sym = voc.symbol(s);
    unsigned vals = sym.kind == fbp::SymKind::Relation ? 2 : m.card[sym.result];
    for (unsigned& cell : m.pre[s]) cell = rnd(g, 0, vals - 1);
    if (two_state && sym.mut)
      for (unsigned& cell : m.post[s]) cell = rnd(g, 0, vals - 1);
  }
  return m;
}

// ---- random systems and scripts ----------------------------------------------------

// A one-sort system with one or two unary mutable relations, at most one
// immutable constant, and one or two transitions.  Small enough that bound-2
// enumeration, reachability and the prophecy oracle are all instant.
struct RandomSystem {
  fbp::SafetyProblem p;
  fbp::SortId sort = 0;
  std::vector<fbp::SymId> rels;
};

inline RandomSystem gen_system(Rng& g) {
  RandomSystem rs;
  fbp::SafetyProblem& p = rs.p;
  rs.sort = p.voc.add_sort("s");
  unsigned nrels = rnd(g, 1, 2);
  for (unsigned i = 0; i < nrels; ++i)
    rs.rels.push_back(p.voc.add_relation("r" + std::to_string(i), {rs.sort}, /*mut=*/true));
  if (coin(g, 0.5)) p.voc.add_constant("k", rs.sort, /*mut=*/false);
  GenOpts one;
  one.depth = 3;
  GenOpts two;
  two.depth = 3;
  two.primed = true;
  p.init = gen_formula(g, p.voc, one);
  p.bad = gen_formula(g, p.voc, one);
  unsigned ntr = rnd(g, 1, 2);
  for (unsigned i = 0; i < ntr; ++i)
    p.transitions.push_back({"t" + std::to_string(i), gen_formula(g, p.voc, two)});
  if (!fbp::validate(p).empty()) throw std::runtime_error("gen_system: invalid system");
  return rs;
}

// A candidate proof script over `p`.  Payloads are biased toward formulas with
// a real chance of discharging (negated bad, init, true) so accepted proofs
// show up at a workable rate; prophecy steps appear with probability `fp`.
inline fbp::ProofScript gen_script(Rng& g, const fbp::SafetyProblem& p, double fp = 0.25) {
  GenOpts one;
  one.depth = 2;
  auto payload = [&]() -> fbp::Formula {
    unsigned c = rnd(g, 0, 9);
    if (c < 4) return gen_formula(g, p.voc, one);
    if (c < 6) return fbp::f_not(p.bad);
    if (c < 7) return p.init;
    if (c < 8) return fbp::f_true();
    return fbp::f_and(fbp::f_not(p.bad), gen_formula(g, p.voc, one));
  };
  fbp::ProofScript script;
  unsigned steps = rnd(g, 1, 3);
  bool used_fp = false;
  for (unsigned i = 0; i < steps; ++i) {
    fbp::ScriptStep st;
    if (!used_fp && p.voc.num_sorts() > 0 && coin(g, fp)) {
      used_fp = true;
      st.kind = fbp::ScriptStep::Kind::ForwardProphecy;
      st.witnesses = {{"w", 0}};
      // The witness must occur in the payload; w = w keeps that guaranteed
      // while staying trivially preserved.
      fbp::Formula w_eq = fbp::f_eq(fbp::Term::var("w", 0), fbp::Term::var("w", 0));
      st.payload = coin(g, 0.4)
                       ? w_eq
                       : fbp::f_and(gen_formula(g, p.voc, one, {{"w", 0}}), w_eq);
      if (coin(g, 0.4)) {
        st.select = true;
        st.selector = gen_formula(g, p.voc, one);
      }
    } else {
      st.kind = coin(g) ? fbp::ScriptStep::Kind::Forward : fbp::ScriptStep::Kind::Backward;
      st.payload = payload();
    }
    script.push_back(std::move(st));
  }
  fbp::ScriptStep qed;
  qed.kind = fbp::ScriptStep::Kind::Qed;
  qed.qed_forward = coin(g);
  script.push_back(std::move(qed));
  return script;
}

// ---- structural measures ------------------------------------------------------------

inline int quantifier_depth(const fbp::Formula& f) {
  int inner = 0;
  for (const fbp::Formula& k : f.kids()) inner = std::max(inner, quantifier_depth(k));
  return inner + (f.is_quant() ? 1 : 0);
}

// Leaves of a formula reached through Not/And nodes only (the connectives the
// extraction introduces for forward/backward-only proofs).
inline void not_and_leaves(const fbp::Formula& f, std::vector<fbp::Formula>& out) {
  if (f.is(fbp::Formula::Kind::Not) || f.is(fbp::Formula::Kind::And)) {
    for (const fbp::Formula& k : f.kids()) not_and_leaves(k, out);
    return;
  }
  out.push_back(f);
}

}  // namespace th
