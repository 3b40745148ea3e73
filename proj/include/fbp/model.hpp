// Finite first-order structures and formula evaluation over them.
//
// A FiniteModel carries a carrier size per sort and one interpretation table
// per symbol (row-major over the argument tuple).  Two-state models add a
// second table for every mutable symbol; primed occurrences read from it.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbp/printer.hpp"

namespace fbp {

struct Bounds {
  std::map<SortId, unsigned> size;  // explicit per-sort bound
  unsigned fallback = 2;            // bound for sorts not listed

  unsigned of(SortId s) const {
    auto it = size.find(s);
    return it == size.end() ? fallback : it->second;
  }
};

struct FiniteModel {
  std::vector<unsigned> card;               // carrier size per sort
  std::vector<std::vector<unsigned>> pre;   // interpretation per symbol
  std::vector<std::vector<unsigned>> post;  // next-state tables (mutable symbols; else empty)
  bool two_state = false;

  unsigned table_size(const Vocabulary& voc, SymId s) const {
    unsigned n = 1;
    for (SortId a : voc.symbol(s).args) n *= card[a];
    return n;
  }
};

// Allocate a model with all tables zeroed (functions map to element 0,
// relations are empty).
inline FiniteModel blank_model(const Vocabulary& voc, const Bounds& b, bool two_state) {
  FiniteModel m;
  m.two_state = two_state;
  m.card.resize(voc.num_sorts());
  for (SortId s = 0; s < voc.num_sorts(); ++s) {
    m.card[s] = b.of(s);
    if (m.card[s] == 0) throw Error("empty carrier for sort " + voc.sort_name(s));
  }
  m.pre.resize(voc.num_symbols());
  m.post.resize(voc.num_symbols());
  for (SymId s = 0; s < voc.num_symbols(); ++s) {
    m.pre[s].assign(m.table_size(voc, s), 0);
    if (two_state && voc.symbol(s).mut) m.post[s].assign(m.table_size(voc, s), 0);
  }
  return m;
}

// Pair a pre-state and a post-state over the same vocabulary and carriers
// into a two-state model.
inline FiniteModel pair_states(const Vocabulary& voc, const FiniteModel& pre, const FiniteModel& post) {
  if (pre.card != post.card) throw Error("pair_states: carrier mismatch");
  FiniteModel m = pre;
  m.two_state = true;
  m.post.assign(voc.num_symbols(), {});
  for (SymId s = 0; s < voc.num_symbols(); ++s)
    if (voc.symbol(s).mut) m.post[s] = post.pre[s];
  return m;
}

// The post-state of a two-state model, as a one-state model.
inline FiniteModel post_state(const Vocabulary& voc, const FiniteModel& m) {
  FiniteModel out = m;
  out.two_state = false;
  for (SymId s = 0; s < voc.num_symbols(); ++s)
    if (voc.symbol(s).mut && !m.post[s].empty()) out.pre[s] = m.post[s];
  out.post.assign(voc.num_symbols(), {});
  return out;
}

// Compact canonical key for visited-state sets (pre tables only).
inline std::string state_key(const FiniteModel& m) {
  std::string key;
  for (const auto& t : m.pre)
    for (unsigned v : t) key.push_back(static_cast<char>(v));
  return key;
}

// ---- evaluation ---------------------------------------------------------------

namespace detail {
struct EvalEnv {
  std::vector<std::pair<std::string, unsigned>> vars;
  unsigned lookup(const std::string& n) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      if (it->first == n) return it->second;
    throw Error("eval: unbound variable '" + n + "'");
  }
};

inline const std::vector<unsigned>& interp(const Vocabulary& voc, const FiniteModel& m,
                                           SymId s, bool primed) {
  if (primed && voc.symbol(s).mut) {
    if (m.post[s].empty()) throw Error("eval: primed occurrence in a one-state model");
    return m.post[s];
  }
  return m.pre[s];
}

inline unsigned eval_term(const Vocabulary& voc, const FiniteModel& m, const Term& t, EvalEnv& env) {
  if (t.is_var()) return env.lookup(t.var_name());
  const Symbol& sym = voc.symbol(t.sym());
  unsigned idx = 0;
  for (size_t i = 0; i < t.args().size(); ++i)
    idx = idx * m.card[sym.args[i]] + eval_term(voc, m, t.args()[i], env);
  return interp(voc, m, t.sym(), t.primed())[idx];
}

inline bool eval_rec(const Vocabulary& voc, const FiniteModel& m, const Formula& f, EvalEnv& env) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Eq:
      return eval_term(voc, m, f.lhs(), env) == eval_term(voc, m, f.rhs(), env);
    case Formula::Kind::Rel: {
      const Symbol& sym = voc.symbol(f.sym());
      unsigned idx = 0;
      for (size_t i = 0; i < f.args().size(); ++i)
        idx = idx * m.card[sym.args[i]] + eval_term(voc, m, f.args()[i], env);
      return interp(voc, m, f.sym(), f.primed())[idx] != 0;
    }
    case Formula::Kind::Not:
      return !eval_rec(voc, m, f.kid(0), env);
    case Formula::Kind::And:
      for (const Formula& k : f.kids())
        if (!eval_rec(voc, m, k, env)) return false;
      return true;
    case Formula::Kind::Or:
      for (const Formula& k : f.kids())
        if (eval_rec(voc, m, k, env)) return true;
      return false;
    case Formula::Kind::Implies:
      return !eval_rec(voc, m, f.kid(0), env) || eval_rec(voc, m, f.kid(1), env);
    case Formula::Kind::Iff:
      return eval_rec(voc, m, f.kid(0), env) == eval_rec(voc, m, f.kid(1), env);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool is_forall = f.kind() == Formula::Kind::Forall;
      const auto& vs = f.vars();
      size_t base = env.vars.size();
      for (const VarDecl& v : vs) env.vars.emplace_back(v.name, 0u);
      bool result = is_forall;
      // Odometer over assignments to the binder block.
      while (true) {
        bool body = eval_rec(voc, m, f.kid(0), env);
        if (body != is_forall) {
          result = !is_forall;
          break;
        }
        size_t i = vs.size();
        while (i > 0) {
          --i;
          unsigned c = m.card[vs[i].sort];
          if (++env.vars[base + i].second < c) break;
          env.vars[base + i].second = 0;
          if (i == 0) {
            i = SIZE_MAX;
            break;
          }
        }
        if (i == SIZE_MAX || vs.empty()) break;
      }
      env.vars.resize(base);
      return result;
    }
  }
  throw Error("eval: unreachable");
}
} // namespace detail

// Evaluate a formula in a finite model under an assignment to its free
// variables.
inline bool eval(const Vocabulary& voc, const FiniteModel& m, const Formula& f,
                 const std::map<std::string, unsigned>& assignment = {}) {
  detail::EvalEnv env;
  for (auto& [n, v] : assignment) env.vars.emplace_back(n, v);
  return detail::eval_rec(voc, m, f, env);
}

// ---- rendering ------------------------------------------------------------------

// Human-readable rendering: element i of sort s prints as  s#i.
inline std::string model_to_string(const Vocabulary& voc, const FiniteModel& m) {
  std::ostringstream os;
  for (SortId s = 0; s < voc.num_sorts(); ++s)
    os << "|" << voc.sort_name(s) << "| = " << m.card[s] << "\n";
  auto elem = [&](SortId s, unsigned v) { return voc.sort_name(s) + "#" + std::to_string(v); };
  auto print_table = [&](SymId s, const std::vector<unsigned>& tbl, const char* suffix) {
    const Symbol& sym = voc.symbol(s);
    os << sym.name << suffix << " = ";
    if (sym.args.empty()) {
      os << (sym.kind == SymKind::Relation ? (tbl[0] ? "true" : "false") : elem(sym.result, tbl[0]));
      os << "\n";
      return;
    }
    os << "{";
    bool first = true;
    std::vector<unsigned> tuple(sym.args.size(), 0);
    for (unsigned idx = 0; idx < tbl.size(); ++idx) {
      if (sym.kind == SymKind::Relation && !tbl[idx]) {
        // advance tuple
      } else {
        if (!first) os << ", ";
        first = false;
        os << "(";
        for (size_t i = 0; i < tuple.size(); ++i) os << (i ? ", " : "") << elem(sym.args[i], tuple[i]);
        os << ")";
        if (sym.kind == SymKind::Function) os << " -> " << elem(sym.result, tbl[idx]);
      }
      for (size_t i = tuple.size(); i-- > 0;) {
        if (++tuple[i] < m.card[voc.symbol(s).args[i]]) break;
        tuple[i] = 0;
      }
    }
    os << "}\n";
  };
  for (SymId s = 0; s < voc.num_symbols(); ++s) {
    print_table(s, m.pre[s], "");
    if (m.two_state && !m.post[s].empty()) print_table(s, m.post[s], "'");
  }
  return os.str();
}

} // namespace fbp
