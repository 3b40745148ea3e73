// Ground-truth oracle for prophecy soundness, by product-state search.
//
// A prophecy step with formula phi(w) is sound when every error trace keeps
// at least one candidate witness value alive, i.e. some value v satisfies
// phi[v] in every state along the trace.  This oracle explores (state,
// alive-set) pairs directly — alive being the set of values still satisfying
// phi in every state so far — and reports unsoundness exactly when a bad
// state is reachable with an empty alive-set.  It agrees, bound for bound,
// with running bounded reachability on the prophecy_soundness construction.
#pragma once

#include "fbp/reach.hpp"

namespace fbp {

struct OracleOptions {
  Bounds bounds;
  unsigned long budget = 1000000;
};

struct OracleResult {
  bool sound = true;           // within the explored bounds
  bool budget_exhausted = false;
  unsigned long visited = 0;
};

inline OracleResult sound_prophecy_oracle(const SafetyProblem& p, const Formula& phi,
                                          const std::vector<VarDecl>& params,
                                          const OracleOptions& opts) {
  require_valid(p);
  if (params.empty()) throw Error("sound_prophecy_oracle: no parameters");
  std::map<std::string, SortId> env;
  for (const VarDecl& w : params) {
    if (env.count(w.name)) throw Error("sound_prophecy_oracle: duplicate parameter '" + w.name + "'");
    env[w.name] = w.sort;
  }
  require_well_sorted(p.voc, phi, env, "prophecy formula");
  if (has_primed_occurrence(phi)) throw Error("sound_prophecy_oracle: formula mentions the next state");

  OracleResult out;
  std::set<SymId> used = detail::relevant_symbols(p);
  for (SymId s : symbols_of(phi)) used.insert(s);
  std::vector<Formula> init_constraints = p.axioms;
  init_constraints.push_back(p.init);

  std::vector<unsigned> sizes(p.voc.num_sorts(), 1);
  while (true) {
    Bounds exact;
    for (SortId s = 0; s < p.voc.num_sorts(); ++s) exact.size[s] = sizes[s];

    // Candidate value tuples, mixed-radix over the parameter sorts.
    unsigned long nvals = 1;
    for (const VarDecl& w : params) nvals *= exact.size[w.sort];
    auto alive_in = [&](const FiniteModel& m, unsigned long idx) {
      std::map<std::string, unsigned> assign;
      unsigned long rest = idx;
      for (size_t i = params.size(); i-- > 0;) {
        unsigned c = exact.size[params[i].sort];
        assign[params[i].name] = static_cast<unsigned>(rest % c);
        rest /= c;
      }
      return eval(p.voc, m, phi, assign);
    };
    auto prune = [&](const FiniteModel& m, const std::vector<char>& alive) {
      std::vector<char> next(nvals, 0);
      for (unsigned long v = 0; v < nvals; ++v)
        if (alive[v] && alive_in(m, v)) next[v] = 1;
      return next;
    };

    struct Item {
      FiniteModel state;
      std::vector<char> alive;
    };
    std::deque<Item> queue;
    std::set<std::string> seen;
    bool unsound = false;

    auto visit = [&](const FiniteModel& m, const std::vector<char>& alive) -> bool {
      std::string key = state_key(m);
      for (char c : alive) key.push_back(c ? '\1' : '\0');
      if (seen.count(key)) return true;
      if (out.visited >= opts.budget) {
        out.budget_exhausted = true;
        return false;
      }
      ++out.visited;
      seen.insert(std::move(key));
      if (eval(p.voc, m, p.bad)) {
        bool any = false;
        for (char c : alive) any = any || c;
        if (!any) {
          unsound = true;
          return false;
        }
      }
      queue.push_back({m, alive});
      return true;
    };

    detail::for_each_state(p.voc, exact, used, init_constraints, [&](const FiniteModel& m) {
      std::vector<char> all(nvals, 1);
      return visit(m, prune(m, all));
    });
    while (!unsound && !out.budget_exhausted && !queue.empty()) {
      Item cur = std::move(queue.front());
      queue.pop_front();
      for (const Transition& t : p.transitions) {
        if (unsound || out.budget_exhausted) break;
        detail::for_each_successor(p.voc, used, cur.state, t, [&](const FiniteModel& s) {
          return visit(s, prune(s, cur.alive));
        });
      }
    }

    if (unsound) {
      out.sound = false;
      return out;
    }
    SortId s = 0;
    for (; s < p.voc.num_sorts(); ++s) {
      if (++sizes[s] <= opts.bounds.of(s)) break;
      sizes[s] = 1;
    }
    if (s == p.voc.num_sorts() || out.budget_exhausted) break;
  }
  return out;
}

} // namespace fbp
