// Bounded explicit-state reachability: BFS over finite models of the system
// within per-sort carrier bounds, returning a shortest error trace, plus an
// iterative-deepening rechecker used to cross-validate trace minimality.
#pragma once

#include <deque>
#include <unordered_map>

#include "fbp/system.hpp"
#include "fbp/enum_backend.hpp"

namespace fbp {

struct ReachOptions {
  Bounds bounds;
  unsigned long budget = 1000000;  // max distinct states to visit
};

struct ReachResult {
  bool error_reachable = false;
  bool budget_exhausted = false;
  unsigned long visited = 0;
  std::vector<FiniteModel> trace;              // initial ... bad, one-state models
  std::vector<std::string> trace_transitions;  // transition taken at each step
};

namespace detail {

// Symbols whose interpretation matters for the system's behavior.
inline std::set<SymId> relevant_symbols(const SafetyProblem& p) {
  std::set<SymId> used;
  auto add = [&](const Formula& f) {
    for (SymId s : symbols_of(f)) used.insert(s);
  };
  for (const Formula& ax : p.axioms) add(ax);
  add(p.init);
  add(p.bad);
  for (const Transition& t : p.transitions) add(t.formula);
  return used;
}

// Enumerate one-state models over the given carriers whose relevant symbols
// satisfy all `constraints`; irrelevant symbols stay zeroed.  Fn returns
// false to stop the enumeration.
template <class Fn>
inline void for_each_state(const Vocabulary& voc, const Bounds& exact,
                           const std::set<SymId>& used,
                           const std::vector<Formula>& constraints, Fn&& fn) {
  FiniteModel m = blank_model(voc, exact, /*two_state=*/false);
  Odometer od;
  for (SymId s : used) add_cells(voc, m, s, /*post=*/false, od);
  od.reset();
  do {
    bool ok = true;
    for (const Formula& c : constraints)
      if (!eval(voc, m, c)) { ok = false; break; }
    if (ok && !fn(m)) return;
  } while (od.next());
}

// Enumerate successors of `state` under one named transition: next-state
// tables of relevant mutable symbols vary, immutable symbols are inherited.
// Fn returns false to stop the enumeration.
template <class Fn>
inline void for_each_successor(const Vocabulary& voc, const std::set<SymId>& used,
                               const FiniteModel& state, const Transition& t, Fn&& fn) {
  FiniteModel two = state;
  two.two_state = true;
  two.post.assign(voc.num_symbols(), {});
  Odometer od;
  for (SymId s = 0; s < voc.num_symbols(); ++s) {
    if (!voc.symbol(s).mut) continue;
    two.post[s].assign(two.table_size(voc, s), 0);
    if (used.count(s)) add_cells(voc, two, s, /*post=*/true, od);
  }
  od.reset();
  do {
    if (eval(voc, two, t.formula)) {
      if (!fn(post_state(voc, two))) return;
    }
  } while (od.next());
}

} // namespace detail

// Breadth-first search for a bad state, over every carrier-size combination
// within the bounds.  The returned trace is shortest among all of them.
inline ReachResult bounded_reach(const SafetyProblem& p, const ReachOptions& opts) {
  require_valid(p);
  ReachResult out;
  std::set<SymId> used = detail::relevant_symbols(p);

  struct Node {
    FiniteModel state;
    long parent = -1;
    std::string via;
  };

  std::vector<Formula> init_constraints = p.axioms;
  init_constraints.push_back(p.init);

  long best_bad = -1;
  std::vector<Node> best_nodes;

  std::vector<unsigned> sizes(p.voc.num_sorts(), 1);
  while (true) {
    Bounds exact;
    for (SortId s = 0; s < p.voc.num_sorts(); ++s) exact.size[s] = sizes[s];

    std::vector<Node> nodes;
    std::unordered_map<std::string, size_t> seen;
    std::deque<size_t> queue;
    long found = -1;

    auto visit = [&](const FiniteModel& m, long parent, const std::string& via) -> bool {
      std::string key = state_key(m);
      if (seen.count(key)) return true;
      if (out.visited >= opts.budget) {
        out.budget_exhausted = true;
        return false;
      }
      ++out.visited;
      seen.emplace(std::move(key), nodes.size());
      nodes.push_back({m, parent, via});
      if (found < 0 && eval(p.voc, m, p.bad)) {
        found = static_cast<long>(nodes.size()) - 1;
        return false;  // bad state found in this carrier combination
      }
      queue.push_back(nodes.size() - 1);
      return true;
    };

    detail::for_each_state(p.voc, exact, used, init_constraints, [&](const FiniteModel& m) {
      return visit(m, -1, "");
    });
    while (found < 0 && !out.budget_exhausted && !queue.empty()) {
      size_t cur = queue.front();
      queue.pop_front();
      for (const Transition& t : p.transitions) {
        if (found >= 0 || out.budget_exhausted) break;
        FiniteModel state = nodes[cur].state;  // nodes may reallocate inside visit
        detail::for_each_successor(p.voc, used, state, t, [&](const FiniteModel& s) {
          return visit(s, static_cast<long>(cur), t.name);
        });
      }
    }

    if (found >= 0) {
      // Depth of the found node = trace length; keep the shortest.
      unsigned depth = 0;
      for (long i = found; nodes[i].parent >= 0; i = nodes[i].parent) ++depth;
      unsigned best_depth = 0;
      if (best_bad >= 0)
        for (long i = best_bad; best_nodes[i].parent >= 0; i = best_nodes[i].parent) ++best_depth;
      if (best_bad < 0 || depth < best_depth) {
        best_bad = found;
        best_nodes = std::move(nodes);
      }
    }

    SortId s = 0;
    for (; s < p.voc.num_sorts(); ++s) {
      if (++sizes[s] <= opts.bounds.of(s)) break;
      sizes[s] = 1;
    }
    if (s == p.voc.num_sorts() || out.budget_exhausted) break;
  }

  if (best_bad >= 0) {
    out.error_reachable = true;
    std::vector<long> path;
    for (long i = best_bad; i >= 0; i = best_nodes[i].parent) path.push_back(i);
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      out.trace.push_back(best_nodes[*it].state);
      if (best_nodes[*it].parent >= 0) out.trace_transitions.push_back(best_nodes[*it].via);
    }
  }
  return out;
}

// Iterative-deepening recomputation of the shortest error-trace length,
// independent of the BFS bookkeeping above.  Returns the minimal number of
// steps, or nullopt if no error is reachable within max_depth.
inline std::optional<unsigned> iddfs_shortest_error(const SafetyProblem& p, const Bounds& bounds,
                                                    unsigned max_depth) {
  require_valid(p);
  std::set<SymId> used = detail::relevant_symbols(p);
  std::vector<Formula> init_constraints = p.axioms;
  init_constraints.push_back(p.init);

  std::function<bool(const FiniteModel&, unsigned)> dfs = [&](const FiniteModel& m,
                                                              unsigned remaining) -> bool {
    if (eval(p.voc, m, p.bad)) return true;
    if (remaining == 0) return false;
    bool hit = false;
    for (const Transition& t : p.transitions) {
      if (hit) break;
      detail::for_each_successor(p.voc, used, m, t, [&](const FiniteModel& s) {
        if (dfs(s, remaining - 1)) hit = true;
        return !hit;
      });
    }
    return hit;
  };

  for (unsigned depth = 0; depth <= max_depth; ++depth) {
    bool hit = false;
    std::vector<unsigned> sizes(p.voc.num_sorts(), 1);
    while (!hit) {
      Bounds exact;
      for (SortId s = 0; s < p.voc.num_sorts(); ++s) exact.size[s] = sizes[s];
      detail::for_each_state(p.voc, exact, used, init_constraints, [&](const FiniteModel& m) {
        if (dfs(m, depth)) hit = true;
        return !hit;
      });
      SortId s = 0;
      for (; s < p.voc.num_sorts(); ++s) {
        if (++sizes[s] <= bounds.of(s)) break;
        sizes[s] = 1;
      }
      if (s == p.voc.num_sorts()) break;
    }
    if (hit) return depth;
  }
  return std::nullopt;
}

} // namespace fbp
