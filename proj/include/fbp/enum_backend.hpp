// Validity checking by exhaustive enumeration of finite models.
//
// Checks that the axioms entail the claim in every model whose carriers are
// within the given per-sort bounds (all sizes from 1 up to the bound are
// tried).  Interpretations of symbols not occurring in the axioms or claim
// are pinned instead of enumerated.  When the vocabulary in use is purely
// propositional (0-ary relations, no quantifiers), the enumeration is a full
// truth table and the result is upgraded from ValidUpToBound to Valid.
#pragma once

#include <vector>

#include "fbp/verdict.hpp"

namespace fbp {

namespace detail {

struct Odometer {
  // Each entry: pointer into a model table plus the exclusive value limit.
  std::vector<std::pair<unsigned*, unsigned>> cells;

  void reset() const {
    for (auto& [p, lim] : cells) *p = 0;
  }
  // Advance to the next assignment; false when wrapped around.
  bool next() const {
    for (auto& [p, lim] : cells) {
      if (++*p < lim) return true;
      *p = 0;
    }
    return false;
  }
};

// Collect the enumeration cells for the given tables.
inline void add_cells(const Vocabulary& voc, FiniteModel& m, SymId s, bool post, Odometer& od) {
  const Symbol& sym = voc.symbol(s);
  unsigned limit = sym.kind == SymKind::Relation ? 2 : m.card[sym.result];
  auto& tbl = post ? m.post[s] : m.pre[s];
  for (unsigned& cell : tbl) od.cells.emplace_back(&cell, limit);
}

// Split the top-level antecedent conjuncts of an implication into
// current-state-only parts (checkable before the next state is chosen) and
// the rest.  Purely an enumeration-order optimization; the checked formula
// is unchanged.
inline void split_claim(const Formula& claim, std::vector<Formula>& pre_parts,
                        std::vector<Formula>& rest_parts, Formula& consequent) {
  consequent = claim;
  if (!claim.is(Formula::Kind::Implies)) return;
  consequent = claim.kid(1);
  std::vector<Formula> conjuncts;
  std::function<void(const Formula&)> flatten = [&](const Formula& f) {
    if (f.is(Formula::Kind::And))
      for (const Formula& k : f.kids()) flatten(k);
    else
      conjuncts.push_back(f);
  };
  flatten(claim.kid(0));
  for (const Formula& c : conjuncts) {
    if (has_primed_occurrence(c))
      rest_parts.push_back(c);
    else
      pre_parts.push_back(c);
  }
}

} // namespace detail

// Is validity of these formulas decided by a truth table (only 0-ary
// relations, no quantifiers, no terms)?
inline bool propositional_only(const Vocabulary& voc, const std::vector<Formula>& axioms,
                               const Formula& claim) {
  auto check = [&](const Formula& f) {
    if (metric_quantifiers(f) > 0) return false;
    for (SymId s : symbols_of(f)) {
      const Symbol& sym = voc.symbol(s);
      if (sym.kind != SymKind::Relation || !sym.args.empty()) return false;
    }
    // Equality atoms involve terms; reject them too.
    std::function<bool(const Formula&)> no_eq = [&](const Formula& g) {
      if (g.is(Formula::Kind::Eq)) return false;
      for (const Formula& k : g.kids())
        if (!no_eq(k)) return false;
      return true;
    };
    return no_eq(f);
  };
  if (!check(claim)) return false;
  for (const Formula& ax : axioms)
    if (!check(ax)) return false;
  return true;
}

// Exhaustively check  axioms |= claim  over all models within `bounds`.
inline Verdict enum_check_valid(const Vocabulary& voc, const std::vector<Formula>& axioms,
                                const Formula& claim, const Bounds& bounds) {
  bool two_state = has_primed_occurrence(claim);
  std::set<SymId> used = symbols_of(claim);
  for (const Formula& ax : axioms)
    for (SymId s : symbols_of(ax)) used.insert(s);

  std::vector<Formula> pre_parts, rest_parts;
  Formula consequent;
  detail::split_claim(claim, pre_parts, rest_parts, consequent);
  bool split = claim.is(Formula::Kind::Implies);

  // Enumerate carrier size combinations: every sort from 1 to its bound.
  std::vector<unsigned> sizes(voc.num_sorts(), 1);
  while (true) {
    Bounds exact;
    for (SortId s = 0; s < voc.num_sorts(); ++s) exact.size[s] = sizes[s];
    FiniteModel m = blank_model(voc, exact, two_state);

    detail::Odometer outer, inner;
    for (SymId s : used) {
      detail::add_cells(voc, m, s, /*post=*/false, outer);
      if (two_state && voc.symbol(s).mut) detail::add_cells(voc, m, s, /*post=*/true, inner);
    }

    outer.reset();
    do {
      bool ok = true;
      for (const Formula& ax : axioms)
        if (!eval(voc, m, ax)) { ok = false; break; }
      if (ok && split)
        for (const Formula& c : pre_parts)
          if (!eval(voc, m, c)) { ok = false; break; }
      if (!ok) continue;

      inner.reset();
      do {
        if (split) {
          bool ante = true;
          for (const Formula& c : rest_parts)
            if (!eval(voc, m, c)) { ante = false; break; }
          if (!ante) continue;
          if (!eval(voc, m, consequent)) return {VerdictKind::Counterexample, m, ""};
        } else {
          if (!eval(voc, m, claim)) return {VerdictKind::Counterexample, m, ""};
        }
      } while (inner.next());
    } while (outer.next());

    // Next carrier combination.
    SortId s = 0;
    for (; s < voc.num_sorts(); ++s) {
      if (++sizes[s] <= bounds.of(s)) break;
      sizes[s] = 1;
    }
    if (s == voc.num_sorts()) break;
  }

  if (propositional_only(voc, axioms, claim)) return {VerdictKind::Valid, std::nullopt, ""};
  return {VerdictKind::ValidUpToBound, std::nullopt, ""};
}

} // namespace fbp
