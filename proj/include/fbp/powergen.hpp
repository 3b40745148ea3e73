// Generators for two scalable families of safety problems with proofs.
//
// Boolean family (fbi): n propositional state bits with the nested target
//   phi_n = p1 & (!p2 | (p3 & (!p4 | ...))), problem (phi_n, no transitions,
//   !phi_n), proven by alternating forward/backward steps peeling one literal
//   each.  Acceptance needs the full alternation depth n.
//
// Witness family (fbpi): one sort with p1(.) and r2(.,.), ..., rn(.,.) and the
//   alternating-quantifier target
//   phi = exists x1. p1(x1) & forall x2. !r2(x1,x2) | exists x3. r3(x2,x3) & ...
//   of quantifier depth n, problem (phi, no transitions, !phi).  The proof is a
//   chain of forward prophecy steps: step k introduces witness wk for the
//   suffix of phi starting at quantifier k, with earlier variables replaced by
//   their witnesses and the disjunctive escapes of the enclosing even layers
//   kept so witness existence stays valid.  The extracted invariant nests
//   quantifiers to depth exactly n.
#pragma once

#include "fbp/parser.hpp"
#include "fbp/proof.hpp"

namespace fbp {

inline FbpFile powergen_boolean(int n) {
  if (n < 1) throw Error("powergen: n must be >= 1");
  FbpFile out;
  SafetyProblem& p = out.problem;
  std::vector<SymId> props;
  for (int k = 1; k <= n; ++k)
    props.push_back(p.voc.add_relation("p" + std::to_string(k), {}, /*mut=*/true));

  auto lit = [&](int k) { return f_rel(props[k - 1], {}, false); };
  // Innermost literal is positive for odd n, negated for even n.
  Formula phi = n % 2 == 1 ? lit(n) : f_not(lit(n));
  for (int k = n - 1; k >= 1; --k)
    phi = k % 2 == 1 ? f_and({lit(k), phi}) : f_or({f_not(lit(k)), phi});

  p.init = phi;
  p.bad = f_not(phi);

  ProofScript script;
  for (int k = 1; k <= n; ++k) {
    ScriptStep s;
    s.kind = k % 2 == 1 ? ScriptStep::Kind::Forward : ScriptStep::Kind::Backward;
    s.payload = lit(k);
    script.push_back(std::move(s));
  }
  ScriptStep qed;
  qed.kind = ScriptStep::Kind::Qed;
  qed.qed_forward = n % 2 == 1;
  script.push_back(std::move(qed));
  out.proof = std::move(script);
  return out;
}

namespace detail {

// Layer-k literal of the witness family: p1(cur) for k=1, rk(prev,cur)
// positively on odd layers, negated on even layers.
inline Formula power_literal(const std::vector<SymId>& rels, int k, const Term& prev,
                             const Term& cur) {
  if (k == 1) return f_rel(rels[0], {cur}, false);
  Formula at = f_rel(rels[k - 1], {prev, cur}, false);
  return k % 2 == 1 ? at : f_not(std::move(at));
}

// Suffix of the target starting at layer k with x_{k-1} := prev, x_k := cur and
// all deeper quantifiers intact.
inline Formula power_suffix(const std::vector<SymId>& rels, SortId sort, int n, int k,
                            const Term& prev, const Term& cur) {
  Formula lit = power_literal(rels, k, prev, cur);
  if (k == n) return lit;
  std::string next = "x" + std::to_string(k + 1);
  Formula inner = power_suffix(rels, sort, n, k + 1, cur, Term::var(next, sort));
  Formula quant = f_quant((k + 1) % 2 == 0 ? Formula::Kind::Forall : Formula::Kind::Exists,
                          {{next, sort}}, std::move(inner));
  return k % 2 == 1 ? f_and({std::move(lit), std::move(quant)})
                    : f_or({std::move(lit), std::move(quant)});
}

} // namespace detail

inline FbpFile powergen_witness(int n) {
  if (n < 1) throw Error("powergen: n must be >= 1");
  FbpFile out;
  SafetyProblem& p = out.problem;
  SortId sort = p.voc.add_sort("elem");
  std::vector<SymId> rels;
  rels.push_back(p.voc.add_relation("p1", {sort}, /*mut=*/true));
  for (int k = 2; k <= n; ++k)
    rels.push_back(p.voc.add_relation("r" + std::to_string(k), {sort, sort}, /*mut=*/true));

  Term x1 = Term::var("x1", sort);
  Formula phi = f_exists({{"x1", sort}}, detail::power_suffix(rels, sort, n, 1, x1, x1));
  p.init = phi;
  p.bad = f_not(phi);

  // Witness constants are introduced by the elaborated prophecy steps, which
  // extend the vocabulary one witness at a time.  Payloads built here refer to
  // earlier witnesses through the same constants a parse of the printed file
  // would produce, so the scratch vocabulary mirrors that extension order.
  Vocabulary scratch = p.voc;
  std::vector<Term> wits;  // w1..w_{k-1} as constant terms of the scratch vocabulary
  ProofScript script;
  for (int k = 1; k <= n; ++k) {
    ScriptStep s;
    s.kind = ScriptStep::Kind::ForwardProphecy;
    s.witnesses = {{"w" + std::to_string(k), sort}};
    // The payload's one free variable is named exactly like the witness.
    Term x = Term::var(s.witnesses[0].name, sort);
    Formula core = detail::power_suffix(rels, sort, n, k, k == 1 ? x : wits[k - 2], x);
    // Wrap in the escape disjuncts of the enclosing even layers: going outward,
    // layer j even contributes "!rj(w_{j-1}, w_j) | .", odd layers add nothing.
    for (int j = k - 1; j >= 2; --j)
      if (j % 2 == 0)
        core = f_or({f_not(f_rel(rels[j - 1], {wits[j - 2], wits[j - 1]}, false)),
                     std::move(core)});
    s.payload = std::move(core);
    script.push_back(std::move(s));
    SymId wsym = scratch.add_constant("w" + std::to_string(k), sort, /*mut=*/false);
    wits.push_back(Term::constant(wsym));
  }
  ScriptStep qed;
  qed.kind = ScriptStep::Kind::Qed;
  qed.qed_forward = true;
  script.push_back(std::move(qed));
  out.proof = std::move(script);
  return out;
}

inline FbpFile powergen(const std::string& family, int n) {
  if (family == "fbi") return powergen_boolean(n);
  if (family == "fbpi") return powergen_witness(n);
  throw Error("powergen: unknown family '" + family + "' (use fbi or fbpi)");
}

} // namespace fbp
