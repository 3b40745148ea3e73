// The proof kernel: proof trees, proof scripts, their elaboration, and
// verification-condition generation.
//
// A proof tree describes how a safety problem is discharged.  Nodes store
// only their rule and payload; the premise problem of every child is
// recomputed top-down from the root problem, so a tree cannot smuggle in a
// different system.  vcgen turns a tree into a flat list of closed proof
// obligations, each valid exactly when the corresponding side condition
// holds.
#pragma once

#include <string>
#include <vector>

#include "fbp/printer.hpp"
#include "fbp/system.hpp"

namespace fbp {

enum class Rule {
  Induction,        // payload phi is inductive; bad must be !phi
  Consequence,      // phi unreachable (child) and phi => !bad
  Incremental,      // child 1: phi invariant; child 2: rest under restriction to phi
  Reverse,          // child proves the reversed problem
  BackInduction,    // time-reversed induction; init must be !phi
  BackConsequence,  // time-reversed consequence
  BackIncremental,  // time-reversed incremental step
  Prophecy,         // children: soundness problem, extended problem
  ProphecyForward,  // witness guided forward; child: extended problem
  ProphecySelect,   // witness guided by a selector; child: extended problem
};

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::Induction: return "induction";
    case Rule::Consequence: return "consequence";
    case Rule::Incremental: return "incremental";
    case Rule::Reverse: return "reverse";
    case Rule::BackInduction: return "back-induction";
    case Rule::BackConsequence: return "back-consequence";
    case Rule::BackIncremental: return "back-incremental";
    case Rule::Prophecy: return "prophecy";
    case Rule::ProphecyForward: return "prophecy-forward";
    case Rule::ProphecySelect: return "prophecy-select";
  }
  return "?";
}

struct ProofTree {
  Rule rule;
  Formula payload;                // phi (true for QED-style leaves)
  Formula selector;               // theta, ProphecySelect only
  std::vector<VarDecl> witnesses; // prophecy rules only
  std::string tracker;            // tracker base name, Prophecy only ("" = default)
  std::vector<ProofTree> children;
  std::string label;              // used in obligation names ("" = positional)
};

inline size_t rule_arity(Rule r) {
  switch (r) {
    case Rule::Induction:
    case Rule::BackInduction: return 0;
    case Rule::Consequence:
    case Rule::BackConsequence:
    case Rule::Reverse:
    case Rule::ProphecyForward:
    case Rule::ProphecySelect: return 1;
    case Rule::Incremental:
    case Rule::BackIncremental:
    case Rule::Prophecy: return 2;
  }
  return 0;
}

// ---- proof scripts -----------------------------------------------------------

// The linear surface form: each step either proves an invariant going
// forward (F), going backward (B), or introduces prophecy witnesses (FP);
// QED closes the proof by showing no bad (fwd) or no initial (bwd) state
// remains.
struct ScriptStep {
  enum class Kind { Forward, Backward, ForwardProphecy, Qed };
  Kind kind = Kind::Forward;
  Formula payload;                 // F/B: invariant; FP: witness formula
  std::vector<VarDecl> witnesses;  // FP only
  bool select = false;             // FP: selector mode?
  Formula selector;                // FP select(theta)
  bool qed_forward = true;         // QED direction
};

using ProofScript = std::vector<ScriptStep>;

// Elaborate a script into a proof tree.  Purely syntactic; all semantic
// checks happen in vcgen against the recomputed premise problems.
inline ProofTree elaborate(const ProofScript& script) {
  if (script.empty()) throw Error("elaborate: empty script");
  std::function<ProofTree(size_t)> rec = [&](size_t i) -> ProofTree {
    const ScriptStep& st = script[i];
    std::string label = "step" + std::to_string(i + 1);
    switch (st.kind) {
      case ScriptStep::Kind::Qed: {
        if (i + 1 != script.size()) throw Error("elaborate: QED must be the last step");
        ProofTree leaf{st.qed_forward ? Rule::Induction : Rule::BackInduction,
                       f_true(), {}, {}, "", {}, "qed"};
        ProofTree close{st.qed_forward ? Rule::Consequence : Rule::BackConsequence,
                        f_true(), {}, {}, "", {std::move(leaf)}, "qed"};
        return close;
      }
      case ScriptStep::Kind::Forward:
      case ScriptStep::Kind::Backward: {
        if (i + 1 == script.size())
          throw Error("elaborate: script does not end with QED");
        bool fwd = st.kind == ScriptStep::Kind::Forward;
        ProofTree leaf{fwd ? Rule::Induction : Rule::BackInduction,
                       st.payload, {}, {}, "", {}, label};
        ProofTree node{fwd ? Rule::Incremental : Rule::BackIncremental,
                       st.payload, {}, {}, "",
                       {std::move(leaf), rec(i + 1)}, label};
        return node;
      }
      case ScriptStep::Kind::ForwardProphecy: {
        if (i + 1 == script.size())
          throw Error("elaborate: script does not end with QED");
        ProofTree node{st.select ? Rule::ProphecySelect : Rule::ProphecyForward,
                       st.payload, st.selector, st.witnesses, "",
                       {rec(i + 1)}, label};
        return node;
      }
    }
    throw Error("elaborate: unreachable");
  };
  return rec(0);
}

// ---- verification conditions ----------------------------------------------------

struct Obligation {
  std::string name;            // e.g. "step2.consecution[send]"
  std::string rule;            // rule that produced it
  Vocabulary voc;              // vocabulary of the premise problem
  std::vector<Formula> axioms; // background axioms assumed valid
  Formula claim;               // closed formula to prove valid
};

namespace detail {

inline std::string ob_name(const std::string& prefix, const std::string& local) {
  return prefix.empty() ? local : prefix + "." + local;
}

inline void check_payload(const SafetyProblem& p, const Formula& phi, const std::string& where) {
  if (phi.empty()) throw Error(where + ": missing formula");
  require_well_sorted(p.voc, phi, {}, where);
  if (!free_vars(phi).empty()) throw Error(where + ": formula is not closed");
  if (has_primed_occurrence(phi)) throw Error(where + ": formula mentions the next state");
}

// Payload of a prophecy rule: free variables must be exactly the witnesses.
inline void check_prophecy_payload(const SafetyProblem& p, const ProofTree& t,
                                   const std::string& where) {
  if (t.witnesses.empty()) throw Error(where + ": no witnesses");
  std::map<std::string, SortId> env;
  for (const VarDecl& w : t.witnesses) {
    if (env.count(w.name)) throw Error(where + ": duplicate witness '" + w.name + "'");
    env[w.name] = w.sort;
  }
  require_well_sorted(p.voc, t.payload, env, where);
  if (has_primed_occurrence(t.payload)) throw Error(where + ": formula mentions the next state");
  auto fv = free_vars(t.payload);
  for (auto& [n, s] : fv)
    if (!env.count(n)) throw Error(where + ": stray free variable '" + n + "'");
  for (const VarDecl& w : t.witnesses)
    if (!fv.count(w.name)) throw Error(where + ": witness '" + w.name + "' does not occur in the formula");
}

inline void vcgen_rec(const SafetyProblem& p, const ProofTree& t, const std::string& prefix,
                      std::vector<Obligation>& out) {
  if (t.children.size() != rule_arity(t.rule))
    throw Error(std::string("vcgen: rule ") + to_string(t.rule) + " expects " +
                std::to_string(rule_arity(t.rule)) + " premises, got " +
                std::to_string(t.children.size()));
  std::string pfx = t.label.empty() ? prefix : t.label;
  auto emit = [&](const std::string& local, Formula claim) {
    out.push_back({ob_name(pfx, local), to_string(t.rule), p.voc, p.axioms, std::move(claim)});
  };
  auto child_prefix = [&](size_t i) {
    return pfx.empty() ? std::to_string(i + 1) : pfx + "." + std::to_string(i + 1);
  };

  switch (t.rule) {
    case Rule::Induction: {
      check_payload(p, t.payload, "induction formula");
      emit("initiation", f_implies(p.init, t.payload));
      Formula next = prime(p.voc, t.payload);
      for (const Transition& tr : p.transitions)
        emit("consecution[" + tr.name + "]",
             f_implies(f_and(t.payload, tr.formula), next));
      if (!is_negation_of(p.bad, t.payload))
        emit("conclusion", f_implies(p.bad, f_not(t.payload)));
      return;
    }
    case Rule::BackInduction: {
      check_payload(p, t.payload, "induction formula");
      emit("initiation-rev", f_implies(p.bad, t.payload));
      Formula next = prime(p.voc, t.payload);
      for (const Transition& tr : p.transitions)
        emit("consecution-rev[" + tr.name + "]",
             f_implies(f_and(next, tr.formula), t.payload));
      if (!is_negation_of(p.init, t.payload))
        emit("conclusion", f_implies(p.init, f_not(t.payload)));
      return;
    }
    case Rule::Consequence: {
      check_payload(p, t.payload, "consequence formula");
      emit("safety", f_implies(t.payload, f_not(p.bad)));
      SafetyProblem q = p;
      q.bad = f_not(t.payload);
      vcgen_rec(q, t.children[0], child_prefix(0), out);
      return;
    }
    case Rule::BackConsequence: {
      check_payload(p, t.payload, "consequence formula");
      emit("safety-rev", f_implies(t.payload, f_not(p.init)));
      SafetyProblem q = p;
      q.init = f_not(t.payload);
      vcgen_rec(q, t.children[0], child_prefix(0), out);
      return;
    }
    case Rule::Incremental: {
      check_payload(p, t.payload, "incremental formula");
      SafetyProblem inv = p;
      inv.bad = f_not(t.payload);
      vcgen_rec(inv, t.children[0], child_prefix(0), out);
      vcgen_rec(restrict(p, t.payload), t.children[1], child_prefix(1), out);
      return;
    }
    case Rule::BackIncremental: {
      check_payload(p, t.payload, "incremental formula");
      SafetyProblem inv = p;
      inv.init = f_not(t.payload);
      vcgen_rec(inv, t.children[0], child_prefix(0), out);
      vcgen_rec(restrict(p, t.payload), t.children[1], child_prefix(1), out);
      return;
    }
    case Rule::Reverse:
      vcgen_rec(reverse(p), t.children[0], child_prefix(0), out);
      return;
    case Rule::Prophecy: {
      check_prophecy_payload(p, t, "prophecy formula");
      SafetyProblem snd = prophecy_soundness(p, t.payload, t.witnesses, nullptr,
                                             t.tracker.empty() ? "tracker" : t.tracker);
      vcgen_rec(snd, t.children[0], child_prefix(0), out);
      vcgen_rec(prophecy_extend(p, t.payload, t.witnesses), t.children[1], child_prefix(1), out);
      return;
    }
    case Rule::ProphecyForward: {
      check_prophecy_payload(p, t, "prophecy formula");
      emit("witness-existence", f_implies(p.init, f_exists(t.witnesses, t.payload)));
      Formula next = prime(p.voc, t.payload);
      for (const Transition& tr : p.transitions)
        emit("witness-preservation[" + tr.name + "]",
             f_forall(t.witnesses, f_implies(f_and(t.payload, tr.formula), next)));
      vcgen_rec(prophecy_extend(p, t.payload, t.witnesses), t.children[0], child_prefix(0), out);
      return;
    }
    case Rule::ProphecySelect: {
      check_prophecy_payload(p, t, "prophecy formula");
      check_payload(p, t.selector, "selector formula");
      Formula ex = f_exists(t.witnesses, t.payload);
      Formula ex_next = prime(p.voc, ex);
      Formula all = f_forall(t.witnesses, t.payload);
      Formula next = prime(p.voc, t.payload);
      Formula sel_next = prime(p.voc, t.selector);
      emit("witness-existence", f_implies(p.init, ex));
      emit("selector-default", f_implies(f_not(t.selector), all));
      for (const Transition& tr : p.transitions) {
        emit("witness-flow[" + tr.name + "]", f_implies(f_and(ex, tr.formula), ex_next));
        emit("selector-persistence[" + tr.name + "]",
             f_implies(f_and(t.selector, tr.formula), sel_next));
        emit("witness-preservation[" + tr.name + "]",
             f_forall(t.witnesses,
                      f_implies(f_and({t.payload, t.selector, tr.formula}), next)));
      }
      vcgen_rec(prophecy_extend(p, t.payload, t.witnesses), t.children[0], child_prefix(0), out);
      return;
    }
  }
  throw Error("vcgen: unreachable");
}

} // namespace detail

// Generate the verification conditions of a proof tree against a problem.
inline std::vector<Obligation> vcgen(const SafetyProblem& p, const ProofTree& t) {
  require_valid(p);
  std::vector<Obligation> out;
  detail::vcgen_rec(p, t, "", out);
  return out;
}

inline std::vector<Obligation> vcgen(const SafetyProblem& p, const ProofScript& s) {
  return vcgen(p, elaborate(s));
}

// ---- heuristic expansion ----------------------------------------------------------

// Rewrite the guided prophecy rules into the primitive Prophecy rule with an
// explicit proof of the soundness problem.  The soundness problem is safe
// because the tracked-candidate set stays nonempty:
//   forward:   exists w. phi /\ tracker(w)
//   selector:  (!theta /\ forall w. tracker(w)) \/ (theta /\ exists w. phi /\ tracker(w))
// That invariant is discharged by Consequence over Induction.
inline ProofTree expand_heuristic(const SafetyProblem& p, const ProofTree& t) {
  std::function<ProofTree(const SafetyProblem&, const ProofTree&)> rec =
      [&](const SafetyProblem& q, const ProofTree& n) -> ProofTree {
    if (n.children.size() != rule_arity(n.rule))
      throw Error("expand_heuristic: malformed tree");
    ProofTree out = n;
    switch (n.rule) {
      case Rule::Induction:
      case Rule::BackInduction:
        return out;
      case Rule::Consequence: {
        SafetyProblem c = q;
        c.bad = f_not(n.payload);
        out.children = {rec(c, n.children[0])};
        return out;
      }
      case Rule::BackConsequence: {
        SafetyProblem c = q;
        c.init = f_not(n.payload);
        out.children = {rec(c, n.children[0])};
        return out;
      }
      case Rule::Incremental: {
        SafetyProblem c = q;
        c.bad = f_not(n.payload);
        out.children = {rec(c, n.children[0]), rec(restrict(q, n.payload), n.children[1])};
        return out;
      }
      case Rule::BackIncremental: {
        SafetyProblem c = q;
        c.init = f_not(n.payload);
        out.children = {rec(c, n.children[0]), rec(restrict(q, n.payload), n.children[1])};
        return out;
      }
      case Rule::Reverse:
        out.children = {rec(reverse(q), n.children[0])};
        return out;
      case Rule::Prophecy: {
        SafetyProblem snd = prophecy_soundness(q, n.payload, n.witnesses, nullptr,
                                               n.tracker.empty() ? "tracker" : n.tracker);
        out.children = {rec(snd, n.children[0]),
                        rec(prophecy_extend(q, n.payload, n.witnesses), n.children[1])};
        return out;
      }
      case Rule::ProphecyForward:
      case Rule::ProphecySelect: {
        detail::check_prophecy_payload(q, n, "prophecy formula");
        // The tracker will be the next symbol of the soundness problem.
        SymId tracker = q.voc.num_symbols();
        SafetyProblem snd = prophecy_soundness(q, n.payload, n.witnesses);
        std::vector<Term> args;
        for (const VarDecl& w : n.witnesses) args.push_back(Term::var(w.name, w.sort));
        Formula tracked = f_rel(tracker, args);
        Formula xi;
        if (n.rule == Rule::ProphecyForward) {
          xi = f_exists(n.witnesses, f_and(n.payload, tracked));
        } else {
          xi = f_or(f_and(f_not(n.selector), f_forall(n.witnesses, tracked)),
                    f_and(n.selector, f_exists(n.witnesses, f_and(n.payload, tracked))));
        }
        ProofTree ind{Rule::Induction, xi, {}, {}, "", {},
                      n.label.empty() ? "" : n.label + ".soundness"};
        ProofTree cons{Rule::Consequence, xi, {}, {}, "", {std::move(ind)},
                       n.label.empty() ? "" : n.label + ".soundness"};
        ProofTree ext = rec(prophecy_extend(q, n.payload, n.witnesses), n.children[0]);
        ProofTree proph{Rule::Prophecy, n.payload, {}, n.witnesses, "",
                        {std::move(cons), std::move(ext)}, n.label};
        return proph;
      }
    }
    throw Error("expand_heuristic: unreachable");
  };
  return rec(p, t);
}

// ---- script printing -----------------------------------------------------------

// Printing a script needs the growing vocabulary (witness constants appear as
// symbols in later step formulas), so it re-extends a copy step by step.
inline void print_script(std::ostream& os, const Vocabulary& voc, const ProofScript& script,
                         int indent) {
  Vocabulary cur = voc;
  std::string pad(indent, ' ');
  for (const ScriptStep& st : script) {
    switch (st.kind) {
      case ScriptStep::Kind::Forward:
        os << pad << "F(" << to_string(cur, st.payload) << ");\n";
        break;
      case ScriptStep::Kind::Backward:
        os << pad << "B(" << to_string(cur, st.payload) << ");\n";
        break;
      case ScriptStep::Kind::ForwardProphecy: {
        os << pad << "FP(";
        for (size_t i = 0; i < st.witnesses.size(); ++i) {
          if (i) os << ", ";
          os << st.witnesses[i].name;
          if (i + 1 == st.witnesses.size() || st.witnesses[i + 1].sort != st.witnesses[i].sort)
            os << ": " << cur.sort_name(st.witnesses[i].sort);
        }
        os << "; " << to_string(cur, st.payload) << "; ";
        if (st.select)
          os << "select(" << to_string(cur, st.selector) << ")";
        else
          os << "fwd";
        os << ");\n";
        for (const VarDecl& w : st.witnesses) cur.add_constant(w.name, w.sort, false);
        break;
      }
      case ScriptStep::Kind::Qed:
        os << pad << "QED(" << (st.qed_forward ? "fwd" : "bwd") << ");\n";
        break;
    }
  }
}

// Full problem-plus-proof rendering in the concrete file syntax.
inline std::string print_fbp(const SafetyProblem& p, const ProofScript* script = nullptr) {
  std::ostringstream os;
  print_problem(os, p);
  if (script) {
    os << "proof {\n";
    print_script(os, p.voc, *script, 2);
    os << "}\n";
  }
  return os.str();
}

} // namespace fbp
