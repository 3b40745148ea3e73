// Explicit-state ground truth: bounded reachability with semantically
// validated traces, agreement between the breadth-first and
// iterative-deepening searches, reachability duality under time reversal,
// and the product-state prophecy soundness oracle against the tracker
// construction it certifies.
#include <catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fbp;

namespace {

// Check a claimed error trace against the system itself: starts in an
// initial state, ends in a bad state, and every step satisfies the named
// transition's two-state formula (and the axioms throughout).
void validate_trace(const SafetyProblem& p, const ReachResult& r) {
  REQUIRE(r.error_reachable);
  REQUIRE(r.trace.size() == r.trace_transitions.size() + 1);
  REQUIRE(eval(p.voc, r.trace.front(), p.init));
  REQUIRE(eval(p.voc, r.trace.back(), p.bad));
  for (const FiniteModel& st : r.trace)
    for (const Formula& ax : p.axioms) REQUIRE(eval(p.voc, st, ax));
  for (size_t i = 0; i + 1 < r.trace.size(); ++i) {
    const Transition* tr = nullptr;
    for (const Transition& t : p.transitions)
      if (t.name == r.trace_transitions[i]) tr = &t;
    REQUIRE(tr != nullptr);
    FiniteModel two = pair_states(p.voc, r.trace[i], r.trace[i + 1]);
    REQUIRE(eval(p.voc, two, tr->formula));
  }
}

ReachOptions reach_opts(int bound, unsigned long budget = 1000000) {
  ReachOptions o;
  o.bounds.fallback = bound;
  o.budget = budget;
  return o;
}

}  // namespace

TEST_CASE("exhaustive search proves the card-dealing system safe") {
  FbpFile f = parse_fbp_path(th::corpus_file("dealer_fb.fbp"));
  ReachResult r = bounded_reach(f.problem, reach_opts(2));
  REQUIRE_FALSE(r.error_reachable);
  REQUIRE_FALSE(r.budget_exhausted);
  REQUIRE(r.trace.empty());
  REQUIRE(r.visited > 0);
  REQUIRE(r.visited <= 16);  // at most every assignment of the four bits
}

TEST_CASE("a weakened error condition is reached by a validated shortest trace") {
  FbpFile f = parse_fbp_path(th::corpus_file("dealer_fb.fbp"));
  SafetyProblem p = f.problem;
  p.bad = parse_formula(p.voc, "d & p2");  // drop the p1 conjunct
  ReachResult r = bounded_reach(p, reach_opts(2));
  validate_trace(p, r);
  // One pass from a dealt position: provably shortest.
  REQUIRE(r.trace.size() == 2);
  REQUIRE(r.trace_transitions == std::vector<std::string>{"pass"});
  REQUIRE(iddfs_shortest_error(p, Bounds{.fallback = 2}, 4) == 1u);
}

TEST_CASE("a weakened teams system yields a multi-step validated trace") {
  FbpFile f = parse_fbp_path(th::corpus_file("teams_fb.fbp"));
  SafetyProblem p = f.problem;
  // Drop the "every team holds a deck" half: now deal-pass-deal suffices.
  p.bad = parse_formula(p.voc, "exists y: team. p1(y) & p2(y)");
  ReachOptions o;
  o.bounds.size[*p.voc.find_sort("team")] = 2;
  ReachResult r = bounded_reach(p, o);
  validate_trace(p, r);
  REQUIRE(r.trace.size() >= 3);

  SECTION("the original corpus system is safe at this bound") {
    ReachResult safe = bounded_reach(f.problem, o);
    REQUIRE_FALSE(safe.error_reachable);
    REQUIRE_FALSE(safe.budget_exhausted);
  }
}

TEST_CASE("search budgets are respected") {
  FbpFile f = parse_fbp_path(th::corpus_file("dealer_fb.fbp"));
  ReachResult r = bounded_reach(f.problem, reach_opts(2, /*budget=*/3));
  REQUIRE(r.budget_exhausted);
  REQUIRE_FALSE(r.error_reachable);
  REQUIRE(r.visited == 3);

  FbpFile g = parse_fbp_path(th::corpus_file("pursuit_prophecy.fbp"));
  OracleOptions oo;
  oo.bounds.fallback = 2;
  oo.budget = 5;
  OracleResult orr = sound_prophecy_oracle(g.problem, (*g.proof)[0].payload,
                                           (*g.proof)[0].witnesses, oo);
  REQUIRE(orr.budget_exhausted);
  REQUIRE(orr.visited == 5);
}

TEST_CASE("time reversal preserves reachability and shortest trace length") {
  th::Rng g(7751);
  int reachable = 0, safe = 0;
  for (int i = 0; i < 50; ++i) {
    th::RandomSystem sys = th::gen_system(g);
    ReachResult fwd = bounded_reach(sys.p, reach_opts(2));
    ReachResult bwd = bounded_reach(reverse(sys.p), reach_opts(2));
    REQUIRE_FALSE(fwd.budget_exhausted);
    REQUIRE_FALSE(bwd.budget_exhausted);
    REQUIRE(fwd.error_reachable == bwd.error_reachable);
    if (fwd.error_reachable) {
      ++reachable;
      validate_trace(sys.p, fwd);
      validate_trace(reverse(sys.p), bwd);
      REQUIRE(fwd.trace.size() == bwd.trace.size());
    } else {
      ++safe;
    }
  }
  REQUIRE(reachable >= 5);
  REQUIRE(safe >= 5);
}

TEST_CASE("breadth-first and iterative-deepening searches agree") {
  th::Rng g(60442);
  Bounds b;
  b.fallback = 2;
  int cross_checked = 0;
  for (int i = 0; i < 50; ++i) {
    th::RandomSystem sys = th::gen_system(g);
    ReachResult r = bounded_reach(sys.p, reach_opts(2));
    REQUIRE_FALSE(r.budget_exhausted);
    if (r.error_reachable) {
      validate_trace(sys.p, r);
      unsigned len = static_cast<unsigned>(r.trace.size()) - 1;
      if (len <= 3) {
        // Full agreement on the minimal length (the deepening search is
        // exponential in depth, so only exercised on short traces).
        REQUIRE(iddfs_shortest_error(sys.p, b, len) == len);
        ++cross_checked;
      } else {
        REQUIRE(iddfs_shortest_error(sys.p, b, 2) == std::nullopt);
      }
    } else {
      REQUIRE(iddfs_shortest_error(sys.p, b, 2) == std::nullopt);
    }
  }
  REQUIRE(cross_checked >= 5);
}

TEST_CASE("prophecy extension never introduces error reachability") {
  th::Rng g(88112);
  int safe_preserved = 0;
  for (int i = 0; i < 50; ++i) {
    th::RandomSystem sys = th::gen_system(g);
    Term w = Term::var("w", sys.sort);
    th::GenOpts o;
    o.depth = 2;
    Formula phi = f_and(th::gen_formula(g, sys.p.voc, o, {{"w", sys.sort}}), f_eq(w, w));
    SafetyProblem ext = prophecy_extend(sys.p, phi, {{"w", sys.sort}});

    ReachResult base = bounded_reach(sys.p, reach_opts(2));
    ReachResult extended = bounded_reach(ext, reach_opts(2));
    REQUIRE_FALSE(base.budget_exhausted);
    REQUIRE_FALSE(extended.budget_exhausted);
    // Extended runs project onto runs of the base system, so a safe system
    // stays safe under any prophecy restriction (sound or not).
    if (!base.error_reachable) {
      REQUIRE_FALSE(extended.error_reachable);
      ++safe_preserved;
    }
    if (extended.error_reachable) {
      REQUIRE(base.error_reachable);
      validate_trace(ext, extended);
    }
  }
  REQUIRE(safe_preserved >= 5);
}

TEST_CASE("the prophecy oracle on hand-built cases") {
  OracleOptions oo;
  oo.bounds.fallback = 2;

  SECTION("the pursuit corpus witness is sound") {
    FbpFile f = parse_fbp_path(th::corpus_file("pursuit_prophecy.fbp"));
    const ScriptStep& fp = (*f.proof)[0];
    OracleResult r = sound_prophecy_oracle(f.problem, fp.payload, fp.witnesses, oo);
    REQUIRE(r.sound);
    REQUIRE_FALSE(r.budget_exhausted);
  }

  SafetyProblem p;
  SortId s = p.voc.add_sort("s");
  SymId r = p.voc.add_relation("r", {s}, true);
  Term x = Term::var("x", s), w = Term::var("w", s);
  p.init = f_forall({{"x", s}}, f_rel(r, {x}));
  Formula phi = f_rel(r, {w});

  SECTION("a transition that kills every candidate is caught") {
    p.transitions.push_back({"kill", f_forall({{"x", s}}, f_not(f_rel(r, {x}, true)))});
    p.bad = f_forall({{"x", s}}, f_not(f_rel(r, {x})));
    OracleResult res = sound_prophecy_oracle(p, phi, {{"w", s}}, oo);
    REQUIRE_FALSE(res.sound);
  }
  SECTION("a surviving candidate keeps the prophecy sound") {
    SymId k = p.voc.add_constant("k", s, false);
    p.transitions.push_back(
        {"keep_one", f_forall({{"x", s}}, f_iff(f_rel(r, {x}, true),
                                                f_eq(x, Term::constant(k))))});
    p.bad = f_exists({{"x", s}}, f_not(f_rel(r, {x})));  // reached at size 2
    ReachResult reach = bounded_reach(p, reach_opts(2));
    REQUIRE(reach.error_reachable);  // the bad state really is visited...
    OracleResult res = sound_prophecy_oracle(p, phi, {{"w", s}}, oo);
    REQUIRE(res.sound);  // ...but the pinned element always satisfies phi
  }
  SECTION("argument validation") {
    p.bad = f_false();
    REQUIRE_THROWS_WITH(sound_prophecy_oracle(p, phi, {}, oo),
                        Catch::Matchers::ContainsSubstring("no parameters"));
    REQUIRE_THROWS_WITH(sound_prophecy_oracle(p, phi, {{"w", s}, {"w", s}}, oo),
                        Catch::Matchers::ContainsSubstring("duplicate parameter"));
    REQUIRE_THROWS_WITH(
        sound_prophecy_oracle(p, f_rel(r, {w}, true), {{"w", s}}, oo),
        Catch::Matchers::ContainsSubstring("mentions the next state"));
    REQUIRE_THROWS_WITH(sound_prophecy_oracle(p, f_rel(r, {x}), {{"w", s}}, oo),
                        Catch::Matchers::ContainsSubstring("unbound variable 'x'"));
  }
}

TEST_CASE("the oracle agrees with reachability of the tracker construction") {
  th::Rng g(515151);
  OracleOptions oo;
  oo.bounds.fallback = 2;
  oo.budget = 500000;
  int sound_seen = 0, unsound_seen = 0;
  for (int i = 0; i < 40; ++i) {
    th::RandomSystem sys = th::gen_system(g);
    Term w = Term::var("w", sys.sort);
    th::GenOpts o;
    o.depth = 2;
    Formula phi = f_and(th::gen_formula(g, sys.p.voc, o, {{"w", sys.sort}}), f_eq(w, w));

    OracleResult direct = sound_prophecy_oracle(sys.p, phi, {{"w", sys.sort}}, oo);
    SafetyProblem snd = prophecy_soundness(sys.p, phi, {{"w", sys.sort}});
    ReachResult via_tracker = bounded_reach(snd, reach_opts(2, 500000));
    REQUIRE_FALSE(direct.budget_exhausted);
    REQUIRE_FALSE(via_tracker.budget_exhausted);
    REQUIRE(direct.sound == !via_tracker.error_reachable);
    if (direct.sound) ++sound_seen;
    else ++unsound_seen;
    if (via_tracker.error_reachable) validate_trace(snd, via_tracker);
  }
  REQUIRE(sound_seen >= 5);
  REQUIRE(unsound_seen >= 5);
}
