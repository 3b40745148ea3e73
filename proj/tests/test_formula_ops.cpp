// Syntactic formula operations: variable bookkeeping, priming and state
// swapping, capture-avoiding substitution, normal forms, well-sortedness
// diagnostics, and the complexity measures on hand-built formulas.
#include <catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fbp;

namespace {

// One mutable unary relation r, one immutable unary relation s, one immutable
// constant c, one mutable constant v, over a single sort.
struct Fixture {
  Vocabulary voc;
  SortId elem;
  SymId r, s, c, v;
  Fixture() {
    elem = voc.add_sort("elem");
    r = voc.add_relation("r", {elem}, /*mut=*/true);
    s = voc.add_relation("s", {elem}, /*mut=*/false);
    c = voc.add_constant("c", elem, /*mut=*/false);
    v = voc.add_constant("v", elem, /*mut=*/true);
  }
  Term x() const { return Term::var("x", elem); }
  Term y() const { return Term::var("y", elem); }
  Formula rx(bool primed = false) const { return f_rel(r, {x()}, primed); }
  Formula sx() const { return f_rel(s, {x()}); }
};

bool in_nnf(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      return true;
    case Formula::Kind::Not:
      return f.kid(0).is(Formula::Kind::Eq) || f.kid(0).is(Formula::Kind::Rel);
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return false;
    default:
      for (const Formula& k : f.kids())
        if (!in_nnf(k)) return false;
      return true;
  }
}

}  // namespace

TEST_CASE("free and used variables") {
  Fixture fx;
  Formula f = f_exists({{"x", fx.elem}}, f_and(fx.rx(), f_rel(fx.s, {fx.y()})));
  auto fv = free_vars(f);
  REQUIRE(fv.size() == 1);
  REQUIRE(fv.count("y") == 1);
  REQUIRE(fv.at("y") == fx.elem);
  REQUIRE_FALSE(is_closed(f));
  REQUIRE(is_closed(f_forall({{"y", fx.elem}}, f)));

  auto used = used_var_names(f);
  REQUIRE(used == std::set<std::string>{"x", "y"});

  // A binder shadows its free occurrence; the outer one stays free.
  Formula g = f_and(fx.rx(), f_forall({{"x", fx.elem}}, fx.rx()));
  REQUIRE(free_vars(g).count("x") == 1);
}

TEST_CASE("priming marks every mutable occurrence and only those") {
  Fixture fx;
  Formula f = f_and({fx.rx(), fx.sx(), f_eq(Term::constant(fx.v), Term::constant(fx.c))});
  Formula p = prime(fx.voc, f);
  REQUIRE(p.kid(0).primed());               // r is mutable
  REQUIRE_FALSE(p.kid(1).primed());         // s is immutable
  REQUIRE(p.kid(2).lhs().primed());         // v is mutable
  REQUIRE_FALSE(p.kid(2).rhs().primed());   // c is immutable
  REQUIRE(has_primed_occurrence(p));
  REQUIRE_FALSE(has_primed_occurrence(f));

  // Double priming is refused.
  REQUIRE_THROWS_WITH(prime(fx.voc, p),
                      Catch::Matchers::ContainsSubstring("already primed"));
  // Priming an immutable occurrence is never produced and is rejected on input.
  Formula bad = f_rel(fx.s, {fx.x()}, /*primed=*/true);
  REQUIRE_THROWS_WITH(prime(fx.voc, bad),
                      Catch::Matchers::ContainsSubstring("immutable"));
}

TEST_CASE("swap_state exchanges the two states and is an involution") {
  Fixture fx;
  Formula two = f_and(fx.rx(), fx.rx(/*primed=*/true));
  Formula sw = swap_state(fx.voc, two);
  REQUIRE(sw.kid(0).primed());
  REQUIRE_FALSE(sw.kid(1).primed());
  REQUIRE(formula_eq(swap_state(fx.voc, sw), two));
  // On a one-state formula, swapping equals priming.
  REQUIRE(formula_eq(swap_state(fx.voc, fx.rx()), prime(fx.voc, fx.rx())));
}

TEST_CASE("substitution avoids capture") {
  Fixture fx;
  // (exists x. x != y)[y := x]  must rename the binder, not capture.
  Formula f = f_exists({{"x", fx.elem}}, f_not(f_eq(fx.x(), fx.y())));
  Formula g = subst_term(f, "y", fx.x());
  REQUIRE(g.is(Formula::Kind::Exists));
  std::string binder = g.vars()[0].name;
  REQUIRE(binder != "x");
  // Body is  binder != x.
  const Formula& body = g.kid(0);
  REQUIRE(body.kid(0).lhs().var_name() == binder);
  REQUIRE(body.kid(0).rhs().var_name() == "x");

  // Substituting a variable by itself is the identity.
  REQUIRE(formula_eq(subst_term(f, "y", fx.y()), f));
  // Bound occurrences are untouched.
  REQUIRE(formula_eq(subst_term(f, "x", fx.y()), f));
}

TEST_CASE("subst_symbol replaces witness constants by variables") {
  Fixture fx;
  Formula f = f_and(f_rel(fx.r, {Term::constant(fx.c)}),
                    f_exists({{"w", fx.elem}}, f_eq(Term::var("w", fx.elem), Term::constant(fx.c))));
  Formula g = subst_symbol(fx.voc, f, fx.c, Term::var("w", fx.elem));
  // First conjunct: r(w).
  REQUIRE(g.kid(0).args()[0].is_var());
  REQUIRE(g.kid(0).args()[0].var_name() == "w");
  // The existing binder w was renamed to avoid capturing the new variable.
  REQUIRE(g.kid(1).vars()[0].name != "w");
  REQUIRE(g.kid(1).kid(0).rhs().var_name() == "w");
  REQUIRE(free_vars(g).count("w") == 1);
}

TEST_CASE("subst_relation substitutes a defining body for applications") {
  Fixture fx;
  Vocabulary voc = fx.voc;
  SymId t = voc.add_relation("t", {fx.elem}, /*mut=*/true);
  // body(p) = r(p) & s(p)
  Formula body = f_and(f_rel(fx.r, {Term::var("p", fx.elem)}),
                       f_rel(fx.s, {Term::var("p", fx.elem)}));
  // t(c) & !t'(v)  --->  (r(c) & s(c)) & !(r'(v) & s(v))
  Formula f = f_and(f_rel(t, {Term::constant(fx.c)}),
                    f_not(f_rel(t, {Term::constant(fx.v)}, /*primed=*/true)));
  Formula g = subst_relation(voc, f, t, body, {{"p", fx.elem}});
  Formula expect = f_and(
      f_and(f_rel(fx.r, {Term::constant(fx.c)}), f_rel(fx.s, {Term::constant(fx.c)})),
      f_not(f_and(f_rel(fx.r, {Term::constant(fx.v)}, true), f_rel(fx.s, {Term::constant(fx.v)}))));
  REQUIRE(formula_eq(g, expect));
  REQUIRE(well_sorted(voc, g).empty());

  REQUIRE_THROWS_WITH(subst_relation(voc, f, fx.c, body, {{"p", fx.elem}}),
                      Catch::Matchers::ContainsSubstring("not a relation"));
  REQUIRE_THROWS_WITH(subst_relation(voc, f, t, body, {}),
                      Catch::Matchers::ContainsSubstring("parameter count"));
}

TEST_CASE("nnf handles both polarities of every connective") {
  Fixture fx;
  Formula a = fx.rx(), b = fx.sx();

  SECTION("implication") {
    Formula f = f_implies(a, b);
    REQUIRE(formula_eq(nnf(f), f_or(f_not(a), b)));
    REQUIRE(formula_eq(nnf(f_not(f)), f_and(a, f_not(b))));
  }
  SECTION("iff, positive: (!a|b) & (a|!b)") {
    Formula f = f_iff(a, b);
    REQUIRE(formula_eq(nnf(f), f_and(f_or(f_not(a), b), f_or(a, f_not(b)))));
  }
  SECTION("iff, negative: (a|b) & (!a|!b)") {
    Formula f = f_not(f_iff(a, b));
    REQUIRE(formula_eq(nnf(f), f_and(f_or(a, b), f_or(f_not(a), f_not(b)))));
  }
  SECTION("quantifier duality") {
    Formula f = f_not(f_forall({{"x", fx.elem}}, a));
    Formula g = nnf(f);
    REQUIRE(g.is(Formula::Kind::Exists));
    REQUIRE(formula_eq(g.kid(0), f_not(a)));
  }
  SECTION("constants and double negation") {
    REQUIRE(formula_eq(nnf(f_not(f_true())), f_false()));
    REQUIRE(formula_eq(nnf(f_not(f_not(a))), a));
  }
}

TEST_CASE("rectify makes binder names distinct and avoids free names") {
  Fixture fx;
  // (forall x. r(x)) & (exists x. s(x)) & r(x)   with x also free
  Formula f = f_and({f_forall({{"x", fx.elem}}, fx.rx()),
                     f_exists({{"x", fx.elem}}, fx.sx()), fx.rx()});
  Formula g = rectify(f);
  std::string b1 = g.kid(0).vars()[0].name;
  std::string b2 = g.kid(1).vars()[0].name;
  REQUIRE(b1 != b2);
  REQUIRE(b1 != "x");
  REQUIRE(b2 != "x");
  // The free occurrence is untouched.
  REQUIRE(g.kid(2).args()[0].var_name() == "x");
  // Bodies reference the renamed binders.
  REQUIRE(g.kid(0).kid(0).args()[0].var_name() == b1);
  REQUIRE(g.kid(1).kid(0).args()[0].var_name() == b2);
}

TEST_CASE("prenex pulls quantifiers left-to-right from an NNF input") {
  Fixture fx;
  Formula f = f_and(f_exists({{"x", fx.elem}}, fx.rx()),
                    f_forall({{"x", fx.elem}}, fx.sx()));
  PrenexForm p = prenex(f);
  REQUIRE(p.prefix.size() == 2);
  REQUIRE(p.prefix[0].first == Formula::Kind::Exists);
  REQUIRE(p.prefix[1].first == Formula::Kind::Forall);
  REQUIRE(p.prefix[0].second.name != p.prefix[1].second.name);
  REQUIRE(metric_quantifiers(p.matrix) == 0);
  REQUIRE(p.matrix.is(Formula::Kind::And));

  // Non-NNF inputs are refused.
  REQUIRE_THROWS_WITH(prenex(f_not(f_forall({{"x", fx.elem}}, fx.rx()))),
                      Catch::Matchers::ContainsSubstring("not in NNF"));
  REQUIRE_THROWS_WITH(prenex(f_implies(fx.sx(), fx.sx())),
                      Catch::Matchers::ContainsSubstring("not in NNF"));
}

TEST_CASE("well_sorted reports precise diagnostics") {
  Fixture fx;
  auto message_of = [](const std::vector<Diag>& ds) {
    REQUIRE_FALSE(ds.empty());
    return ds.front().message;
  };
  SECTION("unbound variable") {
    REQUIRE_THAT(message_of(well_sorted(fx.voc, fx.rx())),
                 Catch::Matchers::ContainsSubstring("unbound variable 'x'"));
    REQUIRE(well_sorted(fx.voc, fx.rx(), {{"x", fx.elem}}).empty());
  }
  SECTION("arity mismatch") {
    Formula f = f_rel(fx.r, {});
    REQUIRE_THAT(message_of(well_sorted(fx.voc, f)),
                 Catch::Matchers::ContainsSubstring("expects 1 arguments, got 0"));
  }
  SECTION("function/relation confusion") {
    Formula f = f_rel(fx.c, {});
    REQUIRE_THAT(message_of(well_sorted(fx.voc, f)),
                 Catch::Matchers::ContainsSubstring("used as a relation"));
    Formula g = f_eq(Term::app(fx.r, {Term::constant(fx.c)}), Term::constant(fx.c));
    REQUIRE_THAT(message_of(well_sorted(fx.voc, g)),
                 Catch::Matchers::ContainsSubstring("used as a function"));
  }
  SECTION("primed immutable occurrence") {
    Formula f = f_rel(fx.s, {Term::constant(fx.c)}, /*primed=*/true);
    REQUIRE_THAT(message_of(well_sorted(fx.voc, f)),
                 Catch::Matchers::ContainsSubstring("primed occurrence of immutable symbol 's'"));
  }
  SECTION("sort clash across equality") {
    Vocabulary voc = fx.voc;
    SortId other = voc.add_sort("other");
    SymId d = voc.add_constant("d", other, false);
    Formula f = f_eq(Term::constant(fx.c), Term::constant(d));
    REQUIRE_THAT(message_of(well_sorted(voc, f)),
                 Catch::Matchers::ContainsSubstring("equality between different sorts"));
  }
}

TEST_CASE("complexity measures on hand-built formulas") {
  Fixture fx;
  Formula a = fx.rx(), b = fx.sx();
  auto closed = [&](Formula f) { return f_forall({{"x", fx.elem}}, std::move(f)); };

  SECTION("quantifier count is the number of bound variables as written") {
    REQUIRE(metric_quantifiers(a) == 0);
    REQUIRE(metric_quantifiers(closed(a)) == 1);
    Formula f = f_forall({{"x", fx.elem}, {"y", fx.elem}}, f_exists({{"z", fx.elem}}, a));
    REQUIRE(metric_quantifiers(f) == 3);
  }
  SECTION("boolean weight: n-ary and/or cost n-1, ->/<-> cost 1, ! is free") {
    REQUIRE(metric_boolean(a) == 0);
    REQUIRE(metric_boolean(f_not(a)) == 0);
    REQUIRE(metric_boolean(f_and({a, b, a})) == 2);
    REQUIRE(metric_boolean(f_implies(a, b)) == 1);
    REQUIRE(metric_boolean(f_iff(a, b)) == 1);
    REQUIRE(metric_boolean(f_implies(f_and({a, b, a}), f_or(a, b))) == 4);
  }
  SECTION("alternations count polarity switches in the NNF") {
    Formula ax = f_forall({{"x", fx.elem}}, a);
    Formula ex = f_exists({{"x", fx.elem}}, a);
    REQUIRE(metric_alternations(ax) == 0);
    REQUIRE(metric_alternations(f_forall({{"x", fx.elem}}, f_exists({{"y", fx.elem}}, a))) == 1);
    // Parallel branches do not alternate with each other.
    REQUIRE(metric_alternations(f_and(ax, ex)) == 0);
    // Negation flips the inner quantifier: forall x. !(exists y. ...) has none.
    REQUIRE(metric_alternations(f_forall({{"x", fx.elem}}, f_not(ex))) == 0);
    // An implication's antecedent is negated: forall inside it flips to exists.
    Formula f = f_forall({{"x", fx.elem}}, f_implies(ax, a));
    REQUIRE(metric_alternations(f) == 1);
  }
  SECTION("clausal means the prenex matrix is a disjunction of literals") {
    REQUIRE(metrics(closed(f_or(f_not(a), b))).clausal);
    REQUIRE(metrics(closed(f_implies(a, b))).clausal);  // rewrites to a clause
    REQUIRE_FALSE(metrics(closed(f_and(a, b))).clausal);
    REQUIRE_FALSE(metrics(closed(f_or(a, f_and(a, b)))).clausal);
    REQUIRE(metrics(f_true()).clausal);
    // Quantifiers inside do not matter: prefix is stripped first.
    Formula f = f_forall({{"x", fx.elem}}, f_or(f_not(a), f_exists({{"y", fx.elem}}, b)));
    REQUIRE(metrics(f).clausal);
    REQUIRE(metrics(f).alternations == 1);  // clausal with an alternation
  }
  SECTION("the NNF checker used by property tests agrees on samples") {
    REQUIRE(in_nnf(nnf(f_iff(a, b))));
    REQUIRE_FALSE(in_nnf(f_implies(a, b)));
    REQUIRE_FALSE(in_nnf(f_not(f_not(a))));
  }
}
