#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>

#include <hornet/check.hpp>
#include <hornet/diagnostics.hpp>
#include <hornet/frontend.hpp>
#include <hornet/lra.hpp>

#include "support/gen.hpp"

using namespace hornet;

namespace {

ParseError capture(const std::string& text, SourceFormat format) {
  try {
    parse_system(text, format);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error from: ", text);
  return ParseError("unreachable", 0, 0);
}

bool equivalent(const DNFFormula& f, const DNFFormula& g) {
  for (const auto& d : f.disjuncts())
    if (!check_valid(d, g).valid) return false;
  for (const auto& d : g.disjuncts())
    if (!check_valid(d, f).valid) return false;
  return true;
}

}  // namespace

TEST_CASE("native chained example parses structurally") {
  const ClauseSystem sys = parse_system(R"(
# The running three clause example.
p(X) :- X >= 10.
q(V, W) :- p(U), W = U + V.
Z >= Y :- q(Y, Z), Y =< 0.
)",
                                        SourceFormat::Native);

  REQUIRE(sys.predicates.size() == 2);
  CHECK(sys.predicates[0].name == "p");
  CHECK(sys.predicates[0].arity == 1);
  CHECK(sys.predicates[1].name == "q");
  CHECK(sys.predicates[1].arity == 2);

  REQUIRE(sys.clauses.size() == 3);
  CHECK(sys.clauses[0].body_atoms.empty());
  CHECK(sys.clauses[0].has_atom_head());
  CHECK(sys.clauses[1].body_atoms.size() == 1);
  CHECK(sys.clauses[1].body_constraint.size() == 1);
  CHECK(sys.clauses[2].is_query());
  CHECK(sys.clauses[2].body_atoms.size() == 1);
  CHECK(sys.wf_conditions.empty());
  CHECK_NOTHROW(sys.validate());
}

TEST_CASE("native grammar coverage") {
  SUBCASE("wf declarations") {
    const ClauseSystem sys = parse_system(
        "r(X, Y) :- X >= 0, Y =< X - 1.\nX >= 0 :- r(X, Y).\nwf(r(S, T)).",
        SourceFormat::Native);
    REQUIRE(sys.wf_conditions.size() == 1);
    CHECK(sys.wf_conditions[0].predicate.name == "r");
  }
  SUBCASE("false heads and true literals") {
    const ClauseSystem sys = parse_system(
        "p(X) :- true, X >= 0.\nfalse :- p(X), X >= 1.", SourceFormat::Native);
    REQUIRE(sys.clauses.size() == 2);
    CHECK(sys.clauses[1].is_query());
    CHECK(sys.clauses[1].head_formula().is_false());
  }
  SUBCASE("disjunctive bodies split into separate clauses") {
    const ClauseSystem sys =
        parse_system("p(X) :- (X >= 1 ; X =< 0).", SourceFormat::Native);
    CHECK(sys.clauses.size() == 2);
  }
  SUBCASE("false bodies survive as one vacuous clause") {
    const ClauseSystem sys = parse_system("p(X) :- false, X = X.", SourceFormat::Native);
    REQUIRE(sys.clauses.size() == 1);
    CHECK(sys.clauses[0].body_constraint.has_constant_false());
  }
  SUBCASE("argument terms are flattened into body equalities") {
    const ClauseSystem sys = parse_system("p(X + 1) :- X >= 0.", SourceFormat::Native);
    REQUIRE(sys.clauses.size() == 1);
    CHECK(sys.clauses[0].body_constraint.size() == 2);
    CHECK_NOTHROW(sys.validate());
  }
  SUBCASE("repeated argument variables are flattened") {
    const ClauseSystem sys = parse_system("p(X, X) :- X >= 0.", SourceFormat::Native);
    REQUIRE(sys.clauses.size() == 1);
    const auto& args = sys.clauses[0].head_atom().args;
    CHECK(args[0] != args[1]);
    CHECK_NOTHROW(sys.validate());
  }
  SUBCASE("anonymous variables are pairwise fresh") {
    const ClauseSystem sys =
        parse_system("p(X) :- q(_, _), X >= 0.\nq(A, B) :- A >= B.", SourceFormat::Native);
    const auto& atom = sys.clauses[0].body_atoms[0];
    CHECK(atom.args[0] != atom.args[1]);
  }
  SUBCASE("primed variable names parse") {
    const ClauseSystem sys = parse_system("p(X, X') :- X' = X + 1.", SourceFormat::Native);
    CHECK(sys.clauses.size() == 1);
  }
  SUBCASE("rational and negative literals") {
    const ClauseSystem sys =
        parse_system("p(X) :- X >= 1/2, X =< -3, X > -1/4.", SourceFormat::Native);
    CHECK(sys.clauses[0].body_constraint.size() == 3);
  }
  SUBCASE("nonlinear products are rejected") {
    const ParseError e = capture("p(X, Y) :- X * Y >= 1.", SourceFormat::Native);
    CHECK(std::string(e.what()).find("nonlinear") != std::string::npos);
  }
  SUBCASE("division by a variable is rejected") {
    CHECK_THROWS_AS(parse_system("p(X, Y) :- X / Y >= 1.", SourceFormat::Native), ParseError);
  }
  SUBCASE("division by zero is rejected") {
    CHECK_THROWS_AS(parse_system("p(X) :- X / 0 >= 1.", SourceFormat::Native), ParseError);
  }
  SUBCASE("arity zero atoms") {
    const ClauseSystem sys = parse_system("flag :- 1 >= 0.\nfalse :- flag.",
                                          SourceFormat::Native);
    REQUIRE(sys.predicates.size() == 1);
    CHECK(sys.predicates[0].arity == 0);
  }
}

TEST_CASE("native error diagnostics carry positions and hints") {
  SUBCASE("the sign is written =< here") {
    const ParseError e = capture("p(X) :- X <= 0.", SourceFormat::Native);
    CHECK(std::string(e.what()).find("=<") != std::string::npos);
    CHECK(e.line() == 1);
    CHECK(e.column() > 8);
  }
  SUBCASE("decimals are rejected with a fraction hint") {
    const ParseError e = capture("p(X) :- X >= 1.5.", SourceFormat::Native);
    CHECK(std::string(e.what()).find("fraction") != std::string::npos);
  }
  SUBCASE("missing final period") {
    CHECK_THROWS_AS(parse_system("p(X) :- X >= 0", SourceFormat::Native), ParseError);
  }
  SUBCASE("arity conflicts name the predicate") {
    const ParseError e =
        capture("p(X) :- X >= 0.\np(X, Y) :- X >= Y.", SourceFormat::Native);
    CHECK(std::string(e.what()).find("arity") != std::string::npos);
    CHECK(e.line() == 2);
  }
  SUBCASE("head variables must occur in the body") {
    const ParseError e = capture("Y >= 0 :- X >= 0.", SourceFormat::Native);
    CHECK(std::string(e.what()).find("Y") != std::string::npos);
  }
  SUBCASE("wf on an unknown predicate") {
    CHECK_THROWS_AS(parse_system("wf(r(S, T)).", SourceFormat::Native), ParseError);
  }
  SUBCASE("wf with odd arity") {
    const ParseError e = capture(
        "r(X, Y, Z) :- X >= Y + Z.\nX >= 0 :- r(X, Y, Z).\nwf(r(A, B, C)).",
        SourceFormat::Native);
    CHECK(std::string(e.what()).find("even") != std::string::npos);
  }
  SUBCASE("duplicate wf declarations") {
    CHECK_THROWS_AS(
        parse_system("r(X, Y) :- X >= Y.\nX >= 0 :- r(X, Y).\nwf(r(S, T)).\nwf(r(S, T)).",
                     SourceFormat::Native),
        ParseError);
  }
  SUBCASE("reserved names cannot head clauses") {
    CHECK_THROWS_AS(parse_system("wf(X) :- X >= 0.", SourceFormat::Native), ParseError);
  }
  SUBCASE("implication arrows are not part of the grammar") {
    CHECK_THROWS_AS(parse_system("q(Y,Z), Y =< 0 -> Z >= Y.", SourceFormat::Native),
                    ParseError);
  }
  SUBCASE("unknown tokens are rejected") {
    CHECK_THROWS_AS(parse_system("p(X) :- X >= 0 & X =< 1.", SourceFormat::Native),
                    ParseError);
  }
}

TEST_CASE("smtlib system parses") {
  const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun p (Real) Bool)
(declare-fun q (Real Real) Bool)
(assert (forall ((x Real)) (=> (>= x 10) (p x))))
(assert (forall ((u Real) (v Real) (w Real))
  (=> (and (p u) (= w (+ u v))) (q v w))))
(assert (forall ((y Real) (z Real)) (=> (and (q y z) (<= y 0)) (>= z y))))
(check-sat)
)",
                                        SourceFormat::Smtlib2);
  REQUIRE(sys.predicates.size() == 2);
  REQUIRE(sys.clauses.size() == 3);
  CHECK(sys.clauses[2].is_query());
  CHECK_NOTHROW(sys.validate());
}

TEST_CASE("smtlib grammar coverage") {
  SUBCASE("declare-wf extension") {
    const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun r (Real Real) Bool)
(assert (forall ((x Real) (y Real)) (=> (and (>= x 0) (<= y (- x 1))) (r x y))))
(assert (forall ((x Real) (y Real)) (=> (r x y) (>= x 0))))
(declare-wf r)
)",
                                          SourceFormat::Smtlib2);
    REQUIRE(sys.wf_conditions.size() == 1);
    CHECK(sys.wf_conditions[0].predicate.name == "r");
  }
  SUBCASE("nested foralls merge") {
    const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun p (Real) Bool)
(assert (forall ((x Real)) (forall ((y Real)) (=> (>= x y) (p x)))))
)",
                                          SourceFormat::Smtlib2);
    CHECK(sys.clauses.size() == 1);
  }
  SUBCASE("or bodies split into clauses") {
    const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun p (Real) Bool)
(assert (forall ((x Real)) (=> (or (>= x 1) (<= x 0)) (p x))))
)",
                                          SourceFormat::Smtlib2);
    CHECK(sys.clauses.size() == 2);
  }
  SUBCASE("not and negative rationals") {
    const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun p (Real) Bool)
(assert (forall ((x Real)) (=> (not (< x (/ (- 1) 2))) (p x))))
)",
                                          SourceFormat::Smtlib2);
    REQUIRE(sys.clauses.size() == 1);
    // not(x < -1/2) is x >= -1/2.
    const DNFFormula expected = parse_formula(
        "X >= -1/2", {{"X", sys.clauses[0].head_atom().args[0]}});
    CHECK(equivalent(DNFFormula::of(sys.clauses[0].body_constraint), expected));
  }
  SUBCASE("asserts without quantifiers or implications") {
    const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun p (Real) Bool)
(assert (p 3))
)",
                                          SourceFormat::Smtlib2);
    REQUIRE(sys.clauses.size() == 1);
    CHECK(sys.clauses[0].has_atom_head());
    CHECK(sys.clauses[0].body_constraint.size() == 1);
  }
  SUBCASE("false heads") {
    const ClauseSystem sys = parse_system(R"(
(set-logic HORN)
(declare-fun p (Real) Bool)
(assert (forall ((x Real)) (=> (p x) false)))
)",
                                          SourceFormat::Smtlib2);
    CHECK(sys.clauses[0].is_query());
    CHECK(sys.clauses[0].head_formula().is_false());
  }
}

TEST_CASE("smtlib error diagnostics") {
  SUBCASE("set-logic is optional but checked when present") {
    CHECK_NOTHROW(parse_system("(declare-fun p (Real) Bool)", SourceFormat::Smtlib2));
  }
  SUBCASE("wrong logic") {
    const ParseError e = capture("(set-logic QF_LRA)", SourceFormat::Smtlib2);
    CHECK(std::string(e.what()).find("HORN") != std::string::npos);
  }
  SUBCASE("integer sorts are rejected") {
    CHECK_THROWS_AS(parse_system("(set-logic HORN)\n(declare-fun p (Int) Bool)",
                                 SourceFormat::Smtlib2),
                    ParseError);
  }
  SUBCASE("non bool return sorts are rejected") {
    CHECK_THROWS_AS(parse_system("(set-logic HORN)\n(declare-fun p (Real) Real)",
                                 SourceFormat::Smtlib2),
                    ParseError);
  }
  SUBCASE("decimal literals are rejected") {
    const ParseError e = capture(
        "(set-logic HORN)\n(declare-fun p (Real) Bool)\n"
        "(assert (forall ((x Real)) (=> (>= x 1.5) (p x))))",
        SourceFormat::Smtlib2);
    CHECK(std::string(e.what()).find("decimal") != std::string::npos);
  }
  SUBCASE("quoted symbols are rejected") {
    CHECK_THROWS_AS(parse_system("(set-logic HORN)\n(declare-fun |p q| (Real) Bool)",
                                 SourceFormat::Smtlib2),
                    ParseError);
  }
  SUBCASE("duplicate binders") {
    CHECK_THROWS_AS(
        parse_system("(set-logic HORN)\n(declare-fun p (Real) Bool)\n"
                     "(assert (forall ((x Real) (x Real)) (p x)))",
                     SourceFormat::Smtlib2),
        ParseError);
  }
  SUBCASE("arity mismatches") {
    const ParseError e = capture(
        "(set-logic HORN)\n(declare-fun p (Real Real) Bool)\n"
        "(assert (forall ((x Real)) (p x)))",
        SourceFormat::Smtlib2);
    CHECK(std::string(e.what()).find("takes") != std::string::npos);
  }
  SUBCASE("predicates may not occur inside terms") {
    CHECK_THROWS_AS(
        parse_system("(set-logic HORN)\n(declare-fun p (Real) Bool)\n"
                     "(assert (forall ((x Real)) (>= (p x) 0)))",
                     SourceFormat::Smtlib2),
        ParseError);
  }
  SUBCASE("unknown commands") {
    CHECK_THROWS_AS(parse_system("(set-logic HORN)\n(push 1)", SourceFormat::Smtlib2),
                    ParseError);
  }
  SUBCASE("declare-wf before declare-fun") {
    CHECK_THROWS_AS(parse_system("(set-logic HORN)\n(declare-wf r)", SourceFormat::Smtlib2),
                    ParseError);
  }
}

TEST_CASE("format inference follows the extension") {
  CHECK(infer_format("a/b/sys.chc") == SourceFormat::Native);
  CHECK(infer_format("sys.smt2") == SourceFormat::Smtlib2);
  CHECK_FALSE(infer_format("sys.txt").has_value());
  CHECK_FALSE(infer_format("chc").has_value());
}

TEST_CASE("parsing a rendered system preserves its structure") {
  testsupport::Rng rng(1717);
  for (int round = 0; round < 60; ++round) {
    const ClauseSystem sys = testsupport::random_system(rng, 6, 12, 5, 10);
    for (const SourceFormat format : {SourceFormat::Native, SourceFormat::Smtlib2}) {
      const std::string text = render_system(sys, format);
      const ClauseSystem back = parse_system(text, format);
      CHECK_NOTHROW(back.validate());

      REQUIRE(back.clauses.size() == sys.clauses.size());
      std::multiset<std::pair<std::string, int>> before, after;
      for (const auto& p : sys.predicates) before.insert({p.name, p.arity});
      for (const auto& p : back.predicates) after.insert({p.name, p.arity});
      CHECK(before == after);
      for (std::size_t i = 0; i < sys.clauses.size(); ++i) {
        const HornClause& a = sys.clauses[i];
        const HornClause& b = back.clauses[i];
        CHECK(a.has_atom_head() == b.has_atom_head());
        REQUIRE(a.body_atoms.size() == b.body_atoms.size());
        for (std::size_t j = 0; j < a.body_atoms.size(); ++j) {
          CHECK(a.body_atoms[j].predicate.name == b.body_atoms[j].predicate.name);
        }
        if (a.has_atom_head()) {
          CHECK(a.head_atom().predicate.name == b.head_atom().predicate.name);
        }
      }

      // Parsing the same text again renders byte identically.
      CHECK(render_system(parse_system(text, format), format) == render_system(back, format));
    }
  }
}

TEST_CASE("parsing a rendered system preserves its meaning") {
  // Clause variables are renumbered by the parse, so rendered constraints may
  // come back rescaled. The least solution is expressed over the stable
  // formal parameters and acts as a renaming-independent fingerprint.
  testsupport::Rng rng(2024);
  int compared = 0;
  for (int round = 0; round < 30; ++round) {
    const ClauseSystem sys = testsupport::random_system(rng, 5, 9, 4, 8);
    Solution before;
    try {
      before = least_solution(sys);
    } catch (const ResourceLimitError&) {
      continue;
    }
    for (const SourceFormat format : {SourceFormat::Native, SourceFormat::Smtlib2}) {
      const ClauseSystem back = parse_system(render_system(sys, format), format);
      const Solution after = least_solution(back);
      REQUIRE(after.size() == before.size());
      for (const auto& [pred, formula] : before.entries()) {
        const PredicateSymbol* twin = back.find_predicate(pred.name);
        REQUIRE(twin != nullptr);
        CHECK(equivalent(formula, after.get(*twin)));
      }
      CHECK(oracle_solvable(sys) == oracle_solvable(back));
      ++compared;
    }
  }
  CHECK(compared >= 30);
}

TEST_CASE("wf conditions round trip through both formats") {
  const ClauseSystem sys = parse_system(
      "r(X, Y) :- X >= 0, Y =< X - 1.\nX >= 0 :- r(X, Y).\nwf(r(S, T)).",
      SourceFormat::Native);
  for (const SourceFormat format : {SourceFormat::Native, SourceFormat::Smtlib2}) {
    const ClauseSystem back = parse_system(render_system(sys, format), format);
    REQUIRE(back.wf_conditions.size() == 1);
    CHECK(back.wf_conditions[0].predicate.name == "r");
  }
}

TEST_CASE("solutions round trip exactly over formal parameters") {
  testsupport::Rng rng(1718);
  for (int round = 0; round < 40; ++round) {
    const ClauseSystem sys = testsupport::random_system(rng, 5, 10, 4, 8);
    Solution sol;
    for (const auto& p : sys.predicates) {
      DNFFormula f;
      for (int d = testsupport::draw(rng, 1, 2); d > 0; --d)
        f.push_back(testsupport::random_conjunction(rng, formal_parameters(p.arity),
                                                    testsupport::draw(rng, 0, 2), 8));
      f.normalize();
      sol.set(p, f);
    }
    for (const SourceFormat format : {SourceFormat::Native, SourceFormat::Smtlib2}) {
      const std::string text = render_solution(sol, format);
      const Solution back = parse_solution(text, format, sys);
      REQUIRE(back.size() == sol.size());
      for (const auto& [p, f] : sol.entries()) CHECK(back.get(p) == f);
    }
  }
}

TEST_CASE("solution parsing rejects malformed entries") {
  const ClauseSystem sys =
      parse_system("p(X) :- X >= 0.\nX >= 0 :- p(X).", SourceFormat::Native);
  CHECK_THROWS_AS(parse_solution("p(X1) = .", SourceFormat::Native, sys), ParseError);
  CHECK_THROWS_AS(parse_solution("ghost(X1) = X1 >= 0.", SourceFormat::Native, sys),
                  ParseError);
  CHECK_THROWS_AS(parse_solution("p(X1, X2) = X1 >= 0.", SourceFormat::Native, sys),
                  ParseError);
  CHECK_THROWS_AS(
      parse_solution("p(X1) = X1 >= 0.\np(X1) = X1 >= 1.", SourceFormat::Native, sys),
      ParseError);
  CHECK_THROWS_AS(parse_solution("p(X1) = X2 >= 0.", SourceFormat::Native, sys), ParseError);
}

TEST_CASE("assignments render one binding per line") {
  const std::string text = render_assignment(
      {{Variable{0, "X"}, Rational(1, 2)}, {Variable{1, "Y"}, Rational(-3)}});
  CHECK(text == "X = 1/2\nY = -3\n");
}

TEST_CASE("parse_formula uses the caller environment strictly") {
  const Variable a{0, "A"}, b{1, "B"};
  const DNFFormula f = parse_formula("A >= B + 1 ; A = B", {{"A", a}, {"B", b}});
  CHECK(f.disjuncts().size() == 2);
  CHECK_THROWS_AS(parse_formula("C >= 0", {{"A", a}}), ParseError);
  CHECK_THROWS_AS(parse_formula("A >= 0 extra", {{"A", a}}), ParseError);
}
