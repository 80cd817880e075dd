#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hornet/check.hpp>
#include <hornet/frontend.hpp>
#include <hornet/graph.hpp>
#include <hornet/lra.hpp>
#include <hornet/unfold.hpp>
#include <hornet/wf.hpp>

#include "support/gen.hpp"

using namespace hornet;

namespace {

Variable var(int i, const char* name) { return Variable{i, name}; }

LinearTerm term_of(std::initializer_list<std::pair<Variable, int>> coeffs, int constant) {
  LinearTerm t{Rational(constant)};
  for (const auto& [v, c] : coeffs) t.add(v, Rational(c));
  return t;
}

AtomicConstraint make(std::initializer_list<std::pair<Variable, int>> coeffs, int constant,
                      Relation rel) {
  return normalize_constraint({term_of(coeffs, constant), rel});
}

bool equivalent(const DNFFormula& f, const DNFFormula& g) {
  for (const auto& d : f.disjuncts())
    if (!check_valid(d, g).valid) return false;
  for (const auto& d : g.disjuncts())
    if (!check_valid(d, f).valid) return false;
  return true;
}

DNFFormula formula_over_formals(const std::string& text, int arity) {
  std::map<std::string, Variable> env;
  for (int i = 0; i < arity; ++i) env["X" + std::to_string(i + 1)] = formal_parameter(i);
  return parse_formula(text, env);
}

GroundImplication implication_of(std::vector<AtomicConstraint> body, Atom head) {
  GroundImplication gi;
  for (auto& c : body) gi.body.push_back({std::move(c), ConstraintTag{0, {}}});
  gi.head_atom = std::move(head);
  gi.head_formula = DNFFormula::top();
  return gi;
}

// Entailments a witness must satisfy over the relation it covers.
void check_witness_valid(const DNFFormula& rel, int arity, const RankingWitness& w) {
  REQUIRE(w.decrease > 0);
  const DNFFormula head = DNFFormula::of(w.head_formula(arity));
  for (const auto& d : rel.disjuncts()) {
    Conjunction renamed;
    for (std::size_t i = 0; i < d.constraints().size(); ++i) renamed.push_back(d.constraints()[i]);
    CHECK(check_valid(renamed, head).valid);
  }
}

}  // namespace

TEST_CASE("projection onto the wf head arguments") {
  const Variable a = var(10, "A"), b = var(11, "B"), c = var(12, "C");
  const GroundImplication gi = implication_of(
      {make({{a, 1}}, -10, Relation::Ge), make({{c, 1}, {a, -1}, {b, -1}}, 0, Relation::Eq),
       make({{b, -1}}, 0, Relation::Ge)},
      Atom{PredicateSymbol{"r", 2}, {b, c}});

  const DNFFormula proj = project_onto_head(gi);
  CHECK(equivalent(proj, formula_over_formals("X1 =< 0, X2 >= X1 + 10", 2)));

  std::set<Variable> vars;
  proj.collect_variables(vars);
  for (const auto& v : vars) CHECK(v.index < 2);
}

TEST_CASE("projection of an argument-only body is the body itself") {
  const Variable s = var(20, "S"), t = var(21, "T");
  const GroundImplication gi =
      implication_of({make({{s, -1}}, 0, Relation::Ge), make({{t, 1}, {s, -1}}, -1, Relation::Ge)},
                     Atom{PredicateSymbol{"r", 2}, {s, t}});
  const DNFFormula proj = project_onto_head(gi);
  CHECK(equivalent(proj, formula_over_formals("X1 =< 0, X2 >= X1 + 1", 2)));
}

TEST_CASE("projection of an infeasible body is false") {
  const Variable s = var(30, "S"), x = var(31, "X");
  Conjunction body;
  body.push_back(make({{x, 1}}, -1, Relation::Ge));
  body.push_back(make({{x, -1}}, 0, Relation::Ge));
  REQUIRE_FALSE(is_sat(check_sat(body)));

  const GroundImplication gi = implication_of(
      {body.constraints()[0], body.constraints()[1]}, Atom{PredicateSymbol{"r", 2}, {s, x}});
  CHECK(project_onto_head(gi).is_false());
}

TEST_CASE("ranking synthesis on the projected chain relation") {
  const DNFFormula rel = formula_over_formals("X1 =< 0, X2 >= X1 + 10", 2);
  const auto w = synthesize_ranking(rel, 2);
  REQUIRE(w.has_value());
  check_witness_valid(rel, 2, *w);

  // Canonical head: bound s <= 0 and decrease t >= s + 1.
  CHECK(equivalent(DNFFormula::of(w->head_formula(2)),
                   formula_over_formals("X1 =< 0, X2 >= X1 + 1", 2)));
  CHECK(w->decrease == 1);
}

TEST_CASE("stationary relations admit no linear ranking") {
  CHECK_FALSE(synthesize_ranking(formula_over_formals("X2 = X1", 2), 2).has_value());
  CHECK_FALSE(synthesize_ranking(formula_over_formals("X2 >= X1", 2), 2).has_value());
  CHECK_FALSE(synthesize_ranking(DNFFormula::top(), 2).has_value());
}

TEST_CASE("decreasing relation normalizes to the unit witness") {
  const DNFFormula rel = formula_over_formals("X1 >= 0, X2 =< X1 - 2", 2);
  const auto w = synthesize_ranking(rel, 2);
  REQUIRE(w.has_value());
  check_witness_valid(rel, 2, *w);
  REQUIRE(w->coefficients.size() == 1);
  CHECK(w->coefficients[0] == 1);
  CHECK(w->bound == 0);
  CHECK(w->decrease == 1);
}

TEST_CASE("unbounded decrease admits no witness") {
  // Decreasing but unbounded below: infinite chains exist.
  CHECK_FALSE(synthesize_ranking(formula_over_formals("X2 =< X1 - 1", 2), 2).has_value());
}

TEST_CASE("disjunctive relations need one global witness") {
  const DNFFormula both = parse_formula(
      "(X1 >= 0, X2 =< X1 - 1) ; (X1 >= 0, X2 =< X1 - 3)",
      {{"X1", formal_parameter(0)}, {"X2", formal_parameter(1)}});
  const auto w = synthesize_ranking(both, 2);
  REQUIRE(w.has_value());
  check_witness_valid(both, 2, *w);

  // One disjunct well-founded, the other stationary: no global witness.
  const DNFFormula mixed = parse_formula(
      "(X1 >= 0, X2 =< X1 - 1) ; (X2 = X1)",
      {{"X1", formal_parameter(0)}, {"X2", formal_parameter(1)}});
  CHECK_FALSE(synthesize_ranking(mixed, 2).has_value());
}

TEST_CASE("multi dimensional pre states") {
  const DNFFormula rel = parse_formula(
      "X1 >= 0, X3 =< X1 - 1, X4 = X2",
      {{"X1", formal_parameter(0)},
       {"X2", formal_parameter(1)},
       {"X3", formal_parameter(2)},
       {"X4", formal_parameter(3)}});
  const auto w = synthesize_ranking(rel, 4);
  REQUIRE(w.has_value());
  CHECK(w->coefficients.size() == 2);
  check_witness_valid(rel, 4, *w);
}

TEST_CASE("empty relation is vacuously well founded") {
  const auto w = synthesize_ranking(DNFFormula::bottom(), 2);
  REQUIRE(w.has_value());
  CHECK(w->decrease > 0);
}

TEST_CASE("witness chains respect the ranking bound") {
  testsupport::Rng rng(909);
  const Variable pre = formal_parameter(0), post = formal_parameter(1);

  for (int round = 0; round < 25; ++round) {
    // Known terminating by construction: post <= pre - c with c >= 1, plus
    // a lower bound on pre.
    const int c = testsupport::draw(rng, 1, 4);
    Conjunction d;
    d.push_back(make({{pre, 1}, {post, -1}}, -c, Relation::Ge));
    d.push_back(make({{pre, 1}}, testsupport::draw(rng, 0, 5), Relation::Ge));
    for (int noise = testsupport::draw(rng, 0, 2); noise > 0; --noise) {
      const AtomicConstraint extra =
          testsupport::random_constraint(rng, {pre, post}, 6);
      Conjunction probe = d;
      probe.push_back(extra);
      if (is_sat(check_sat(probe))) d = probe;
    }

    const DNFFormula rel = DNFFormula::of(d);
    const auto w = synthesize_ranking(rel, 2);
    REQUIRE(w.has_value());
    check_witness_valid(rel, 2, *w);

    for (int start_round = 0; start_round < 10; ++start_round) {
      Rational x = testsupport::random_rational(rng, 10);
      const Rational f0 = w->pre_term(2).evaluate({{pre, x}, {post, Rational(0)}});
      long long steps = 0;
      while (true) {
        Conjunction step = d;
        LinearTerm pin = LinearTerm::variable(pre);
        pin.add_constant(-x);
        step.push_back(normalize_constraint({pin, Relation::Eq}));
        const SatResult r = check_sat(step);
        if (!is_sat(r)) break;
        x = std::get<Model>(r).values.at(post);
        ++steps;
        REQUIRE(steps < 1000);
      }
      if (steps > 0) {
        const Rational budget = (f0 - w->bound) / w->decrease + 1;
        CHECK(Rational(steps) <= budget);
      }
    }
  }
}

TEST_CASE("wf elimination rewrites the chained example") {
  const ClauseSystem sys = parse_system(R"(
p(X) :- X >= 10.
q(V, W) :- p(U), W = U + V.
r(Y, Z) :- q(Y, Z), Y =< 0.
wf(r(S, T)).
)",
                                        SourceFormat::Native);
  const WfElimination elim = eliminate_wf(sys);
  REQUIRE(elim.system.has_value());
  const ClauseSystem& out = *elim.system;

  CHECK(out.wf_conditions.empty());
  REQUIRE(out.clauses.size() == 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(out.clauses[static_cast<std::size_t>(i)].body_atoms.size() ==
          sys.clauses[static_cast<std::size_t>(i)].body_atoms.size());
    CHECK(out.clauses[static_cast<std::size_t>(i)].body_constraint ==
          sys.clauses[static_cast<std::size_t>(i)].body_constraint);
  }

  const HornClause& replacement = out.clauses[3];
  REQUIRE(replacement.is_query());
  REQUIRE(replacement.body_atoms.size() == 1);
  CHECK(replacement.body_atoms[0].predicate.name == "r");

  // Replacement head, rewritten to formals: s <= 0 and t >= s + 1.
  Renaming to_formals;
  for (std::size_t i = 0; i < replacement.body_atoms[0].args.size(); ++i)
    to_formals[replacement.body_atoms[0].args[i]] = formal_parameter(static_cast<int>(i));
  CHECK(equivalent(replacement.head_formula().rename(to_formals),
                   formula_over_formals("X1 =< 0, X2 >= X1 + 1", 2)));
}

TEST_CASE("systems without wf conditions pass through unchanged") {
  const ClauseSystem sys = parse_system("p(X) :- X >= 0.\nX >= 0 :- p(X).",
                                        SourceFormat::Native);
  const WfElimination elim = eliminate_wf(sys);
  REQUIRE(elim.system.has_value());
  CHECK(elim.system->clauses.size() == sys.clauses.size());
  CHECK(render_system(*elim.system, SourceFormat::Native) ==
        render_system(sys, SourceFormat::Native));
}

TEST_CASE("failed synthesis reports the predicate") {
  const ClauseSystem sys = parse_system(R"(
r(X, Y) :- Y = X.
X >= 0 :- r(X, Y), X >= 0.
wf(r(S, T)).
)",
                                        SourceFormat::Native);
  const WfElimination elim = eliminate_wf(sys);
  CHECK_FALSE(elim.system.has_value());
  REQUIRE(elim.failed.has_value());
  CHECK(elim.failed->name == "r");
  CHECK_FALSE(elim.reason.empty());
}

TEST_CASE("derivation projections are unioned before synthesis") {
  // Each derivation alone admits a witness, and so does their union.
  const ClauseSystem sys = parse_system(R"(
r(X, Y) :- X >= 0, Y =< X - 1.
r(X, Y) :- X >= 2, Y =< X - 3.
X >= -100 :- r(X, Y).
wf(r(S, T)).
)",
                                        SourceFormat::Native);
  const WfElimination elim = eliminate_wf(sys);
  REQUIRE(elim.system.has_value());
  REQUIRE(elim.system->clauses.size() == 4);
  const HornClause& replacement = elim.system->clauses[3];
  REQUIRE(replacement.is_query());

  // The union of both bodies entails the replacement head.
  Renaming to_formals;
  for (std::size_t i = 0; i < replacement.body_atoms[0].args.size(); ++i)
    to_formals[replacement.body_atoms[0].args[i]] = formal_parameter(static_cast<int>(i));
  const DNFFormula head = replacement.head_formula().rename(to_formals);
  const DNFFormula uni = parse_formula(
      "(X1 >= 0, X2 =< X1 - 1) ; (X1 >= 2, X2 =< X1 - 3)",
      {{"X1", formal_parameter(0)}, {"X2", formal_parameter(1)}});
  for (const auto& dj : uni.disjuncts()) CHECK(check_valid(dj, head).valid);
}
