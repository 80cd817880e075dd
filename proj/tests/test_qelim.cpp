#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hornet/lra.hpp>
#include <hornet/qelim.hpp>
#include <hornet/types.hpp>

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

// f with the sampled values pinned by equalities.
Conjunction pin(const Conjunction& f, const Assignment& point) {
  Conjunction out = f;
  for (const auto& [v, value] : point) {
    LinearTerm t = LinearTerm::variable(v);
    t.add_constant(-value);
    out.push_back(normalize_constraint({t, Relation::Eq}));
  }
  return out;
}

}  // namespace

TEST_CASE("projection of the chained interpolation body") {
  const Variable a = var(0, "A"), b = var(1, "B"), c = var(2, "C");
  Conjunction body;
  body.push_back(make({{a, 1}}, -10, Relation::Ge));
  body.push_back(make({{c, 1}, {a, -1}, {b, -1}}, 0, Relation::Eq));
  body.push_back(make({{b, -1}}, 0, Relation::Ge));

  const DNFFormula result = eliminate(DNFFormula::of(body), {a});

  Conjunction expected;
  expected.push_back(make({{c, 1}, {b, -1}}, -10, Relation::Ge));
  expected.push_back(make({{b, -1}}, 0, Relation::Ge));
  CHECK(equivalent(result, DNFFormula::of(expected)));

  std::set<Variable> left;
  result.collect_variables(left);
  CHECK(left.count(a) == 0);

  REQUIRE(result.disjuncts().size() == 1);
  CHECK(result.disjuncts()[0].size() <= 2);
}

TEST_CASE("equality substitution resolves chains") {
  const Variable x = var(0, "X"), y = var(1, "Y"), z = var(2, "Z");
  Conjunction body;
  body.push_back(make({{x, 1}, {y, -1}}, -1, Relation::Eq));
  body.push_back(make({{y, 1}, {z, -1}}, -1, Relation::Eq));
  body.push_back(make({{z, 1}}, 0, Relation::Ge));

  const DNFFormula result = eliminate(DNFFormula::of(body), {y, z});
  Conjunction expected;
  expected.push_back(make({{x, 1}}, -2, Relation::Ge));
  CHECK(equivalent(result, DNFFormula::of(expected)));
}

TEST_CASE("strictness propagates through combination") {
  const Variable x = var(0, "X"), a = var(1, "A"), b = var(2, "B");
  Conjunction body;
  body.push_back(make({{x, 1}, {a, -1}}, 0, Relation::Ge));
  body.push_back(make({{b, 1}, {x, -1}}, 0, Relation::Gt));

  const DNFFormula result = eliminate(DNFFormula::of(body), {x});
  Conjunction expected;
  expected.push_back(make({{b, 1}, {a, -1}}, 0, Relation::Gt));
  CHECK(equivalent(result, DNFFormula::of(expected)));
  REQUIRE(result.disjuncts().size() == 1);
  REQUIRE(result.disjuncts()[0].size() == 1);
  CHECK(result.disjuncts()[0].constraints()[0].relation == Relation::Gt);
}

TEST_CASE("eliminating every variable decides feasibility") {
  const Variable x = var(0, "X");

  Conjunction sat;
  sat.push_back(make({{x, 1}}, -1, Relation::Ge));
  CHECK(eliminate(DNFFormula::of(sat), {x}).is_true());

  Conjunction unsat;
  unsat.push_back(make({{x, 1}}, -1, Relation::Ge));
  unsat.push_back(make({{x, -1}}, 0, Relation::Ge));
  CHECK(eliminate(DNFFormula::of(unsat), {x}).is_false());
}

TEST_CASE("constant and vacuous inputs pass through") {
  const Variable x = var(0, "X");
  CHECK(eliminate(DNFFormula::top(), {x}).is_true());
  CHECK(eliminate(DNFFormula::bottom(), {x}).is_false());

  Conjunction noop;
  noop.push_back(make({{x, 1}}, 0, Relation::Ge));
  const DNFFormula same = eliminate(DNFFormula::of(noop), {});
  CHECK(equivalent(same, DNFFormula::of(noop)));
}

TEST_CASE("elimination distributes over disjuncts") {
  const Variable x = var(0, "X"), y = var(1, "Y");
  DNFFormula f;
  {
    Conjunction d1;
    d1.push_back(make({{y, 1}, {x, -1}}, 0, Relation::Ge));
    d1.push_back(make({{x, 1}}, -5, Relation::Ge));
    f.push_back(d1);
  }
  {
    Conjunction d2;
    d2.push_back(make({{y, 1}, {x, 1}}, 0, Relation::Eq));
    d2.push_back(make({{x, -1}}, -1, Relation::Ge));
    f.push_back(d2);
  }

  const DNFFormula result = eliminate(f, {x});

  DNFFormula expected;
  expected.push_back(Conjunction{{std::vector<AtomicConstraint>{make({{y, 1}}, -5, Relation::Ge)}}});
  expected.push_back(Conjunction{{std::vector<AtomicConstraint>{make({{y, 1}}, -1, Relation::Ge)}}});
  CHECK(equivalent(result, expected));
  std::set<Variable> left;
  result.collect_variables(left);
  CHECK(left.count(x) == 0);
}

TEST_CASE("sampling equivalence on random formulas") {
  testsupport::Rng rng(404);
  std::vector<Variable> vars;
  for (int i = 0; i < 5; ++i) vars.push_back(var(i, ("V" + std::to_string(i)).c_str()));

  for (int round = 0; round < 80; ++round) {
    DNFFormula f;
    for (int d = testsupport::draw(rng, 1, 2); d > 0; --d)
      f.push_back(testsupport::random_conjunction(rng, vars, testsupport::draw(rng, 1, 5), 8));

    std::set<Variable> victims;
    for (const auto& v : vars)
      if (testsupport::draw(rng, 0, 1)) victims.insert(v);

    const DNFFormula g = eliminate(f, victims);

    std::set<Variable> left;
    g.collect_variables(left);
    for (const auto& v : victims) CHECK(left.count(v) == 0);

    std::set<Variable> rest;
    for (const auto& v : vars)
      if (!victims.count(v)) rest.insert(v);

    for (int j = 0; j < 15; ++j) {
      const Assignment p = testsupport::random_point(rng, rest, 8);
      bool f_extendable = false;
      for (const auto& d : f.disjuncts())
        f_extendable = f_extendable || is_sat(check_sat(pin(d, p)));
      CHECK(g.evaluate(p) == f_extendable);
    }
  }
}

TEST_CASE("redundant constraints are dropped") {
  const Variable x = var(0, "X"), y = var(1, "Y");
  Conjunction body;
  body.push_back(make({{y, 1}, {x, -1}}, 0, Relation::Ge));
  body.push_back(make({{x, 1}}, -3, Relation::Ge));
  body.push_back(make({{x, 1}}, -1, Relation::Ge));

  const DNFFormula result = eliminate(DNFFormula::of(body), {x});
  REQUIRE(result.disjuncts().size() == 1);
  CHECK(result.disjuncts()[0].size() == 1);
  Conjunction expected;
  expected.push_back(make({{y, 1}}, -3, Relation::Ge));
  CHECK(equivalent(result, DNFFormula::of(expected)));
}

TEST_CASE("constraint cap aborts oversized eliminations") {
  // Six lower and six upper bounds on v through twelve distinct variables:
  // eliminating v multiplies them into 36 irredundant constraints.
  const Variable v = var(0, "V");
  Conjunction big;
  for (int i = 0; i < 6; ++i) {
    big.push_back(make({{v, 1}, {var(1 + i, "X"), -1}}, 0, Relation::Ge));
    big.push_back(make({{var(7 + i, "Y"), 1}, {v, -1}}, 0, Relation::Ge));
  }
  Limits tight;
  tight.max_constraints = 8;
  CHECK_THROWS_AS(eliminate(DNFFormula::of(big), {v}, tight), ResourceLimitError);
}
