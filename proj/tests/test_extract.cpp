#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include <hornet/check.hpp>
#include <hornet/extract.hpp>
#include <hornet/frontend.hpp>
#include <hornet/graph.hpp>
#include <hornet/lra.hpp>
#include <hornet/unfold.hpp>

#include "support/gen.hpp"

using namespace hornet;

namespace {

struct Pipeline {
  ClauseSystem sys;
  std::vector<UnfoldEntry> entries;
  std::vector<ValidityResult> validities;
  std::vector<ProofObligation> proofs;
  bool all_valid = true;
};

Pipeline run_pipeline(ClauseSystem sys) {
  Pipeline p;
  p.sys = std::move(sys);
  p.entries = unfold(p.sys, analyze(p.sys));
  p.validities.reserve(p.entries.size());
  for (const auto& e : p.entries) {
    p.validities.push_back(
        check_valid(e.implication.body_conjunction(), e.implication.head_formula));
    p.all_valid = p.all_valid && p.validities.back().valid;
  }
  if (p.all_valid)
    for (std::size_t i = 0; i < p.entries.size(); ++i)
      p.proofs.push_back({&p.entries[i], &p.validities[i]});
  return p;
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
  for (int i = 0; i < arity; ++i) {
    const Variable v = formal_parameter(i);
    env["X" + std::to_string(i + 1)] = v;
  }
  return parse_formula(text, env);
}

}  // namespace

TEST_CASE("chained system yields the published interpolants") {
  Pipeline p = run_pipeline(parse_system(R"(
p(X) :- X >= 10.
q(V, W) :- p(U), W = U + V.
Z >= Y :- q(Y, Z), Y =< 0.
)",
                                         SourceFormat::Native));
  REQUIRE(p.all_valid);
  const Solution sol = extract_solution(p.sys, p.proofs);

  const auto* pp = p.sys.find_predicate("p");
  const auto* qq = p.sys.find_predicate("q");
  REQUIRE(pp != nullptr);
  REQUIRE(qq != nullptr);

  CHECK(equivalent(sol.get(*pp), formula_over_formals("X1 >= 10", 1)));
  CHECK(equivalent(sol.get(*qq), formula_over_formals("X2 >= X1 + 10", 2)));

  CHECK(check_solution(p.sys, sol).verified);
}

TEST_CASE("weight zero subtrees produce true") {
  // p's only constraint mentions a variable foreign to the rest of the
  // query, so every refutation gives it weight zero.
  Pipeline p = run_pipeline(parse_system(R"(
p(X) :- X >= 0.
q(Y) :- p(X), Y >= 5.
Y >= 5 :- q(Y).
)",
                                         SourceFormat::Native));
  REQUIRE(p.all_valid);
  const Solution sol = extract_solution(p.sys, p.proofs);
  const auto* pp = p.sys.find_predicate("p");
  CHECK(equivalent(sol.get(*pp), DNFFormula::top()));
  CHECK(check_solution(p.sys, sol).verified);
}

TEST_CASE("predicates without derivations get true") {
  Pipeline p = run_pipeline(parse_system(R"(
p(X) :- X >= 0.
orphan(X) :- X >= 3.
X >= 0 :- p(X).
)",
                                         SourceFormat::Native));
  REQUIRE(p.all_valid);
  const Solution sol = extract_solution(p.sys, p.proofs);
  const auto* orphan = p.sys.find_predicate("orphan");
  REQUIRE(orphan != nullptr);
  CHECK(sol.get(*orphan).is_true());
  CHECK(sol.size() == p.sys.predicates.size());
}

TEST_CASE("solutions mention only formal parameters") {
  testsupport::Rng rng(808);
  for (int round = 0; round < 40; ++round) {
    Pipeline p = run_pipeline(testsupport::random_system(rng, 5, 10, 4, 8));
    if (!p.all_valid) continue;
    const Solution sol = extract_solution(p.sys, p.proofs);
    for (const auto& pred : p.sys.predicates) {
      REQUIRE(sol.contains(pred));
      std::set<Variable> vars;
      sol.get(pred).collect_variables(vars);
      for (const auto& v : vars) {
        CHECK(v.index >= 0);
        CHECK(v.index < pred.arity);
      }
    }
  }
}

TEST_CASE("local soundness on tree shaped systems") {
  testsupport::Rng rng(809);
  int verified_rounds = 0;
  for (int round = 0; round < 150 && verified_rounds < 30; ++round) {
    Pipeline p = run_pipeline(testsupport::random_tree_system(rng, 5, 4, 8));
    if (!p.all_valid) continue;
    REQUIRE(analyze(p.sys).shape == SystemShape::Tree);
    const Solution sol = extract_solution(p.sys, p.proofs);
    const CheckResult r = check_solution(p.sys, sol);
    CHECK(r.verified);
    ++verified_rounds;
  }
  CHECK(verified_rounds >= 10);
}

TEST_CASE("disjunctive heads combine branch candidates by conjunction") {
  Pipeline p = run_pipeline(parse_system(R"(
p(X) :- X >= 4.
(X >= 1 ; X =< -1) :- p(X).
)",
                                         SourceFormat::Native));
  REQUIRE(p.all_valid);
  const Solution sol = extract_solution(p.sys, p.proofs);
  CHECK(check_solution(p.sys, sol).verified);
}

TEST_CASE("multiple derivations conjoin occurrence candidates") {
  // Both queries constrain p; the conjunction of both extracted candidates
  // must still verify.
  Pipeline p = run_pipeline(parse_system(R"(
p(X) :- X >= 4, X =< 6.
X >= 2 :- p(X).
X =< 8 :- p(X).
)",
                                         SourceFormat::Native));
  REQUIRE(p.all_valid);
  REQUIRE(p.entries.size() == 2);
  const Solution sol = extract_solution(p.sys, p.proofs);
  CHECK(check_solution(p.sys, sol).verified);
}
