// Textbook Fourier-Motzkin feasibility check. Built on the public formula
// types only and sharing no algorithm with the simplex engine, so the two
// can cross-check each other on random conjunctions.
#pragma once

#include <set>
#include <vector>

#include <hornet/types.hpp>

namespace testsupport {

inline bool naive_feasible(const hornet::Conjunction& c) {
  using hornet::LinearTerm;
  using hornet::Rational;
  using hornet::Relation;
  using hornet::Variable;

  struct Row {
    LinearTerm term;  // term >= 0, or term > 0 when strict
    bool strict;
  };

  std::vector<Row> rows;
  for (const auto& a : c.constraints()) {
    switch (a.relation) {
      case Relation::Ge:
        rows.push_back({a.term, false});
        break;
      case Relation::Gt:
        rows.push_back({a.term, true});
        break;
      case Relation::Eq:
        rows.push_back({a.term, false});
        rows.push_back({-a.term, false});
        break;
    }
  }

  const std::set<Variable> vars = c.variables();
  for (const auto& v : vars) {
    std::vector<Row> lower, upper, rest;
    for (auto& r : rows) {
      const Rational coeff = r.term.coefficient(v);
      if (coeff > 0)
        lower.push_back(std::move(r));
      else if (coeff < 0)
        upper.push_back(std::move(r));
      else
        rest.push_back(std::move(r));
    }
    for (const auto& lo : lower) {
      for (const auto& up : upper) {
        const Rational a = lo.term.coefficient(v);
        const Rational b = up.term.coefficient(v);
        rest.push_back({(-b) * lo.term + a * up.term, lo.strict || up.strict});
      }
    }
    rows = std::move(rest);
  }

  for (const auto& r : rows) {
    const Rational& k = r.term.constant();
    if (r.strict ? !(k > 0) : !(k >= 0)) return false;
  }
  return true;
}

}  // namespace testsupport
