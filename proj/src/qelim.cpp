#include "hornet/qelim.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "hornet/diagnostics.hpp"
#include "hornet/lra.hpp"

namespace hornet {

namespace {

// Index of some equality containing a target variable, scanning in order.
std::optional<std::size_t> find_equality(const std::vector<AtomicConstraint>& work,
                                         const std::set<Variable>& targets, Variable& chosen) {
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (work[i].relation != Relation::Eq) continue;
    for (const auto& [v, c] : work[i].term.coefficients()) {
      if (targets.count(v)) {
        chosen = v;
        return i;
      }
    }
  }
  return std::nullopt;
}

// Drops constraints entailed by the rest. Sound only on satisfiable input;
// every caller establishes that first.
void drop_entailed(std::vector<AtomicConstraint>& work, const Limits& limits) {
  for (std::size_t i = 0; i < work.size();) {
    limits.check_time();
    Conjunction rest;
    for (std::size_t j = 0; j < work.size(); ++j) {
      if (j != i) rest.push_back(work[j]);
    }
    if (check_valid(rest, DNFFormula::of(work[i]), limits).valid) {
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
}

std::set<Variable> live_targets(const std::vector<AtomicConstraint>& work,
                                const std::set<Variable>& vars) {
  std::set<Variable> out;
  for (const auto& c : work) {
    for (const auto& [v, coef] : c.term.coefficients()) {
      if (vars.count(v)) out.insert(v);
    }
  }
  return out;
}

// The variable whose Fourier-Motzkin step produces the fewest combinations:
// minimal (#lower * #upper), ties to the lowest index.
Variable cheapest_target(const std::vector<AtomicConstraint>& work,
                         const std::set<Variable>& targets) {
  Variable best;
  std::size_t best_cost = 0;
  bool first = true;
  for (const auto& v : targets) {
    std::size_t lo = 0, hi = 0;
    for (const auto& c : work) {
      Rational coef = c.term.coefficient(v);
      if (coef > 0) ++lo;
      if (coef < 0) ++hi;
    }
    std::size_t cost = lo * hi;
    if (first || cost < best_cost) {
      best = v;
      best_cost = cost;
      first = false;
    }
  }
  return best;
}

Conjunction project_conjunction(const Conjunction& input, const std::set<Variable>& vars,
                                const Limits& limits) {
  std::vector<AtomicConstraint> work = input.constraints();

  while (true) {
    limits.check_time();

    Variable eq_var;
    if (auto eq_idx = find_equality(work, live_targets(work, vars), eq_var)) {
      // exists x (x = t && phi(x)) == phi(t), exact.
      AtomicConstraint eq = work[*eq_idx];
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(*eq_idx));
      Rational a = eq.term.coefficient(eq_var);
      LinearTerm rest = eq.term;
      rest.add(eq_var, -a);
      rest *= Rational(-1) / a;
      for (auto& c : work) c = c.substitute(eq_var, rest);
      drop_entailed(work, limits);
      continue;
    }

    std::set<Variable> targets = live_targets(work, vars);
    if (targets.empty()) break;

    Variable v = cheapest_target(work, targets);
    std::vector<AtomicConstraint> lowers, uppers, rest;
    for (auto& c : work) {
      Rational coef = c.term.coefficient(v);
      if (coef > 0) {
        lowers.push_back(std::move(c));
      } else if (coef < 0) {
        uppers.push_back(std::move(c));
      } else {
        rest.push_back(std::move(c));
      }
    }
    for (const auto& lo : lowers) {
      Rational a = lo.term.coefficient(v);
      for (const auto& hi : uppers) {
        Rational b = -hi.term.coefficient(v);
        // b*lo + a*hi cancels v; strictness propagates.
        LinearTerm t = lo.term;
        t *= b;
        LinearTerm u = hi.term;
        u *= a;
        t += u;
        Relation rel = (lo.relation == Relation::Gt || hi.relation == Relation::Gt)
                           ? Relation::Gt
                           : Relation::Ge;
        AtomicConstraint combined = normalize_constraint(AtomicConstraint{std::move(t), rel});
        if (combined.is_trivially_true()) continue;
        if (combined.is_trivially_false()) {
          throw InternalError("Fourier-Motzkin derived false from a satisfiable conjunction");
        }
        rest.push_back(std::move(combined));
      }
    }
    limits.check_constraints(rest.size());
    work = std::move(rest);
    drop_entailed(work, limits);
  }

  Conjunction out(std::move(work));
  out.normalize();
  return out;
}

}  // namespace

DNFFormula eliminate(const DNFFormula& f, const std::set<Variable>& vars, const Limits& limits) {
  // exists over nothing is the identity, syntactically.
  std::set<Variable> present = f.variables();
  bool relevant = std::any_of(vars.begin(), vars.end(),
                              [&](const Variable& v) { return present.count(v) != 0; });
  if (!relevant) return f;

  DNFFormula out;
  for (const auto& d : f.disjuncts()) {
    Conjunction disjunct = d;
    disjunct.normalize();
    if (disjunct.has_constant_false()) continue;
    if (!is_sat(check_sat(disjunct, limits))) continue;
    out.push_back(project_conjunction(disjunct, vars, limits));
  }
  out.normalize();
  return out;
}

}  // namespace hornet
