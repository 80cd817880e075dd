#include "hornet/check.hpp"

#include "hornet/diagnostics.hpp"
#include "hornet/qelim.hpp"
#include "hornet/wf.hpp"

namespace hornet {

std::string CheckResult::describe() const {
  if (verified) return "verified";
  if (failed_clause) return "failed clause " + std::to_string(*failed_clause);
  if (failed_wf) return "failed wf condition on " + failed_wf->name;
  return "failed";
}

CheckResult check_solution(const ClauseSystem& system, const Solution& sol, const Limits& limits) {
  for (const auto& p : system.predicates) {
    if (!sol.contains(p)) {
      throw InputError("solution has no entry for predicate " + p.name);
    }
  }

  CheckResult result;
  for (const auto& clause : system.clauses) {
    ClauseImplication imp = substitute(sol, clause, limits.max_constraints);
    for (const auto& disjunct : imp.body.disjuncts()) {
      limits.check_time();
      ValidityResult v = check_valid(disjunct, imp.head, limits);
      if (!v.valid) {
        result.failed_clause = clause.id;
        result.countermodel = std::move(v.countermodel);
        return result;
      }
    }
  }

  for (const auto& wf : system.wf_conditions) {
    const PredicateSymbol* p = system.find_predicate(wf.predicate.name);
    if (p == nullptr) throw InputError("wf condition on undeclared predicate " + wf.predicate.name);
    if (!synthesize_ranking(sol.get(*p), p->arity, limits)) {
      result.failed_wf = *p;
      return result;
    }
  }

  result.verified = true;
  return result;
}

Solution least_solution(const ClauseSystem& system, const Limits& limits) {
  if (!system.wf_conditions.empty()) {
    throw InputError("least solution is defined for wf-free systems only");
  }
  DependencyInfo info = analyze(system);

  Solution sol;
  for (const auto& p : info.topo_order) {
    DNFFormula interp;  // no head clause leaves the predicate false
    for (const HornClause* clause : system.clauses_with_head(p)) {
      // Body with already-solved predicates substituted, projected onto the
      // head arguments.
      DNFFormula body = DNFFormula::of(clause->body_constraint);
      for (const auto& atom : clause->body_atoms) {
        body = DNFFormula::conjoin(body, instantiate(sol.get(atom.predicate), atom.args),
                                   limits.max_constraints);
      }
      const Atom& head = clause->head_atom();
      std::set<Variable> drop = body.variables();
      Renaming to_formals;
      for (std::size_t k = 0; k < head.args.size(); ++k) {
        drop.erase(head.args[k]);
        to_formals.emplace(head.args[k], formal_parameter(static_cast<int>(k)));
      }
      DNFFormula projected = eliminate(body, drop, limits).rename(to_formals);
      interp = DNFFormula::disjoin(std::move(interp), projected);
    }
    interp.normalize();
    sol.set(p, std::move(interp));
  }
  return sol;
}

bool oracle_solvable(const ClauseSystem& system, const Limits& limits) {
  Solution least = least_solution(system, limits);
  for (const HornClause* query : system.query_clauses()) {
    ClauseImplication imp = substitute(least, *query, limits.max_constraints);
    for (const auto& disjunct : imp.body.disjuncts()) {
      if (!check_valid(disjunct, imp.head, limits).valid) return false;
    }
  }
  return true;
}

}  // namespace hornet
