#include "hornet/system.hpp"

#include <set>

#include "hornet/diagnostics.hpp"

namespace hornet {

const PredicateSymbol* ClauseSystem::find_predicate(std::string_view name) const {
  for (const auto& p : predicates) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void ClauseSystem::declare_predicate(const PredicateSymbol& p) {
  if (const PredicateSymbol* existing = find_predicate(p.name)) {
    if (existing->arity != p.arity) {
      throw InputError("predicate " + p.name + " redeclared with arity " +
                       std::to_string(p.arity) + " (was " + std::to_string(existing->arity) + ")");
    }
    return;
  }
  predicates.push_back(p);
}

std::vector<const HornClause*> ClauseSystem::clauses_with_head(const PredicateSymbol& p) const {
  std::vector<const HornClause*> out;
  for (const auto& c : clauses) {
    if (c.has_atom_head() && c.head_atom().predicate == p) out.push_back(&c);
  }
  return out;
}

std::vector<const HornClause*> ClauseSystem::query_clauses() const {
  std::vector<const HornClause*> out;
  for (const auto& c : clauses) {
    if (c.is_query()) out.push_back(&c);
  }
  return out;
}

namespace {

void check_atom(const ClauseSystem& sys, const Atom& a, int clause_id) {
  const PredicateSymbol* p = sys.find_predicate(a.predicate.name);
  if (p == nullptr) {
    throw InputError("clause " + std::to_string(clause_id) + ": undeclared predicate " +
                     a.predicate.name);
  }
  if (p->arity != static_cast<int>(a.args.size()) || p->arity != a.predicate.arity) {
    throw InputError("clause " + std::to_string(clause_id) + ": arity mismatch for " +
                     a.predicate.name);
  }
  std::set<Variable> seen;
  for (const auto& v : a.args) {
    if (!seen.insert(v).second) {
      throw InputError("clause " + std::to_string(clause_id) + ": repeated argument variable " +
                       v.name + " in " + a.predicate.name);
    }
  }
}

}  // namespace

void ClauseSystem::validate() const {
  std::set<int> ids;
  for (const auto& c : clauses) {
    if (!ids.insert(c.id).second) throw InputError("duplicate clause id " + std::to_string(c.id));

    std::set<Variable> body_vars;
    c.body_constraint.collect_variables(body_vars);
    for (const auto& a : c.body_atoms) {
      check_atom(*this, a, c.id);
      for (const auto& v : a.args) body_vars.insert(v);
    }

    std::set<Variable> head_vars;
    if (c.has_atom_head()) {
      check_atom(*this, c.head_atom(), c.id);
    } else {
      c.head_formula().collect_variables(head_vars);
      for (const auto& v : head_vars) {
        if (body_vars.count(v) == 0) {
          throw InputError("clause " + std::to_string(c.id) + ": head variable " + v.name +
                           " does not occur in the body");
        }
      }
    }
  }
  for (const auto& wf : wf_conditions) {
    const PredicateSymbol* p = find_predicate(wf.predicate.name);
    if (p == nullptr) throw InputError("wf condition on undeclared predicate " + wf.predicate.name);
    if (p->arity != wf.predicate.arity) {
      throw InputError("wf condition arity mismatch for " + wf.predicate.name);
    }
    if (p->arity % 2 != 0) {
      throw InputError("wf predicate " + wf.predicate.name + " has odd arity " +
                       std::to_string(p->arity));
    }
  }
}

Variable formal_parameter(int i) { return Variable{i, "x" + std::to_string(i + 1)}; }

std::vector<Variable> formal_parameters(int arity) {
  std::vector<Variable> out;
  out.reserve(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) out.push_back(formal_parameter(i));
  return out;
}

const DNFFormula& Solution::get(const PredicateSymbol& p) const {
  auto it = map_.find(p);
  if (it == map_.end()) {
    throw InputError("solution has no entry for predicate " + p.name + "/" +
                     std::to_string(p.arity));
  }
  return it->second;
}

DNFFormula instantiate(const DNFFormula& over_formals, const std::vector<Variable>& args) {
  Renaming map;
  for (int i = 0; i < static_cast<int>(args.size()); ++i) {
    map.emplace(formal_parameter(i), args[static_cast<std::size_t>(i)]);
  }
  return over_formals.rename(map);
}

ClauseImplication substitute(const Solution& sol, const HornClause& clause,
                             std::size_t max_constraints) {
  DNFFormula body = DNFFormula::of(clause.body_constraint);
  body.normalize();
  for (const auto& atom : clause.body_atoms) {
    DNFFormula f = instantiate(sol.get(atom.predicate), atom.args);
    body = DNFFormula::conjoin(body, f, max_constraints);
  }
  DNFFormula head;
  if (clause.has_atom_head()) {
    head = instantiate(sol.get(clause.head_atom().predicate), clause.head_atom().args);
    head.normalize();
  } else {
    head = clause.head_formula();
    head.normalize();
  }
  return ClauseImplication{std::move(body), std::move(head)};
}

}  // namespace hornet
