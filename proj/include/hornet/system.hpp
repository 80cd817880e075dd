// Horn clause systems over linear rational arithmetic: predicates, atoms,
// clauses with optional well-foundedness obligations, and solutions mapping
// predicates to quantifier-free DNF formulas over formal parameters.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hornet/types.hpp"

namespace hornet {

struct PredicateSymbol {
  std::string name;
  int arity = 0;
};

inline bool operator==(const PredicateSymbol& a, const PredicateSymbol& b) {
  return a.name == b.name && a.arity == b.arity;
}
inline bool operator<(const PredicateSymbol& a, const PredicateSymbol& b) {
  if (a.name != b.name) return a.name < b.name;
  return a.arity < b.arity;
}

// Atom arguments are always plain variables, pairwise distinct within the
// atom. Frontends compile general argument terms away into body equalities.
struct Atom {
  PredicateSymbol predicate;
  std::vector<Variable> args;
};

// Head is either a predicate atom or a constraint formula (query clause).
struct HornClause {
  int id = -1;
  std::vector<Atom> body_atoms;
  Conjunction body_constraint;
  std::variant<Atom, DNFFormula> head;

  bool has_atom_head() const { return std::holds_alternative<Atom>(head); }
  const Atom& head_atom() const { return std::get<Atom>(head); }
  const DNFFormula& head_formula() const { return std::get<DNFFormula>(head); }
  bool is_query() const { return !has_atom_head(); }
};

// wf(p): every solution must interpret p by a well-founded relation. Arity
// of p is even; the first half are pre-state, the second half post-state.
struct WfCondition {
  PredicateSymbol predicate;
};

class ClauseSystem {
 public:
  std::vector<PredicateSymbol> predicates;  // declaration order
  std::vector<HornClause> clauses;
  std::vector<WfCondition> wf_conditions;
  int next_variable_index = 0;

  Variable fresh_variable(std::string name) {
    return Variable{next_variable_index++, std::move(name)};
  }

  const PredicateSymbol* find_predicate(std::string_view name) const;
  // First declaration wins; a repeat with a different arity is an error.
  void declare_predicate(const PredicateSymbol& p);

  std::vector<const HornClause*> clauses_with_head(const PredicateSymbol& p) const;
  std::vector<const HornClause*> query_clauses() const;

  // Checks the structural invariants (declared predicates, arities, distinct
  // atom arguments, head variables covered by the body, even wf arity,
  // unique clause ids). Throws InputError on violation.
  void validate() const;
};

// Formal parameter i (0-based) of a solution formula; rendered as x1..xn.
Variable formal_parameter(int i);
std::vector<Variable> formal_parameters(int arity);

// Predicate interpretations over formal parameters 0..arity-1.
class Solution {
 public:
  void set(const PredicateSymbol& p, DNFFormula f) { map_[p] = std::move(f); }
  bool contains(const PredicateSymbol& p) const { return map_.count(p) != 0; }
  // Throws InputError when the predicate has no entry.
  const DNFFormula& get(const PredicateSymbol& p) const;

  const std::map<PredicateSymbol, DNFFormula>& entries() const { return map_; }
  std::size_t size() const { return map_.size(); }

 private:
  std::map<PredicateSymbol, DNFFormula> map_;
};

// A solution formula instantiated at concrete argument variables.
DNFFormula instantiate(const DNFFormula& over_formals, const std::vector<Variable>& args);

struct ClauseImplication {
  DNFFormula body;
  DNFFormula head;
};

// Replaces every predicate atom of the clause by its solution formula.
ClauseImplication substitute(const Solution& sol, const HornClause& clause,
                             std::size_t max_constraints = 50000);

}  // namespace hornet
