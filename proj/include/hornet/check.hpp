// Solution checking decoupled from solving: clause-by-clause validity via
// lra only, plus ranking synthesis for wf obligations. Also the least
// solution of wf-free systems, which doubles as a solvability oracle.
#pragma once

#include <optional>
#include <string>

#include "hornet/graph.hpp"
#include "hornet/limits.hpp"
#include "hornet/lra.hpp"
#include "hornet/system.hpp"

namespace hornet {

struct CheckResult {
  bool verified = false;
  // First clause whose implication failed, with a falsifying point.
  std::optional<int> failed_clause;
  std::optional<Model> countermodel;
  // First wf predicate whose interpretation admits no linear ranking.
  std::optional<PredicateSymbol> failed_wf;

  std::string describe() const;
};

// Every predicate of the system must have a solution entry (InputError
// otherwise). Deterministic: reports the first failure in clause order,
// then wf-condition order.
CheckResult check_solution(const ClauseSystem& system, const Solution& sol,
                           const Limits& limits = {});

// Strongest interpretation: for each predicate in dependency order, the
// disjunction over its head clauses of the body projected onto the head
// arguments. Requires a wf-free system (InputError otherwise).
Solution least_solution(const ClauseSystem& system, const Limits& limits = {});

// sat iff the least solution satisfies every query clause. The reference
// verdict the solver is measured against.
bool oracle_solvable(const ClauseSystem& system, const Limits& limits = {});

}  // namespace hornet
