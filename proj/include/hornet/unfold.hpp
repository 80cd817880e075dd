// Exhaustive resolution of recursion-free systems: every derivation tree
// rooted at a clause, flattened to a ground implication whose constraints
// carry (clause id, occurrence path) provenance tags. The tags drive
// interpolant extraction later.
#pragma once

#include <optional>
#include <vector>

#include "hornet/graph.hpp"
#include "hornet/limits.hpp"
#include "hornet/system.hpp"

namespace hornet {

// Node identity inside one derivation: the route of body-atom indices from
// the root. Root is the empty path.
using OccurrencePath = std::vector<int>;

struct ConstraintTag {
  int clause_id = -1;
  OccurrencePath path;
};

struct TaggedConstraint {
  AtomicConstraint constraint;
  ConstraintTag tag;
};

struct DerivationNode {
  int clause_id = -1;
  OccurrencePath path;
  // Instantiated head: the atom for definition clauses, the renamed formula
  // for a query root. Exactly one is set.
  std::optional<Atom> head_instance;
  std::optional<DNFFormula> head_formula_instance;
  // This node's renamed body constraints.
  Conjunction own_constraints;
  // One child per body atom, in body order.
  std::vector<DerivationNode> children;
};

struct GroundImplication {
  // Pre-order concatenation of all nodes' own constraints.
  std::vector<TaggedConstraint> body;
  // Instantiated root head.
  DNFFormula head_formula;
  std::optional<Atom> head_atom;

  Conjunction body_conjunction() const {
    Conjunction c;
    for (const auto& tc : body) c.push_back(tc.constraint);
    return c;
  }
};

struct UnfoldEntry {
  DerivationNode root;
  GroundImplication implication;
};

// All derivations rooted at the system's query clauses, in clause order.
// Throws UnresolvableAtomError if any body predicate heads no clause, and
// ResourceLimitError past limits.max_derivations completed derivations.
std::vector<UnfoldEntry> unfold(const ClauseSystem& system, const DependencyInfo& info,
                                const Limits& limits = {});

// All derivations rooted at one clause (any head shape). fresh_index seeds
// variable renaming and advances past every variable the call mints.
std::vector<UnfoldEntry> unfold_clause(const ClauseSystem& system, int clause_id,
                                       int& fresh_index, const Limits& limits = {});

}  // namespace hornet
