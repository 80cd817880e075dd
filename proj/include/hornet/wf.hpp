// Well-foundedness machinery: projecting derivation bodies onto predicate
// arguments, synthesizing linear ranking witnesses over DNF relations, and
// compiling wf conditions away into ordinary constraint-head clauses.
#pragma once

#include <optional>
#include <string>

#include "hornet/limits.hpp"
#include "hornet/system.hpp"
#include "hornet/unfold.hpp"

namespace hornet {

// f(pre) = sum coefficients[i] * x_i over the pre-state half, with
//   rel |= f(pre) >= bound          (boundedness)
//   rel |= f(pre) - f(post) >= decrease   (strict decrease, decrease > 0)
struct RankingWitness {
  std::vector<Rational> coefficients;  // one per pre-state parameter
  Rational bound;
  Rational decrease;

  LinearTerm pre_term(int arity) const;
  LinearTerm post_term(int arity) const;
  // The two witness constraints over the full parameter list, normalized.
  Conjunction head_formula(int arity) const;
};

// The derivation body projected onto the head-atom arguments and rewritten
// over formal parameters: an exact underapproximation-free projection of
// everything the derivation says about the head predicate's arguments.
// Requires an atom-headed implication.
DNFFormula project_onto_head(const GroundImplication& gi, const Limits& limits = {});

// One global linear function for all disjuncts, Farkas-encoded with the
// decrease pinned to 1. Returns nullopt when no linear ranking function
// exists. Witness is canonical: the lead coefficient is rescaled to unit
// magnitude when the decrease survives, and bound is the exact infimum of f
// over the relation.
std::optional<RankingWitness> synthesize_ranking(const DNFFormula& relation, int arity,
                                                 const Limits& limits = {});

struct WfElimination {
  // Present when every wf condition got a witness.
  std::optional<ClauseSystem> system;
  // Otherwise: which predicate failed and why.
  std::optional<PredicateSymbol> failed;
  std::string reason;
};

// Replaces every wf(r) by a clause r(args) -> witness-head. The witness is
// synthesized over the union of all derivation projections for r, which is
// exactly the least interpretation of r, so the replacement clause is the
// weakest constraint-head clause that still forces well-foundedness through
// the witness. A system without wf conditions passes through unchanged.
WfElimination eliminate_wf(const ClauseSystem& system, const Limits& limits = {});

}  // namespace hornet
