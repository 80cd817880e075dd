// Quantifier elimination for existentially quantified conjunctions and DNF
// formulas, by equality substitution and Fourier-Motzkin combination.
#pragma once

#include <set>

#include "hornet/limits.hpp"
#include "hornet/types.hpp"

namespace hornet {

// exists vars . f as a quantifier-free DNF over the remaining variables.
// Exact: the result is logically equivalent to the projection. Disjuncts
// that are infeasible are dropped; entailed constraints are removed after
// each eliminated variable, so the output stays reduced.
DNFFormula eliminate(const DNFFormula& f, const std::set<Variable>& vars,
                     const Limits& limits = {});

}  // namespace hornet
