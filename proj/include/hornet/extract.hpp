// Interpolant extraction from refutation certificates. Each derivation node
// with predicate head gets the weighted partial sum of its subtree's tagged
// constraints; candidates for a predicate are conjoined across branches,
// derivations, and occurrences.
#pragma once

#include <vector>

#include "hornet/lra.hpp"
#include "hornet/system.hpp"
#include "hornet/unfold.hpp"

namespace hornet {

struct ProofObligation {
  const UnfoldEntry* entry = nullptr;       // derivation with tagged body
  const ValidityResult* validity = nullptr;  // valid, with branch certificates
};

// Builds a candidate solution covering every predicate of the system
// (predicates untouched by any derivation get true). The result is locally
// sound by construction for tree-shaped systems; callers verify it anyway.
Solution extract_solution(const ClauseSystem& system, const std::vector<ProofObligation>& proofs);

}  // namespace hornet
