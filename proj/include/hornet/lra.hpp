// Satisfiability of conjunctions of linear rational constraints, validity of
// body -> head implications, and Farkas certificates for the unsatisfiable
// side. Certificates are the raw material the interpolation engine consumes,
// so every unsat answer carries one and verify_certificate can recheck it
// independently of the solver that produced it.
#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

#include "hornet/limits.hpp"
#include "hornet/system.hpp"
#include "hornet/types.hpp"

namespace hornet {

// Satisfying point. Variables not mentioned by the input are absent.
struct Model {
  Assignment values;
};

// Farkas weights keyed by constraint index into the queried conjunction.
// Weights on GE/GT constraints are nonnegative; weights on EQ constraints
// may take either sign. The weighted sum of the constraint terms must cancel
// all variables and leave a contradictory constant: strictly negative, or
// nonpositive when some GT constraint carries positive weight.
struct FarkasCertificate {
  std::map<std::size_t, Rational> weights;
};

using SatResult = std::variant<Model, FarkasCertificate>;

inline bool is_sat(const SatResult& r) { return std::holds_alternative<Model>(r); }

// Decides a conjunction exactly. Deterministic: identical inputs produce
// identical models and certificates.
SatResult check_sat(const Conjunction& c, const Limits& limits = {});

// True iff the weighted sum is a genuine contradiction for this conjunction.
bool verify_certificate(const Conjunction& c, const FarkasCertificate& cert);

// One refutation per branch of the distributed head negation. The branch
// query is laid out body constraints first, so certificate indices below
// body_size refer to body constraints.
struct ValidityBranch {
  Conjunction query;
  std::size_t body_size = 0;
  FarkasCertificate certificate;
};

struct ValidityResult {
  bool valid = false;
  // Valid case: one entry per negation branch (possibly zero when the
  // negated head is syntactically false).
  std::vector<ValidityBranch> branches;
  // Invalid case: a point satisfying the body and falsifying the head,
  // completed with zeros for unconstrained variables of body and head.
  Model countermodel;
};

// Decides body |= head by refuting body && not(head) branch by branch.
ValidityResult check_valid(const Conjunction& body, const DNFFormula& head,
                           const Limits& limits = {});

}  // namespace hornet
