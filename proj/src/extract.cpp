#include "hornet/extract.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hornet/diagnostics.hpp"

namespace hornet {

namespace {

bool is_prefix(const OccurrencePath& prefix, const OccurrencePath& path) {
  if (prefix.size() > path.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), path.begin());
}

// Weighted sum of the subtree's constraints under one branch certificate.
// Nonnegative weights on inequalities and signed weights on equalities keep
// the sum entailed by the subtree; a positively weighted strict constraint
// makes the sum strict.
AtomicConstraint subtree_interpolant(const GroundImplication& gi, const FarkasCertificate& cert,
                                     const OccurrencePath& node_path) {
  LinearTerm sum;
  bool strict = false;
  for (std::size_t i = 0; i < gi.body.size(); ++i) {
    auto it = cert.weights.find(i);
    if (it == cert.weights.end() || it->second == 0) continue;
    if (!is_prefix(node_path, gi.body[i].tag.path)) continue;
    LinearTerm t = gi.body[i].constraint.term;
    t *= it->second;
    sum += t;
    if (gi.body[i].constraint.relation == Relation::Gt && it->second > 0) strict = true;
  }
  return normalize_constraint(AtomicConstraint{std::move(sum), strict ? Relation::Gt : Relation::Ge});
}

void visit(const DerivationNode& node, const GroundImplication& gi, const FarkasCertificate& cert,
           std::map<PredicateSymbol, std::set<AtomicConstraint>>& candidates) {
  if (node.head_instance) {
    AtomicConstraint interp = subtree_interpolant(gi, cert, node.path);

    // The cancellation argument keeps only head-argument variables alive;
    // anything else in the sum is a certificate or tagging bug.
    const Atom& head = *node.head_instance;
    Renaming to_formals;
    for (std::size_t k = 0; k < head.args.size(); ++k) {
      to_formals.emplace(head.args[k], formal_parameter(static_cast<int>(k)));
    }
    for (const auto& [v, c] : interp.term.coefficients()) {
      if (to_formals.count(v) == 0) {
        throw InternalError("interpolant for " + head.predicate.name +
                            " mentions a non-argument variable");
      }
    }
    candidates[head.predicate].insert(interp.rename(to_formals));
  }
  for (const auto& child : node.children) visit(child, gi, cert, candidates);
}

}  // namespace

Solution extract_solution(const ClauseSystem& system, const std::vector<ProofObligation>& proofs) {
  std::map<PredicateSymbol, std::set<AtomicConstraint>> candidates;
  for (const auto& proof : proofs) {
    if (proof.entry == nullptr || proof.validity == nullptr || !proof.validity->valid) {
      throw InternalError("extraction requires valid proof obligations");
    }
    for (const auto& branch : proof.validity->branches) {
      for (const auto& child : proof.entry->root.children) {
        visit(child, proof.entry->implication, branch.certificate, candidates);
      }
    }
  }

  Solution sol;
  for (const auto& p : system.predicates) {
    auto it = candidates.find(p);
    if (it == candidates.end()) {
      sol.set(p, DNFFormula::top());
      continue;
    }
    Conjunction conj;
    for (const auto& c : it->second) conj.push_back(c);
    DNFFormula f = DNFFormula::of(std::move(conj));
    f.normalize();
    sol.set(p, f);
  }
  return sol;
}

}  // namespace hornet
