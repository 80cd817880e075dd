#include "hornet/solver.hpp"

#include <vector>

#include "hornet/diagnostics.hpp"
#include "hornet/extract.hpp"
#include "hornet/graph.hpp"
#include "hornet/wf.hpp"

namespace hornet {

namespace {

// A countermodel is only reported after it reproduces the refutation under
// plain evaluation; anything else is an internal fault, not a verdict.
Counterexample make_counterexample(const UnfoldEntry& entry, Model model) {
  std::set<Variable> vars;
  Conjunction body = entry.implication.body_conjunction();
  body.collect_variables(vars);
  entry.implication.head_formula.collect_variables(vars);
  if (entry.implication.head_atom) {
    const auto& args = entry.implication.head_atom->args;
    vars.insert(args.begin(), args.end());
  }
  for (const auto& v : vars) model.values.emplace(v, Rational(0));

  if (!body.evaluate(model.values)) {
    throw InternalError("counterexample does not satisfy the derivation body");
  }
  if (entry.implication.head_formula.evaluate(model.values)) {
    throw InternalError("counterexample does not falsify the derivation head");
  }
  return Counterexample{entry.root, entry.implication, std::move(model)};
}

}  // namespace

Verdict solve(const ClauseSystem& system, const Limits& limits) {
  system.validate();

  // Compile wf conditions into constraint-head clauses first; a predicate
  // without a linear ranking witness is the one source of unknown.
  WfElimination wf = eliminate_wf(system, limits);
  if (!wf.system) {
    Verdict v;
    v.kind = VerdictKind::Unknown;
    v.reason = wf.reason;
    return v;
  }
  const ClauseSystem& solved = *wf.system;

  DependencyInfo info = analyze(solved);
  std::vector<UnfoldEntry> entries = unfold(solved, info, limits);

  std::vector<ValidityResult> validities;
  validities.reserve(entries.size());
  for (const auto& entry : entries) {
    limits.check_time();
    ValidityResult v =
        check_valid(entry.implication.body_conjunction(), entry.implication.head_formula, limits);
    if (!v.valid) {
      Verdict out;
      out.kind = VerdictKind::Unsolvable;
      out.counterexample = make_counterexample(entry, std::move(v.countermodel));
      return out;
    }
    validities.push_back(std::move(v));
  }

  std::vector<ProofObligation> proofs;
  proofs.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    proofs.push_back(ProofObligation{&entries[i], &validities[i]});
  }
  Solution candidate = extract_solution(solved, proofs);

  // Verification runs against the input system, wf conditions included. The
  // extracted candidate can fail on dag-shaped sharing; the least solution
  // is the complete fallback and must pass.
  if (check_solution(system, candidate, limits).verified) {
    Verdict out;
    out.kind = VerdictKind::Solvable;
    out.solution = std::move(candidate);
    return out;
  }

  Solution least = least_solution(solved, limits);
  if (!check_solution(system, least, limits).verified) {
    throw InternalError("least solution failed verification on a refutation-free system");
  }
  Verdict out;
  out.kind = VerdictKind::Solvable;
  out.solution = std::move(least);
  return out;
}

}  // namespace hornet
