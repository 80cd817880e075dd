// End-to-end solving: wf compilation, exhaustive unfolding, per-derivation
// validity, interpolant extraction with a least-solution fallback, and a
// mandatory verification pass before any sat verdict leaves this module.
#pragma once

#include <optional>
#include <string>

#include "hornet/check.hpp"
#include "hornet/limits.hpp"
#include "hornet/lra.hpp"
#include "hornet/system.hpp"
#include "hornet/unfold.hpp"

namespace hornet {

struct Counterexample {
  // The failing derivation and a point that satisfies every body constraint
  // and falsifies the instantiated head.
  DerivationNode derivation;
  GroundImplication implication;
  Model model;
};

enum class VerdictKind { Solvable, Unsolvable, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  // Solvable: a solution that passed check_solution on the input system.
  std::optional<Solution> solution;
  // Unsolvable: an evaluation-checked countermodel.
  std::optional<Counterexample> counterexample;
  // Unknown: what stopped the solver (today: a wf condition without a
  // linear ranking witness).
  std::string reason;
};

Verdict solve(const ClauseSystem& system, const Limits& limits = {});

}  // namespace hornet
