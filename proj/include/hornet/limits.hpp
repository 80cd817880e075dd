// Resource caps threaded through every potentially explosive routine.
#pragma once

#include <chrono>
#include <cstddef>

#include "hornet/diagnostics.hpp"

namespace hornet {

struct Limits {
  // Completed derivations per unfolding.
  std::size_t max_derivations = 10000;
  // Constraints per conjunction during projection and formula products.
  std::size_t max_constraints = 50000;
  // Wall-clock deadline; max() means none.
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();

  static Limits with_timeout(std::chrono::milliseconds budget) {
    Limits l;
    l.deadline = std::chrono::steady_clock::now() + budget;
    return l;
  }

  void check_time() const {
    if (deadline != std::chrono::steady_clock::time_point::max() &&
        std::chrono::steady_clock::now() > deadline) {
      throw ResourceLimitError("time limit exceeded");
    }
  }

  void check_constraints(std::size_t n) const {
    if (n > max_constraints) {
      throw ResourceLimitError("constraint limit exceeded (" + std::to_string(n) + " > " +
                               std::to_string(max_constraints) + ")");
    }
  }

  void check_derivations(std::size_t n) const {
    if (n > max_derivations) {
      throw ResourceLimitError("derivation limit exceeded (" + std::to_string(n) + " > " +
                               std::to_string(max_derivations) + ")");
    }
  }
};

}  // namespace hornet
