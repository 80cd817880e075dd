// Predicate dependency analysis: recursion check, topological order, and
// the tree/dag shape split that decides whether extracted interpolants can
// be taken as-is or need the conjunction-and-verify route.
#pragma once

#include <map>
#include <set>
#include <vector>

#include "hornet/system.hpp"

namespace hornet {

enum class SystemShape { Tree, Dag };

struct DependencyInfo {
  // q -> {p : q's some head clause uses p in its body}.
  std::map<PredicateSymbol, std::set<PredicateSymbol>> edges;
  // Dependencies first; among ready predicates, declaration order.
  std::vector<PredicateSymbol> topo_order;
  SystemShape shape = SystemShape::Tree;
  std::vector<int> query_clause_ids;
};

// Throws RecursionError (with one witnessing cycle) on cyclic dependencies.
DependencyInfo analyze(const ClauseSystem& system);

}  // namespace hornet
