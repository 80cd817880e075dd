#include "hornet/graph.hpp"

#include <algorithm>

#include "hornet/diagnostics.hpp"

namespace hornet {

namespace {

// Some cycle in the leftover (cyclic) part of the graph, for the error.
std::vector<std::string> find_cycle(const std::map<PredicateSymbol, std::set<PredicateSymbol>>& edges,
                                    const std::set<PredicateSymbol>& remaining) {
  // Walk dependencies from an arbitrary remaining node; within `remaining`
  // every node has some remaining dependency, so a repeat is guaranteed.
  std::vector<PredicateSymbol> path;
  std::set<PredicateSymbol> on_path;
  PredicateSymbol cur = *remaining.begin();
  for (;;) {
    if (on_path.count(cur)) {
      std::vector<std::string> cycle;
      auto it = std::find_if(path.begin(), path.end(),
                             [&](const PredicateSymbol& p) { return p == cur; });
      for (; it != path.end(); ++it) cycle.push_back(it->name);
      cycle.push_back(cur.name);
      return cycle;
    }
    path.push_back(cur);
    on_path.insert(cur);
    const auto& deps = edges.at(cur);
    auto next = std::find_if(deps.begin(), deps.end(),
                             [&](const PredicateSymbol& p) { return remaining.count(p) != 0; });
    if (next == deps.end()) throw InternalError("cycle search left the cyclic region");
    cur = *next;
  }
}

}  // namespace

DependencyInfo analyze(const ClauseSystem& system) {
  DependencyInfo info;
  for (const auto& p : system.predicates) info.edges[p];

  std::map<PredicateSymbol, int> head_count, body_count;
  for (const auto& c : system.clauses) {
    if (c.is_query()) info.query_clause_ids.push_back(c.id);
    for (const auto& a : c.body_atoms) {
      ++body_count[a.predicate];
      if (c.has_atom_head()) info.edges[c.head_atom().predicate].insert(a.predicate);
    }
    if (c.has_atom_head()) ++head_count[c.head_atom().predicate];
  }

  // Kahn with declaration-order tie break.
  std::set<PredicateSymbol> remaining(system.predicates.begin(), system.predicates.end());
  while (!remaining.empty()) {
    const PredicateSymbol* pick = nullptr;
    for (const auto& p : system.predicates) {
      if (remaining.count(p) == 0) continue;
      const auto& deps = info.edges.at(p);
      bool ready = std::none_of(deps.begin(), deps.end(), [&](const PredicateSymbol& d) {
        return remaining.count(d) != 0 && !(d == p);
      });
      // A self-loop is a cycle even when everything else is ready.
      if (deps.count(p)) ready = false;
      if (ready) {
        pick = &p;
        break;
      }
    }
    if (pick == nullptr) throw RecursionError(find_cycle(info.edges, remaining));
    info.topo_order.push_back(*pick);
    remaining.erase(*pick);
  }

  info.shape = SystemShape::Tree;
  for (const auto& p : system.predicates) {
    if (head_count[p] > 1 || body_count[p] > 1) {
      info.shape = SystemShape::Dag;
      break;
    }
  }
  return info;
}

}  // namespace hornet
