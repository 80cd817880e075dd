#include "hornet/unfold.hpp"

#include <algorithm>

#include "hornet/diagnostics.hpp"

namespace hornet {

namespace {

struct Unfolder {
  const ClauseSystem& system;
  const Limits& limits;
  int& fresh_index;
  std::size_t completed = 0;  // full derivations, counted at the root
  std::size_t work = 0;       // node completions at any depth

  std::set<Variable> clause_variables(const HornClause& c) const {
    std::set<Variable> vars;
    c.body_constraint.collect_variables(vars);
    for (const auto& a : c.body_atoms) vars.insert(a.args.begin(), a.args.end());
    if (c.has_atom_head()) {
      vars.insert(c.head_atom().args.begin(), c.head_atom().args.end());
    } else {
      c.head_formula().collect_variables(vars);
    }
    return vars;
  }

  // All instantiations of `clause` whose head-atom arguments are forced to
  // `bound` (empty for a root). Every other clause variable gets a fresh
  // copy, so distinct occurrences never share variables.
  std::vector<DerivationNode> derive(const HornClause& clause, const Renaming& bound,
                                     const OccurrencePath& path) {
    limits.check_time();

    Renaming sigma = bound;
    for (const auto& v : clause_variables(clause)) {
      if (sigma.count(v) == 0) sigma.emplace(v, Variable{fresh_index++, v.name});
    }

    DerivationNode base;
    base.clause_id = clause.id;
    base.path = path;
    base.own_constraints = clause.body_constraint.rename(sigma);
    if (clause.has_atom_head()) {
      Atom h = clause.head_atom();
      for (auto& arg : h.args) arg = sigma.at(arg);
      base.head_instance = std::move(h);
    } else {
      base.head_formula_instance = clause.head_formula().rename(sigma);
    }

    // Child alternatives per body atom, then the cartesian product.
    std::vector<std::vector<DerivationNode>> alternatives;
    for (std::size_t i = 0; i < clause.body_atoms.size(); ++i) {
      const Atom& atom = clause.body_atoms[i];
      std::vector<const HornClause*> defs = system.clauses_with_head(atom.predicate);
      if (defs.empty()) throw UnresolvableAtomError(atom.predicate.name);

      OccurrencePath child_path = path;
      child_path.push_back(static_cast<int>(i));
      std::vector<DerivationNode> options;
      for (const HornClause* def : defs) {
        Renaming child_bound;
        for (std::size_t k = 0; k < atom.args.size(); ++k) {
          child_bound.emplace(def->head_atom().args[k], sigma.at(atom.args[k]));
        }
        auto sub = derive(*def, child_bound, child_path);
        options.insert(options.end(), std::make_move_iterator(sub.begin()),
                       std::make_move_iterator(sub.end()));
      }
      alternatives.push_back(std::move(options));
    }

    std::vector<DerivationNode> out;
    std::vector<std::size_t> pick(alternatives.size(), 0);
    for (;;) {
      DerivationNode node = base;
      for (std::size_t i = 0; i < alternatives.size(); ++i) {
        node.children.push_back(alternatives[i][pick[i]]);
      }
      // The root count is the documented cap; the work count bounds inner
      // blowup that would otherwise be spent before any root completes.
      if (path.empty()) limits.check_derivations(++completed);
      if (++work > limits.max_derivations * 100) {
        throw ResourceLimitError("derivation work limit exceeded");
      }
      out.push_back(std::move(node));

      if (alternatives.empty()) return out;
      std::size_t i = alternatives.size();
      for (;;) {
        --i;
        if (++pick[i] < alternatives[i].size()) break;
        pick[i] = 0;
        if (i == 0) return out;
      }
    }
  }
};

void collect(const DerivationNode& node, std::vector<TaggedConstraint>& out) {
  for (const auto& c : node.own_constraints.constraints()) {
    out.push_back(TaggedConstraint{c, ConstraintTag{node.clause_id, node.path}});
  }
  for (const auto& child : node.children) collect(child, out);
}

UnfoldEntry to_entry(DerivationNode root) {
  GroundImplication gi;
  collect(root, gi.body);
  if (root.head_instance) {
    gi.head_atom = root.head_instance;
  } else {
    gi.head_formula = *root.head_formula_instance;
  }
  UnfoldEntry e;
  e.root = std::move(root);
  e.implication = std::move(gi);
  return e;
}

const HornClause* clause_by_id(const ClauseSystem& system, int id) {
  for (const auto& c : system.clauses) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

}  // namespace

std::vector<UnfoldEntry> unfold_clause(const ClauseSystem& system, int clause_id, int& fresh_index,
                                       const Limits& limits) {
  const HornClause* clause = clause_by_id(system, clause_id);
  if (clause == nullptr) throw InputError("unknown clause id " + std::to_string(clause_id));

  Unfolder u{system, limits, fresh_index};
  std::vector<UnfoldEntry> out;
  for (auto& root : u.derive(*clause, Renaming{}, OccurrencePath{})) {
    out.push_back(to_entry(std::move(root)));
  }
  return out;
}

std::vector<UnfoldEntry> unfold(const ClauseSystem& system, const DependencyInfo& info,
                                const Limits& limits) {
  // The error is defined globally: a body predicate that heads nothing is
  // unresolvable whether or not a query reaches it.
  for (const auto& c : system.clauses) {
    for (const auto& a : c.body_atoms) {
      if (system.clauses_with_head(a.predicate).empty()) {
        throw UnresolvableAtomError(a.predicate.name);
      }
    }
  }

  int fresh_index = system.next_variable_index;
  Unfolder u{system, limits, fresh_index};
  std::vector<UnfoldEntry> out;
  for (int qid : info.query_clause_ids) {
    const HornClause* clause = clause_by_id(system, qid);
    if (clause == nullptr) throw InternalError("query clause id vanished");
    for (auto& root : u.derive(*clause, Renaming{}, OccurrencePath{})) {
      out.push_back(to_entry(std::move(root)));
    }
  }
  return out;
}

}  // namespace hornet
