#include "hornet/wf.hpp"

#include <algorithm>

#include "hornet/diagnostics.hpp"
#include "hornet/graph.hpp"
#include "hornet/lra.hpp"
#include "hornet/qelim.hpp"

namespace hornet {

LinearTerm RankingWitness::pre_term(int arity) const {
  LinearTerm t;
  int half = arity / 2;
  for (int i = 0; i < half; ++i) t.add(formal_parameter(i), coefficients[static_cast<std::size_t>(i)]);
  return t;
}

LinearTerm RankingWitness::post_term(int arity) const {
  LinearTerm t;
  int half = arity / 2;
  for (int i = 0; i < half; ++i) {
    t.add(formal_parameter(half + i), coefficients[static_cast<std::size_t>(i)]);
  }
  return t;
}

Conjunction RankingWitness::head_formula(int arity) const {
  LinearTerm bounded = pre_term(arity);
  bounded.add_constant(-bound);
  LinearTerm decreasing = pre_term(arity) - post_term(arity);
  decreasing.add_constant(-decrease);
  Conjunction c;
  c.push_back(AtomicConstraint{std::move(bounded), Relation::Ge});
  c.push_back(AtomicConstraint{std::move(decreasing), Relation::Ge});
  c.normalize();
  return c;
}

DNFFormula project_onto_head(const GroundImplication& gi, const Limits& limits) {
  if (!gi.head_atom) throw InputError("projection requires an atom-headed implication");
  const Atom& head = *gi.head_atom;

  Conjunction body = gi.body_conjunction();
  if (!is_sat(check_sat(body, limits))) return DNFFormula::bottom();
  std::set<Variable> drop = body.variables();
  Renaming to_formals;
  for (std::size_t k = 0; k < head.args.size(); ++k) {
    drop.erase(head.args[k]);
    to_formals.emplace(head.args[k], formal_parameter(static_cast<int>(k)));
  }
  DNFFormula projected = eliminate(DNFFormula::of(std::move(body)), drop, limits);
  projected = projected.rename(to_formals);
  projected.normalize();
  return projected;
}

namespace {

// Farkas-encoded entailment rows for one disjunct: target is entailed by the
// disjunct iff its coefficients match a nonnegative (signed on equalities)
// combination of the disjunct's constraints, with enough constant slack.
// Unknowns: the target's coefficients (linear in `unknown_of`), plus one
// multiplier per constraint, minted from `next_unknown`.
struct EntailmentEncoder {
  int& next_unknown;
  Conjunction rows;

  // Encodes: disjunct |= sum_v target_coefs[v]*v >= target_constant, where
  // both the coefficients and the constant are linear terms over LP
  // unknowns. Disjunct constraints are term_i REL 0 with term_i =
  // sum a_iv*v + k_i; the combination sum lambda_i*term_i >= 0 proves the
  // target iff the coefficients match and -target_constant - sum
  // lambda_i*k_i >= 0.
  void add(const Conjunction& disjunct, const std::map<Variable, LinearTerm>& target_coefs,
           const LinearTerm& target_constant) {
    std::vector<Variable> lambdas;
    for (const auto& c : disjunct.constraints()) {
      Variable l{next_unknown++, "l" + std::to_string(next_unknown)};
      lambdas.push_back(l);
      if (c.relation != Relation::Eq) {
        rows.push_back(AtomicConstraint{LinearTerm::variable(l), Relation::Ge});
      }
    }
    // Coefficient match per relation variable occurring anywhere.
    std::set<Variable> rel_vars = disjunct.variables();
    for (const auto& [v, t] : target_coefs) rel_vars.insert(v);
    for (const auto& v : rel_vars) {
      LinearTerm row;
      auto ti = target_coefs.find(v);
      if (ti != target_coefs.end()) row += ti->second;
      const auto& cs = disjunct.constraints();
      for (std::size_t i = 0; i < cs.size(); ++i) {
        Rational coef = cs[i].term.coefficient(v);
        if (coef != 0) row.add(lambdas[i], -coef);
      }
      rows.push_back(AtomicConstraint{std::move(row), Relation::Eq});
    }
    LinearTerm slack;
    const auto& cs = disjunct.constraints();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      Rational k = cs[i].term.constant();
      if (k != 0) slack.add(lambdas[i], Rational(-k));
    }
    slack -= target_constant;
    rows.push_back(AtomicConstraint{std::move(slack), Relation::Ge});
  }
};

// Infimum of the linear function f over a nonempty satisfiable DNF relation,
// assuming boundedness from below was already certified.
Rational exact_infimum(const DNFFormula& relation, const LinearTerm& f, int next_free_index,
                       const Limits& limits) {
  Variable z{next_free_index, "z"};
  LinearTerm def = LinearTerm::variable(z) - f;
  std::optional<Rational> best;
  for (const auto& d : relation.disjuncts()) {
    Conjunction c = d;
    c.push_back(AtomicConstraint{def, Relation::Eq});
    std::set<Variable> drop = c.variables();
    drop.erase(z);
    DNFFormula over_z = eliminate(DNFFormula::of(std::move(c)), drop, limits);
    for (const auto& dz : over_z.disjuncts()) {
      std::optional<Rational> low;
      for (const auto& con : dz.constraints()) {
        Rational a = con.term.coefficient(z);
        if (a == 0) continue;
        // a*z + k REL 0 bounds z from below when a > 0, and pins it exactly
        // when the relation is an equality.
        if (a > 0 || con.relation == Relation::Eq) {
          Rational val = -con.term.constant() / a;
          if (!low || val > *low) low = val;
        }
      }
      if (!low) throw InternalError("infimum requested for a function unbounded below");
      if (!best || *low < *best) best = *low;
    }
  }
  if (!best) throw InternalError("infimum over an empty relation");
  return *best;
}

}  // namespace

std::optional<RankingWitness> synthesize_ranking(const DNFFormula& relation, int arity,
                                                 const Limits& limits) {
  if (arity % 2 != 0) throw InputError("ranking synthesis needs even arity");
  int half = arity / 2;

  DNFFormula rel = relation;
  rel.normalize();

  // Strict constraints only shrink the relation; relaxing them to their
  // non-strict closure keeps both entailments sound and the encoding
  // complete for the disjuncts that remain.
  std::vector<Conjunction> feasible;
  for (const auto& d : rel.disjuncts()) {
    if (!is_sat(check_sat(d, limits))) continue;
    Conjunction relaxed;
    for (const auto& c : d.constraints()) {
      relaxed.push_back(AtomicConstraint{
          c.term, c.relation == Relation::Gt ? Relation::Ge : c.relation});
    }
    feasible.push_back(std::move(relaxed));
  }

  // The empty relation is well-founded with the trivial witness.
  if (feasible.empty()) {
    RankingWitness w;
    w.coefficients.assign(static_cast<std::size_t>(half), Rational(0));
    w.bound = 0;
    w.decrease = 1;
    return w;
  }

  // LP unknowns: f's coefficients c_0..c_{half-1}, the bound b, then one
  // multiplier per (disjunct, entailment, constraint).
  int next_unknown = 0;
  std::vector<Variable> coef_vars;
  for (int i = 0; i < half; ++i) {
    coef_vars.push_back(Variable{next_unknown++, "c" + std::to_string(i)});
  }
  Variable bound_var{next_unknown++, "b"};

  EntailmentEncoder enc{next_unknown, Conjunction{}};
  for (const auto& d : feasible) {
    // f(pre) - b >= 0.
    std::map<Variable, LinearTerm> bounded;
    for (int i = 0; i < half; ++i) {
      bounded[formal_parameter(i)] = LinearTerm::variable(coef_vars[static_cast<std::size_t>(i)]);
    }
    enc.add(d, bounded, LinearTerm::variable(bound_var));

    // f(pre) - f(post) - 1 >= 0, decrease pinned to 1.
    std::map<Variable, LinearTerm> decreasing;
    for (int i = 0; i < half; ++i) {
      LinearTerm c = LinearTerm::variable(coef_vars[static_cast<std::size_t>(i)]);
      decreasing[formal_parameter(i)] = c;
      decreasing[formal_parameter(half + i)] = -c;
    }
    enc.add(d, decreasing, LinearTerm(Rational(1)));
  }

  SatResult lp = check_sat(enc.rows, limits);
  if (!is_sat(lp)) return std::nullopt;
  const Model& m = std::get<Model>(lp);

  auto value_of = [&](const Variable& v) {
    auto it = m.values.find(v);
    return it == m.values.end() ? Rational(0) : it->second;
  };

  RankingWitness w;
  for (int i = 0; i < half; ++i) w.coefficients.push_back(value_of(coef_vars[static_cast<std::size_t>(i)]));
  w.bound = value_of(bound_var);
  w.decrease = 1;

  DNFFormula feasible_rel;
  for (const auto& d : feasible) feasible_rel.push_back(d);

  // Canonical direction: unit lead coefficient if the decrease entailment
  // survives the rescaling.
  Rational lead(0);
  for (const auto& c : w.coefficients) {
    if (c != 0) {
      lead = c;
      break;
    }
  }
  if (lead != 0 && rational_abs(lead) != 1) {
    RankingWitness scaled = w;
    Rational s = Rational(1) / rational_abs(lead);
    for (auto& c : scaled.coefficients) c *= s;
    LinearTerm dec = scaled.pre_term(arity) - scaled.post_term(arity);
    dec.add_constant(Rational(-1));
    bool ok = true;
    for (const auto& d : feasible_rel.disjuncts()) {
      if (!check_valid(d, DNFFormula::of(AtomicConstraint{dec, Relation::Ge}), limits).valid) {
        ok = false;
        break;
      }
    }
    if (ok) w = scaled;
  }

  // Exact bound: the infimum of f over the relation.
  w.bound = exact_infimum(feasible_rel, w.pre_term(arity), arity, limits);

  // Internal recheck of both entailments; failure here is a synthesis bug.
  LinearTerm bnd = w.pre_term(arity);
  bnd.add_constant(-w.bound);
  LinearTerm dec = w.pre_term(arity) - w.post_term(arity);
  dec.add_constant(-w.decrease);
  for (const auto& d : rel.disjuncts()) {
    if (!check_valid(d, DNFFormula::of(AtomicConstraint{bnd, Relation::Ge}), limits).valid ||
        !check_valid(d, DNFFormula::of(AtomicConstraint{dec, Relation::Ge}), limits).valid) {
      throw InternalError("synthesized ranking witness failed its entailments");
    }
  }
  return w;
}

WfElimination eliminate_wf(const ClauseSystem& system, const Limits& limits) {
  WfElimination out;
  if (system.wf_conditions.empty()) {
    out.system = system;
    return out;
  }

  // Establishes recursion-freeness before any unfolding.
  analyze(system);

  ClauseSystem transformed = system;
  transformed.wf_conditions.clear();
  int next_id = 0;
  for (const auto& c : system.clauses) next_id = std::max(next_id, c.id + 1);

  for (const auto& wf : system.wf_conditions) {
    const PredicateSymbol* pred = system.find_predicate(wf.predicate.name);
    if (pred == nullptr) throw InputError("wf condition on undeclared predicate " + wf.predicate.name);

    // The least interpretation of r: union of its derivations' projections.
    DNFFormula relation;
    int fresh = transformed.next_variable_index;
    for (const auto& clause : system.clauses) {
      if (!clause.has_atom_head() || !(clause.head_atom().predicate == *pred)) continue;
      for (const auto& entry : unfold_clause(system, clause.id, fresh, limits)) {
        relation = DNFFormula::disjoin(relation, project_onto_head(entry.implication, limits));
      }
    }
    relation.normalize();

    auto witness = synthesize_ranking(relation, pred->arity, limits);
    if (!witness) {
      out.failed = *pred;
      out.reason = "no linear ranking function for " + pred->name;
      return out;
    }

    // r(v_1..v_n) -> witness constraints.
    Atom atom;
    atom.predicate = *pred;
    for (int i = 0; i < pred->arity; ++i) {
      atom.args.push_back(transformed.fresh_variable("w" + std::to_string(i + 1)));
    }
    Renaming from_formals;
    for (int i = 0; i < pred->arity; ++i) {
      from_formals.emplace(formal_parameter(i), atom.args[static_cast<std::size_t>(i)]);
    }
    Conjunction head = witness->head_formula(pred->arity).rename(from_formals);

    HornClause replacement;
    replacement.id = next_id++;
    replacement.body_atoms.push_back(atom);
    replacement.head = DNFFormula::of(std::move(head));
    transformed.clauses.push_back(std::move(replacement));
  }

  out.system = std::move(transformed);
  return out;
}

}  // namespace hornet
