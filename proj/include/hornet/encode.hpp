// Generators that turn transition-system and procedural-program
// descriptions into recursion-free clause systems, one per interpolation
// problem family. Input file grammars are documented in docs/formats.md.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hornet/limits.hpp"
#include "hornet/system.hpp"

namespace hornet {

// A state space over named rational variables. Formulas are stored over
// canonical variables: pre-state slot i has index i, post-state (primed)
// slot i has index V + i.
struct TransitionSystem {
  std::vector<std::string> vars;
  DNFFormula init = DNFFormula::top();                         // over v
  std::vector<std::pair<std::string, DNFFormula>> transitions; // over v, v'
  DNFFormula safe = DNFFormula::top();                         // over v
  std::optional<DNFFormula> guard;                             // over v
  std::optional<DNFFormula> summary;                           // over v, v'
  std::optional<DNFFormula> node_label;                        // over v
  std::vector<std::pair<std::string, DNFFormula>> children;    // label, over v

  Variable pre(std::size_t i) const;
  Variable post(std::size_t i) const;
  const DNFFormula& transition(const std::string& label) const;  // InputError
};

TransitionSystem parse_transition_system(const std::string& text);

// One search-tree node: its label, and per child the transition taken and
// the child's label (evaluated at the successor state).
struct SearchChild {
  DNFFormula transition;  // over v, v'
  DNFFormula label;       // over v
};
struct SearchNode {
  DNFFormula label;  // over v
  std::vector<SearchChild> children;
};

// Built from the node/child directives; InputError when absent.
SearchNode search_node(const TransitionSystem& ts);

struct NestedTransition {
  enum Kind { Inst, Call, Ret };
  Kind kind;
  std::string label;
  std::string proc;
  std::string callee;  // Call only
  DNFFormula formula;
};

struct Procedure {
  std::string name;
  std::vector<std::string> locals;
  DNFFormula safe = DNFFormula::top();  // over g, l_p
};

// Global and local variable names are disjoint across the whole program, so
// every formula can live in one canonical variable registry (pre index per
// name in declaration order, post = pre + total).
struct ProceduralProgram {
  std::vector<std::string> globals;
  std::vector<Procedure> procedures;  // main is procedures.front()
  std::vector<NestedTransition> transitions;
  DNFFormula init = DNFFormula::top();  // over g, l_main

  const Procedure& procedure(const std::string& name) const;       // InputError
  const NestedTransition& transition(const std::string& label) const;
  Variable pre(const std::string& var_name) const;
  Variable post(const std::string& var_name) const;
};

ProceduralProgram parse_procedural_program(const std::string& text);

// init -> I0, I_{k-1} /\ next_k -> I_k, I_n -> safe.
ClauseSystem encode_path(const TransitionSystem& ts, const std::vector<std::string>& path);

// next_k -> T_k, init /\ T_1 /\ ... /\ T_n -> safe.
ClauseSystem encode_transition(const TransitionSystem& ts, const std::vector<std::string>& path);

// Stem chain into I_m, loop chain through T_k relations, wf(T_n).
ClauseSystem encode_wellfounded(const TransitionSystem& ts, const std::vector<std::string>& stem,
                                const std::vector<std::string>& loop);

// next_k -> S_k, guard -> G_1, G_k /\ S_k -> G_{k+1}, G_n /\ S_n -> summary.
ClauseSystem encode_state_transition(const TransitionSystem& ts,
                                     const std::vector<std::string>& path);

// Head of the k-th child clause: Existential reads exists v'. (next_k ->
// label_k(v')), Universal reads not exists v'. (next_k /\ not label_k(v')).
enum class QuantifierMode { Existential, Universal };

ClauseSystem encode_search_tree(const SearchNode& node, const std::vector<std::string>& var_names,
                                QuantifierMode mode, const Limits& limits = {});

// Steps are transition labels; the inst/call/ret case split follows from
// the label. Return clauses carry the caller's pending interpolant, so the
// caller frame survives the call.
ClauseSystem encode_nested(const ProceduralProgram& prog, const std::vector<std::string>& path);

// Unfolds a recursive clause system along the given sequence of clause ids.
// Facts are emitted first at copy 0, each step advances its head predicate
// to a fresh indexed copy, queries close the system over the final copies.
ClauseSystem encode_unfolding(const ClauseSystem& recursive, const std::vector<int>& expansion);

}  // namespace hornet
