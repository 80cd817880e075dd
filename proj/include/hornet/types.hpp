// Linear-rational formula representation: variables, linear terms, atomic
// constraints in the canonical shape (term REL 0), conjunctions, and DNF.
// Everything compares with a total deterministic order so containers sort
// and outputs stay byte-stable across runs.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hornet/rational.hpp"

namespace hornet {

// Identity is the index; the name is for rendering only. Two variables with
// equal index are the same variable regardless of name.
struct Variable {
  int index = -1;
  std::string name;
};

inline bool operator==(const Variable& a, const Variable& b) { return a.index == b.index; }
inline bool operator!=(const Variable& a, const Variable& b) { return a.index != b.index; }
inline bool operator<(const Variable& a, const Variable& b) { return a.index < b.index; }

using Assignment = std::map<Variable, Rational>;
using Renaming = std::map<Variable, Variable>;

// Sum of rational-coefficient monomials plus a constant. The coefficient map
// never stores zeros.
class LinearTerm {
 public:
  LinearTerm() = default;
  explicit LinearTerm(Rational constant) : constant_(std::move(constant)) {}

  static LinearTerm variable(const Variable& v) {
    LinearTerm t;
    t.coefficients_[v] = 1;
    return t;
  }

  const std::map<Variable, Rational>& coefficients() const { return coefficients_; }
  const Rational& constant() const { return constant_; }
  bool is_constant() const { return coefficients_.empty(); }

  // Variable with the lowest index, or nullptr for constant terms.
  const Variable* leading_variable() const {
    return coefficients_.empty() ? nullptr : &coefficients_.begin()->first;
  }

  Rational coefficient(const Variable& v) const {
    auto it = coefficients_.find(v);
    return it == coefficients_.end() ? Rational(0) : it->second;
  }

  void add(const Variable& v, const Rational& c);
  void add_constant(const Rational& c) { constant_ += c; }

  LinearTerm& operator+=(const LinearTerm& o);
  LinearTerm& operator-=(const LinearTerm& o);
  LinearTerm& operator*=(const Rational& c);
  LinearTerm operator-() const;

  friend LinearTerm operator+(LinearTerm a, const LinearTerm& b) { return a += b; }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm& b) { return a -= b; }
  friend LinearTerm operator*(const Rational& c, LinearTerm t) { return t *= c; }

  // Throws InputError if some variable of the term is unassigned.
  Rational evaluate(const Assignment& point) const;

  LinearTerm rename(const Renaming& map) const;
  // Replaces v by the given term everywhere.
  LinearTerm substitute(const Variable& v, const LinearTerm& replacement) const;

  void collect_variables(std::set<Variable>& out) const;

  // Total order: coefficient maps lexicographically by (index, coefficient),
  // then the constant. Rational order on coefficients.
  int compare(const LinearTerm& o) const;
  bool operator==(const LinearTerm& o) const { return compare(o) == 0; }
  bool operator!=(const LinearTerm& o) const { return compare(o) != 0; }
  bool operator<(const LinearTerm& o) const { return compare(o) < 0; }

 private:
  std::map<Variable, Rational> coefficients_;
  Rational constant_ = 0;
};

enum class Relation { Ge, Gt, Eq };

// term REL 0. The only constraint shape in the system.
struct AtomicConstraint {
  LinearTerm term;
  Relation relation = Relation::Ge;

  bool evaluate(const Assignment& point) const;

  bool is_constant() const { return term.is_constant(); }
  bool is_trivially_true() const;
  bool is_trivially_false() const;

  // Negation as a disjunction of constraints: one entry for inequalities,
  // two (t > 0, -t > 0) for equalities.
  std::vector<AtomicConstraint> negation() const;

  AtomicConstraint rename(const Renaming& map) const;
  AtomicConstraint substitute(const Variable& v, const LinearTerm& replacement) const;

  int compare(const AtomicConstraint& o) const;
  bool operator==(const AtomicConstraint& o) const { return compare(o) == 0; }
  bool operator<(const AtomicConstraint& o) const { return compare(o) < 0; }
};

// Canonical form with |leading coefficient| = 1: GE/GT keep the orientation
// (scaled by a positive factor only), EQ is scaled so the leading coefficient
// is +1. Constant terms collapse to constant -1, 0, or +1. Idempotent.
AtomicConstraint normalize_constraint(AtomicConstraint c);

// Finite conjunction. Empty = true. normalize() drops trivially true
// members, sorts, dedupes; it deliberately keeps trivially false members.
class Conjunction {
 public:
  Conjunction() = default;
  explicit Conjunction(std::vector<AtomicConstraint> cs) : constraints_(std::move(cs)) {}

  const std::vector<AtomicConstraint>& constraints() const { return constraints_; }
  std::size_t size() const { return constraints_.size(); }
  bool is_true() const { return constraints_.empty(); }
  bool has_constant_false() const;

  void push_back(AtomicConstraint c) { constraints_.push_back(std::move(c)); }
  void append(const Conjunction& o);

  void normalize();

  bool evaluate(const Assignment& point) const;
  Conjunction rename(const Renaming& map) const;
  void collect_variables(std::set<Variable>& out) const;
  std::set<Variable> variables() const;

  int compare(const Conjunction& o) const;
  bool operator==(const Conjunction& o) const { return compare(o) == 0; }
  bool operator<(const Conjunction& o) const { return compare(o) < 0; }

 private:
  std::vector<AtomicConstraint> constraints_;
};

// Disjunction of conjunctions. Empty = false; a disjunct that is the empty
// conjunction makes the whole formula true. normalize() collapses to the
// canonical true on any true disjunct and drops constant-false disjuncts.
class DNFFormula {
 public:
  DNFFormula() = default;
  explicit DNFFormula(std::vector<Conjunction> ds) : disjuncts_(std::move(ds)) {}

  static DNFFormula top() { return DNFFormula({Conjunction{}}); }
  static DNFFormula bottom() { return DNFFormula{}; }
  static DNFFormula of(Conjunction c) { return DNFFormula({std::move(c)}); }
  static DNFFormula of(AtomicConstraint c) {
    Conjunction conj;
    conj.push_back(std::move(c));
    return of(std::move(conj));
  }

  const std::vector<Conjunction>& disjuncts() const { return disjuncts_; }
  bool is_false() const { return disjuncts_.empty(); }
  bool is_true() const { return disjuncts_.size() == 1 && disjuncts_[0].is_true(); }

  void push_back(Conjunction c) { disjuncts_.push_back(std::move(c)); }

  void normalize();

  bool evaluate(const Assignment& point) const;
  DNFFormula rename(const Renaming& map) const;
  void collect_variables(std::set<Variable>& out) const;
  std::set<Variable> variables() const;

  // Cartesian-product conjunction; throws ResourceLimitError past the cap.
  static DNFFormula conjoin(const DNFFormula& a, const DNFFormula& b, std::size_t max_constraints);
  static DNFFormula disjoin(DNFFormula a, const DNFFormula& b);

  // De Morgan negation with distribution back to DNF.
  DNFFormula negation(std::size_t max_constraints) const;

  int compare(const DNFFormula& o) const;
  bool operator==(const DNFFormula& o) const { return compare(o) == 0; }
  bool operator!=(const DNFFormula& o) const { return compare(o) != 0; }

 private:
  std::vector<Conjunction> disjuncts_;
};

}  // namespace hornet
