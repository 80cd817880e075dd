#include "hornet/types.hpp"

#include <algorithm>

#include "hornet/diagnostics.hpp"
#include "hornet/limits.hpp"

namespace hornet {

void LinearTerm::add(const Variable& v, const Rational& c) {
  if (c == 0) return;
  auto it = coefficients_.find(v);
  if (it == coefficients_.end()) {
    coefficients_.emplace(v, c);
    return;
  }
  it->second += c;
  if (it->second == 0) coefficients_.erase(it);
}

LinearTerm& LinearTerm::operator+=(const LinearTerm& o) {
  for (const auto& [v, c] : o.coefficients_) add(v, c);
  constant_ += o.constant_;
  return *this;
}

LinearTerm& LinearTerm::operator-=(const LinearTerm& o) {
  for (const auto& [v, c] : o.coefficients_) add(v, Rational(-c));
  constant_ -= o.constant_;
  return *this;
}

LinearTerm& LinearTerm::operator*=(const Rational& c) {
  if (c == 0) {
    coefficients_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, coef] : coefficients_) coef *= c;
  constant_ *= c;
  return *this;
}

LinearTerm LinearTerm::operator-() const {
  LinearTerm t(*this);
  t *= Rational(-1);
  return t;
}

Rational LinearTerm::evaluate(const Assignment& point) const {
  Rational acc = constant_;
  for (const auto& [v, c] : coefficients_) {
    auto it = point.find(v);
    if (it == point.end()) throw InputError("evaluate: variable " + v.name + " is unassigned");
    acc += c * it->second;
  }
  return acc;
}

LinearTerm LinearTerm::rename(const Renaming& map) const {
  LinearTerm t(constant_);
  for (const auto& [v, c] : coefficients_) {
    auto it = map.find(v);
    t.add(it == map.end() ? v : it->second, c);
  }
  return t;
}

LinearTerm LinearTerm::substitute(const Variable& v, const LinearTerm& replacement) const {
  auto it = coefficients_.find(v);
  if (it == coefficients_.end()) return *this;
  Rational c = it->second;
  LinearTerm t(*this);
  t.coefficients_.erase(v);
  LinearTerm scaled(replacement);
  scaled *= c;
  t += scaled;
  return t;
}

void LinearTerm::collect_variables(std::set<Variable>& out) const {
  for (const auto& [v, c] : coefficients_) out.insert(v);
}

int LinearTerm::compare(const LinearTerm& o) const {
  auto a = coefficients_.begin();
  auto b = o.coefficients_.begin();
  for (; a != coefficients_.end() && b != o.coefficients_.end(); ++a, ++b) {
    if (a->first.index != b->first.index) return a->first.index < b->first.index ? -1 : 1;
    if (a->second != b->second) return a->second < b->second ? -1 : 1;
  }
  if (a != coefficients_.end()) return 1;
  if (b != o.coefficients_.end()) return -1;
  if (constant_ != o.constant_) return constant_ < o.constant_ ? -1 : 1;
  return 0;
}

bool AtomicConstraint::evaluate(const Assignment& point) const {
  Rational val = term.evaluate(point);
  switch (relation) {
    case Relation::Ge:
      return val >= 0;
    case Relation::Gt:
      return val > 0;
    case Relation::Eq:
      return val == 0;
  }
  return false;
}

bool AtomicConstraint::is_trivially_true() const {
  if (!term.is_constant()) return false;
  const Rational& c = term.constant();
  switch (relation) {
    case Relation::Ge:
      return c >= 0;
    case Relation::Gt:
      return c > 0;
    case Relation::Eq:
      return c == 0;
  }
  return false;
}

bool AtomicConstraint::is_trivially_false() const {
  return term.is_constant() && !is_trivially_true();
}

std::vector<AtomicConstraint> AtomicConstraint::negation() const {
  switch (relation) {
    case Relation::Ge:
      return {AtomicConstraint{-term, Relation::Gt}};
    case Relation::Gt:
      return {AtomicConstraint{-term, Relation::Ge}};
    case Relation::Eq:
      return {AtomicConstraint{term, Relation::Gt}, AtomicConstraint{-term, Relation::Gt}};
  }
  return {};
}

AtomicConstraint AtomicConstraint::rename(const Renaming& map) const {
  return AtomicConstraint{term.rename(map), relation};
}

AtomicConstraint AtomicConstraint::substitute(const Variable& v, const LinearTerm& replacement) const {
  return AtomicConstraint{term.substitute(v, replacement), relation};
}

int AtomicConstraint::compare(const AtomicConstraint& o) const {
  int t = term.compare(o.term);
  if (t != 0) return t;
  int ra = static_cast<int>(relation);
  int rb = static_cast<int>(o.relation);
  return ra == rb ? 0 : (ra < rb ? -1 : 1);
}

AtomicConstraint normalize_constraint(AtomicConstraint c) {
  if (c.term.is_constant()) {
    int s = sign(c.term.constant());
    return AtomicConstraint{LinearTerm(Rational(s)), c.relation};
  }
  Rational lead = c.term.coefficients().begin()->second;
  Rational scale;
  if (c.relation == Relation::Eq) {
    // Sign change is harmless for equalities; pin the leading coefficient
    // to +1 so t = 0 and -t = 0 coincide.
    scale = Rational(1) / lead;
  } else {
    scale = Rational(1) / rational_abs(lead);
  }
  if (scale != 1) c.term *= scale;
  return c;
}

bool Conjunction::has_constant_false() const {
  return std::any_of(constraints_.begin(), constraints_.end(),
                     [](const AtomicConstraint& c) { return c.is_trivially_false(); });
}

void Conjunction::append(const Conjunction& o) {
  constraints_.insert(constraints_.end(), o.constraints_.begin(), o.constraints_.end());
}

void Conjunction::normalize() {
  std::vector<AtomicConstraint> out;
  out.reserve(constraints_.size());
  for (auto& c : constraints_) {
    AtomicConstraint n = normalize_constraint(std::move(c));
    if (n.is_trivially_true()) continue;
    out.push_back(std::move(n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  constraints_ = std::move(out);
}

bool Conjunction::evaluate(const Assignment& point) const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const AtomicConstraint& c) { return c.evaluate(point); });
}

Conjunction Conjunction::rename(const Renaming& map) const {
  Conjunction out;
  for (const auto& c : constraints_) out.push_back(c.rename(map));
  return out;
}

void Conjunction::collect_variables(std::set<Variable>& out) const {
  for (const auto& c : constraints_) c.term.collect_variables(out);
}

std::set<Variable> Conjunction::variables() const {
  std::set<Variable> out;
  collect_variables(out);
  return out;
}

int Conjunction::compare(const Conjunction& o) const {
  auto a = constraints_.begin();
  auto b = o.constraints_.begin();
  for (; a != constraints_.end() && b != o.constraints_.end(); ++a, ++b) {
    int c = a->compare(*b);
    if (c != 0) return c;
  }
  if (a != constraints_.end()) return 1;
  if (b != o.constraints_.end()) return -1;
  return 0;
}

void DNFFormula::normalize() {
  std::vector<Conjunction> out;
  out.reserve(disjuncts_.size());
  for (auto& d : disjuncts_) {
    d.normalize();
    if (d.has_constant_false()) continue;
    if (d.is_true()) {
      disjuncts_ = {Conjunction{}};
      return;
    }
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  disjuncts_ = std::move(out);
}

bool DNFFormula::evaluate(const Assignment& point) const {
  return std::any_of(disjuncts_.begin(), disjuncts_.end(),
                     [&](const Conjunction& d) { return d.evaluate(point); });
}

DNFFormula DNFFormula::rename(const Renaming& map) const {
  DNFFormula out;
  for (const auto& d : disjuncts_) out.push_back(d.rename(map));
  return out;
}

void DNFFormula::collect_variables(std::set<Variable>& out) const {
  for (const auto& d : disjuncts_) d.collect_variables(out);
}

std::set<Variable> DNFFormula::variables() const {
  std::set<Variable> out;
  collect_variables(out);
  return out;
}

DNFFormula DNFFormula::conjoin(const DNFFormula& a, const DNFFormula& b,
                               std::size_t max_constraints) {
  DNFFormula out;
  std::size_t total = 0;
  for (const auto& da : a.disjuncts_) {
    for (const auto& db : b.disjuncts_) {
      Conjunction c = da;
      c.append(db);
      total += c.size();
      if (total > max_constraints) throw ResourceLimitError("formula product exceeds constraint cap");
      out.push_back(std::move(c));
    }
  }
  out.normalize();
  return out;
}

DNFFormula DNFFormula::disjoin(DNFFormula a, const DNFFormula& b) {
  for (const auto& d : b.disjuncts_) a.push_back(d);
  a.normalize();
  return a;
}

DNFFormula DNFFormula::negation(std::size_t max_constraints) const {
  // not(D1 or ... or Dn) distributes to a product over the disjuncts; each
  // factor is the disjunction of the member constraints' negations.
  DNFFormula acc = top();
  for (const auto& d : disjuncts_) {
    DNFFormula factor;
    for (const auto& c : d.constraints()) {
      for (auto& lit : c.negation()) factor.push_back(Conjunction({std::move(lit)}));
    }
    factor.normalize();
    acc = conjoin(acc, factor, max_constraints);
    if (acc.is_false()) break;
  }
  return acc;
}

int DNFFormula::compare(const DNFFormula& o) const {
  auto a = disjuncts_.begin();
  auto b = o.disjuncts_.begin();
  for (; a != disjuncts_.end() && b != o.disjuncts_.end(); ++a, ++b) {
    int c = a->compare(*b);
    if (c != 0) return c;
  }
  if (a != disjuncts_.end()) return 1;
  if (b != o.disjuncts_.end()) return -1;
  return 0;
}

}  // namespace hornet
