// General simplex over exact rationals with delta-infinitesimals for strict
// bounds. Each distinct linear form (scaled to leading coefficient +1) gets
// one solver variable; constraints become bounds on these variables carrying
// provenance, so bound conflicts translate directly into Farkas weights on
// the input constraints.
#include "hornet/lra.hpp"

#include <optional>

#include "hornet/diagnostics.hpp"

namespace hornet {

namespace {

// q + k*eps for an infinitesimal eps > 0. Ordered lexicographically.
struct QDelta {
  Rational real;
  Rational inf;

  bool operator==(const QDelta& o) const { return real == o.real && inf == o.inf; }
  bool operator<(const QDelta& o) const {
    if (real != o.real) return real < o.real;
    return inf < o.inf;
  }
  bool operator<=(const QDelta& o) const { return *this < o || *this == o; }

  QDelta& operator+=(const QDelta& o) {
    real += o.real;
    inf += o.inf;
    return *this;
  }
  QDelta operator-(const QDelta& o) const { return QDelta{real - o.real, inf - o.inf}; }
  QDelta operator*(const Rational& c) const { return QDelta{real * c, inf * c}; }
};

// One side of a bound on a solver variable. factor maps a unit weight on
// this bound back to a signed weight on the originating input constraint:
// the bound inequality equals factor * (constraint term REL 0).
struct Bound {
  bool present = false;
  QDelta value;
  std::size_t constraint = 0;
  Rational factor;
};

class Simplex {
 public:
  Simplex(const Conjunction& input, const Limits& limits) : input_(input), limits_(limits) {}

  SatResult run() {
    const auto& cs = input_.constraints();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      assert_constraint(i, cs[i]);
      if (conflict_) return std::move(*conflict_);
    }
    if (auto cert = solve()) return std::move(*cert);
    return extract_model();
  }

 private:
  // Dense solver-variable ids: originals first come first, slacks appended
  // as new forms appear. rows_ holds the tableau for basic variables only.
  const Conjunction& input_;
  const Limits& limits_;

  std::map<Variable, int> var_ids_;
  std::vector<Variable> originals_;  // id -> external variable, originals only
  std::map<LinearTerm, int> form_ids_;
  std::vector<QDelta> value_;
  std::vector<Bound> lower_, upper_;
  std::vector<char> basic_;
  std::map<int, std::map<int, Rational>> rows_;
  std::optional<FarkasCertificate> conflict_;

  int new_solver_var() {
    int id = static_cast<int>(value_.size());
    value_.push_back(QDelta{});
    lower_.push_back(Bound{});
    upper_.push_back(Bound{});
    basic_.push_back(0);
    return id;
  }

  int id_of_original(const Variable& v) {
    auto it = var_ids_.find(v);
    if (it != var_ids_.end()) return it->second;
    int id = new_solver_var();
    var_ids_.emplace(v, id);
    if (static_cast<int>(originals_.size()) <= id) originals_.resize(static_cast<std::size_t>(id) + 1, Variable{});
    originals_[static_cast<std::size_t>(id)] = v;
    return id;
  }

  // Slack variable for a form with leading coefficient +1 and constant 0.
  // Its defining row is expressed over currently nonbasic variables.
  int id_of_form(const LinearTerm& form) {
    auto it = form_ids_.find(form);
    if (it != form_ids_.end()) return it->second;

    // Single-variable unit forms are the variable itself.
    if (form.coefficients().size() == 1 && form.coefficients().begin()->second == 1) {
      int id = id_of_original(form.coefficients().begin()->first);
      form_ids_.emplace(form, id);
      return id;
    }

    std::map<int, Rational> row;
    QDelta beta{};
    for (const auto& [v, c] : form.coefficients()) {
      int vid = id_of_original(v);
      if (basic_[static_cast<std::size_t>(vid)]) {
        for (const auto& [nb, nc] : rows_.at(vid)) add_cell(row, nb, c * nc);
      } else {
        add_cell(row, vid, c);
      }
      beta += value_[static_cast<std::size_t>(vid)] * c;
    }
    int id = new_solver_var();
    basic_[static_cast<std::size_t>(id)] = 1;
    value_[static_cast<std::size_t>(id)] = beta;
    rows_.emplace(id, std::move(row));
    form_ids_.emplace(form, id);
    return id;
  }

  static void add_cell(std::map<int, Rational>& row, int col, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = row.emplace(col, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) row.erase(it);
    }
  }

  void assert_constraint(std::size_t idx, const AtomicConstraint& c) {
    const LinearTerm& t = c.term;
    if (t.is_constant()) {
      if (c.is_trivially_true()) return;
      FarkasCertificate cert;
      // Pick the sign that makes the weighted constant negative.
      Rational w = (c.relation == Relation::Eq && t.constant() > 0) ? Rational(-1) : Rational(1);
      cert.weights[idx] = w;
      conflict_ = std::move(cert);
      return;
    }

    Rational lead = t.coefficients().begin()->second;
    LinearTerm form = t;
    form *= Rational(1) / lead;
    form.add_constant(-form.constant());
    int id = id_of_form(form);

    // t REL 0 with t = lead*form + k becomes form REL' -k/lead, flipping
    // the side when lead < 0. factor carries 1/lead so a unit weight on the
    // bound is a 1/lead weight on constraint idx.
    Rational b = -t.constant() / lead;
    Rational inv = Rational(1) / lead;
    switch (c.relation) {
      case Relation::Ge:
        if (lead > 0) {
          assert_lower(id, QDelta{b, 0}, idx, inv);
        } else {
          assert_upper(id, QDelta{b, 0}, idx, -inv);
        }
        break;
      case Relation::Gt:
        if (lead > 0) {
          assert_lower(id, QDelta{b, 1}, idx, inv);
        } else {
          assert_upper(id, QDelta{b, -1}, idx, -inv);
        }
        break;
      case Relation::Eq:
        assert_lower(id, QDelta{b, 0}, idx, inv);
        if (!conflict_) assert_upper(id, QDelta{b, 0}, idx, -inv);
        break;
    }
  }

  void assert_lower(int x, QDelta v, std::size_t idx, Rational factor) {
    auto xi = static_cast<std::size_t>(x);
    if (lower_[xi].present && v <= lower_[xi].value) return;
    if (upper_[xi].present && upper_[xi].value < v) {
      FarkasCertificate cert;
      accumulate(cert, idx, factor, Rational(1));
      accumulate(cert, upper_[xi].constraint, upper_[xi].factor, Rational(1));
      conflict_ = std::move(cert);
      return;
    }
    lower_[xi] = Bound{true, v, idx, std::move(factor)};
    if (!basic_[xi] && value_[xi] < v) update(x, v);
  }

  void assert_upper(int x, QDelta v, std::size_t idx, Rational factor) {
    auto xi = static_cast<std::size_t>(x);
    if (upper_[xi].present && upper_[xi].value <= v) return;
    if (lower_[xi].present && v < lower_[xi].value) {
      FarkasCertificate cert;
      accumulate(cert, idx, factor, Rational(1));
      accumulate(cert, lower_[xi].constraint, lower_[xi].factor, Rational(1));
      conflict_ = std::move(cert);
      return;
    }
    upper_[xi] = Bound{true, v, idx, std::move(factor)};
    if (!basic_[xi] && v < value_[xi]) update(x, v);
  }

  static void accumulate(FarkasCertificate& cert, std::size_t idx, const Rational& factor,
                         const Rational& weight) {
    Rational w = factor * weight;
    if (w == 0) return;
    auto [it, inserted] = cert.weights.emplace(idx, w);
    if (!inserted) {
      it->second += w;
      if (it->second == 0) cert.weights.erase(it);
    }
  }

  void update(int x, const QDelta& v) {
    auto xi = static_cast<std::size_t>(x);
    QDelta d = v - value_[xi];
    for (auto& [b, row] : rows_) {
      auto it = row.find(x);
      if (it != row.end()) value_[static_cast<std::size_t>(b)] += d * it->second;
    }
    value_[xi] = v;
  }

  void pivot_and_update(int x, const QDelta& v, int y) {
    auto xi = static_cast<std::size_t>(x);
    auto yi = static_cast<std::size_t>(y);
    Rational a = rows_.at(x).at(y);
    QDelta theta = (v - value_[xi]) * (Rational(1) / a);
    value_[xi] = v;
    value_[yi] += theta;
    for (const auto& [b, row] : rows_) {
      if (b == x) continue;
      auto it = row.find(y);
      if (it != row.end()) value_[static_cast<std::size_t>(b)] += theta * it->second;
    }
    pivot(x, y);
  }

  void pivot(int x, int y) {
    std::map<int, Rational> rowx = std::move(rows_.at(x));
    rows_.erase(x);
    Rational a = rowx.at(y);

    // y = (x - sum_{z != y} c_z z) / a
    std::map<int, Rational> rowy;
    rowy[x] = Rational(1) / a;
    for (const auto& [z, c] : rowx) {
      if (z != y) add_cell(rowy, z, -c / a);
    }
    for (auto& [b, row] : rows_) {
      auto it = row.find(y);
      if (it == row.end()) continue;
      Rational cy = it->second;
      row.erase(it);
      for (const auto& [z, c] : rowy) add_cell(row, z, cy * c);
    }
    rows_.emplace(y, std::move(rowy));
    basic_[static_cast<std::size_t>(x)] = 0;
    basic_[static_cast<std::size_t>(y)] = 1;
  }

  // Bland's rule on solver-variable ids guarantees termination.
  std::optional<FarkasCertificate> solve() {
    for (;;) {
      limits_.check_time();
      int x = -1;
      bool below = false;
      for (const auto& [b, row] : rows_) {
        auto bi = static_cast<std::size_t>(b);
        if (lower_[bi].present && value_[bi] < lower_[bi].value) {
          x = b;
          below = true;
          break;
        }
        if (upper_[bi].present && upper_[bi].value < value_[bi]) {
          x = b;
          below = false;
          break;
        }
      }
      if (x == -1) return std::nullopt;

      auto xi = static_cast<std::size_t>(x);
      const auto& row = rows_.at(x);
      int enter = -1;
      for (const auto& [y, a] : row) {
        auto yi = static_cast<std::size_t>(y);
        bool can_grow = !upper_[yi].present || value_[yi] < upper_[yi].value;
        bool can_shrink = !lower_[yi].present || lower_[yi].value < value_[yi];
        bool suitable = below ? ((a > 0 && can_grow) || (a < 0 && can_shrink))
                              : ((a < 0 && can_grow) || (a > 0 && can_shrink));
        if (suitable) {
          enter = y;
          break;
        }
      }
      if (enter != -1) {
        pivot_and_update(x, below ? lower_[xi].value : upper_[xi].value, enter);
        continue;
      }

      // Every column is pegged at the blocking bound: the row is a Farkas
      // combination refuting the violated bound on x.
      FarkasCertificate cert;
      const Bound& own = below ? lower_[xi] : upper_[xi];
      accumulate(cert, own.constraint, own.factor, Rational(1));
      for (const auto& [y, a] : row) {
        auto yi = static_cast<std::size_t>(y);
        const Bound& use = (below == (a > 0)) ? upper_[yi] : lower_[yi];
        if (!use.present) throw InternalError("conflict row references an unbounded column");
        accumulate(cert, use.constraint, use.factor, rational_abs(a));
      }
      return cert;
    }
  }

  Model extract_model() const {
    // Largest delta keeping every bound satisfied after substitution; the
    // lexicographic order guarantees such a delta exists.
    Rational delta(1);
    for (std::size_t i = 0; i < value_.size(); ++i) {
      if (lower_[i].present) {
        const QDelta& b = lower_[i].value;
        const QDelta& v = value_[i];
        if (b.real < v.real && v.inf < b.inf) {
          Rational cap = (v.real - b.real) / (b.inf - v.inf);
          if (cap < delta) delta = cap;
        }
      }
      if (upper_[i].present) {
        const QDelta& b = upper_[i].value;
        const QDelta& v = value_[i];
        if (v.real < b.real && b.inf < v.inf) {
          Rational cap = (b.real - v.real) / (v.inf - b.inf);
          if (cap < delta) delta = cap;
        }
      }
    }
    Model m;
    for (const auto& [v, id] : var_ids_) {
      const QDelta& q = value_[static_cast<std::size_t>(id)];
      m.values[v] = q.real + q.inf * delta;
    }
    return m;
  }
};

}  // namespace

SatResult check_sat(const Conjunction& c, const Limits& limits) {
  return Simplex(c, limits).run();
}

bool verify_certificate(const Conjunction& c, const FarkasCertificate& cert) {
  const auto& cs = c.constraints();
  LinearTerm sum;
  bool strict = false;
  bool nonzero = false;
  for (const auto& [idx, w] : cert.weights) {
    if (idx >= cs.size()) return false;
    if (w == 0) continue;
    const AtomicConstraint& a = cs[idx];
    if (a.relation != Relation::Eq && w < 0) return false;
    if (a.relation == Relation::Gt && w > 0) strict = true;
    LinearTerm t = a.term;
    t *= w;
    sum += t;
    nonzero = true;
  }
  if (!nonzero) return false;
  if (!sum.is_constant()) return false;
  return strict ? sum.constant() <= 0 : sum.constant() < 0;
}

ValidityResult check_valid(const Conjunction& body, const DNFFormula& head, const Limits& limits) {
  DNFFormula negated = head.negation(limits.max_constraints);

  ValidityResult result;
  result.valid = true;
  for (const auto& branch : negated.disjuncts()) {
    limits.check_time();
    Conjunction query = body;
    query.append(branch);
    SatResult r = check_sat(query, limits);
    if (is_sat(r)) {
      Model m = std::get<Model>(std::move(r));
      std::set<Variable> vs;
      body.collect_variables(vs);
      head.collect_variables(vs);
      for (const auto& v : vs) m.values.emplace(v, Rational(0));
      result.valid = false;
      result.countermodel = std::move(m);
      result.branches.clear();
      return result;
    }
    result.branches.push_back(
        ValidityBranch{std::move(query), body.size(), std::get<FarkasCertificate>(std::move(r))});
  }
  return result;
}

}  // namespace hornet
