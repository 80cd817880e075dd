// Rendering half of the frontend. Output is deterministic to the byte:
// fixed orderings, no pointer-dependent iteration anywhere.
#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hornet/diagnostics.hpp"
#include "hornet/frontend.hpp"

namespace hornet {

namespace {

bool valid_tail(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Display names for one clause's variables: native syntax needs an
// uppercase or underscore start, and repeated source names get an index
// suffix so the clause reads back unambiguously.
class NameTable {
 public:
  NameTable(const std::set<Variable>& vars, SourceFormat format,
            const std::set<std::string>& reserved) {
    for (const auto& v : vars) {
      std::string base = sanitize(v.name, format);
      std::string name = base;
      if (used_.count(name) || reserved.count(name)) {
        name = base + "_" + std::to_string(v.index);
      }
      used_.insert(name);
      names_.emplace(v.index, std::move(name));
    }
  }

  const std::string& of(const Variable& v) const {
    auto it = names_.find(v.index);
    if (it == names_.end()) throw InternalError("variable escaped its name table");
    return it->second;
  }

 private:
  static std::string sanitize(const std::string& raw, SourceFormat format) {
    std::string out;
    for (char c : raw) out += valid_tail(c) ? c : '_';
    if (out.empty()) out = "V";
    if (format == SourceFormat::Native) {
      if (out[0] >= 'a' && out[0] <= 'z') {
        out[0] = static_cast<char>(out[0] - 'a' + 'A');
      } else if (out[0] >= '0' && out[0] <= '9') {
        out = "V" + out;
      }
    } else if (out[0] >= '0' && out[0] <= '9') {
      out = "v" + out;
    }
    return out;
  }

  std::map<int, std::string> names_;
  std::set<std::string> used_;
};

std::string rational_literal(const Rational& q, SourceFormat format) {
  if (format == SourceFormat::Native) return to_string(q);
  // SMT terms have no negative literals; wrap in unary minus.
  Rational a = rational_abs(q);
  std::string body = to_string(a);
  auto slash = body.find('/');
  if (slash != std::string::npos) {
    body = "(/ " + body.substr(0, slash) + " " + body.substr(slash + 1) + ")";
  }
  return q < 0 ? "(- " + body + ")" : body;
}

std::string monomial_native(const Rational& coef, const std::string& name) {
  if (coef == 1) return name;
  return to_string(coef) + "*" + name;
}

// LHS keeps positive monomials, negated negatives move right, the constant
// joins whichever side keeps it positive. "X - 10 >= 0" prints as X >= 10.
std::string constraint_native(const AtomicConstraint& c, const NameTable& names) {
  std::vector<std::string> lhs, rhs;
  for (const auto& [v, coef] : c.term.coefficients()) {
    if (coef > 0) {
      lhs.push_back(monomial_native(coef, names.of(v)));
    } else {
      rhs.push_back(monomial_native(Rational(-coef), names.of(v)));
    }
  }
  const Rational& k = c.term.constant();
  if (k > 0) lhs.push_back(to_string(k));
  if (k < 0) rhs.push_back(to_string(Rational(-k)));

  auto join = [](const std::vector<std::string>& parts) {
    if (parts.empty()) return std::string("0");
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
    return out;
  };
  const char* rel = c.relation == Relation::Ge ? " >= " : (c.relation == Relation::Gt ? " > " : " = ");
  return join(lhs) + rel + join(rhs);
}

std::string term_smt(const LinearTerm& t, const NameTable& names) {
  std::vector<std::string> parts;
  for (const auto& [v, coef] : t.coefficients()) {
    if (coef == 1) {
      parts.push_back(names.of(v));
    } else if (coef == -1) {
      parts.push_back("(- " + names.of(v) + ")");
    } else {
      parts.push_back("(* " + rational_literal(coef, SourceFormat::Smtlib2) + " " + names.of(v) + ")");
    }
  }
  if (t.constant() != 0 || parts.empty()) {
    parts.push_back(rational_literal(t.constant(), SourceFormat::Smtlib2));
  }
  if (parts.size() == 1) return parts[0];
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string constraint_smt(const AtomicConstraint& c, const NameTable& names) {
  const char* rel = c.relation == Relation::Ge ? ">=" : (c.relation == Relation::Gt ? ">" : "=");
  return "(" + std::string(rel) + " " + term_smt(c.term, names) + " 0)";
}

std::string constraint_str(const AtomicConstraint& c, SourceFormat format, const NameTable& names) {
  return format == SourceFormat::Native ? constraint_native(c, names) : constraint_smt(c, names);
}

std::string conjunction_str(const Conjunction& c, SourceFormat format, const NameTable& names) {
  if (c.is_true()) return format == SourceFormat::Native ? "true" : "true";
  std::vector<std::string> parts;
  for (const auto& a : c.constraints()) parts.push_back(constraint_str(a, format, names));
  if (format == SourceFormat::Native) {
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += ", " + parts[i];
    return out;
  }
  if (parts.size() == 1) return parts[0];
  std::string out = "(and";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string formula_str(const DNFFormula& f, SourceFormat format, const NameTable& names) {
  if (f.is_false()) return "false";
  if (f.is_true()) return "true";
  std::vector<std::string> parts;
  for (const auto& d : f.disjuncts()) parts.push_back(conjunction_str(d, format, names));
  if (format == SourceFormat::Native) {
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += " ; " + parts[i];
    return out;
  }
  if (parts.size() == 1) return parts[0];
  std::string out = "(or";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string atom_str(const Atom& a, SourceFormat format, const NameTable& names) {
  if (format == SourceFormat::Native) {
    if (a.args.empty()) return a.predicate.name;
    std::string out = a.predicate.name + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i > 0) out += ", ";
      out += names.of(a.args[i]);
    }
    return out + ")";
  }
  if (a.args.empty()) return a.predicate.name;
  std::string out = "(" + a.predicate.name;
  for (const auto& v : a.args) out += " " + names.of(v);
  return out + ")";
}

std::set<Variable> clause_variables(const HornClause& c) {
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

std::string clause_native(const HornClause& c, const std::set<std::string>& reserved) {
  NameTable names(clause_variables(c), SourceFormat::Native, reserved);
  std::string head;
  if (c.has_atom_head()) {
    head = atom_str(c.head_atom(), SourceFormat::Native, names);
  } else {
    const DNFFormula& f = c.head_formula();
    // Multi-disjunct heads need the parens to survive reparsing next to a
    // comma-separated body.
    std::string body = formula_str(f, SourceFormat::Native, names);
    head = f.disjuncts().size() > 1 ? "(" + body + ")" : body;
  }

  std::vector<std::string> parts;
  for (const auto& a : c.body_atoms) parts.push_back(atom_str(a, SourceFormat::Native, names));
  for (const auto& con : c.body_constraint.constraints()) {
    parts.push_back(constraint_str(con, SourceFormat::Native, names));
  }
  if (parts.empty()) return head + ".";
  std::string body = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) body += ", " + parts[i];
  return head + " :- " + body + ".";
}

std::string clause_smt(const HornClause& c, const std::set<std::string>& reserved) {
  std::set<Variable> vars = clause_variables(c);
  NameTable names(vars, SourceFormat::Smtlib2, reserved);

  std::vector<std::string> body_parts;
  for (const auto& a : c.body_atoms) body_parts.push_back(atom_str(a, SourceFormat::Smtlib2, names));
  for (const auto& con : c.body_constraint.constraints()) {
    body_parts.push_back(constraint_smt(con, names));
  }
  std::string body;
  if (body_parts.empty()) {
    body = "true";
  } else if (body_parts.size() == 1) {
    body = body_parts[0];
  } else {
    body = "(and";
    for (const auto& p : body_parts) body += " " + p;
    body += ")";
  }

  std::string head = c.has_atom_head() ? atom_str(c.head_atom(), SourceFormat::Smtlib2, names)
                                       : formula_str(c.head_formula(), SourceFormat::Smtlib2, names);
  std::string imp = "(=> " + body + " " + head + ")";
  if (vars.empty()) return "(assert " + imp + ")";
  std::string binders;
  for (const auto& v : vars) {
    if (!binders.empty()) binders += " ";
    binders += "(" + names.of(v) + " Real)";
  }
  return "(assert (forall (" + binders + ") " + imp + "))";
}

}  // namespace

std::optional<SourceFormat> infer_format(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".chc")) return SourceFormat::Native;
  if (ends_with(".smt2")) return SourceFormat::Smtlib2;
  return std::nullopt;
}

std::string render_system(const ClauseSystem& system, SourceFormat format) {
  std::set<std::string> reserved;
  for (const auto& p : system.predicates) reserved.insert(p.name);

  std::ostringstream out;
  if (format == SourceFormat::Smtlib2) {
    out << "(set-logic HORN)\n";
    for (const auto& p : system.predicates) {
      out << "(declare-fun " << p.name << " (";
      for (int i = 0; i < p.arity; ++i) out << (i > 0 ? " Real" : "Real");
      out << ") Bool)\n";
    }
    for (const auto& wf : system.wf_conditions) out << "(declare-wf " << wf.predicate.name << ")\n";
    for (const auto& c : system.clauses) out << clause_smt(c, reserved) << "\n";
    out << "(check-sat)\n";
    return out.str();
  }

  for (const auto& c : system.clauses) out << clause_native(c, reserved) << "\n";
  for (const auto& wf : system.wf_conditions) {
    out << "wf(" << wf.predicate.name;
    if (wf.predicate.arity > 0) {
      out << "(";
      for (int i = 0; i < wf.predicate.arity; ++i) {
        if (i > 0) out << ", ";
        out << "X" << (i + 1);
      }
      out << ")";
    }
    out << ").\n";
  }
  return out.str();
}

std::string render_solution(const Solution& sol, SourceFormat format) {
  std::ostringstream out;
  if (format == SourceFormat::Smtlib2) {
    out << "(model\n";
    for (const auto& [pred, formula] : sol.entries()) {
      std::set<Variable> formals;
      for (int i = 0; i < pred.arity; ++i) formals.insert(formal_parameter(i));
      NameTable names(formals, SourceFormat::Smtlib2, {});
      out << "  (define-fun " << pred.name << " (";
      for (int i = 0; i < pred.arity; ++i) {
        if (i > 0) out << " ";
        out << "(" << names.of(formal_parameter(i)) << " Real)";
      }
      out << ") Bool " << formula_str(formula, SourceFormat::Smtlib2, names) << ")\n";
    }
    out << ")\n";
    return out.str();
  }

  for (const auto& [pred, formula] : sol.entries()) {
    std::set<Variable> formals;
    for (int i = 0; i < pred.arity; ++i) formals.insert(formal_parameter(i));
    NameTable names(formals, SourceFormat::Native, {});
    out << pred.name;
    if (pred.arity > 0) {
      out << "(";
      for (int i = 0; i < pred.arity; ++i) {
        if (i > 0) out << ", ";
        out << names.of(formal_parameter(i));
      }
      out << ")";
    }
    out << " = " << formula_str(formula, SourceFormat::Native, names) << ".\n";
  }
  return out.str();
}

std::string render_assignment(const Assignment& values) {
  std::set<Variable> vars;
  for (const auto& [v, q] : values) vars.insert(v);
  NameTable names(vars, SourceFormat::Native, {});
  std::ostringstream out;
  for (const auto& [v, q] : values) out << names.of(v) << " = " << to_string(q) << "\n";
  return out.str();
}

std::string render_term(const LinearTerm& t, SourceFormat format) {
  std::set<Variable> vars;
  t.collect_variables(vars);
  NameTable names(vars, format, {});
  if (format == SourceFormat::Smtlib2) return term_smt(t, names);
  std::string out;
  for (const auto& [v, coef] : t.coefficients()) {
    Rational a = rational_abs(coef);
    std::string mono = monomial_native(a, names.of(v));
    if (out.empty()) {
      out = (coef < 0 ? "-" : "") + mono;
    } else {
      out += (coef < 0 ? " - " : " + ") + mono;
    }
  }
  const Rational& k = t.constant();
  if (k != 0 || out.empty()) {
    Rational a = rational_abs(k);
    if (out.empty()) {
      out = to_string(k);
    } else {
      out += (k < 0 ? " - " : " + ") + to_string(a);
    }
  }
  return out;
}

std::string render_constraint(const AtomicConstraint& c, SourceFormat format) {
  std::set<Variable> vars;
  c.term.collect_variables(vars);
  NameTable names(vars, format, {});
  return constraint_str(c, format, names);
}

std::string render_formula(const DNFFormula& f, SourceFormat format) {
  std::set<Variable> vars;
  f.collect_variables(vars);
  NameTable names(vars, format, {});
  return formula_str(f, format, names);
}

}  // namespace hornet
