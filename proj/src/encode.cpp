#include "hornet/encode.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hornet/diagnostics.hpp"
#include "hornet/frontend.hpp"
#include "hornet/qelim.hpp"

namespace hornet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Line {
  int number;
  std::string text;
};

// Comment-stripped, non-blank lines. '#' starts a comment anywhere.
std::vector<Line> logical_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (trim(raw).empty()) continue;
    out.push_back({number, raw});
  }
  return out;
}

bool is_var_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(s[0] == '_' || (s[0] >= 'A' && s[0] <= 'Z'))) return false;
  for (char c : s) {
    if (!(c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) {
      return false;
    }
  }
  return true;
}

bool is_label_name(const std::string& s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s) {
    if (!(c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) {
      return false;
    }
  }
  return true;
}

// First whitespace-delimited word and the rest of the line, with the
// offset of the rest inside the original line (for error positions).
struct Split {
  std::string keyword;
  std::string payload;
  std::size_t payload_col;  // 1-based
};

Split split_keyword(const std::string& line) {
  std::size_t b = line.find_first_not_of(" \t");
  std::size_t e = line.find_first_of(" \t", b);
  if (e == std::string::npos) return {line.substr(b), "", line.size() + 1};
  std::size_t p = line.find_first_not_of(" \t", e);
  if (p == std::string::npos) return {line.substr(b, e - b), "", line.size() + 1};
  return {line.substr(b, e - b), line.substr(p), p + 1};
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Parses a formula at an exact file position: the text is padded so the
// native lexer reports file-relative line and column.
DNFFormula formula_at(const std::string& text, const std::map<std::string, Variable>& env,
                      int line, std::size_t col) {
  std::string padded(static_cast<std::size_t>(line - 1), '\n');
  padded.append(col - 1, ' ');
  padded += text;
  return parse_formula(padded, env);
}

Conjunction false_body() {
  return Conjunction(
      {normalize_constraint(AtomicConstraint{LinearTerm(Rational(-1)), Relation::Ge})});
}

// One stored clause per body disjunct; a false body still produces one
// clause so head predicates always keep a defining clause.
void push_clauses(ClauseSystem& out, const std::vector<Atom>& body_atoms, const DNFFormula& body,
                  std::variant<Atom, DNFFormula> head) {
  std::vector<Conjunction> disjuncts = body.disjuncts();
  if (disjuncts.empty()) disjuncts.push_back(false_body());
  for (const Conjunction& disjunct : disjuncts) {
    HornClause clause;
    clause.id = static_cast<int>(out.clauses.size());
    clause.body_atoms = body_atoms;
    clause.body_constraint = disjunct;
    clause.head = head;
    out.clauses.push_back(std::move(clause));
  }
}

// State copy k: fresh variables named v<k>_<name>.
std::vector<Variable> state_copy(ClauseSystem& out, const std::vector<std::string>& names,
                                 std::size_t k) {
  std::vector<Variable> copy;
  copy.reserve(names.size());
  for (const std::string& n : names) {
    copy.push_back(out.fresh_variable("v" + std::to_string(k) + "_" + n));
  }
  return copy;
}

// Canonical pre-state (and optionally post-state) to the given copies.
Renaming ts_renaming(const TransitionSystem& ts, const std::vector<Variable>& pre,
                     const std::vector<Variable>* post) {
  Renaming r;
  for (std::size_t i = 0; i < ts.vars.size(); ++i) {
    r.emplace(ts.pre(i), pre[i]);
    if (post != nullptr) r.emplace(ts.post(i), (*post)[i]);
  }
  return r;
}

std::vector<Variable> concat(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  std::vector<Variable> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

Variable TransitionSystem::pre(std::size_t i) const {
  return Variable{static_cast<int>(i), vars[i]};
}

Variable TransitionSystem::post(std::size_t i) const {
  return Variable{static_cast<int>(vars.size() + i), vars[i] + "'"};
}

const DNFFormula& TransitionSystem::transition(const std::string& label) const {
  for (const auto& [name, f] : transitions) {
    if (name == label) return f;
  }
  throw InputError("unknown transition label " + label);
}

TransitionSystem parse_transition_system(const std::string& text) {
  TransitionSystem ts;
  std::map<std::string, Variable> pre_env, full_env;
  bool have_vars = false;
  std::set<std::string> seen_sections;
  std::vector<std::pair<std::string, int>> child_labels;

  auto require_vars = [&](const Split& s, int line) {
    if (!have_vars) {
      throw ParseError("'" + s.keyword + "' before the vars declaration", line, 1);
    }
  };
  auto once = [&](const std::string& keyword, int line) {
    if (!seen_sections.insert(keyword).second) {
      throw ParseError("duplicate '" + keyword + "' section", line, 1);
    }
  };

  for (const Line& line : logical_lines(text)) {
    Split s = split_keyword(line.text);
    if (s.keyword == "vars") {
      once("vars", line.number);
      for (const std::string& name : split_commas(s.payload)) {
        if (!is_var_name(name)) {
          throw ParseError("invalid variable name '" + name + "'", line.number, 1);
        }
        if (std::count(ts.vars.begin(), ts.vars.end(), name) != 0) {
          throw ParseError("duplicate variable " + name, line.number, 1);
        }
        ts.vars.push_back(name);
      }
      if (ts.vars.empty()) throw ParseError("empty vars declaration", line.number, 1);
      for (std::size_t i = 0; i < ts.vars.size(); ++i) {
        pre_env.emplace(ts.vars[i], ts.pre(i));
        full_env.emplace(ts.vars[i], ts.pre(i));
        full_env.emplace(ts.vars[i] + "'", ts.post(i));
      }
      have_vars = true;
    } else if (s.keyword == "init" || s.keyword == "safe" || s.keyword == "guard" ||
               s.keyword == "node") {
      require_vars(s, line.number);
      once(s.keyword, line.number);
      DNFFormula f = formula_at(s.payload, pre_env, line.number, s.payload_col);
      if (s.keyword == "init") {
        ts.init = std::move(f);
      } else if (s.keyword == "safe") {
        ts.safe = std::move(f);
      } else if (s.keyword == "guard") {
        ts.guard = std::move(f);
      } else {
        ts.node_label = std::move(f);
      }
    } else if (s.keyword == "summary") {
      require_vars(s, line.number);
      once("summary", line.number);
      ts.summary = formula_at(s.payload, full_env, line.number, s.payload_col);
    } else if (s.keyword == "trans" || s.keyword == "child") {
      require_vars(s, line.number);
      std::size_t colon = s.payload.find(':');
      if (colon == std::string::npos) {
        throw ParseError("expected '<label>: <formula>'", line.number, 1);
      }
      std::string label = trim(s.payload.substr(0, colon));
      if (!is_label_name(label)) {
        throw ParseError("invalid transition label '" + label + "'", line.number, 1);
      }
      std::string body = s.payload.substr(colon + 1);
      std::size_t body_col = s.payload_col + colon + 1;
      if (s.keyword == "trans") {
        for (const auto& [existing, f] : ts.transitions) {
          if (existing == label) {
            throw ParseError("duplicate transition label " + label, line.number, 1);
          }
        }
        ts.transitions.emplace_back(label, formula_at(body, full_env, line.number, body_col));
      } else {
        ts.children.emplace_back(label, formula_at(body, pre_env, line.number, body_col));
        child_labels.emplace_back(label, line.number);
      }
    } else {
      throw ParseError("unknown directive '" + s.keyword + "'", line.number, 1);
    }
  }
  if (!have_vars) throw ParseError("missing vars declaration", 1, 1);
  for (const auto& [label, line] : child_labels) {
    bool found = false;
    for (const auto& [name, f] : ts.transitions) found = found || name == label;
    if (!found) throw ParseError("child references unknown transition " + label, line, 1);
  }
  return ts;
}

SearchNode search_node(const TransitionSystem& ts) {
  if (!ts.node_label.has_value()) throw InputError("no node label declared");
  if (ts.children.empty()) throw InputError("search tree node needs at least one child");
  SearchNode node;
  node.label = *ts.node_label;
  for (const auto& [label, child_label] : ts.children) {
    node.children.push_back(SearchChild{ts.transition(label), child_label});
  }
  return node;
}

// ---------------------------------------------------------------------------
// Procedural programs.

const Procedure& ProceduralProgram::procedure(const std::string& name) const {
  for (const auto& p : procedures) {
    if (p.name == name) return p;
  }
  throw InputError("unknown procedure " + name);
}

const NestedTransition& ProceduralProgram::transition(const std::string& label) const {
  for (const auto& t : transitions) {
    if (t.label == label) return t;
  }
  throw InputError("unknown transition label " + label);
}

Variable ProceduralProgram::pre(const std::string& var_name) const {
  int idx = 0;
  for (const auto& g : globals) {
    if (g == var_name) return Variable{idx, var_name};
    ++idx;
  }
  for (const auto& p : procedures) {
    for (const auto& l : p.locals) {
      if (l == var_name) return Variable{idx, var_name};
      ++idx;
    }
  }
  throw InternalError("unknown program variable " + var_name);
}

Variable ProceduralProgram::post(const std::string& var_name) const {
  int total = static_cast<int>(globals.size());
  for (const auto& p : procedures) total += static_cast<int>(p.locals.size());
  Variable v = pre(var_name);
  return Variable{v.index + total, var_name + "'"};
}

ProceduralProgram parse_procedural_program(const std::string& text) {
  ProceduralProgram prog;

  struct RawForm {
    NestedTransition::Kind kind;
    bool is_safe = false;
    bool is_init = false;
    std::string label, callee, text;
    int line;
    std::size_t col;
    std::size_t proc;
  };
  std::vector<RawForm> raw;
  bool have_globals = false;
  bool in_proc = false;
  std::set<std::string> labels;

  for (const Line& line : logical_lines(text)) {
    Split s = split_keyword(line.text);
    if (s.keyword == "globals") {
      if (have_globals) throw ParseError("duplicate globals declaration", line.number, 1);
      if (in_proc) throw ParseError("globals inside a procedure", line.number, 1);
      for (const std::string& name : split_commas(s.payload)) {
        if (!is_var_name(name)) {
          throw ParseError("invalid variable name '" + name + "'", line.number, 1);
        }
        prog.globals.push_back(name);
      }
      have_globals = true;
    } else if (s.keyword == "proc") {
      if (in_proc) throw ParseError("missing 'end' before 'proc'", line.number, 1);
      std::string name = trim(s.payload);
      if (!is_label_name(name)) {
        throw ParseError("invalid procedure name '" + name + "'", line.number, 1);
      }
      for (const auto& p : prog.procedures) {
        if (p.name == name) throw ParseError("duplicate procedure " + name, line.number, 1);
      }
      prog.procedures.push_back(Procedure{name, {}, DNFFormula::top()});
      in_proc = true;
    } else if (s.keyword == "end") {
      if (!in_proc) throw ParseError("'end' outside a procedure", line.number, 1);
      in_proc = false;
    } else if (s.keyword == "locals") {
      if (!in_proc) throw ParseError("'locals' outside a procedure", line.number, 1);
      Procedure& p = prog.procedures.back();
      if (!p.locals.empty()) throw ParseError("duplicate locals declaration", line.number, 1);
      for (const std::string& name : split_commas(s.payload)) {
        if (!is_var_name(name)) {
          throw ParseError("invalid variable name '" + name + "'", line.number, 1);
        }
        p.locals.push_back(name);
      }
    } else if (s.keyword == "inst" || s.keyword == "call" || s.keyword == "ret" ||
               s.keyword == "safe" || s.keyword == "init") {
      if (!in_proc) throw ParseError("'" + s.keyword + "' outside a procedure", line.number, 1);
      RawForm r;
      r.line = line.number;
      r.proc = prog.procedures.size() - 1;
      if (s.keyword == "safe" || s.keyword == "init") {
        r.is_safe = s.keyword == "safe";
        r.is_init = s.keyword == "init";
        r.text = s.payload;
        r.col = s.payload_col;
        if (r.is_init && prog.procedures.back().name != "main") {
          throw ParseError("'init' belongs in main", line.number, 1);
        }
      } else {
        std::size_t colon = s.payload.find(':');
        if (colon == std::string::npos) {
          throw ParseError("expected '<label>: <formula>'", line.number, 1);
        }
        std::string head = trim(s.payload.substr(0, colon));
        if (s.keyword == "call") {
          std::size_t arrow = head.find("->");
          if (arrow == std::string::npos) {
            throw ParseError("expected 'call <label> -> <callee>: <formula>'", line.number, 1);
          }
          r.callee = trim(head.substr(arrow + 2));
          head = trim(head.substr(0, arrow));
          if (!is_label_name(r.callee)) {
            throw ParseError("invalid procedure name '" + r.callee + "'", line.number, 1);
          }
        }
        if (!is_label_name(head)) {
          throw ParseError("invalid transition label '" + head + "'", line.number, 1);
        }
        if (!labels.insert(head).second) {
          throw ParseError("duplicate transition label " + head, line.number, 1);
        }
        r.label = head;
        r.kind = s.keyword == "inst"   ? NestedTransition::Inst
                 : s.keyword == "call" ? NestedTransition::Call
                                       : NestedTransition::Ret;
        r.text = s.payload.substr(colon + 1);
        r.col = s.payload_col + colon + 1;
      }
      raw.push_back(std::move(r));
    } else {
      throw ParseError("unknown directive '" + s.keyword + "'", line.number, 1);
    }
  }
  if (in_proc) throw ParseError("missing 'end'", 1, 1);
  if (prog.procedures.empty()) throw ParseError("no procedures declared", 1, 1);
  bool has_main = false;
  for (const auto& p : prog.procedures) has_main = has_main || p.name == "main";
  if (!has_main) throw ParseError("no procedure named main", 1, 1);

  // Globals and all locals share one namespace; overlap would make call
  // formulas ambiguous.
  std::set<std::string> names(prog.globals.begin(), prog.globals.end());
  if (names.size() != prog.globals.size()) throw ParseError("duplicate global variable", 1, 1);
  for (const auto& p : prog.procedures) {
    for (const auto& l : p.locals) {
      if (!names.insert(l).second) {
        throw ParseError("variable " + l + " declared twice (globals and locals are one namespace)",
                         1, 1);
      }
    }
  }

  // Callee names resolve against the full procedure list, so formula
  // parsing happens after the structural pass.
  auto env_of = [&](std::size_t proc, bool primed_globals, bool primed_locals,
                    const std::string& callee) {
    std::map<std::string, Variable> env;
    for (const auto& g : prog.globals) {
      env.emplace(g, prog.pre(g));
      if (primed_globals) env.emplace(g + "'", prog.post(g));
    }
    for (const auto& l : prog.procedures[proc].locals) {
      env.emplace(l, prog.pre(l));
      if (primed_locals) env.emplace(l + "'", prog.post(l));
    }
    if (!callee.empty()) {
      for (const auto& l : prog.procedure(callee).locals) env.emplace(l, prog.pre(l));
    }
    return env;
  };

  for (const RawForm& r : raw) {
    if (r.is_init) {
      std::size_t main_idx = 0;
      while (prog.procedures[main_idx].name != "main") ++main_idx;
      prog.init = formula_at(r.text, env_of(main_idx, false, false, ""), r.line, r.col);
      continue;
    }
    if (r.is_safe) {
      prog.procedures[r.proc].safe = formula_at(r.text, env_of(r.proc, false, false, ""), r.line,
                                                r.col);
      continue;
    }
    NestedTransition t;
    t.kind = r.kind;
    t.label = r.label;
    t.proc = prog.procedures[r.proc].name;
    t.callee = r.callee;
    switch (r.kind) {
      case NestedTransition::Inst:
        t.formula = formula_at(r.text, env_of(r.proc, true, true, ""), r.line, r.col);
        break;
      case NestedTransition::Call:
        if (r.callee == t.proc) {
          throw ParseError("recursive call to " + r.callee + " cannot be encoded", r.line, 1);
        }
        {
          bool known = false;
          for (const auto& p : prog.procedures) known = known || p.name == r.callee;
          if (!known) throw ParseError("unknown procedure " + r.callee, r.line, 1);
        }
        t.formula = formula_at(r.text, env_of(r.proc, false, false, r.callee), r.line, r.col);
        break;
      case NestedTransition::Ret:
        t.formula = formula_at(r.text, env_of(r.proc, true, false, ""), r.line, r.col);
        break;
    }
    prog.transitions.push_back(std::move(t));
  }
  return prog;
}

// ---------------------------------------------------------------------------
// Encoders.

ClauseSystem encode_path(const TransitionSystem& ts, const std::vector<std::string>& path) {
  ClauseSystem out;
  std::size_t n = path.size();
  std::vector<PredicateSymbol> preds;
  for (std::size_t k = 0; k <= n; ++k) {
    preds.push_back({"i" + std::to_string(k), static_cast<int>(ts.vars.size())});
    out.declare_predicate(preds.back());
  }
  std::vector<std::vector<Variable>> copies;
  for (std::size_t k = 0; k <= n; ++k) copies.push_back(state_copy(out, ts.vars, k));

  push_clauses(out, {}, ts.init.rename(ts_renaming(ts, copies[0], nullptr)),
               Atom{preds[0], copies[0]});
  for (std::size_t k = 1; k <= n; ++k) {
    push_clauses(out, {Atom{preds[k - 1], copies[k - 1]}},
                 ts.transition(path[k - 1]).rename(ts_renaming(ts, copies[k - 1], &copies[k])),
                 Atom{preds[k], copies[k]});
  }
  push_clauses(out, {Atom{preds[n], copies[n]}}, DNFFormula::top(),
               ts.safe.rename(ts_renaming(ts, copies[n], nullptr)));
  return out;
}

ClauseSystem encode_transition(const TransitionSystem& ts, const std::vector<std::string>& path) {
  ClauseSystem out;
  std::size_t n = path.size();
  std::vector<PredicateSymbol> preds;
  for (std::size_t k = 1; k <= n; ++k) {
    preds.push_back({"t" + std::to_string(k), static_cast<int>(2 * ts.vars.size())});
    out.declare_predicate(preds.back());
  }
  std::vector<std::vector<Variable>> copies;
  for (std::size_t k = 0; k <= n; ++k) copies.push_back(state_copy(out, ts.vars, k));

  for (std::size_t k = 1; k <= n; ++k) {
    push_clauses(out, {},
                 ts.transition(path[k - 1]).rename(ts_renaming(ts, copies[k - 1], &copies[k])),
                 Atom{preds[k - 1], concat(copies[k - 1], copies[k])});
  }
  std::vector<Atom> final_body;
  for (std::size_t k = 1; k <= n; ++k) {
    final_body.push_back(Atom{preds[k - 1], concat(copies[k - 1], copies[k])});
  }
  push_clauses(out, final_body, ts.init.rename(ts_renaming(ts, copies[0], nullptr)),
               ts.safe.rename(ts_renaming(ts, copies[n], nullptr)));
  return out;
}

ClauseSystem encode_wellfounded(const TransitionSystem& ts, const std::vector<std::string>& stem,
                                const std::vector<std::string>& loop) {
  if (loop.empty()) throw InputError("loop must be nonempty");
  ClauseSystem out;
  std::size_t m = stem.size(), n = loop.size();
  std::vector<PredicateSymbol> interp, rel;
  for (std::size_t k = 0; k <= m; ++k) {
    interp.push_back({"i" + std::to_string(k), static_cast<int>(ts.vars.size())});
    out.declare_predicate(interp.back());
  }
  for (std::size_t k = 1; k <= n; ++k) {
    rel.push_back({"t" + std::to_string(k), static_cast<int>(2 * ts.vars.size())});
    out.declare_predicate(rel.back());
  }
  std::vector<std::vector<Variable>> copies;
  for (std::size_t k = 0; k <= m + n; ++k) copies.push_back(state_copy(out, ts.vars, k));

  push_clauses(out, {}, ts.init.rename(ts_renaming(ts, copies[0], nullptr)),
               Atom{interp[0], copies[0]});
  for (std::size_t k = 1; k <= m; ++k) {
    push_clauses(out, {Atom{interp[k - 1], copies[k - 1]}},
                 ts.transition(stem[k - 1]).rename(ts_renaming(ts, copies[k - 1], &copies[k])),
                 Atom{interp[k], copies[k]});
  }
  // T_k spans loop entry (copy m) to copy m+k.
  push_clauses(out, {Atom{interp[m], copies[m]}},
               ts.transition(loop[0]).rename(ts_renaming(ts, copies[m], &copies[m + 1])),
               Atom{rel[0], concat(copies[m], copies[m + 1])});
  for (std::size_t k = 2; k <= n; ++k) {
    push_clauses(
        out, {Atom{rel[k - 2], concat(copies[m], copies[m + k - 1])}},
        ts.transition(loop[k - 1]).rename(ts_renaming(ts, copies[m + k - 1], &copies[m + k])),
        Atom{rel[k - 1], concat(copies[m], copies[m + k])});
  }
  out.wf_conditions.push_back(WfCondition{rel[n - 1]});
  return out;
}

ClauseSystem encode_state_transition(const TransitionSystem& ts,
                                     const std::vector<std::string>& path) {
  if (path.empty()) throw InputError("path must be nonempty");
  if (!ts.guard.has_value()) throw InputError("no guard declared");
  if (!ts.summary.has_value()) throw InputError("no summary declared");
  ClauseSystem out;
  std::size_t n = path.size();
  std::vector<PredicateSymbol> summaries, guards;
  for (std::size_t k = 1; k <= n; ++k) {
    summaries.push_back({"s" + std::to_string(k), static_cast<int>(2 * ts.vars.size())});
    out.declare_predicate(summaries.back());
  }
  for (std::size_t k = 1; k <= n; ++k) {
    guards.push_back({"g" + std::to_string(k), static_cast<int>(ts.vars.size())});
    out.declare_predicate(guards.back());
  }
  std::vector<std::vector<Variable>> copies;
  for (std::size_t k = 0; k <= n; ++k) copies.push_back(state_copy(out, ts.vars, k));

  for (std::size_t k = 1; k <= n; ++k) {
    push_clauses(out, {},
                 ts.transition(path[k - 1]).rename(ts_renaming(ts, copies[k - 1], &copies[k])),
                 Atom{summaries[k - 1], concat(copies[k - 1], copies[k])});
  }
  push_clauses(out, {}, ts.guard->rename(ts_renaming(ts, copies[0], nullptr)),
               Atom{guards[0], copies[0]});
  for (std::size_t k = 1; k < n; ++k) {
    push_clauses(out,
                 {Atom{guards[k - 1], copies[k - 1]},
                  Atom{summaries[k - 1], concat(copies[k - 1], copies[k])}},
                 DNFFormula::top(), Atom{guards[k], copies[k]});
  }
  push_clauses(
      out,
      {Atom{guards[n - 1], copies[n - 1]}, Atom{summaries[n - 1], concat(copies[n - 1], copies[n])}},
      DNFFormula::top(), ts.summary->rename(ts_renaming(ts, copies[n - 1], &copies[n])));
  return out;
}

ClauseSystem encode_search_tree(const SearchNode& node, const std::vector<std::string>& var_names,
                                QuantifierMode mode, const Limits& limits) {
  if (node.children.empty()) throw InputError("search tree node needs at least one child");
  ClauseSystem out;
  std::size_t m = node.children.size();
  std::size_t v = var_names.size();
  std::vector<PredicateSymbol> preds;
  for (std::size_t k = 1; k <= m; ++k) {
    preds.push_back({"i" + std::to_string(k), static_cast<int>(v)});
    out.declare_predicate(preds.back());
  }
  std::vector<Variable> copy = state_copy(out, var_names, 0);

  // Canonical variables, matching the TransitionSystem layout.
  Renaming pre_to_copy, pre_to_post;
  std::set<Variable> post_vars;
  for (std::size_t i = 0; i < v; ++i) {
    Variable pre{static_cast<int>(i), var_names[i]};
    Variable post{static_cast<int>(v + i), var_names[i] + "'"};
    pre_to_copy.emplace(pre, copy[i]);
    pre_to_post.emplace(pre, post);
    post_vars.insert(post);
  }

  for (std::size_t k = 1; k <= m; ++k) {
    push_clauses(out, {}, node.label.rename(pre_to_copy), Atom{preds[k - 1], copy});
  }
  for (std::size_t k = 1; k <= m; ++k) {
    const SearchChild& child = node.children[k - 1];
    DNFFormula successor = child.label.rename(pre_to_post);
    DNFFormula head;
    if (mode == QuantifierMode::Existential) {
      // exists v'. (next -> label'): QE over the disjunction directly.
      DNFFormula f = DNFFormula::disjoin(child.transition.negation(limits.max_constraints),
                                         successor);
      head = eliminate(f, post_vars, limits);
    } else {
      // not exists v'. (next /\ not label').
      DNFFormula f = DNFFormula::conjoin(child.transition,
                                         successor.negation(limits.max_constraints),
                                         limits.max_constraints);
      head = eliminate(f, post_vars, limits).negation(limits.max_constraints);
    }
    push_clauses(out, {Atom{preds[k - 1], copy}}, DNFFormula::top(), head.rename(pre_to_copy));
  }
  return out;
}

ClauseSystem encode_nested(const ProceduralProgram& prog, const std::vector<std::string>& path) {
  ClauseSystem out;
  std::size_t n = path.size();

  struct Frame {
    const Procedure* proc;
    std::vector<Variable> locals;
    // Caller state captured at the call, conjoined into the return clause.
    PredicateSymbol pending_pred;
    std::vector<Variable> pending_args;
  };

  auto mint = [&](const std::vector<std::string>& names, std::size_t k) {
    return state_copy(out, names, k);
  };
  auto stack_trace = [](const std::vector<Frame>& stack) {
    std::string s;
    for (const auto& f : stack) {
      if (!s.empty()) s += " > ";
      s += f.proc->name;
    }
    return s;
  };

  const Procedure& main = prog.procedure("main");
  std::vector<Variable> globals = mint(prog.globals, 0);
  std::vector<Frame> stack;
  stack.push_back(Frame{&main, mint(main.locals, 0), PredicateSymbol{}, {}});

  auto pred_at = [&](std::size_t k, const Procedure& p) {
    PredicateSymbol sym{"i" + std::to_string(k),
                        static_cast<int>(prog.globals.size() + p.locals.size())};
    out.declare_predicate(sym);
    return sym;
  };

  PredicateSymbol current = pred_at(0, main);
  push_clauses(out, {}, prog.init.rename([&] {
    Renaming r;
    for (std::size_t i = 0; i < prog.globals.size(); ++i) {
      r.emplace(prog.pre(prog.globals[i]), globals[i]);
    }
    for (std::size_t i = 0; i < main.locals.size(); ++i) {
      r.emplace(prog.pre(main.locals[i]), stack[0].locals[i]);
    }
    return r;
  }()),
               Atom{current, concat(globals, stack[0].locals)});

  for (std::size_t k = 1; k <= n; ++k) {
    const NestedTransition& t = prog.transition(path[k - 1]);
    Frame& top = stack.back();
    if (t.proc != top.proc->name) {
      throw InputError("calling discipline violated at step " + std::to_string(k) + ": label " +
                       t.label + " belongs to " + t.proc + " but the current procedure is " +
                       top.proc->name + "; stack: " + stack_trace(stack));
    }
    Atom prev{current, concat(globals, top.locals)};
    Renaming r;
    for (std::size_t i = 0; i < prog.globals.size(); ++i) {
      r.emplace(prog.pre(prog.globals[i]), globals[i]);
    }
    for (std::size_t i = 0; i < top.proc->locals.size(); ++i) {
      r.emplace(prog.pre(top.proc->locals[i]), top.locals[i]);
    }

    if (t.kind == NestedTransition::Inst) {
      std::vector<Variable> g2 = mint(prog.globals, k);
      std::vector<Variable> l2 = mint(top.proc->locals, k);
      for (std::size_t i = 0; i < prog.globals.size(); ++i) {
        r.emplace(prog.post(prog.globals[i]), g2[i]);
      }
      for (std::size_t i = 0; i < top.proc->locals.size(); ++i) {
        r.emplace(prog.post(top.proc->locals[i]), l2[i]);
      }
      PredicateSymbol next = pred_at(k, *top.proc);
      push_clauses(out, {prev}, t.formula.rename(r), Atom{next, concat(g2, l2)});
      globals = std::move(g2);
      top.locals = std::move(l2);
      current = next;
    } else if (t.kind == NestedTransition::Call) {
      const Procedure& callee = prog.procedure(t.callee);
      std::vector<Variable> lq = mint(callee.locals, k);
      for (std::size_t i = 0; i < callee.locals.size(); ++i) {
        r.emplace(prog.pre(callee.locals[i]), lq[i]);
      }
      PredicateSymbol next = pred_at(k, callee);
      push_clauses(out, {prev}, t.formula.rename(r), Atom{next, concat(globals, lq)});
      stack.push_back(Frame{&callee, lq, current, prev.args});
      current = next;
    } else {
      if (stack.size() < 2) {
        throw InputError("calling discipline violated at step " + std::to_string(k) +
                         ": return from " + top.proc->name + " with no caller; stack: " +
                         stack_trace(stack));
      }
      std::vector<Variable> g2 = mint(prog.globals, k);
      for (std::size_t i = 0; i < prog.globals.size(); ++i) {
        r.emplace(prog.post(prog.globals[i]), g2[i]);
      }
      Frame returning = std::move(stack.back());
      stack.pop_back();
      Frame& caller = stack.back();
      PredicateSymbol next = pred_at(k, *caller.proc);
      push_clauses(out, {prev, Atom{returning.pending_pred, returning.pending_args}},
                   t.formula.rename(r), Atom{next, concat(g2, caller.locals)});
      globals = std::move(g2);
      current = next;
    }
  }

  const Frame& top = stack.back();
  Renaming r;
  for (std::size_t i = 0; i < prog.globals.size(); ++i) {
    r.emplace(prog.pre(prog.globals[i]), globals[i]);
  }
  for (std::size_t i = 0; i < top.proc->locals.size(); ++i) {
    r.emplace(prog.pre(top.proc->locals[i]), top.locals[i]);
  }
  push_clauses(out, {Atom{current, concat(globals, top.locals)}}, DNFFormula::top(),
               top.proc->safe.rename(r));
  return out;
}

ClauseSystem encode_unfolding(const ClauseSystem& recursive, const std::vector<int>& expansion) {
  if (!recursive.wf_conditions.empty()) {
    throw InputError("unfolding input may not contain wf conditions");
  }
  auto is_fact = [](const HornClause& c) { return c.has_atom_head() && c.body_atoms.empty(); };
  auto is_rule = [](const HornClause& c) { return c.has_atom_head() && !c.body_atoms.empty(); };

  auto clause_by_id = [&](int id) -> const HornClause& {
    for (const auto& c : recursive.clauses) {
      if (c.id == id) return c;
    }
    throw InputError("no clause with id " + std::to_string(id));
  };

  // Leading facts and trailing queries in the expansion are implied; strip
  // them so the caller may pass the full clause walk or just the rules.
  std::size_t begin = 0, end = expansion.size();
  while (begin < end && is_fact(clause_by_id(expansion[begin]))) ++begin;
  while (end > begin && clause_by_id(expansion[end - 1]).is_query()) --end;

  ClauseSystem out;
  std::map<PredicateSymbol, int> gen;
  std::map<std::string, PredicateSymbol> copy_names;

  auto copy_of = [&](const PredicateSymbol& p, int g) {
    PredicateSymbol sym{p.name + std::to_string(g), p.arity};
    auto it = copy_names.find(sym.name);
    if (it != copy_names.end()) {
      if (!(it->second == p)) {
        throw InputError("unfolded predicate name collision: " + sym.name);
      }
    } else {
      copy_names.emplace(sym.name, p);
      out.declare_predicate(sym);
    }
    return sym;
  };

  auto emit = [&](const HornClause& c, int head_gen) {
    Renaming r;
    std::set<Variable> vars = c.body_constraint.variables();
    for (const auto& a : c.body_atoms) vars.insert(a.args.begin(), a.args.end());
    if (c.has_atom_head()) {
      vars.insert(c.head_atom().args.begin(), c.head_atom().args.end());
    } else {
      c.head_formula().collect_variables(vars);
    }
    for (const Variable& v : vars) r.emplace(v, out.fresh_variable(v.name));

    HornClause copy;
    copy.id = static_cast<int>(out.clauses.size());
    copy.body_constraint = c.body_constraint.rename(r);
    for (const auto& a : c.body_atoms) {
      auto g = gen.find(a.predicate);
      if (g == gen.end()) {
        throw InputError("clause " + std::to_string(c.id) + " uses " + a.predicate.name +
                         " before any unfolding step produced it");
      }
      std::vector<Variable> args;
      for (const auto& v : a.args) args.push_back(r.at(v));
      copy.body_atoms.push_back(Atom{copy_of(a.predicate, g->second), std::move(args)});
    }
    if (c.has_atom_head()) {
      std::vector<Variable> args;
      for (const auto& v : c.head_atom().args) args.push_back(r.at(v));
      copy.head = Atom{copy_of(c.head_atom().predicate, head_gen), std::move(args)};
    } else {
      copy.head = c.head_formula().rename(r);
    }
    out.clauses.push_back(std::move(copy));
  };

  for (const auto& c : recursive.clauses) {
    if (!is_fact(c)) continue;
    emit(c, 0);
    gen[c.head_atom().predicate] = 0;
  }
  for (std::size_t i = begin; i < end; ++i) {
    const HornClause& c = clause_by_id(expansion[i]);
    if (!is_rule(c)) {
      throw InputError("expansion step " + std::to_string(i + 1) + " (clause " +
                       std::to_string(expansion[i]) + ") is not a rule clause");
    }
    const PredicateSymbol& head = c.head_atom().predicate;
    int next_gen = gen.count(head) ? gen[head] + 1 : 0;
    emit(c, next_gen);
    gen[head] = next_gen;
  }
  for (const auto& c : recursive.clauses) {
    if (!c.is_query()) continue;
    emit(c, 0);
  }
  return out;
}

}  // namespace hornet
