// Parsing half of the frontend: the native clause syntax and the SMT-LIB2
// subset, plus solution files in both formats.
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "hornet/diagnostics.hpp"
#include "hornet/frontend.hpp"
#include "hornet/limits.hpp"

namespace hornet {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_name_tail(char c) { return is_digit(c) || is_lower(c) || is_upper(c) || c == '_'; }

// ---------------------------------------------------------------------------
// Native syntax.
//
//   clause  := head [ ":-" literal ("," literal)* ] "."
//   head    := atom | "true" | "false" | formula
//   literal := atom | "true" | "false" | constraint | "(" formula ")"
//   formula := conj (";" conj)*
//   conj    := flit ("," flit)*
//   flit    := constraint | "true" | "false" | "(" formula ")"
//   wfdecl  := "wf" "(" ident [ "(" var ("," var)* ")" ] ")" "."
//
// Variables start uppercase or with '_'; a bare "_" is anonymous and fresh
// at every occurrence. Predicates start lowercase. Disjunctive bodies are
// compiled into one stored clause per disjunct.

struct Token {
  enum Kind { Ident, Var, Int, Punct, End };
  Kind kind;
  std::string text;
  int line;
  int col;
};

class NativeLexer {
 public:
  explicit NativeLexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      int line = line_, col = col_;
      char c = text_[pos_];
      if (is_lower(c)) {
        out.push_back({Token::Ident, take_name(), line, col});
      } else if (is_upper(c) || c == '_') {
        std::string name = take_name();
        while (pos_ < text_.size() && text_[pos_] == '\'') {
          name += '\'';
          advance();
        }
        out.push_back({Token::Var, name, line, col});
      } else if (is_digit(c)) {
        out.push_back({Token::Int, take_number(), line, col});
      } else {
        out.push_back({Token::Punct, take_punct(), line, col});
      }
    }
    out.push_back({Token::End, "", line_, col_});
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++col_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else {
        break;
      }
    }
  }

  std::string take_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_tail(text_[pos_])) advance();
    return text_.substr(start, pos_ - start);
  }

  std::string take_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' && is_digit(text_[pos_ + 1])) {
      throw ParseError("decimal literals are not supported, write a fraction like 1/2", line_, col_);
    }
    return text_.substr(start, pos_ - start);
  }

  std::string take_punct() {
    char c = text_[pos_];
    char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    switch (c) {
      case '(': case ')': case ',': case ';': case '.':
      case '+': case '-': case '*': case '/':
        advance();
        return std::string(1, c);
      case ':':
        if (next != '-') throw ParseError("expected ':-'", line_, col_);
        advance();
        advance();
        return ":-";
      case '>':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          return ">=";
        }
        return ">";
      case '=':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '<') {
          advance();
          return "=<";
        }
        return "=";
      case '<':
        if (next == '=') throw ParseError("'<=' is not valid here, write '=<'", line_, col_);
        advance();
        return "<";
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_relation(const Token& t) {
  return t.kind == Token::Punct &&
         (t.text == ">=" || t.text == "=<" || t.text == ">" || t.text == "<" || t.text == "=");
}

// A term that is exactly one variable with coefficient 1.
std::optional<Variable> as_plain_variable(const LinearTerm& t) {
  if (t.constant() != 0 || t.coefficients().size() != 1) return std::nullopt;
  const auto& [v, c] = *t.coefficients().begin();
  if (c != 1) return std::nullopt;
  return v;
}

AtomicConstraint make_constraint(LinearTerm lhs, const std::string& rel, const LinearTerm& rhs) {
  // Everything becomes t >= 0, t > 0 or t = 0 with t = lhs - rhs (flipped
  // for =< and <).
  LinearTerm t = lhs;
  t -= rhs;
  if (rel == ">=") return {t, Relation::Ge};
  if (rel == ">") return {t, Relation::Gt};
  if (rel == "=") return {t, Relation::Eq};
  LinearTerm flip = rhs;
  flip -= lhs;
  if (rel == "=<") return {flip, Relation::Ge};
  return {flip, Relation::Gt};  // "<"
}

// Resolves variable names while parsing terms. Clause parsing mints fresh
// variables on first sight; solution parsing only accepts the formals.
struct VarScope {
  ClauseSystem* mint = nullptr;
  std::map<std::string, Variable> names;

  Variable resolve(const std::string& name, int line, int col) {
    if (name == "_" && mint != nullptr) return mint->fresh_variable("_");
    auto it = names.find(name);
    if (it != names.end()) return it->second;
    if (mint == nullptr) {
      throw ParseError("unknown variable " + name, line, col);
    }
    Variable v = mint->fresh_variable(name);
    names.emplace(name, v);
    return v;
  }
};

void emit_clauses(ClauseSystem& sys, std::vector<Atom> body_atoms,
                  const std::vector<DNFFormula>& body_parts, std::variant<Atom, DNFFormula> head,
                  std::size_t max_constraints, int line, int col);

// One clause (or solution entry) worth of parsing state.
class NativeParser {
 public:
  NativeParser(std::vector<Token> toks, ClauseSystem& sys) : toks_(std::move(toks)), sys_(sys) {}

  void parse_program() {
    while (peek().kind != Token::End) {
      if (peek().kind == Token::Ident && peek().text == "wf" && peek(1).text == "(") {
        parse_wf_decl();
      } else {
        parse_clause();
      }
    }
    check_wf_decls();
  }

  DNFFormula parse_closed_formula(const std::map<std::string, Variable>& env) {
    scope_ = VarScope{nullptr, env};
    DNFFormula f = parse_formula();
    const Token& t = peek();
    if (t.kind != Token::End) {
      throw ParseError("unexpected '" + describe(t) + "' after formula", t.line, t.col);
    }
    f.normalize();
    return f;
  }

  Solution parse_solution_entries(const ClauseSystem& against) {
    Solution sol;
    while (peek().kind != Token::End) {
      Token name = expect(Token::Ident);
      const PredicateSymbol* pred = against.find_predicate(name.text);
      if (pred == nullptr) {
        throw ParseError("solution mentions unknown predicate " + name.text, name.line, name.col);
      }
      scope_ = VarScope{};
      int count = 0;
      if (peek().text == "(") {
        advance();
        while (true) {
          Token v = expect(Token::Var);
          if (scope_.names.count(v.text)) {
            throw ParseError("repeated parameter " + v.text, v.line, v.col);
          }
          scope_.names.emplace(v.text, formal_parameter(count++));
          if (peek().text == ",") {
            advance();
            continue;
          }
          break;
        }
        expect_punct(")");
      }
      if (count != pred->arity) {
        throw ParseError("predicate " + name.text + " has arity " + std::to_string(pred->arity) +
                             ", not " + std::to_string(count),
                         name.line, name.col);
      }
      if (sol.contains(*pred)) {
        throw ParseError("duplicate solution entry for " + name.text, name.line, name.col);
      }
      expect_punct("=");
      DNFFormula f = parse_formula();
      expect_punct(".");
      f.normalize();
      sol.set(*pred, std::move(f));
    }
    return sol;
  }

 private:
  // --- token plumbing ---
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  Token expect(Token::Kind kind) {
    const Token& t = peek();
    if (t.kind != kind) {
      static const char* names[] = {"identifier", "variable", "number", "punctuation", "end of input"};
      throw ParseError(std::string("expected ") + names[kind] + ", found '" + describe(t) + "'",
                       t.line, t.col);
    }
    return advance();
  }

  Token expect_punct(const std::string& text) {
    const Token& t = peek();
    if (t.kind != Token::Punct || t.text != text) {
      throw ParseError("expected '" + text + "', found '" + describe(t) + "'", t.line, t.col);
    }
    return advance();
  }

  static std::string describe(const Token& t) {
    return t.kind == Token::End ? "end of input" : t.text;
  }

  // --- terms ---
  LinearTerm parse_expr() {
    LinearTerm t = parse_mul();
    while (peek().text == "+" || peek().text == "-") {
      bool plus = advance().text == "+";
      LinearTerm rhs = parse_mul();
      if (plus) {
        t += rhs;
      } else {
        t -= rhs;
      }
    }
    return t;
  }

  LinearTerm parse_mul() {
    LinearTerm t = parse_unary();
    while (peek().text == "*" || peek().text == "/") {
      Token op = advance();
      LinearTerm rhs = parse_unary();
      if (op.text == "*") {
        if (!t.is_constant() && !rhs.is_constant()) {
          throw ParseError("nonlinear product", op.line, op.col);
        }
        if (t.is_constant()) {
          Rational c = t.constant();
          t = rhs;
          t *= c;
        } else {
          t *= rhs.constant();
        }
      } else {
        if (!rhs.is_constant()) throw ParseError("division by a non-constant", op.line, op.col);
        if (rhs.constant() == 0) throw ParseError("division by zero", op.line, op.col);
        t *= Rational(1) / rhs.constant();
      }
    }
    return t;
  }

  LinearTerm parse_unary() {
    if (peek().text == "-") {
      Token op = advance();
      LinearTerm t = parse_unary();
      t *= Rational(-1);
      return t;
    }
    return parse_primary();
  }

  LinearTerm parse_primary() {
    const Token& t = peek();
    if (t.kind == Token::Int) {
      advance();
      return LinearTerm(Rational(t.text));
    }
    if (t.kind == Token::Var) {
      advance();
      return LinearTerm::variable(scope_.resolve(t.text, t.line, t.col));
    }
    if (t.text == "(") {
      advance();
      LinearTerm inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    throw ParseError("expected a term, found '" + describe(t) + "'", t.line, t.col);
  }

  // --- formulas ---
  AtomicConstraint parse_constraint() {
    LinearTerm lhs = parse_expr();
    const Token& rel = peek();
    if (!is_relation(rel)) {
      throw ParseError("expected a relation (>=, =<, >, <, =), found '" + describe(rel) + "'",
                       rel.line, rel.col);
    }
    advance();
    LinearTerm rhs = parse_expr();
    return make_constraint(std::move(lhs), rel.text, rhs);
  }

  DNFFormula parse_formula() {
    DNFFormula f = parse_formula_conj();
    while (peek().text == ";") {
      advance();
      f = DNFFormula::disjoin(std::move(f), parse_formula_conj());
    }
    return f;
  }

  DNFFormula parse_formula_conj() {
    DNFFormula f = parse_formula_literal();
    while (peek().text == ",") {
      advance();
      f = DNFFormula::conjoin(f, parse_formula_literal(), limits_.max_constraints);
    }
    return f;
  }

  DNFFormula parse_formula_literal() {
    const Token& t = peek();
    if (t.kind == Token::Ident) {
      if (t.text == "true") {
        advance();
        return DNFFormula::top();
      }
      if (t.text == "false") {
        advance();
        return DNFFormula::bottom();
      }
      throw ParseError("predicate " + t.text + " cannot occur here", t.line, t.col);
    }
    // '(' is ambiguous between a parenthesised term and a parenthesised
    // formula; try the constraint reading first and back off.
    std::size_t mark = pos_;
    try {
      return DNFFormula::of(parse_constraint());
    } catch (const ParseError&) {
      if (toks_[mark].text != "(") throw;
      pos_ = mark;
    }
    expect_punct("(");
    DNFFormula f = parse_formula();
    expect_punct(")");
    return f;
  }

  // --- clauses ---
  Atom parse_atom() {
    Token name = expect(Token::Ident);
    if (name.text == "wf" || name.text == "true" || name.text == "false") {
      throw ParseError("'" + name.text + "' is reserved", name.line, name.col);
    }
    std::vector<LinearTerm> arg_terms;
    if (peek().text == "(") {
      advance();
      while (true) {
        arg_terms.push_back(parse_expr());
        if (peek().text == ",") {
          advance();
          continue;
        }
        break;
      }
      expect_punct(")");
    }
    int arity = static_cast<int>(arg_terms.size());
    const PredicateSymbol* prior = sys_.find_predicate(name.text);
    if (prior != nullptr && prior->arity != arity) {
      throw ParseError("predicate " + name.text + " used with arity " + std::to_string(arity) +
                           " but declared with arity " + std::to_string(prior->arity),
                       name.line, name.col);
    }
    PredicateSymbol pred{name.text, arity};
    sys_.declare_predicate(pred);

    // Argument terms that are not plain, previously unused variables get a
    // fresh name bound by an equality in the body.
    Atom atom{pred, {}};
    std::set<int> used;
    for (const LinearTerm& t : arg_terms) {
      std::optional<Variable> plain = as_plain_variable(t);
      if (plain.has_value() && !used.count(plain->index)) {
        used.insert(plain->index);
        atom.args.push_back(*plain);
        continue;
      }
      Variable helper = sys_.fresh_variable("_A" + std::to_string(++helper_count_));
      used.insert(helper.index);
      atom.args.push_back(helper);
      LinearTerm eq = LinearTerm::variable(helper);
      eq -= t;
      pending_.push_back(DNFFormula::of(AtomicConstraint{eq, Relation::Eq}));
    }
    return atom;
  }

  void parse_clause() {
    Token start = peek();
    scope_ = VarScope{&sys_, {}};
    pending_.clear();
    helper_count_ = 0;

    std::variant<Atom, DNFFormula> head;
    if (peek().kind == Token::Ident && peek().text != "true" && peek().text != "false") {
      head = parse_atom();
    } else {
      head = parse_formula_conj_head();
    }

    std::vector<Atom> body_atoms;
    if (peek().text == ":-") {
      advance();
      while (true) {
        if (peek().kind == Token::Ident && peek().text != "true" && peek().text != "false") {
          body_atoms.push_back(parse_atom());
        } else {
          pending_.push_back(parse_formula_literal());
        }
        if (peek().text == ",") {
          advance();
          continue;
        }
        break;
      }
    }
    expect_punct(".");

    emit_clauses(sys_, std::move(body_atoms), pending_, std::move(head), limits_.max_constraints,
                 start.line, start.col);
  }

  // A head formula stops before ':-'; disjunctive heads need parens.
  DNFFormula parse_formula_conj_head() { return parse_formula_conj(); }

  void parse_wf_decl() {
    Token kw = advance();  // wf
    expect_punct("(");
    Token name = expect(Token::Ident);
    int arity = 0;
    if (peek().text == "(") {
      advance();
      while (true) {
        expect(Token::Var);
        ++arity;
        if (peek().text == ",") {
          advance();
          continue;
        }
        break;
      }
      expect_punct(")");
    }
    expect_punct(")");
    expect_punct(".");
    wf_decls_.push_back({name.text, arity, kw.line, kw.col});
  }

  void check_wf_decls() {
    std::set<std::string> seen;
    for (const auto& d : wf_decls_) {
      if (!seen.insert(d.name).second) {
        throw ParseError("duplicate wf declaration for " + d.name, d.line, d.col);
      }
      const PredicateSymbol* pred = sys_.find_predicate(d.name);
      if (pred == nullptr) {
        throw ParseError("wf names unknown predicate " + d.name, d.line, d.col);
      }
      if (pred->arity != d.arity) {
        throw ParseError("wf declares " + d.name + " with arity " + std::to_string(d.arity) +
                             " but it has arity " + std::to_string(pred->arity),
                         d.line, d.col);
      }
      if (pred->arity % 2 != 0) {
        throw ParseError("wf predicate " + d.name + " must have even arity", d.line, d.col);
      }
      sys_.wf_conditions.push_back(WfCondition{*pred});
    }
  }

  struct WfDecl {
    std::string name;
    int arity;
    int line;
    int col;
  };

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ClauseSystem& sys_;
  VarScope scope_;
  std::vector<DNFFormula> pending_;
  int helper_count_ = 0;
  std::vector<WfDecl> wf_decls_;
  Limits limits_;
};

// Splits a (possibly disjunctive) body into one stored clause per disjunct
// and enforces that formula heads only mention body variables. The product
// keeps disjuncts with a constant-false member: dropping them would lose
// variable occurrences the head scoping rule and a render round trip rely on.
// A body that is the empty disjunction still yields one false-bodied clause;
// its head formula weakens to true (the implication is vacuous either way)
// and an atom head survives so the predicate keeps a defining clause.
void emit_clauses(ClauseSystem& sys, std::vector<Atom> body_atoms,
                  const std::vector<DNFFormula>& body_parts, std::variant<Atom, DNFFormula> head,
                  std::size_t max_constraints, int line, int col) {
  if (std::holds_alternative<DNFFormula>(head)) {
    std::get<DNFFormula>(head).normalize();
  }

  std::vector<Conjunction> disjuncts = {Conjunction{}};
  for (const DNFFormula& part : body_parts) {
    std::vector<Conjunction> next;
    std::size_t total = 0;
    for (const Conjunction& a : disjuncts) {
      for (const Conjunction& b : part.disjuncts()) {
        Conjunction c = a;
        c.append(b);
        total += c.size();
        if (total > max_constraints) {
          throw ResourceLimitError("clause body exceeds constraint cap");
        }
        next.push_back(std::move(c));
      }
    }
    disjuncts = std::move(next);
  }
  bool any_true = false;
  for (Conjunction& d : disjuncts) {
    d.normalize();
    any_true = any_true || d.is_true();
  }
  if (any_true) {
    disjuncts = {Conjunction{}};
  } else {
    std::sort(disjuncts.begin(), disjuncts.end());
    disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
  }

  if (disjuncts.empty()) {
    if (std::holds_alternative<DNFFormula>(head)) {
      std::set<Variable> bound;
      for (const auto& a : body_atoms) bound.insert(a.args.begin(), a.args.end());
      for (const DNFFormula& part : body_parts) part.collect_variables(bound);
      for (const Variable& v : std::get<DNFFormula>(head).variables()) {
        if (!bound.count(v)) {
          throw ParseError("head variable " + v.name + " does not occur in the clause body", line,
                           col);
        }
      }
      head = DNFFormula::top();
    }
    disjuncts.push_back(Conjunction(
        {normalize_constraint(AtomicConstraint{LinearTerm(Rational(-1)), Relation::Ge})}));
  }

  for (Conjunction& disjunct : disjuncts) {
    HornClause clause;
    clause.id = static_cast<int>(sys.clauses.size());
    clause.body_atoms = body_atoms;
    clause.body_constraint = std::move(disjunct);
    clause.head = head;

    if (clause.is_query()) {
      std::set<Variable> bound = clause.body_constraint.variables();
      for (const auto& a : clause.body_atoms) bound.insert(a.args.begin(), a.args.end());
      for (const Variable& v : clause.head_formula().variables()) {
        if (!bound.count(v)) {
          throw ParseError("head variable " + v.name + " does not occur in the clause body", line,
                           col);
        }
      }
    }
    sys.clauses.push_back(std::move(clause));
  }
}

// ---------------------------------------------------------------------------
// SMT-LIB2 subset.
//
//   (set-logic HORN)
//   (declare-fun p (Real ... Real) Bool)
//   (declare-wf p)
//   (assert (forall ((x Real) ...) (=> body head)))
//   (check-sat)
//
// Bodies are conjunctions of predicate applications and constraint formulas
// (and / or / not / relations over linear real terms). Heads are a single
// application, a constraint formula, or false.

struct SExpr {
  bool is_list = false;
  std::string atom;  // valid when !is_list
  std::vector<SExpr> items;
  int line = 0;
  int col = 0;

  bool is_symbol(const char* s) const { return !is_list && atom == s; }
  const SExpr& head() const { return items.front(); }
};

class SmtReader {
 public:
  explicit SmtReader(const std::string& text) : text_(text) {}

  std::vector<SExpr> run() {
    std::vector<SExpr> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      out.push_back(read());
    }
    return out;
  }

 private:
  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    int line = line_, col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      SExpr list;
      list.is_list = true;
      list.line = line;
      list.col = col;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("missing ')'", line, col);
        if (text_[pos_] == ')') {
          advance();
          return list;
        }
        list.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unmatched ')'", line, col);
    if (c == '"' || c == '|') {
      throw ParseError("quoted tokens are not supported", line, col);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';') {
      advance();
    }
    SExpr atom;
    atom.atom = text_.substr(start, pos_ - start);
    atom.line = line;
    atom.col = col;
    return atom;
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (is_space(c)) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_numeral(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_digit(c)) return false;
  }
  return true;
}

class SmtParser {
 public:
  explicit SmtParser(ClauseSystem& sys) : sys_(sys) {}

  void parse_program(const std::vector<SExpr>& commands) {
    for (const SExpr& cmd : commands) parse_command(cmd);
    check_wf_decls();
  }

  Solution parse_solution_model(const std::vector<SExpr>& input, const ClauseSystem& against) {
    // Accept either a (model ...) wrapper or bare define-funs.
    const std::vector<SExpr>* items = &input;
    if (input.size() == 1 && input[0].is_list && !input[0].items.empty() &&
        input[0].head().is_symbol("model")) {
      items = &input[0].items;
    }
    Solution sol;
    for (const SExpr& e : *items) {
      if (!e.is_list) {
        if (e.is_symbol("model")) continue;  // wrapper head consumed above
        throw ParseError("expected (define-fun ...)", e.line, e.col);
      }
      if (e.items.empty() || !e.head().is_symbol("define-fun")) {
        if (!e.items.empty() && e.head().is_symbol("model")) continue;
        throw ParseError("expected (define-fun ...)", e.line, e.col);
      }
      parse_define_fun(e, against, sol);
    }
    return sol;
  }

 private:
  struct Env {
    std::map<std::string, Variable> vars;
  };

  void parse_command(const SExpr& cmd) {
    if (!cmd.is_list || cmd.items.empty() || cmd.head().is_list) {
      throw ParseError("expected a command", cmd.line, cmd.col);
    }
    const std::string& op = cmd.head().atom;
    if (op == "set-logic") {
      if (cmd.items.size() != 2 || !cmd.items[1].is_symbol("HORN")) {
        throw ParseError("expected (set-logic HORN)", cmd.line, cmd.col);
      }
      return;
    }
    if (op == "set-info" || op == "set-option" || op == "check-sat" || op == "get-model" ||
        op == "exit") {
      return;
    }
    if (op == "declare-fun") return parse_declare_fun(cmd);
    if (op == "declare-wf") return parse_declare_wf(cmd);
    if (op == "assert") return parse_assert(cmd);
    throw ParseError("unsupported command " + op, cmd.line, cmd.col);
  }

  void check_sort(const SExpr& sort) {
    if (sort.is_symbol("Real")) return;
    if (sort.is_symbol("Int")) {
      throw ParseError("sort Int is not supported, only Real", sort.line, sort.col);
    }
    throw ParseError("unsupported sort", sort.line, sort.col);
  }

  void parse_declare_fun(const SExpr& cmd) {
    if (cmd.items.size() != 4 || cmd.items[1].is_list || !cmd.items[2].is_list) {
      throw ParseError("malformed declare-fun", cmd.line, cmd.col);
    }
    const std::string& name = cmd.items[1].atom;
    if (is_reserved(name)) throw ParseError("'" + name + "' is reserved", cmd.line, cmd.col);
    for (const SExpr& sort : cmd.items[2].items) check_sort(sort);
    if (!cmd.items[3].is_symbol("Bool")) {
      throw ParseError("predicates must return Bool", cmd.items[3].line, cmd.items[3].col);
    }
    if (sys_.find_predicate(name) != nullptr) {
      throw ParseError("duplicate declaration of " + name, cmd.line, cmd.col);
    }
    sys_.declare_predicate({name, static_cast<int>(cmd.items[2].items.size())});
  }

  void parse_declare_wf(const SExpr& cmd) {
    if (cmd.items.size() != 2 || cmd.items[1].is_list) {
      throw ParseError("malformed declare-wf", cmd.line, cmd.col);
    }
    wf_decls_.push_back({cmd.items[1].atom, cmd.line, cmd.col});
  }

  static bool is_reserved(const std::string& s) {
    return s == "true" || s == "false" || s == "and" || s == "or" || s == "not" || s == "=>" ||
           s == "forall" || s == "exists" || s == "let";
  }

  const PredicateSymbol* predicate_of(const SExpr& e) const {
    if (e.is_list || is_numeral(e.atom)) return nullptr;
    return sys_.find_predicate(e.atom);
  }

  void parse_assert(const SExpr& cmd) {
    if (cmd.items.size() != 2) throw ParseError("malformed assert", cmd.line, cmd.col);
    Env env;
    const SExpr* body = &cmd.items[1];
    while (body->is_list && !body->items.empty() && body->head().is_symbol("forall")) {
      if (body->items.size() != 3 || !body->items[1].is_list) {
        throw ParseError("malformed forall", body->line, body->col);
      }
      for (const SExpr& binder : body->items[1].items) {
        if (!binder.is_list || binder.items.size() != 2 || binder.head().is_list) {
          throw ParseError("malformed binder", binder.line, binder.col);
        }
        check_sort(binder.items[1]);
        const std::string& name = binder.head().atom;
        if (env.vars.count(name)) {
          throw ParseError("duplicate bound variable " + name, binder.line, binder.col);
        }
        env.vars.emplace(name, sys_.fresh_variable(name));
      }
      body = &body->items[2];
    }

    const SExpr* head_expr = nullptr;
    const SExpr* body_expr = nullptr;
    if (body->is_list && !body->items.empty() && body->head().is_symbol("=>")) {
      if (body->items.size() != 3) throw ParseError("malformed =>", body->line, body->col);
      body_expr = &body->items[1];
      head_expr = &body->items[2];
    } else {
      head_expr = body;
    }

    std::vector<Atom> atoms;
    std::vector<DNFFormula> parts;
    pending_ = &parts;
    if (body_expr != nullptr) collect_body(*body_expr, env, atoms, parts);

    std::variant<Atom, DNFFormula> head;
    const PredicateSymbol* hp =
        head_expr->is_list && !head_expr->items.empty() ? predicate_of(head_expr->head())
                                                        : predicate_of(*head_expr);
    if (hp != nullptr) {
      head = parse_application(*head_expr, *hp, env);
    } else {
      head = to_dnf(*head_expr, true, env);
    }
    pending_ = nullptr;

    emit_clauses(sys_, std::move(atoms), parts, std::move(head), limits_.max_constraints, cmd.line,
                 cmd.col);
  }

  void collect_body(const SExpr& e, Env& env, std::vector<Atom>& atoms,
                    std::vector<DNFFormula>& parts) {
    if (e.is_list && !e.items.empty() && e.head().is_symbol("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) collect_body(e.items[i], env, atoms, parts);
      return;
    }
    const PredicateSymbol* p =
        e.is_list && !e.items.empty() ? predicate_of(e.head()) : predicate_of(e);
    if (p != nullptr) {
      atoms.push_back(parse_application(e, *p, env));
      return;
    }
    parts.push_back(to_dnf(e, true, env));
  }

  Atom parse_application(const SExpr& e, const PredicateSymbol& pred, Env& env) {
    std::vector<LinearTerm> arg_terms;
    if (e.is_list) {
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        arg_terms.push_back(parse_term(e.items[i], env));
      }
    }
    if (static_cast<int>(arg_terms.size()) != pred.arity) {
      throw ParseError("predicate " + pred.name + " takes " + std::to_string(pred.arity) +
                           " arguments",
                       e.line, e.col);
    }
    Atom atom{pred, {}};
    std::set<int> used;
    for (const LinearTerm& t : arg_terms) {
      std::optional<Variable> plain = as_plain_variable(t);
      if (plain.has_value() && !used.count(plain->index)) {
        used.insert(plain->index);
        atom.args.push_back(*plain);
        continue;
      }
      Variable helper = sys_.fresh_variable("_a" + std::to_string(++helper_count_));
      used.insert(helper.index);
      atom.args.push_back(helper);
      LinearTerm eq = LinearTerm::variable(helper);
      eq -= t;
      pending_->push_back(DNFFormula::of(AtomicConstraint{eq, Relation::Eq}));
    }
    return atom;
  }

  LinearTerm parse_term(const SExpr& e, Env& env) {
    if (!e.is_list) {
      if (is_numeral(e.atom)) return LinearTerm(Rational(e.atom));
      if (e.atom.find('.') != std::string::npos && !e.atom.empty() && is_digit(e.atom[0])) {
        throw ParseError("decimal literals are not supported, write (/ p q)", e.line, e.col);
      }
      auto it = env.vars.find(e.atom);
      if (it != env.vars.end()) return LinearTerm::variable(it->second);
      if (sys_.find_predicate(e.atom) != nullptr) {
        throw ParseError("predicate " + e.atom + " may not occur in a term", e.line, e.col);
      }
      throw ParseError("unknown symbol " + e.atom, e.line, e.col);
    }
    if (e.items.empty() || e.head().is_list) {
      throw ParseError("malformed term", e.line, e.col);
    }
    const std::string& op = e.head().atom;
    std::vector<LinearTerm> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse_term(e.items[i], env));
    if (op == "+") {
      if (args.empty()) throw ParseError("malformed term", e.line, e.col);
      LinearTerm t = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) t += args[i];
      return t;
    }
    if (op == "-") {
      if (args.empty()) throw ParseError("malformed term", e.line, e.col);
      if (args.size() == 1) {
        args[0] *= Rational(-1);
        return args[0];
      }
      LinearTerm t = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) t -= args[i];
      return t;
    }
    if (op == "*") {
      if (args.empty()) throw ParseError("malformed term", e.line, e.col);
      LinearTerm t = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (!t.is_constant() && !args[i].is_constant()) {
          throw ParseError("nonlinear product", e.line, e.col);
        }
        if (t.is_constant()) {
          Rational c = t.constant();
          t = args[i];
          t *= c;
        } else {
          t *= args[i].constant();
        }
      }
      return t;
    }
    if (op == "/") {
      if (args.size() != 2) throw ParseError("/ takes two arguments", e.line, e.col);
      if (!args[1].is_constant()) throw ParseError("division by a non-constant", e.line, e.col);
      if (args[1].constant() == 0) throw ParseError("division by zero", e.line, e.col);
      args[0] *= Rational(1) / args[1].constant();
      return args[0];
    }
    if (sys_.find_predicate(op) != nullptr) {
      throw ParseError("predicate " + op + " may not occur in a term", e.line, e.col);
    }
    throw ParseError("unknown function " + op, e.line, e.col);
  }

  // DNF of e (positive = true) or of its negation (positive = false).
  DNFFormula to_dnf(const SExpr& e, bool positive, Env& env) {
    if (!e.is_list) {
      if (e.is_symbol("true")) return positive ? DNFFormula::top() : DNFFormula::bottom();
      if (e.is_symbol("false")) return positive ? DNFFormula::bottom() : DNFFormula::top();
      if (predicate_of(e) != nullptr) {
        throw ParseError("predicate " + e.atom + " may only occur as a conjunct of the body",
                         e.line, e.col);
      }
      throw ParseError("expected a formula", e.line, e.col);
    }
    if (e.items.empty() || e.head().is_list) throw ParseError("expected a formula", e.line, e.col);
    const std::string& op = e.head().atom;
    if (op == "and" || op == "or") {
      bool conjunctive = (op == "and") == positive;
      DNFFormula acc = conjunctive ? DNFFormula::top() : DNFFormula::bottom();
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        DNFFormula next = to_dnf(e.items[i], positive, env);
        acc = conjunctive ? DNFFormula::conjoin(acc, next, limits_.max_constraints)
                          : DNFFormula::disjoin(std::move(acc), next);
      }
      return acc;
    }
    if (op == "not") {
      if (e.items.size() != 2) throw ParseError("malformed not", e.line, e.col);
      return to_dnf(e.items[1], !positive, env);
    }
    if (op == "=>") {
      if (e.items.size() != 3) throw ParseError("malformed =>", e.line, e.col);
      DNFFormula lhs = to_dnf(e.items[1], !positive, env);
      DNFFormula rhs = to_dnf(e.items[2], positive, env);
      return positive ? DNFFormula::disjoin(std::move(lhs), rhs)
                      : DNFFormula::conjoin(lhs, rhs, limits_.max_constraints);
    }
    if (op == ">=" || op == "<=" || op == ">" || op == "<" || op == "=") {
      if (e.items.size() != 3) throw ParseError("relation takes two arguments", e.line, e.col);
      if (predicate_of(e.items[1]) != nullptr || predicate_of(e.items[2]) != nullptr) {
        throw ParseError("predicates may not occur under relations", e.line, e.col);
      }
      LinearTerm lhs = parse_term(e.items[1], env);
      LinearTerm rhs = parse_term(e.items[2], env);
      AtomicConstraint c = make_constraint(std::move(lhs), op == "<=" ? "=<" : op, rhs);
      if (positive) return DNFFormula::of(c);
      DNFFormula f = DNFFormula::bottom();
      for (const AtomicConstraint& n : c.negation()) {
        f = DNFFormula::disjoin(std::move(f), DNFFormula::of(n));
      }
      return f;
    }
    if (predicate_of(e.head()) != nullptr) {
      throw ParseError("predicate " + op + " may only occur as a conjunct of the body", e.line,
                       e.col);
    }
    throw ParseError("expected a formula", e.line, e.col);
  }

  void parse_define_fun(const SExpr& e, const ClauseSystem& against, Solution& sol) {
    if (e.items.size() != 5 || e.items[1].is_list || !e.items[2].is_list) {
      throw ParseError("malformed define-fun", e.line, e.col);
    }
    const std::string& name = e.items[1].atom;
    const PredicateSymbol* pred = against.find_predicate(name);
    if (pred == nullptr) {
      throw ParseError("solution mentions unknown predicate " + name, e.line, e.col);
    }
    if (!e.items[3].is_symbol("Bool")) {
      throw ParseError("predicates must return Bool", e.items[3].line, e.items[3].col);
    }
    if (static_cast<int>(e.items[2].items.size()) != pred->arity) {
      throw ParseError("predicate " + name + " has arity " + std::to_string(pred->arity), e.line,
                       e.col);
    }
    Env env;
    int count = 0;
    for (const SExpr& binder : e.items[2].items) {
      if (!binder.is_list || binder.items.size() != 2 || binder.head().is_list) {
        throw ParseError("malformed binder", binder.line, binder.col);
      }
      check_sort(binder.items[1]);
      if (env.vars.count(binder.head().atom)) {
        throw ParseError("repeated parameter " + binder.head().atom, binder.line, binder.col);
      }
      env.vars.emplace(binder.head().atom, formal_parameter(count++));
    }
    if (sol.contains(*pred)) {
      throw ParseError("duplicate solution entry for " + name, e.line, e.col);
    }
    // The solution parser resolves predicate names against `against`, not
    // sys_, so applications inside the body are caught by the env lookup.
    DNFFormula f = to_dnf(e.items[4], true, env);
    f.normalize();
    sol.set(*pred, std::move(f));
  }

  void check_wf_decls() {
    std::set<std::string> seen;
    for (const auto& d : wf_decls_) {
      if (!seen.insert(d.name).second) {
        throw ParseError("duplicate declare-wf for " + d.name, d.line, d.col);
      }
      const PredicateSymbol* pred = sys_.find_predicate(d.name);
      if (pred == nullptr) {
        throw ParseError("declare-wf names unknown predicate " + d.name, d.line, d.col);
      }
      if (pred->arity % 2 != 0) {
        throw ParseError("wf predicate " + d.name + " must have even arity", d.line, d.col);
      }
      sys_.wf_conditions.push_back(WfCondition{*pred});
    }
  }

  struct WfDecl {
    std::string name;
    int line;
    int col;
  };

  ClauseSystem& sys_;
  std::vector<DNFFormula>* pending_ = nullptr;
  int helper_count_ = 0;
  std::vector<WfDecl> wf_decls_;
  Limits limits_;
};

}  // namespace

ClauseSystem parse_system(const std::string& text, SourceFormat format) {
  ClauseSystem sys;
  if (format == SourceFormat::Native) {
    NativeParser parser(NativeLexer(text).run(), sys);
    parser.parse_program();
  } else {
    SmtParser parser(sys);
    parser.parse_program(SmtReader(text).run());
  }
  try {
    sys.validate();
  } catch (const InputError& e) {
    throw InternalError(std::string("parser produced an invalid system: ") + e.what());
  }
  return sys;
}

DNFFormula parse_formula(const std::string& text, const std::map<std::string, Variable>& env) {
  ClauseSystem scratch;
  NativeParser parser(NativeLexer(text).run(), scratch);
  return parser.parse_closed_formula(env);
}

Solution parse_solution(const std::string& text, SourceFormat format, const ClauseSystem& system) {
  if (format == SourceFormat::Native) {
    ClauseSystem scratch;
    NativeParser parser(NativeLexer(text).run(), scratch);
    return parser.parse_solution_entries(system);
  }
  ClauseSystem scratch;
  SmtParser parser(scratch);
  return parser.parse_solution_model(SmtReader(text).run(), system);
}

}  // namespace hornet
