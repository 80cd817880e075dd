// Text frontends: a Prolog-style clause syntax (.chc) and an SMT-LIB 2
// subset (.smt2), for systems and for solutions. Grammar details live in
// docs/formats.md; parse errors carry 1-based line and column.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hornet/system.hpp"

namespace hornet {

enum class SourceFormat { Native, Smtlib2 };

// .chc -> Native, .smt2 -> Smtlib2, anything else unknown.
std::optional<SourceFormat> infer_format(std::string_view path);

ClauseSystem parse_system(const std::string& text, SourceFormat format);
// Predicate names and arities are reconciled against `system`.
Solution parse_solution(const std::string& text, SourceFormat format, const ClauseSystem& system);
// One native-syntax formula (no atoms) over exactly the given variables.
DNFFormula parse_formula(const std::string& text, const std::map<std::string, Variable>& env);

std::string render_system(const ClauseSystem& system, SourceFormat format);
std::string render_solution(const Solution& sol, SourceFormat format);
std::string render_assignment(const Assignment& values);

// Rendering helpers shared by the CLI and tests.
std::string render_term(const LinearTerm& t, SourceFormat format);
std::string render_constraint(const AtomicConstraint& c, SourceFormat format);
std::string render_formula(const DNFFormula& f, SourceFormat format);

}  // namespace hornet
