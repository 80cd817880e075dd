// hornet: solve, encode, check recursion-free Horn clause systems over
// linear rational arithmetic.
//
// Exit codes: 0 verdict delivered, 1 usage or parse error, 2 resource limit
// or verification failure.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hornet/check.hpp"
#include "hornet/diagnostics.hpp"
#include "hornet/encode.hpp"
#include "hornet/frontend.hpp"
#include "hornet/graph.hpp"
#include "hornet/solver.hpp"

namespace {

using namespace hornet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

SourceFormat format_of(const std::string& path, const std::string& flag) {
  if (flag == "native") return SourceFormat::Native;
  if (flag == "smt2") return SourceFormat::Smtlib2;
  auto inferred = infer_format(path);
  if (!inferred.has_value()) {
    throw InputError("cannot infer format of " + path + "; pass --format native|smt2");
  }
  return *inferred;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  if (s.empty()) return out;
  while (true) {
    std::size_t comma = s.find(',', start);
    std::string part = s.substr(start, comma - start);
    std::size_t b = part.find_first_not_of(" \t");
    std::size_t e = part.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct CapFlags {
  std::size_t max_derivations = 10000;
  std::size_t max_constraints = 50000;
  double timeout_seconds = 60.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-derivations", max_derivations,
                    "Derivation cap per unfolding (default 10000)");
    cmd->add_option("--max-fm-constraints", max_constraints,
                    "Constraint cap per conjunction (default 50000)");
    cmd->add_option("--timeout", timeout_seconds, "Wall clock budget in seconds (default 60)");
  }

  Limits limits() const {
    Limits l = Limits::with_timeout(
        std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000.0)));
    l.max_derivations = max_derivations;
    l.max_constraints = max_constraints;
    return l;
  }
};

int run_solve(const std::string& path, const std::string& format_flag, bool check,
              const std::string& model_out, const std::string& cex_out, const CapFlags& caps) {
  SourceFormat format = format_of(path, format_flag);
  ClauseSystem system = parse_system(read_file(path), format);
  Limits limits = caps.limits();
  Verdict verdict = solve(system, limits);

  switch (verdict.kind) {
    case VerdictKind::Solvable: {
      if (check) {
        CheckResult result = check_solution(system, *verdict.solution, limits);
        if (!result.verified) {
          std::cerr << "internal error: produced solution failed verification: "
                    << result.describe() << "\n";
          return 2;
        }
      }
      std::string rendered = render_solution(*verdict.solution, format);
      std::cout << "sat\n" << rendered;
      if (!model_out.empty()) write_file(model_out, rendered);
      return 0;
    }
    case VerdictKind::Unsolvable: {
      std::string rendered = render_assignment(verdict.counterexample->model.values);
      std::cout << "unsat\n" << rendered;
      if (!cex_out.empty()) write_file(cex_out, rendered);
      return 0;
    }
    case VerdictKind::Unknown:
    default:
      std::cout << "unknown\n";
      std::cerr << verdict.reason << "\n";
      return 0;
  }
}

int run_oracle(const std::string& path, const std::string& format_flag, const CapFlags& caps) {
  SourceFormat format = format_of(path, format_flag);
  ClauseSystem system = parse_system(read_file(path), format);
  Limits limits = caps.limits();
  Solution least = least_solution(system, limits);
  bool solvable = oracle_solvable(system, limits);
  if (solvable) {
    std::cout << "sat\n" << render_solution(least, format);
  } else {
    std::cout << "unsat\n";
  }
  return 0;
}

int run_check(const std::string& system_path, const std::string& solution_path,
              const std::string& format_flag, const CapFlags& caps) {
  SourceFormat format = format_of(system_path, format_flag);
  ClauseSystem system = parse_system(read_file(system_path), format);
  SourceFormat sol_format = infer_format(solution_path).value_or(format);
  Solution sol = parse_solution(read_file(solution_path), sol_format, system);
  CheckResult result = check_solution(system, sol, caps.limits());
  std::cout << result.describe() << "\n";
  return result.verified ? 0 : 2;
}

int run_encode(const std::string& family, const std::string& input_path, const std::string& out,
               const std::string& path_flag, const std::string& stem_flag,
               const std::string& loop_flag, const std::string& mode_flag,
               const std::string& unfold_flag, const std::string& format_flag,
               const CapFlags& caps) {
  ClauseSystem encoded;
  if (family == "path" || family == "transition" || family == "wellfounded" ||
      family == "state-transition" || family == "search-tree") {
    TransitionSystem ts = parse_transition_system(read_file(input_path));
    if (family == "path") {
      encoded = encode_path(ts, split_list(path_flag));
    } else if (family == "transition") {
      encoded = encode_transition(ts, split_list(path_flag));
    } else if (family == "wellfounded") {
      encoded = encode_wellfounded(ts, split_list(stem_flag), split_list(loop_flag));
    } else if (family == "state-transition") {
      encoded = encode_state_transition(ts, split_list(path_flag));
    } else {
      QuantifierMode mode;
      if (mode_flag == "exists") {
        mode = QuantifierMode::Existential;
      } else if (mode_flag == "forall") {
        mode = QuantifierMode::Universal;
      } else {
        throw InputError("unknown mode " + mode_flag + "; expected exists or forall");
      }
      encoded = encode_search_tree(search_node(ts), ts.vars, mode, caps.limits());
    }
  } else if (family == "nested") {
    ProceduralProgram prog = parse_procedural_program(read_file(input_path));
    encoded = encode_nested(prog, split_list(path_flag));
  } else if (family == "unfolding") {
    SourceFormat format = format_of(input_path, format_flag);
    ClauseSystem recursive = parse_system(read_file(input_path), format);
    std::vector<int> expansion;
    for (const std::string& part : split_list(unfold_flag)) {
      try {
        expansion.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw InputError("--unfold expects clause ids, got '" + part + "'");
      }
    }
    encoded = encode_unfolding(recursive, expansion);
  } else {
    throw InputError("unknown family " + family +
                     "; expected path, transition, wellfounded, state-transition, search-tree, "
                     "nested, or unfolding");
  }

  encoded.validate();
  analyze(encoded);  // recursion-free by construction; fail loudly otherwise
  auto out_format = infer_format(out);
  if (!out_format.has_value()) {
    throw InputError("output file must end in .chc or .smt2");
  }
  write_file(out, render_system(encoded, *out_format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for recursion-free Horn clauses over linear rational arithmetic"};
  app.require_subcommand(1);

  std::string format_flag;
  std::string path, system_path, solution_path;
  std::string model_out, cex_out;
  bool check = true;
  CapFlags caps;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a clause system");
  solve_cmd->add_option("file", path, "Input system (.chc or .smt2)")->required();
  solve_cmd->add_option("--format", format_flag, "Input format: native or smt2");
  solve_cmd->add_flag("--check,!--no-check", check, "Re-verify sat answers (default on)");
  solve_cmd->add_option("--model", model_out, "Also write the solution to this file");
  solve_cmd->add_option("--cex", cex_out, "Also write the countermodel to this file");
  caps.attach(solve_cmd);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Least-solution verdict for a system");
  oracle_cmd->add_option("file", path, "Input system (.chc or .smt2)")->required();
  oracle_cmd->add_option("--format", format_flag, "Input format: native or smt2");
  caps.attach(oracle_cmd);

  CLI::App* check_cmd = app.add_subcommand("check", "Verify a solution against a system");
  check_cmd->add_option("system", system_path, "Clause system")->required();
  check_cmd->add_option("solution", solution_path, "Candidate solution")->required();
  check_cmd->add_option("--format", format_flag, "System format: native or smt2");
  caps.attach(check_cmd);

  std::string family, encode_input, encode_out;
  std::string path_flag, stem_flag, loop_flag, unfold_flag;
  std::string mode_flag = "exists";
  CLI::App* encode_cmd = app.add_subcommand("encode", "Generate an interpolation problem family");
  encode_cmd->add_option("family", family,
                         "path | transition | wellfounded | state-transition | search-tree | "
                         "nested | unfolding")
      ->required();
  encode_cmd->add_option("input", encode_input, "Description file")->required();
  encode_cmd->add_option("-o,--output", encode_out, "Output system (.chc or .smt2)")->required();
  encode_cmd->add_option("--path", path_flag, "Comma-separated transition labels");
  encode_cmd->add_option("--stem", stem_flag, "Stem labels (wellfounded)");
  encode_cmd->add_option("--loop", loop_flag, "Loop labels (wellfounded)");
  encode_cmd->add_option("--mode", mode_flag, "search-tree head mode: exists (default) or forall");
  encode_cmd->add_option("--unfold", unfold_flag, "Comma-separated clause ids (unfolding)");
  encode_cmd->add_option("--format", format_flag, "Input format for unfolding systems");
  caps.attach(encode_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(path, format_flag, check, model_out, cex_out, caps);
    if (*oracle_cmd) return run_oracle(path, format_flag, caps);
    if (*check_cmd) return run_check(system_path, solution_path, format_flag, caps);
    return run_encode(family, encode_input, encode_out, path_flag, stem_flag, loop_flag, mode_flag,
                      unfold_flag, format_flag, caps);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
