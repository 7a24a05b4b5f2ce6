// Command-line front end: parses flags into a RunConfig and prints the
// JSON (or text) report produced by the core runner.
//
// Exit codes: 0 decided/produced, 1 usage or parse error, 2 incomplete
// answer (GIVE-UP or UNSAT-at-bound).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nilsat/parser.hpp"
#include "nilsat/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nilsat::UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct FileArgs {
  std::string term_path;
  std::string rhs_path;
  std::string cnf_path;
  std::string vecs_path;
  std::string out_path;
};

void add_common(CLI::App* cmd, nilsat::RunConfig& config, FileArgs& files, bool needs_primes) {
  auto* primes = cmd->add_option("--primes", config.primes,
                                 "comma-separated prime moduli p1,...,ph")
                     ->delimiter(',');
  if (needs_primes) primes->required();
  cmd->add_option("--workers", config.workers, "worker thread count");
  cmd->add_option("--format", config.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  (void)files;
}

void add_solver_flags(CLI::App* cmd, nilsat::RunConfig& config) {
  cmd->add_option("--solver", config.solver, "brute, sparse or random")
      ->check(CLI::IsMember({"brute", "sparse", "random"}));
  cmd->add_option("--bound", config.bound_preset, "sparse support bound: sesh, exhaustive or fixed")
      ->check(CLI::IsMember({"sesh", "exhaustive", "fixed"}));
  cmd->add_option("--bound-c", config.sesh_c, "sesh preset scale constant");
  cmd->add_option("--bound-k", config.fixed_bound, "fixed preset support size");
  cmd->add_flag("--no-escalate,!--escalate", config.escalate,
                "stop at the bound instead of growing the support");
  cmd->add_option("--budget", config.budget, "random solver sample budget");
  cmd->add_option("--seed", config.seed, "random seed (required for the random solver)");
  cmd->add_option("--max-evaluations", config.max_evaluations,
                  "ceiling for exhaustive scans");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circuit satisfiability workbench for the algebras D[p1,...,ph]"};
  app.require_subcommand(1);

  nilsat::RunConfig config;
  FileArgs files;

  auto* eval = app.add_subcommand("eval", "evaluate a term on one assignment");
  add_common(eval, config, files, true);
  eval->add_option("--term", files.term_path, "term file")->required();
  eval->add_option("--assign", config.assignment,
                   "comma-separated element literals, one per variable")->required();

  auto* canon = app.add_subcommand("canon", "canonical representation of a term");
  add_common(canon, config, files, true);
  canon->add_option("--term", files.term_path, "term file")->required();

  auto* csat = app.add_subcommand("csat", "decide satisfiability of term = target");
  add_common(csat, config, files, true);
  add_solver_flags(csat, config);
  csat->add_option("--term", files.term_path, "term file")->required();
  csat->add_option("--target", config.target_literal, "target element literal (default 0)");

  auto* ceqv = app.add_subcommand("ceqv", "decide equivalence to the zero function");
  add_common(ceqv, config, files, true);
  add_solver_flags(ceqv, config);
  ceqv->add_option("--term", files.term_path, "term file")->required();
  ceqv->add_option("--rhs", files.rhs_path, "optional right-hand side term file");

  auto* density = app.add_subcommand("density", "per-value solution counts");
  add_common(density, config, files, true);
  density->add_option("--term", files.term_path, "term file")->required();
  density->add_option("--samples", config.samples, "add seeded sampling estimates");
  density->add_option("--seed", config.seed, "sampling seed");
  density->add_option("--max-evaluations", config.max_evaluations,
                      "ceiling for the exact count");

  auto* congruences = app.add_subcommand("congruences", "enumerate all congruences");
  add_common(congruences, config, files, true);

  auto* reduce = app.add_subcommand("reduce-sat", "reduce a 3-CNF to a single equation");
  add_common(reduce, config, files, true);
  reduce->add_option("--cnf", files.cnf_path, "DIMACS file")->required();
  reduce->add_flag("--split3", config.split_long_clauses,
                   "split longer clauses to 3-CNF first");
  reduce->add_option("--out", files.out_path, "also write the term text to this file");

  auto* ccx = app.add_subcommand("cc-extract", "extract a MOD-gate circuit");
  add_common(ccx, config, files, true);
  ccx->add_option("--term", files.term_path, "term file")->required();
  ccx->add_option("--j", config.level_j, "output level (0 tests the e_1 value)")->required();
  ccx->add_option("--k", config.level_k, "input level")->required();

  auto* hyper = app.add_subcommand("hyperplane", "isolate one point of a vector set");
  add_common(hyper, config, files, false);
  hyper->add_option("--vecs", files.vecs_path, "vector file, one per line")->required();
  hyper->add_option("--field", config.field_q, "prime field size q")->required();

  auto* s4r = app.add_subcommand("s4-reduce", "reduce a 3-CNF to an S4 equation");
  add_common(s4r, config, files, false);
  s4r->add_option("--cnf", files.cnf_path, "DIMACS file")->required();
  s4r->add_flag("--split3", config.split_long_clauses, "split longer clauses to 3-CNF first");

  auto* bench = app.add_subcommand("bench", "size/time measurements as CSV");
  add_common(bench, config, files, true);
  bench->add_option("--suite", config.suite, "reduction, funcrep or canonical")
      ->check(CLI::IsMember({"reduction", "funcrep", "canonical"}));
  bench->add_option("--seed", config.seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  try {
    config.command = app.get_subcommands().front()->get_name();
    if (!files.term_path.empty()) config.term_text = slurp(files.term_path);
    if (!files.rhs_path.empty()) config.rhs_text = slurp(files.rhs_path);
    if (!files.cnf_path.empty()) config.cnf_text = slurp(files.cnf_path);
    if (!files.vecs_path.empty()) config.vecs_text = slurp(files.vecs_path);

    nilsat::RunOutput out = nilsat::run(config);

    if (config.command == "bench") {
      std::cout << out.csv;
      if (out.report.contains("loglog_slope"))
        std::cerr << "# loglog slope " << out.report["loglog_slope"] << "\n";
    } else if (config.format == "text") {
      std::cout << out.text;
    } else {
      std::cout << nilsat::report_to_string(out.report);
    }
    if (!files.out_path.empty() && out.report.contains("term")) {
      std::ofstream f(files.out_path, std::ios::binary);
      f << out.report["term"].get<std::string>() << "\n";
    }
    return out.exit_code;
  } catch (const nilsat::UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const nilsat::ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
