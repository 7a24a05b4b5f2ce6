#pragma once

// Dispatch layer behind the command-line tool.  Every subcommand consumes a
// RunConfig and produces a JSON report plus an exit code:
//
//   0  decided / produced
//   2  GIVE-UP or UNSAT-at-bound (the incomplete-answer exit)
//   1  usage or parse errors (thrown as UsageError / ParseError)
//
// Reports are deterministic for a fixed config and seed; the only volatile
// field is the "timing" object, which comparisons must drop.  Witnesses are
// re-validated through an independent evaluation pass before they are
// printed.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilsat/solver.hpp"

namespace nilsat {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<int> primes;
  std::string command;

  // csat / ceqv / density / eval / canon / cc-extract inputs
  std::string term_text;             // the term source (file contents)
  std::optional<std::string> rhs_text;  // ceqv: optional right-hand side
  std::string target_literal;        // csat: target value, default all-zero
  std::string assignment;            // eval: comma-separated element literals

  // solver choice
  std::string solver = "brute";      // brute | sparse | random
  std::string bound_preset = "sesh"; // sesh | exhaustive | fixed
  double sesh_c = 1.0;
  int fixed_bound = 0;
  bool escalate = true;
  std::uint64_t budget = 1000;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_evaluations = 100'000'000;

  // cc-extract levels
  int level_j = 0;
  int level_k = 1;

  // density sampling
  std::uint64_t samples = 0;  // 0 = exact only

  // reduce-sat / s4-reduce
  std::string cnf_text;
  bool split_long_clauses = false;

  // hyperplane
  std::string vecs_text;
  int field_q = 2;

  // bench
  std::string suite = "reduction";

  int workers = 1;
  std::string format = "json";  // json | text
};

struct RunOutput {
  int exit_code = 0;
  nlohmann::ordered_json report;
  std::string text;  // human-readable rendering
  std::string csv;   // bench output
};

RunOutput run(const RunConfig& config);

// Serialization used by both run() and the tests.
std::string report_to_string(const nlohmann::ordered_json& report);
nlohmann::ordered_json strip_timing(nlohmann::ordered_json report);

}  // namespace nilsat
