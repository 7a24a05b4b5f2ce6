#include "nilsat/runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "nilsat/ccircuit.hpp"
#include "nilsat/funcrep.hpp"
#include "nilsat/parser.hpp"
#include "nilsat/reduction.hpp"
#include "nilsat/rng.hpp"
#include "nilsat/s4.hpp"

namespace nilsat {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

AlgebraSpec make_spec(const RunConfig& config) {
  if (config.primes.empty()) throw UsageError("--primes is required");
  return AlgebraSpec(std::span<const int>(config.primes.data(), config.primes.size()));
}

SolverConfig make_solver(const RunConfig& config, const AlgebraSpec&) {
  SolverConfig sc;
  if (config.solver == "brute") {
    sc.kind = SolverConfig::Kind::Brute;
  } else if (config.solver == "sparse") {
    sc.kind = SolverConfig::Kind::Sparse;
  } else if (config.solver == "random") {
    sc.kind = SolverConfig::Kind::Random;
    if (!config.seed) throw UsageError("--seed is required with --solver random");
  } else {
    throw UsageError("unknown solver '" + config.solver + "'");
  }
  if (config.bound_preset == "sesh") {
    sc.bound.kind = SupportBound::Kind::Sesh;
    sc.bound.c = config.sesh_c;
  } else if (config.bound_preset == "exhaustive") {
    sc.bound.kind = SupportBound::Kind::Exhaustive;
  } else if (config.bound_preset == "fixed") {
    sc.bound.kind = SupportBound::Kind::Fixed;
    sc.bound.fixed = config.fixed_bound;
  } else {
    throw UsageError("unknown bound preset '" + config.bound_preset + "'");
  }
  sc.bound.escalate = config.escalate;
  sc.budget = config.budget;
  sc.seed = config.seed.value_or(0);
  sc.workers = config.workers;
  sc.limits.max_evaluations = config.max_evaluations;
  return sc;
}

Json witness_json(std::span<const DElem> witness) {
  Json arr = Json::array();
  for (const DElem& a : witness) arr.push_back(a.to_literal());
  return arr;
}

// Independent re-evaluation before a witness is reported.
void validate_witness(const Instance& inst, std::span<const DElem> witness) {
  Evaluator ev;
  if (!(ev.eval(inst.circuit, witness) == inst.target))
    throw std::logic_error("internal error: witness failed re-validation");
}

std::vector<DElem> parse_assignment(const AlgebraSpec& spec, const std::string& text) {
  std::vector<DElem> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(spec.parse_literal(item));
  }
  return out;
}

Json config_json(const RunConfig& config) {
  Json j;
  j["command"] = config.command;
  j["primes"] = config.primes;
  j["workers"] = config.workers;
  return j;
}

struct Timer {
  Clock::time_point start = Clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
};

void attach_timing(Json& report, const Timer& timer) {
  Json t;
  t["timestamp"] = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch()).count());
  t["elapsed_ms"] = timer.ms();
  report["timing"] = std::move(t);
}

RunOutput run_eval(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  std::vector<DElem> assignment = parse_assignment(spec, config.assignment);
  Circuit circuit = parse_circuit(config.term_text, spec, static_cast<int>(assignment.size()));
  DElem value = evaluate(circuit, assignment);

  RunOutput out;
  out.report = config_json(config);
  out.report["value"] = value.to_literal();
  out.report["size_nodes"] = circuit.size();
  attach_timing(out.report, timer);
  out.text = "value " + value.to_literal() + "\n";
  return out;
}

RunOutput run_canon(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  Circuit circuit = parse_circuit(config.term_text, spec);
  CanonicalForm canon = canonicalize(circuit);
  Term unfolded = term_of_circuit(circuit);

  RunOutput out;
  out.report = config_json(config);
  out.report["circuit_size"] = circuit.size();
  out.report["term_size"] = term_size(unfolded);
  out.report["term_chars"] = term_chars(unfolded);
  out.report["canonical"] = canonical_to_json(canon);
  attach_timing(out.report, timer);
  out.text = "canonical size " + std::to_string(canonical_size(canon)) + "\n";
  return out;
}

RunOutput run_csat(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  Circuit circuit = parse_circuit(config.term_text, spec);
  DElem target = config.target_literal.empty() ? spec.zero()
                                               : spec.parse_literal(config.target_literal);
  Instance inst{circuit, target};
  SolverConfig sc = make_solver(config, spec);
  SolveResult res = solve(inst, sc);

  RunOutput out;
  out.report = config_json(config);
  out.report["solver"] = config.solver;
  out.report["target"] = target.to_literal();
  out.report["status"] = to_string(res.status);
  if (res.status == SolveStatus::Sat) {
    validate_witness(inst, res.witness);
    out.report["witness"] = witness_json(res.witness);
    out.report["support"] = res.support;
  }
  out.report["evaluations"] = res.evaluations;
  attach_timing(out.report, timer);
  out.text = std::string(to_string(res.status)) + "\n";
  out.exit_code =
      (res.status == SolveStatus::GiveUp || res.status == SolveStatus::UnsatAtBound) ? 2 : 0;
  return out;
}

RunOutput run_ceqv(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  Circuit circuit = [&] {
    if (config.rhs_text) {
      // t = s normalizes to t - s = 0.
      Circuit lhs = parse_circuit(config.term_text, spec);
      Circuit rhs = parse_circuit(*config.rhs_text, spec);
      int arity = std::max(lhs.arity(), rhs.arity());
      Term diff = t_sub(term_of_circuit(lhs), term_of_circuit(rhs));
      return compile(diff, spec, arity);
    }
    return parse_circuit(config.term_text, spec);
  }();
  SolverConfig sc = make_solver(config, spec);
  CeqvResult res = ceqv(circuit, sc);

  RunOutput out;
  out.report = config_json(config);
  out.report["solver"] = config.solver;
  switch (res.status) {
    case CeqvResult::Status::Equiv:
      out.report["status"] = "EQUIV";
      out.text = "EQUIV\n";
      break;
    case CeqvResult::Status::Counterexample: {
      validate_witness(Instance{circuit, res.value}, res.witness);
      out.report["status"] = "COUNTEREXAMPLE";
      out.report["value"] = res.value.to_literal();
      out.report["witness"] = witness_json(res.witness);
      out.text = "COUNTEREXAMPLE value " + res.value.to_literal() + "\n";
      break;
    }
    case CeqvResult::Status::GiveUp:
      out.report["status"] = "GIVE-UP";
      out.text = "GIVE-UP\n";
      out.exit_code = 2;
      break;
  }
  attach_timing(out.report, timer);
  return out;
}

RunOutput run_density(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  Circuit circuit = parse_circuit(config.term_text, spec);

  RunOutput out;
  out.report = config_json(config);
  SearchLimits limits{config.max_evaluations};
  DensityReport exact = density_exact(circuit, config.workers, limits);
  Json table = Json::array();
  for (std::size_t i = 0; i < exact.exact.size(); ++i) {
    Json row;
    row["value"] = spec.element(i).to_literal();
    row["count"] = exact.exact[i];
    table.push_back(std::move(row));
  }
  out.report["domain"] = exact.domain;
  out.report["exact"] = std::move(table);
  if (config.samples > 0) {
    if (!config.seed) throw UsageError("--seed is required for density sampling");
    DensityReport sampled = density_sampled(circuit, config.samples, *config.seed, config.workers);
    Json est = Json::array();
    for (std::size_t i = 0; i < sampled.estimate.size(); ++i) {
      Json row;
      row["value"] = spec.element(i).to_literal();
      row["estimate"] = sampled.estimate[i];
      row["stderr"] = sampled.stderr_bars[i];
      est.push_back(std::move(row));
    }
    out.report["samples"] = sampled.samples;
    out.report["sampled"] = std::move(est);
  }
  attach_timing(out.report, timer);
  out.text = "density table over " + std::to_string(exact.domain) + " points\n";
  return out;
}

RunOutput run_congruences(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  auto congruences = enumerate_congruences(spec);

  // The expected chain for comparison.
  bool chain = congruences.size() == static_cast<std::size_t>(spec.height() + 1);
  if (chain)
    for (int k = 1; k <= spec.height() + 1; ++k)
      if (congruences[static_cast<std::size_t>(k - 1)] != theta_partition(spec, k)) chain = false;

  RunOutput out;
  out.report = config_json(config);
  out.report["count"] = congruences.size();
  out.report["matches_theta_chain"] = chain;
  Json parts = Json::array();
  for (const Partition& p : congruences) parts.push_back(p);
  out.report["partitions"] = std::move(parts);
  attach_timing(out.report, timer);
  out.text = std::to_string(congruences.size()) + " congruences\n";
  return out;
}

RunOutput run_reduce_sat(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  CnfFormula phi = parse_dimacs(config.cnf_text, config.split_long_clauses);
  ReductionOutput red = reduce(phi, spec);
  double build_ms = timer.ms();

  RunOutput out;
  out.report = config_json(config);
  out.report["clauses"] = phi.clause_count();
  out.report["variables"] = phi.num_vars;
  out.report["s"] = red.s;
  out.report["parts"] = red.parts.size();
  Json part_sizes = Json::array();
  for (const CnfFormula& part : red.parts) {
    Json pj;
    pj["clauses"] = part.clause_count();
    pj["variables"] = part.num_vars;
    part_sizes.push_back(std::move(pj));
  }
  out.report["part_shapes"] = std::move(part_sizes);
  out.report["target"] = red.target.to_literal();
  out.report["term_size"] = term_size(red.term);
  out.report["term_chars"] = term_chars(red.term);
  out.report["build_ms"] = build_ms;
  out.report["term"] = print_term(red.term);
  attach_timing(out.report, timer);
  out.text = "s=" + std::to_string(red.s) + " parts=" + std::to_string(red.parts.size()) +
             " size=" + std::to_string(term_size(red.term)) + "\n";
  return out;
}

RunOutput run_cc_extract(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  Circuit circuit = parse_circuit(config.term_text, spec);
  CCCircuit cc = extract_cc(circuit, config.level_j, config.level_k);

  RunOutput out;
  out.report = config_json(config);
  out.report["j"] = config.level_j;
  out.report["k"] = config.level_k;
  out.report["circuit"] = cc_to_json(cc);
  attach_timing(out.report, timer);
  out.text = "depth " + std::to_string(cc.depth()) + ", " +
             std::to_string(cc.gate_count()) + " gates\n";
  return out;
}

RunOutput run_hyperplane(const RunConfig& config) {
  Timer timer;
  // One vector per line, space-separated residues.
  std::vector<std::vector<int>> z;
  std::istringstream in(config.vecs_text);
  std::string line;
  int n = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<int> vec;
    int x;
    while (ls >> x) vec.push_back(x);
    if (ls.fail() && !ls.eof())
      throw ParseError(line_no, 1, "malformed vector");
    if (n < 0) n = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != n)
      throw ParseError(line_no, 1, "inconsistent vector length");
    z.push_back(std::move(vec));
  }
  if (z.empty()) throw UsageError("the vector file is empty");
  IsolateResult iso = isolate_point(z, config.field_q, n);

  RunOutput out;
  out.report = config_json(config);
  out.report["q"] = config.field_q;
  out.report["n"] = n;
  out.report["set_size"] = z.size();
  Json eqs = Json::array();
  for (const AffineEq& eq : iso.h.eqs) {
    Json ej;
    ej["coef"] = eq.coef;
    ej["rhs"] = eq.rhs;
    eqs.push_back(std::move(ej));
  }
  out.report["equations"] = std::move(eqs);
  out.report["codimension"] = iso.h.eqs.size();
  out.report["point"] = iso.z;
  attach_timing(out.report, timer);
  std::string text = "codim " + std::to_string(iso.h.eqs.size()) + ", point";
  for (int x : iso.z) text += " " + std::to_string(x);
  out.text = text + "\n";
  return out;
}

RunOutput run_s4_reduce(const RunConfig& config) {
  Timer timer;
  CnfFormula phi = parse_dimacs(config.cnf_text, config.split_long_clauses);
  S4Reduction red = reduce_s4(phi);

  RunOutput out;
  out.report = config_json(config);
  out.report["clauses"] = phi.clause_count();
  out.report["variables"] = phi.num_vars;
  out.report["s"] = red.s;
  out.report["parts"] = red.parts.size();
  out.report["target"] = S4::cycle_notation(red.target);
  out.report["word_size"] = word_size(red.word);
  out.report["word"] = print_word(red.word, 4);
  attach_timing(out.report, timer);
  out.text = "s=" + std::to_string(red.s) + " parts=" + std::to_string(red.parts.size()) +
             " word size=" + std::to_string(word_size(red.word)) + "\n";
  return out;
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(xs[static_cast<std::size_t>(i)]);
    double ly = std::log(ys[static_cast<std::size_t>(i)]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  return denom == 0 ? 0 : (n * sxy - sx * sy) / denom;
}

RunOutput run_bench(const RunConfig& config) {
  Timer timer;
  AlgebraSpec spec = make_spec(config);
  RunOutput out;
  out.report = config_json(config);
  out.report["suite"] = config.suite;
  std::string csv;
  std::vector<double> xs, ys;

  if (config.suite == "reduction") {
    csv = "m,s,parts,term_size,build_ms\n";
    SplitMix64 rng(config.seed.value_or(1));
    for (int m : {1, 2, 3, 4, 6, 9}) {
      CnfFormula phi;
      phi.num_vars = 3;
      for (int ci = 0; ci < m; ++ci) {
        Clause c;
        for (int li = 0; li < 3; ++li)
          c.literals.push_back({rng.below_int(phi.num_vars), rng.below(2) == 0});
        phi.clauses.push_back(std::move(c));
      }
      Timer t;
      ReductionOutput red = reduce(phi, spec);
      double ms = t.ms();
      std::uint64_t size = term_size(red.term);
      csv += std::to_string(m) + "," + std::to_string(red.s) + "," +
             std::to_string(red.parts.size()) + "," + std::to_string(size) + "," +
             std::to_string(ms) + "\n";
      xs.push_back(static_cast<double>(m));
      ys.push_back(static_cast<double>(size));
    }
  } else if (config.suite == "funcrep") {
    if (spec.height() < 2) throw UsageError("the funcrep suite needs height >= 2");
    csv = "m,q,table,term_size,build_ms\n";
    int q = spec.prime(2);
    for (int m = 1; m <= 5; ++m) {
      std::uint64_t points = 1;
      for (int i = 0; i < m; ++i) points *= static_cast<std::uint64_t>(q);
      if (points > 1500) break;
      LevelFunction g{2, 1, m, {}};
      g.table.assign(points, 0);
      SplitMix64 rng(config.seed.value_or(1) + static_cast<std::uint64_t>(m));
      for (auto& val : g.table) val = rng.below_int(spec.prime(1));
      Timer t;
      Term term = represent(g, spec);
      double ms = t.ms();
      std::uint64_t size = term_size(term);
      csv += std::to_string(m) + "," + std::to_string(q) + "," + std::to_string(points) + "," +
             std::to_string(size) + "," + std::to_string(ms) + "\n";
      xs.push_back(static_cast<double>(m));
      ys.push_back(static_cast<double>(size));
    }
  } else if (config.suite == "canonical") {
    csv = "circuit_size,canonical_size,canon_ms\n";
    SplitMix64 rng(config.seed.value_or(1));
    for (int target : {10, 20, 40, 80, 160}) {
      CircuitBuilder builder(spec, 3);
      std::vector<int> ids;
      for (int i = 0; i < 3; ++i) ids.push_back(builder.add_var(i));
      while (static_cast<int>(builder.size()) < target) {
        int pick = rng.below_int(6);
        int a = ids[rng.below(ids.size())];
        int b = ids[rng.below(ids.size())];
        switch (pick) {
          case 0:
          case 1:
            ids.push_back(builder.add_add(a, b));
            break;
          case 2:
            ids.push_back(builder.add_neg(a));
            break;
          case 3:
            ids.push_back(builder.add_const(spec.element(rng.below(spec.carrier_size()))));
            break;
          case 4:
            ids.push_back(builder.add_e(1 + rng.below_int(spec.height()), a));
            break;
          default:
            if (spec.height() > 1)
              ids.push_back(builder.add_v(1 + rng.below_int(spec.height() - 1), a));
            else
              ids.push_back(builder.add_neg(a));
            break;
        }
      }
      Circuit circuit = std::move(builder).build(ids.back());
      Timer t;
      CanonicalForm canon = canonicalize(circuit);
      double ms = t.ms();
      std::uint64_t csize = canonical_size(canon);
      csv += std::to_string(circuit.size()) + "," + std::to_string(csize) + "," +
             std::to_string(ms) + "\n";
      xs.push_back(static_cast<double>(circuit.size()));
      ys.push_back(static_cast<double>(csize));
    }
  } else {
    throw UsageError("unknown bench suite '" + config.suite + "'");
  }

  out.csv = csv;
  if (xs.size() >= 2) out.report["loglog_slope"] = loglog_slope(xs, ys);
  attach_timing(out.report, timer);
  out.text = csv;
  return out;
}

}  // namespace

std::string report_to_string(const nlohmann::ordered_json& report) {
  return report.dump(2) + "\n";
}

nlohmann::ordered_json strip_timing(nlohmann::ordered_json report) {
  report.erase("timing");
  return report;
}

RunOutput run(const RunConfig& config) {
  if (config.workers < 1) throw UsageError("--workers must be at least 1");
  const std::string& cmd = config.command;
  if (cmd == "eval") return run_eval(config);
  if (cmd == "canon") return run_canon(config);
  if (cmd == "csat") return run_csat(config);
  if (cmd == "ceqv") return run_ceqv(config);
  if (cmd == "density") return run_density(config);
  if (cmd == "congruences") return run_congruences(config);
  if (cmd == "reduce-sat") return run_reduce_sat(config);
  if (cmd == "cc-extract") return run_cc_extract(config);
  if (cmd == "hyperplane") return run_hyperplane(config);
  if (cmd == "s4-reduce") return run_s4_reduce(config);
  if (cmd == "bench") return run_bench(config);
  throw UsageError("unknown subcommand '" + cmd + "'");
}

}  // namespace nilsat
