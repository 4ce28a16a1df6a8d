// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

// Command-line front end. JSON for single results, CSV for grids; both carry
// schema=1. Exit codes: 0 ok, 1 check failed, 2 usage, 3 numerical failure.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simplexpow/simplexpow.hpp"

using namespace simplexpow;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

enum class Format { Default, Json, Csv };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "nan";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  return v.dump();
}

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

/// A single result: JSON object by default, or one CSV row of its fields.
void emit_record(Json obj, Format f) {
  if (f == Format::Csv) {
    std::cout << kSchemaLine << '\n';
    std::string head, row;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      head += (head.empty() ? "" : ",") + it.key();
      row += (it == obj.begin() ? "" : ",") + csv_cell(it.value());
    }
    std::cout << head << '\n' << row << '\n';
    return;
  }
  Json out = {{"schema", 1}};
  out.update(obj);
  print_json(out);
}

/// A grid: CSV by default, or a JSON array of row objects.
void emit_table(const Table& t, Format f) {
  if (f == Format::Json) {
    Json rows = Json::array();
    for (const auto& r : t.rows) {
      Json o;
      for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
      rows.push_back(o);
    }
    print_json(Json{{"schema", 1}, {"rows", rows}});
    return;
  }
  std::cout << kSchemaLine << '\n';
  for (std::size_t i = 0; i < t.header.size(); ++i) std::cout << (i ? "," : "") << t.header[i];
  std::cout << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << csv_cell(r[i]);
    std::cout << '\n';
  }
}

ModelId require_model(const std::string& s) {
  auto m = parse_model(s);
  if (!m) throw Error("unknown model " + s);
  return *m;
}

unsigned default_jobs() {
  const char* env = std::getenv("SIMPLEXPOW_JOBS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end || v < 1) throw Error("SIMPLEXPOW_JOBS must be a positive integer");
  return static_cast<unsigned>(v);
}

// ---------------------------------------------------------------------------
// Subcommands

struct SolveArgs {
  std::string model, instance;
  double tol = 1e-8;
};

int run_solve(const SolveArgs& a, Format f) {
  const ModelId m = require_model(a.model);
  const Instance inst = instance_from_json(read_json_file(a.instance));
  Json out = {{"model", m.name()}};
  int code = kOk;
  if (m.is_non()) {
    const GlobalSolution g = solve_global_simplex(inst);
    out["status"] = "optimal";
    out["objective"] = json_number(g.value);
    out["x"] = json_vector(g.x);
    out["y"] = json_vector(g.x.array().pow(inst.kappa).matrix());
    out["certified_gap"] = 0.0;
    out["iterations"] = 0;
  } else {
    SolverSettings s;
    s.tol_gap = a.tol;
    s.validate();
    const CompiledRelaxation c = compile(*m.kind, inst);
    const SolveResult r = solve(c.program, s);
    out["status"] = to_string(r.status);
    out["objective"] = json_number(r.objective);
    if (r.x.size() > 0) {
      out["x"] = json_vector(c.extract_x(r.x));
      out["y"] = json_vector(c.extract_y(r.x));
      if (!c.X_vars.empty()) out["X"] = json_matrix(c.extract_X(r.x));
    }
    out["certified_gap"] = json_number(r.certified_gap);
    out["iterations"] = r.iterations;
    if (r.status == SolveStatus::Infeasible) code = kCheckFailed;
    if (r.status == SolveStatus::NumericalLimit) code = kNumerical;
  }
  out["kappa"] = json_number(inst.kappa);
  out["n"] = inst.n;
  out["ground"] = ground_to_json(inst.ground);
  emit_record(out, f);
  return code;
}

int run_oracle(const std::string& path, Format f) {
  const Instance inst = instance_from_json(read_json_file(path));
  const GlobalSolution g = solve_global_simplex(inst);
  Json out = {{"model", "NON"},
              {"objective", json_number(g.value)},
              {"x", json_vector(g.x)},
              {"support_choice", g.support_choice ? Json(*g.support_choice) : Json(nullptr)},
              {"t", json_number(g.t)},
              {"kappa", json_number(inst.kappa)},
              {"n", inst.n}};
  emit_record(out, f);
  return kOk;
}

struct MembershipArgs {
  std::string model, point;
  double tol = 1e-6;
};

int run_membership(const MembershipArgs& a, Format f) {
  const ModelId m = require_model(a.model);
  const Json p = read_json_file(a.point);
  for (const char* key : {"n", "kappa", "x", "y"})
    if (!p.contains(key)) throw Error(std::string("point file is missing \"") + key + "\"");
  Instance geo;
  geo.n = p.at("n").get<std::size_t>();
  geo.kappa = p.at("kappa").get<double>();
  geo.alpha = VectorXd::Zero(static_cast<Eigen::Index>(geo.n));
  geo.beta = geo.alpha;
  geo.ground = p.contains("ground") ? ground_from_json(p.at("ground"), geo.n) : GroundSet::simplex();
  geo.validate();
  const VectorXd x = vector_from_json(p.at("x"), "x"), y = vector_from_json(p.at("y"), "y");
  if (static_cast<std::size_t>(x.size()) != geo.n || static_cast<std::size_t>(y.size()) != geo.n)
    throw Error("point dimension does not match n");
  bool member;
  if (m.is_non()) {
    member = ground_contains(geo, x, a.tol);
    for (std::size_t j = 0; member && j < geo.n; ++j)
      member = std::abs(y(j) - std::pow(std::max(x(j), 0.0), geo.kappa)) <= a.tol;
  } else {
    member = membership(*m.kind, geo, x, y, a.tol);
  }
  emit_record(Json{{"model", m.name()}, {"member", member}, {"tol", json_number(a.tol)}}, f);
  return member ? kOk : kCheckFailed;
}

int run_bounds(const std::vector<std::size_t>& ns, const std::vector<double>& kappas, Format f) {
  Table t{{"n", "kappa", "distance_lb", "distance_ub", "witness_distance", "objective_gap_factor"}, {}};
  for (double k : kappas) {
    if (!(k > 1.0)) throw Error("kappa must exceed 1");
    for (auto n : ns) {
      const DistanceWitness w = distance_lb_witness(n, k);
      t.rows.push_back({n, json_number(k), json_number(w.value), json_number(distance_upper_bound(n, k)),
                        json_number(l1_distance_to_s(w.x, w.y, k)), json_number(max_power_gap(k))});
    }
  }
  emit_table(t, f == Format::Default ? Format::Csv : f);
  return kOk;
}

struct ProbArgs {
  bool analytic = false, simulate = false;
  std::vector<std::size_t> n_list;
  std::string dist = "uniform";
  std::vector<double> kappas;
  std::vector<std::size_t> ns;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

int run_prob(const ProbArgs& a, unsigned jobs, Format f) {
  if (a.analytic == a.simulate) throw Error("choose exactly one of --analytic or --simulate");
  Table t;
  if (a.analytic) {
    if (a.n_list.empty()) throw Error("--analytic needs --n-list");
    t.header = {"n", "p_case3a", "lower_bound"};
    for (auto n : a.n_list) {
      if (n < 2) throw Error("n must be at least 2");
      const CaseProbability p = prob_case3a(n);
      t.rows.push_back({n, json_number(p.p_case3a), json_number(p.lower_bound)});
    }
  } else {
    const auto d = parse_distribution(a.dist);
    if (!d) throw Error("unknown distribution " + a.dist);
    if (a.kappas.empty() || a.ns.empty()) throw Error("--simulate needs --kappa and --n");
    if (a.samples < 1) throw Error("samples must be at least 1");
    t.header = {"kappa", "n", "estimate", "stderr", "samples"};
    for (double k : a.kappas) {
      if (!(k > 1.0)) throw Error("kappa must exceed 1");
      for (auto n : a.ns) {
        if (n < 1) throw Error("n must be at least 1");
        const SimulationEstimate e = simulate_exactness(*d, k, n, a.samples, a.seed, jobs);
        t.rows.push_back({json_number(k), n, json_number(e.p_hat), json_number(e.std_error), e.samples});
      }
    }
  }
  emit_table(t, f == Format::Default ? Format::Csv : f);
  return kOk;
}

int run_experiment(const std::string& config, const std::string& output, unsigned jobs, bool jobs_set, Format f) {
  ExperimentConfig c = experiment_config_from_json(read_json_file(config));
  if (!output.empty()) c.output_dir = output;
  if (jobs_set || !read_json_file(config).contains("jobs")) c.jobs = jobs;
  const auto reports = run_grid(c);
  Table t{{"model", "avg_cumulative_gap", "avg_n_exact", "failed"}, {}};
  for (const auto& m : c.models) {
    double gap = 0, exact = 0;
    std::size_t failed = 0;
    for (const auto& r : reports) {
      const ModelSummary* s = r.summary(m);
      gap += s->cumulative_gap;
      exact += static_cast<double>(s->n_exact);
      failed += s->n_failed;
    }
    const double k = static_cast<double>(reports.size());
    t.rows.push_back({m.name(), json_number(gap / k), json_number(exact / k), failed});
  }
  const LatticeCheck lc = lattice_check(reports);
  std::cerr << "lattice max violation " << format_double(lc.max_violation) << " over " << lc.pairs << " pairs\n";
  emit_table(t, f == Format::Default ? Format::Csv : f);
  for (const auto& row : t.rows)
    if (row[3].get<std::size_t>() > 0) return kNumerical;
  return kOk;
}

CheckReport verify_suite() {
  CheckReport rep = verify_counterexamples();
  bool bound = true;
  for (std::size_t n = 2; n <= 128; ++n) {
    const auto e = prob_case3a_exact(n);
    bound = bound && e.p_case3a >= e.lower_bound;
  }
  rep.add("case3a_lower_bound", bound, "exact for n=2..128");

  double worst = 0;
  for (std::size_t n = 3; n <= 10; ++n)
    for (double k : {1.25, 1.5, 2.0, 3.0}) {
      const auto w = distance_lb_witness(n, k);
      worst = std::max(worst, std::abs(l1_distance_to_s(w.x, w.y, k) - distance_upper_bound(n, k)));
    }
  rep.add("distance_witness_tight", worst <= 1e-6, "max deviation " + format_double(worst));

  using R = Rational;
  const auto c = decompose_n2<R>({R(1, 2), R(1, 2)}, {R(3, 8), R(3, 8)});
  std::array<R, 2> xs{0, 0}, ys{0, 0};
  for (const auto& p : c.points)
    for (int j = 0; j < 2; ++j) {
      xs[j] += p.coefficient * p.x[j];
      ys[j] += p.coefficient * p.y[j];
    }
  rep.add("n2_convex_combination", xs == std::array<R, 2>{R(1, 2), R(1, 2)} &&
                                       ys == std::array<R, 2>{R(3, 8), R(3, 8)} && c.weight == R(2, 3),
          "lambda=" + c.weight.str());

  double lattice = 0;
  for (std::size_t r = 0; r < 3; ++r)
    lattice = std::max(lattice, monotonicity_audit(draw_instance({Distribution::Uniform, 2.0, 3}, 1, r)).lattice.max_violation);
  rep.add("lattice_ordering", lattice <= 2e-8, "max violation " + format_double(lattice));

  rep.add("subset_sum_reduction",
          q_optimum_is_zero(reduce_subset_sum({3, 5, 7}, 10, 2)) && !q_optimum_is_zero(reduce_subset_sum({3, 5, 7}, 4, 2)),
          "a=(3,5,7) b=10 yes, b=4 no");
  return rep;
}

int run_verify(Format f) {
  const CheckReport rep = verify_suite();
  if (f == Format::Csv) {
    Table t{{"check", "passed", "detail"}, {}};
    for (const auto& c : rep.items) t.rows.push_back({c.name, c.passed ? "true" : "false", c.detail});
    emit_table(t, f);
  } else {
    emit_record(Json{{"passed", rep.all_passed()}, {"checks", rep.to_json()}}, f);
  }
  return rep.all_passed() ? kOk : kCheckFailed;
}

struct AuditArgs {
  int conjecture = 1;
  std::vector<std::size_t> ns;
  std::vector<double> kappas;
  std::size_t reps = 0;
  std::uint64_t seed = 20260101;
};

int run_audit(AuditArgs a, unsigned jobs, Format f) {
  if (a.conjecture != 1 && a.conjecture != 2) throw Error("--conjecture must be 1 or 2");
  if (a.ns.empty()) a.ns = a.conjecture == 1 ? std::vector<std::size_t>{2, 3, 4, 5, 6} : std::vector<std::size_t>{2, 3, 4, 5};
  if (a.kappas.empty()) a.kappas = a.conjecture == 1 ? std::vector<double>{2.0} : ExperimentConfig{}.kappas;
  if (a.conjecture == 1 && a.kappas != std::vector<double>{2.0}) throw Error("conjecture 1 is stated for kappa = 2");
  if (a.reps == 0) a.reps = a.conjecture == 1 ? 100 : 50;
  RelaxationCache cache;
  AuditReport total;
  total.check = a.conjecture == 1 ? "conjecture1" : "conjecture2";
  total.seed = a.seed;
  Table t{{"check", "kappa", "n", "instances", "max_violation", "violations", "failed"}, {}};
  for (double k : a.kappas)
    for (auto n : a.ns) {
      if (n < 2) throw Error("n must be at least 2");
      const AuditReport r = a.conjecture == 1 ? check_conjecture1(n, a.reps, a.seed, cache, jobs)
                                              : check_conjecture2(k, n, a.reps, a.seed, cache, jobs);
      total.merge(r);
      t.rows.push_back({r.check, json_number(k), n, r.instances, json_number(r.max_violation), r.violations, r.failed});
    }
  if (f == Format::Csv) {
    emit_table(t, f);
  } else {
    Json settings = Json::array();
    for (const auto& row : t.rows) {
      Json o;
      for (std::size_t i = 1; i < t.header.size(); ++i) o[t.header[i]] = row[i];
      settings.push_back(o);
    }
    Json out = total.to_json();
    out["passed"] = total.passed();
    out["settings"] = settings;
    emit_record(out, f);
  }
  if (total.failed > 0) return kNumerical;
  return total.violations == 0 ? kOk : kCheckFailed;
}

int run_reduce(const std::vector<std::int64_t>& a, std::int64_t b, double kappa, Format f) {
  const Instance q = reduce_subset_sum(a, b, kappa);
  Json out = {{"instance", instance_to_json(q)}, {"subset_sum_feasible", subset_sum_feasible(a, b)}};
  if (q.n <= 24) out["q_optimum_is_zero"] = q_optimum_is_zero(q);
  emit_record(out, f);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simplexpow: relaxations of separable power objectives over the simplex"};
  app.require_subcommand(1);
  std::string format = "default";
  unsigned jobs = 1;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"default", "json", "csv"}));
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads (default $SIMPLEXPOW_JOBS or 1)")
                       ->check(CLI::PositiveNumber);
  app.fallthrough();

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve a relaxation or the nonconvex model");
  solve_cmd->add_option("--model", solve_args.model, "relaxation kind or NON")->required();
  solve_cmd->add_option("--instance", solve_args.instance, "instance JSON file")->required();
  solve_cmd->add_option("--tol", solve_args.tol, "certified duality gap tolerance");

  std::string oracle_instance;
  auto* oracle_cmd = app.add_subcommand("oracle", "global optimum on the simplex");
  oracle_cmd->add_option("--instance", oracle_instance, "instance JSON file")->required();

  MembershipArgs mem_args;
  auto* mem_cmd = app.add_subcommand("membership", "test whether (x, y) lies in a relaxation");
  mem_cmd->add_option("--model", mem_args.model, "relaxation kind or NON")->required();
  mem_cmd->add_option("--point", mem_args.point, "point JSON file with n, kappa, x, y")->required();
  mem_cmd->add_option("--tol", mem_args.tol, "absolute tolerance");

  std::vector<std::size_t> bound_ns;
  std::vector<double> bound_kappas;
  auto* bounds_cmd = app.add_subcommand("bounds", "distance and objective bounds of the P relaxation");
  bounds_cmd->add_option("--n", bound_ns, "dimensions")->required()->delimiter(',');
  bounds_cmd->add_option("--kappa", bound_kappas, "exponents")->required()->delimiter(',');

  ProbArgs prob_args;
  auto* prob_cmd = app.add_subcommand("prob", "probability that the P relaxation is exact");
  prob_cmd->add_flag("--analytic", prob_args.analytic, "exact Case 3a probability, uniform coefficients");
  prob_cmd->add_flag("--simulate", prob_args.simulate, "Monte Carlo over all exact cases");
  prob_cmd->add_option("--n-list", prob_args.n_list, "dimensions for --analytic")->delimiter(',');
  prob_cmd->add_option("--dist", prob_args.dist, "uniform or normal");
  prob_cmd->add_option("--kappa", prob_args.kappas, "exponents for --simulate")->delimiter(',');
  prob_cmd->add_option("--n", prob_args.ns, "dimensions for --simulate")->delimiter(',');
  prob_cmd->add_option("--samples", prob_args.samples, "samples per cell");
  prob_cmd->add_option("--seed", prob_args.seed, "random seed");

  std::string exp_config, exp_output;
  auto* exp_cmd = app.add_subcommand("experiment", "run a replication grid");
  exp_cmd->add_option("--config", exp_config, "experiment JSON file")->required();
  exp_cmd->add_option("--output", exp_output, "output directory, overrides the config");

  auto* verify_cmd = app.add_subcommand("verify", "exact counterexamples and invariant checks");

  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "numerical audit of an open conjecture");
  audit_cmd->add_option("--conjecture", audit_args.conjecture, "1 or 2")->required();
  audit_cmd->add_option("--n-list", audit_args.ns, "dimensions")->delimiter(',');
  audit_cmd->add_option("--kappa-list", audit_args.kappas, "exponents")->delimiter(',');
  audit_cmd->add_option("--reps", audit_args.reps, "instances per distribution and setting");
  audit_cmd->add_option("--seed", audit_args.seed, "random seed");

  std::vector<std::int64_t> subset_a;
  std::int64_t subset_b = 0;
  double subset_kappa = 2.0;
  auto* reduce_cmd = app.add_subcommand("reduce-subset-sum", "polytope instance encoding a subset-sum question");
  reduce_cmd->add_option("--a", subset_a, "positive integers")->required()->delimiter(',');
  reduce_cmd->add_option("--b", subset_b, "positive target")->required();
  reduce_cmd->add_option("--kappa", subset_kappa, "exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const bool jobs_set = jobs_opt->count() > 0;
    if (!jobs_set) jobs = default_jobs();
    const Format f = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Default;
    if (*solve_cmd) return run_solve(solve_args, f);
    if (*oracle_cmd) return run_oracle(oracle_instance, f);
    if (*mem_cmd) return run_membership(mem_args, f);
    if (*bounds_cmd) return run_bounds(bound_ns, bound_kappas, f);
    if (*prob_cmd) return run_prob(prob_args, jobs, f);
    if (*exp_cmd) return run_experiment(exp_config, exp_output, jobs, jobs_set, f);
    if (*verify_cmd) return run_verify(f);
    if (*audit_cmd) return run_audit(audit_args, jobs, f);
    if (*reduce_cmd) return run_reduce(subset_a, subset_b, subset_kappa, f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
