// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "simplexpow/analytic.hpp"
#include "simplexpow/io.hpp"
#include "simplexpow/ipm_solver.hpp"
#include "simplexpow/oracle.hpp"
#include "simplexpow/probability.hpp"
#include "simplexpow/relaxations.hpp"
#include "simplexpow/rng.hpp"

namespace simplexpow {

// ---------------------------------------------------------------------------
// Models

/// A relaxation kind, or the nonconvex model itself when kind is empty.
struct ModelId {
  std::optional<RelaxationKind> kind;

  static ModelId non() { return {}; }
  static ModelId relaxation(RelaxationKind k) { return {k}; }
  bool is_non() const { return !kind.has_value(); }
  std::string name() const { return kind ? to_string(*kind) : "NON"; }
  bool operator==(const ModelId&) const = default;
};

inline std::optional<ModelId> parse_model(std::string_view s) {
  if (s == "NON") return ModelId::non();
  if (auto k = parse_kind(s)) return ModelId::relaxation(*k);
  return std::nullopt;
}

inline std::vector<ModelId> all_models() {
  std::vector<ModelId> m;
  for (auto k : kAllKinds) m.push_back(ModelId::relaxation(k));
  m.push_back(ModelId::non());
  return m;
}

// ---------------------------------------------------------------------------
// Parallel loop

/// Runs fn(i) for i in [0, count) on up to jobs threads. Work is claimed from a
/// shared counter, so results must be written to per-index slots.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Prepared relaxations shared across replications

/// Objective vector of a compiled relaxation for coefficients (alpha, beta).
inline VectorXd relaxation_objective(const CompiledRelaxation& c, const VectorXd& alpha, const VectorXd& beta) {
  VectorXd obj = VectorXd::Zero(static_cast<Eigen::Index>(c.program.num_vars));
  for (std::size_t j = 0; j < c.x_vars.size(); ++j) {
    obj(c.x_vars[j]) += alpha(j);
    obj(c.y_vars[j]) += beta(j);
  }
  return obj;
}

/// On the simplex the constraints depend only on (kind, kappa, n), so each is
/// compiled and eliminated once and then re-solved with new objectives.
class RelaxationCache {
 public:
  struct Entry {
    CompiledRelaxation compiled;
    PreparedProgram prepared;
  };

  explicit RelaxationCache(SolverSettings settings = {}) : settings_(settings) {}

  const SolverSettings& settings() const { return settings_; }

  const Entry& get(RelaxationKind kind, double kappa, std::size_t n) {
    const auto key = std::make_tuple(static_cast<int>(kind), kappa, n);
    {
      std::lock_guard lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) return *it->second;
    }
    const Instance zero = Instance::simplex(kappa, VectorXd::Zero(static_cast<Eigen::Index>(n)),
                                            VectorXd::Zero(static_cast<Eigen::Index>(n)));
    CompiledRelaxation c = compile(kind, zero);
    auto entry = std::make_unique<Entry>(Entry{c, PreparedProgram(c.program, settings_)});
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(entry));
    return *it->second;
  }

  SolveResult solve(RelaxationKind kind, const Instance& inst) {
    if (inst.ground.type != GroundType::Simplex) return simplexpow::solve(build(kind, inst), settings_);
    const Entry& e = get(kind, inst.kappa, inst.n);
    return e.prepared.solve(relaxation_objective(e.compiled, inst.alpha, inst.beta));
  }

 private:
  SolverSettings settings_;
  std::mutex mutex_;
  std::map<std::tuple<int, double, std::size_t>, std::unique_ptr<Entry>> entries_;
};

// ---------------------------------------------------------------------------
// Instance generation

struct Setting {
  Distribution dist = Distribution::Uniform;
  double kappa = 2.0;
  std::size_t n = 2;
};

/// Replication rep of a setting; the stream is keyed by (seed, setting, rep).
inline Instance draw_instance(const Setting& s, std::uint64_t seed, std::size_t rep) {
  Stream rng(derive_key({seed, 0x1e5701ULL, static_cast<std::uint64_t>(s.dist), double_bits(s.kappa), s.n, rep}));
  VectorXd a, b;
  draw_coefficients(rng, s.dist, s.n, a, b);
  return Instance::simplex(s.kappa, a, b);
}

enum class SignPattern { AllNonPositive, AllNonNegative, OnePositive };

inline const char* to_string(SignPattern p) {
  switch (p) {
    case SignPattern::AllNonPositive: return "beta_nonpositive";
    case SignPattern::AllNonNegative: return "beta_nonnegative";
    case SignPattern::OnePositive: return "one_beta_positive";
  }
  return "?";
}

/// Uniform draw whose beta signs are flipped into the requested pattern.
inline Instance draw_sign_pattern(SignPattern p, double kappa, std::size_t n, std::uint64_t seed, std::size_t rep) {
  Stream rng(derive_key({seed, 0x5165ULL, static_cast<std::uint64_t>(p), double_bits(kappa), n, rep}));
  VectorXd a, b;
  draw_coefficients(rng, Distribution::Uniform, n, a, b);
  b = b.cwiseAbs();
  if (p != SignPattern::AllNonNegative) b = -b;
  if (p == SignPattern::OnePositive) {
    const auto j = static_cast<Eigen::Index>(rng.below(n));
    b(j) = -b(j);
  }
  return Instance::simplex(kappa, a, b);
}

// ---------------------------------------------------------------------------
// Settings and reports

struct InstanceRecord {
  std::size_t rep = 0;
  ModelId model;
  double objective = 0.0;
  double gap = 0.0;
  double time_ms = 0.0;
  bool exact = false;
  std::string status;
  int iterations = 0;
};

struct ModelSummary {
  ModelId model;
  double cumulative_gap = 0.0;
  double cumulative_time = 0.0;  // seconds of in-repo computation
  std::size_t n_exact = 0;
  std::size_t n_failed = 0;
};

struct SettingReport {
  Setting setting;
  std::size_t reps = 0;
  std::vector<ModelSummary> models;
  std::vector<InstanceRecord> records;  // rep-major, models in request order
  double p_crosscheck_max_diff = 0.0;   // closed-form P versus the IPM on a subsample
  std::size_t p_crosscheck_count = 0;

  const ModelSummary* summary(const ModelId& m) const {
    for (const auto& s : models)
      if (s.model == m) return &s;
    return nullptr;
  }
};

struct RunOptions {
  double exact_threshold = 1e-4;
  unsigned jobs = 1;
  bool record_time = false;  // off keeps CSV output byte-identical across runs
  std::size_t crosscheck_every = 10;
};

inline void check_models(const std::vector<ModelId>& models) {
  if (models.empty()) throw Error("at least one model is required");
  for (std::size_t i = 0; i < models.size(); ++i)
    for (std::size_t j = i + 1; j < models.size(); ++j)
      if (models[i] == models[j]) throw Error("duplicate model " + models[i].name());
}

inline SettingReport run_setting(const Setting& setting, std::size_t reps, const std::vector<ModelId>& models,
                                 std::uint64_t seed, RelaxationCache& cache, const RunOptions& opt = {}) {
  if (reps < 1) throw Error("reps must be at least 1");
  if (!(opt.exact_threshold > 0)) throw Error("exact_threshold must be positive");
  check_models(models);
  const std::size_t m = models.size();
  SettingReport rep;
  rep.setting = setting;
  rep.reps = reps;
  rep.records.resize(reps * m);
  std::vector<double> cross(reps, -1.0);
  using clock = std::chrono::steady_clock;

  parallel_for(reps, opt.jobs, [&](std::size_t r) {
    const Instance inst = draw_instance(setting, seed, r);
    auto t0 = clock::now();
    const GlobalSolution g = solve_global_simplex(inst);
    const double non_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    for (std::size_t k = 0; k < m; ++k) {
      InstanceRecord& rec = rep.records[r * m + k];
      rec.rep = r;
      rec.model = models[k];
      t0 = clock::now();
      if (models[k].is_non()) {
        rec.objective = g.value;
        rec.status = "optimal";
        rec.time_ms = non_ms;
      } else if (*models[k].kind == RelaxationKind::P) {
        rec.objective = solve_p_closed_form(inst).value;
        rec.status = "optimal";
        rec.time_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        if (opt.crosscheck_every && r % opt.crosscheck_every == 0)
          cross[r] = std::abs(cache.solve(RelaxationKind::P, inst).objective - rec.objective);
      } else {
        const SolveResult s = cache.solve(*models[k].kind, inst);
        rec.time_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        rec.objective = s.objective;
        rec.status = to_string(s.status);
        rec.iterations = s.iterations;
      }
      rec.gap = g.value - rec.objective;
      if (models[k].is_non()) rec.gap = 0.0;
      rec.exact = rec.status == "optimal" && rec.gap <= opt.exact_threshold;
      if (!opt.record_time) rec.time_ms = 0.0;
    }
  });

  for (std::size_t k = 0; k < m; ++k) {
    ModelSummary s;
    s.model = models[k];
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& rec = rep.records[r * m + k];
      s.cumulative_time += rec.time_ms / 1000.0;
      if (rec.status != "optimal") {
        ++s.n_failed;
        continue;
      }
      s.cumulative_gap += rec.gap;
      s.n_exact += rec.exact;
    }
    rep.models.push_back(s);
  }
  for (double d : cross)
    if (d >= 0) {
      ++rep.p_crosscheck_count;
      rep.p_crosscheck_max_diff = std::max(rep.p_crosscheck_max_diff, d);
    }
  return rep;
}

struct ExperimentConfig {
  std::vector<Distribution> distributions = {Distribution::Uniform, Distribution::Normal};
  std::vector<double> kappas = {1.25, 1.5, 1.75, 2.0, 2.5, 3.0};
  std::vector<std::size_t> ns = {2, 3, 4, 5, 6};
  std::size_t reps = 100;
  std::vector<ModelId> models = all_models();
  std::uint64_t seed = 20260101;
  double exact_threshold = 1e-4;
  std::string output_dir;
  unsigned jobs = 1;
  bool record_time = false;

  /// Full-scale protocol: 1000 replications and n up to 10.
  static ExperimentConfig full_scale() {
    ExperimentConfig c;
    c.reps = 1000;
    c.ns = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    return c;
  }

  void validate() const {
    if (reps < 1) throw Error("reps must be at least 1");
    if (!(exact_threshold > 0)) throw Error("exact_threshold must be positive");
    if (distributions.empty() || kappas.empty() || ns.empty()) throw Error("empty experiment grid");
    for (double k : kappas)
      if (!(k > 1.0 && k <= 8.0)) throw Error("kappa must lie in (1, 8]");
    for (auto n : ns)
      if (n < 2) throw Error("experiment dimensions must be at least 2");
    check_models(models);
  }
};

inline ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig c;
  if (!j.is_object()) throw Error("experiment config must be a JSON object");
  if (j.contains("full_scale") && j.at("full_scale").get<bool>()) c = ExperimentConfig::full_scale();
  if (j.contains("distributions")) {
    c.distributions.clear();
    for (const auto& d : j.at("distributions")) {
      auto p = parse_distribution(d.get<std::string>());
      if (!p) throw Error("unknown distribution " + d.get<std::string>());
      c.distributions.push_back(*p);
    }
  }
  if (j.contains("kappas")) c.kappas = j.at("kappas").get<std::vector<double>>();
  if (j.contains("ns")) c.ns = j.at("ns").get<std::vector<std::size_t>>();
  if (j.contains("reps")) c.reps = j.at("reps").get<std::size_t>();
  if (j.contains("models")) {
    c.models.clear();
    for (const auto& m : j.at("models")) {
      auto p = parse_model(m.get<std::string>());
      if (!p) throw Error("unknown model " + m.get<std::string>());
      c.models.push_back(*p);
    }
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("exact_threshold")) c.exact_threshold = j.at("exact_threshold").get<double>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
  if (j.contains("record_time")) c.record_time = j.at("record_time").get<bool>();
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// CSV output

inline void write_instance_csv(std::ostream& os, const std::vector<SettingReport>& reports) {
  os << kSchemaLine << "\n# time_ms covers in-repo computation only\n";
  os << "dist,kappa,n,rep,model,objective,gap,time_ms,exact,status,iterations\n";
  for (const auto& r : reports)
    for (const auto& rec : r.records)
      os << to_string(r.setting.dist) << ',' << format_double(r.setting.kappa) << ',' << r.setting.n << ','
         << rec.rep << ',' << rec.model.name() << ',' << format_double(rec.objective) << ','
         << format_double(rec.gap) << ',' << format_double(rec.time_ms) << ',' << (rec.exact ? 1 : 0) << ','
         << rec.status << ',' << rec.iterations << '\n';
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<SettingReport>& reports) {
  os << kSchemaLine << "\n# cumulative_time_s covers in-repo computation only\n";
  os << "dist,kappa,n,model,cumulative_gap,cumulative_time_s,n_exact,reps\n";
  for (const auto& r : reports)
    for (const auto& s : r.models)
      os << to_string(r.setting.dist) << ',' << format_double(r.setting.kappa) << ',' << r.setting.n << ','
         << s.model.name() << ',' << format_double(s.cumulative_gap) << ',' << format_double(s.cumulative_time)
         << ',' << s.n_exact << ',' << r.reps << '\n';
}

/// Averages over settings per model, the shape of the gap-versus-time summary.
inline void write_summary_csv(std::ostream& os, const std::vector<SettingReport>& reports) {
  os << kSchemaLine << "\nmodel,avg_cumulative_gap,avg_cumulative_time_s,avg_n_exact,settings\n";
  if (reports.empty()) return;
  for (const auto& s0 : reports.front().models) {
    double gap = 0, time = 0, exact = 0;
    std::size_t count = 0;
    for (const auto& r : reports)
      if (const auto* s = r.summary(s0.model)) {
        gap += s->cumulative_gap;
        time += s->cumulative_time;
        exact += static_cast<double>(s->n_exact);
        ++count;
      }
    const double c = static_cast<double>(count);
    os << s0.model.name() << ',' << format_double(gap / c) << ',' << format_double(time / c) << ','
       << format_double(exact / c) << ',' << count << '\n';
  }
}

inline std::vector<SettingReport> run_grid(const ExperimentConfig& config, RelaxationCache& cache) {
  config.validate();
  RunOptions opt;
  opt.exact_threshold = config.exact_threshold;
  opt.jobs = config.jobs;
  opt.record_time = config.record_time;
  std::vector<SettingReport> out;
  for (auto d : config.distributions)
    for (double k : config.kappas)
      for (auto n : config.ns) out.push_back(run_setting({d, k, n}, config.reps, config.models, config.seed, cache, opt));
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path dir(config.output_dir);
    auto open = [&](const char* name) {
      std::ofstream f(dir / name);
      if (!f) throw Error("cannot write " + (dir / name).string());
      return f;
    };
    auto f1 = open("instances.csv");
    write_instance_csv(f1, out);
    auto f2 = open("aggregate.csv");
    write_aggregate_csv(f2, out);
    auto f3 = open("summary.csv");
    write_summary_csv(f3, out);
  }
  return out;
}

inline std::vector<SettingReport> run_grid(const ExperimentConfig& config) {
  RelaxationCache cache;
  return run_grid(config, cache);
}

// ---------------------------------------------------------------------------
// Lattice ordering

/// Pairs (weaker, stronger) implied by set containment; NON is the strongest.
inline std::vector<std::pair<ModelId, ModelId>> lattice_pairs() {
  using K = RelaxationKind;
  auto r = [](K k) { return ModelId::relaxation(k); };
  std::vector<std::pair<ModelId, ModelId>> p = {
      {r(K::P), r(K::PR)},      {r(K::PR), r(K::PRs)},     {r(K::PRs), r(K::PRs3)},   {r(K::PRs3), r(K::PRS)},
      {r(K::PRS), ModelId::non()}, {r(K::PRV), r(K::PRsV)}, {r(K::PRsV), r(K::PRs3V)}, {r(K::PRs3V), r(K::PRSV)}};
  for (auto k : {K::PR, K::PRs, K::PRs3, K::PRS}) {
    const auto v = static_cast<K>(static_cast<int>(k) + 4);
    p.push_back({r(k), r(v)});
    p.push_back({r(v), ModelId::non()});
  }
  return p;
}

struct LatticeCheck {
  double max_violation = 0.0;  // max over pairs of z_weaker - z_stronger, floored at 0
  std::string worst;
  std::size_t pairs = 0;
};

inline void lattice_update(LatticeCheck& c, const std::map<std::string, double>& values) {
  for (const auto& [lo, hi] : lattice_pairs()) {
    auto a = values.find(lo.name()), b = values.find(hi.name());
    if (a == values.end() || b == values.end()) continue;
    ++c.pairs;
    const double v = a->second - b->second;
    if (!(v <= c.max_violation)) {
      c.max_violation = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
      c.worst = lo.name() + " > " + hi.name();
    }
  }
}

/// Checks every replication of every report; a failed solve counts as a violation.
inline LatticeCheck lattice_check(const std::vector<SettingReport>& reports) {
  LatticeCheck c;
  for (const auto& r : reports) {
    std::map<std::size_t, std::map<std::string, double>> by_rep;
    for (const auto& rec : r.records)
      by_rep[rec.rep][rec.model.name()] = rec.status == "optimal" ? rec.objective : std::nan("");
    for (const auto& [rep, values] : by_rep) lattice_update(c, values);
  }
  return c;
}

struct MonotonicityReport {
  std::vector<std::pair<std::string, double>> values;  // nine relaxations then NON
  LatticeCheck lattice;
  bool ok = false;
};

inline MonotonicityReport monotonicity_audit(const Instance& inst, const SolverSettings& settings = {}) {
  MonotonicityReport rep;
  std::map<std::string, double> vals;
  for (auto k : kAllKinds) {
    const SolveResult r = solve(build(k, inst), settings);
    rep.values.push_back({to_string(k), r.objective});
    vals[to_string(k)] = r.status == SolveStatus::Optimal ? r.objective : std::nan("");
  }
  const double z = solve_global_simplex(inst).value;
  rep.values.push_back({"NON", z});
  vals["NON"] = z;
  lattice_update(rep.lattice, vals);
  rep.ok = rep.lattice.max_violation <= 2 * settings.tol_gap;
  return rep;
}

// ---------------------------------------------------------------------------
// Conjecture audits

struct AuditReport {
  std::string check;
  double max_violation = 0.0;
  std::size_t instances = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-5;
  std::size_t violations = 0;  // instances above tolerance
  std::size_t failed = 0;      // solves not reaching optimality
  std::string worst;           // instance with the largest positive violation, if any

  bool passed() const { return failed == 0 && violations == 0; }

  void merge(const AuditReport& o) {
    if (o.max_violation > max_violation) worst = o.worst;
    max_violation = std::max(max_violation, o.max_violation);
    instances += o.instances;
    violations += o.violations;
    failed += o.failed;
  }

  Json to_json() const {
    return Json{{"check", check},
                {"max_violation", json_number(max_violation)},
                {"instances", instances},
                {"seed", seed},
                {"tolerance", json_number(tolerance)},
                {"violations", violations},
                {"failed", failed},
                {"worst", worst}};
  }
};

namespace detail {

/// Max over draws of measure(inst), both distributions, reps each.
template <class Measure>
AuditReport audit_draws(std::string name, double kappa, std::size_t n, std::size_t reps, std::uint64_t seed,
                        unsigned jobs, Measure&& measure) {
  AuditReport a;
  a.check = std::move(name);
  a.seed = seed;
  for (auto d : {Distribution::Uniform, Distribution::Normal}) {
    std::vector<std::optional<double>> v(reps);
    parallel_for(reps, jobs, [&](std::size_t r) { v[r] = measure(draw_instance({d, kappa, n}, seed, r)); });
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& e = v[r];
      ++a.instances;
      if (!e) {
        ++a.failed;
        continue;
      }
      if (*e > a.max_violation)
        a.worst = std::string(to_string(d)) + " kappa=" + format_double(kappa) + " n=" + std::to_string(n) +
                  " rep=" + std::to_string(r);
      a.max_violation = std::max(a.max_violation, *e);
      if (*e > a.tolerance) ++a.violations;
    }
  }
  return a;
}

}  // namespace detail

/// max of z_oracle - z_PRS at kappa = 2.
inline AuditReport check_conjecture1(std::size_t n, std::size_t reps, std::uint64_t seed, RelaxationCache& cache,
                                     unsigned jobs = 1) {
  return detail::audit_draws("conjecture1", 2.0, n, reps, seed, jobs, [&](const Instance& inst) -> std::optional<double> {
    const SolveResult r = cache.solve(RelaxationKind::PRS, inst);
    if (r.status != SolveStatus::Optimal) return std::nullopt;
    return solve_global_simplex(inst).value - r.objective;
  });
}

/// max of |z_PRs3 - z_PRS|.
inline AuditReport check_conjecture2(double kappa, std::size_t n, std::size_t reps, std::uint64_t seed,
                                     RelaxationCache& cache, unsigned jobs = 1) {
  return detail::audit_draws("conjecture2", kappa, n, reps, seed, jobs, [&](const Instance& inst) -> std::optional<double> {
    const SolveResult a = cache.solve(RelaxationKind::PRs3, inst);
    const SolveResult b = cache.solve(RelaxationKind::PRS, inst);
    if (a.status != SolveStatus::Optimal || b.status != SolveStatus::Optimal) return std::nullopt;
    return std::abs(a.objective - b.objective);
  });
}

// ---------------------------------------------------------------------------
// Completely positive certificate for n <= 3

/// [[X, x], [x^T, 1]] doubly nonnegative; at size 4 or less this means completely positive.
inline bool certify_cp_small(const VectorXd& x, const MatrixXd& X, double tol) {
  const auto n = x.size();
  if (n > 3) throw Error("the doubly nonnegative certificate is only valid up to 4x4");
  if (X.rows() != n || X.cols() != n) throw Error("X must be n x n");
  MatrixXd m(n + 1, n + 1);
  m.topLeftCorner(n, n) = 0.5 * (X + X.transpose());
  m.topRightCorner(n, 1) = x;
  m.bottomLeftCorner(1, n) = x.transpose();
  m(n, n) = 1.0;
  if (m.minCoeff() < -tol) return false;
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0) >= -tol;
}

// ---------------------------------------------------------------------------
// Strictness constructions in exact arithmetic

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool all_passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
  }
  void add(std::string name, bool ok, std::string detail) { items.push_back({std::move(name), ok, std::move(detail)}); }

  Json to_json() const {
    Json a = Json::array();
    for (const auto& c : items) a.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return a;
  }
};

namespace exact {

template <std::size_t N>
using Vec = std::array<Rational, N>;
template <std::size_t N>
using Mat = std::array<std::array<Rational, N>, N>;

inline std::string str(const Rational& r) { return r.str(); }

/// x on the simplex with x_j^2 <= y_j <= x_j (kappa = 2).
template <std::size_t N>
bool in_p(const Vec<N>& x, const Vec<N>& y) {
  Rational s = 0;
  for (std::size_t j = 0; j < N; ++j) {
    if (x[j] < 0 || y[j] > x[j] || y[j] < x[j] * x[j]) return false;
    s += x[j];
  }
  return s == 1;
}

/// Closed-form PR test for n <= 3 at kappa = 2.
template <std::size_t N>
bool in_pr(const Vec<N>& x, const Vec<N>& y) {
  if (!in_p(x, y)) return false;
  Rational total = 0;
  for (std::size_t j = 0; j < N; ++j) total += x[j] - y[j];
  for (std::size_t j = 0; j < N; ++j)
    if (x[j] - y[j] > total - (x[j] - y[j])) return false;
  return true;
}

/// Xe = x, diag(X) = y and X >= 0 entrywise.
inline bool rlt_lift_ok(const Vec<3>& x, const Vec<3>& y, const Mat<3>& X) {
  for (std::size_t i = 0; i < 3; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (X[i][j] < 0 || X[i][j] != X[j][i]) return false;
      row += X[i][j];
    }
    if (row != x[i] || X[i][i] != y[i]) return false;
  }
  return true;
}

inline Rational minor2(const Mat<3>& X, std::size_t i, std::size_t j) { return X[i][i] * X[j][j] - X[i][j] * X[i][j]; }

inline Rational det3(const Mat<3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace exact

inline CheckReport verify_counterexamples() {
  using exact::str;
  using R = Rational;
  CheckReport rep;
  {
    const exact::Vec<2> x = {R(1, 2), R(1, 2)}, y = {R(1, 2), R(1, 4)};
    rep.add("P_strictly_contains_PR.in_P", exact::in_p(x, y), "x=(1/2,1/2) y=(1/2,1/4)");
    rep.add("P_strictly_contains_PR.not_in_PR", !exact::in_pr(x, y),
            "x1-y1=" + str(x[0] - y[0]) + " x2-y2=" + str(x[1] - y[1]));
  }
  {
    const exact::Vec<3> x = {R(1, 3), R(1, 3), R(1, 3)}, y = {R(1, 9), R(1, 9), R(1, 3)};
    const auto X = lift_unique_n3<R>(x, y);
    const exact::Mat<3> expect = {{{R(1, 9), R(2, 9), R(0)}, {R(2, 9), R(1, 9), R(0)}, {R(0), R(0), R(1, 3)}}};
    rep.add("PR_strictly_contains_PRs.in_PR", exact::in_pr(x, y) && exact::rlt_lift_ok(x, y, X), "unique lift passes Xe=x");
    rep.add("PR_strictly_contains_PRs.lift", X == expect, "X12=" + str(X[0][1]));
    const R m = exact::minor2(X, 0, 1);
    rep.add("PR_strictly_contains_PRs.minor_violated", m == R(-3, 81) && m < 0, "X11*X22-X12^2=" + str(m));
  }
  {
    const exact::Vec<3> x = {R(1, 2), R(1, 3), R(1, 6)}, y = {R(1, 4), R(1, 8), R(1, 30)};
    const auto X = lift_unique_n3<R>(x, y);
    const R s(1, 240);
    const exact::Mat<3> expect = {{{60 * s, 39 * s, 21 * s}, {39 * s, 30 * s, 11 * s}, {21 * s, 11 * s, 8 * s}}};
    rep.add("PRs_strictly_contains_PRS.in_PR", exact::in_pr(x, y) && exact::rlt_lift_ok(x, y, X), "unique lift passes Xe=x");
    rep.add("PRs_strictly_contains_PRS.lift", X == expect, "240*X11=" + str(240 * X[0][0]));
    const R d2 = s * s;
    const R m01 = exact::minor2(X, 0, 1), m02 = exact::minor2(X, 0, 2), m12 = exact::minor2(X, 1, 2);
    rep.add("PRs_strictly_contains_PRS.minors",
            m01 == 279 * d2 && m02 == 39 * d2 && m12 == 119 * d2 && m01 >= 0 && m02 >= 0 && m12 >= 0,
            "minors " + str(m01 / d2) + ", " + str(m02 / d2) + ", " + str(m12 / d2) + " in units of 1/240^2");
    const R det = exact::det3(X);
    rep.add("PRs_strictly_contains_PRS.determinant", det == -d2 && det < 0, "det X=" + str(det / d2) + "/240^2");
  }
  return rep;
}

}  // namespace simplexpow
