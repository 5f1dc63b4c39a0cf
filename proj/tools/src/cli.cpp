#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "dtigra/csv.hpp"
#include "dtigra/operators.hpp"
#include "dtigra/signal.hpp"

namespace dtigra::cli {

namespace {

constexpr const char* kBundleFormat = "dtigra-bundle/1";

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    require(allowed.count(key) > 0, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read_key(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for '") + key + "'");
  }
}

json assumptions_to_json(const theory::AssumptionParams& a) {
  return {{"c", a.c}, {"L", a.L}, {"s", a.s},         {"varrho", a.varrho},
          {"delta", a.delta}, {"K", a.K}, {"A", a.A}, {"p", a.p}};
}

theory::AssumptionParams assumptions_from_json(const json& j, theory::AssumptionParams a = {}) {
  read_key(j, "c", a.c);
  read_key(j, "L", a.L);
  read_key(j, "s", a.s);
  read_key(j, "varrho", a.varrho);
  read_key(j, "delta", a.delta);
  read_key(j, "K", a.K);
  read_key(j, "A", a.A);
  read_key(j, "p", a.p);
  return a;
}

DtigraConfig build_dtigra(const ExperimentConfig& cfg, bool theoretical) {
  DtigraConfig d = cfg.dtigra;
  if (theoretical) {
    theory::AssumptionParams a = *cfg.assumptions;
    a.p = cfg.p;
    d.step_policy = TheoreticalStep{theory::TheoryConstants(a, d.inner_grad_factor)};
  }
  return d;
}

bool uses_theoretical_steps(const ExperimentConfig& cfg) {
  return std::holds_alternative<TheoreticalStep>(cfg.dtigra.step_policy);
}

// ---------------------------------------------------------------------------
// Output staging: all files of one command become visible together or not at all.

class Staging {
 public:
  explicit Staging(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  void commit() {
    fs::create_directories(dir_);
    std::vector<fs::path> temps;
    try {
      for (const auto& [name, content] : files_) {
        fs::path tmp = dir_ / (name + ".tmp");
        temps.push_back(tmp);
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os << content;
        os.close();
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& t : temps) fs::remove(t, ec);
      throw;
    }
    for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], dir_ / files_[i].first);
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

template <class F>
std::string render(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json seed_metadata(const ExperimentConfig& cfg) {
  return {{"noise", cfg.seed_noise}, {"start", cfg.seed_start}, {"generator", kNoiseGenerator}};
}

json norm_conventions() {
  return {{"start_norm", "l^p"}, {"relative_error", "l^2"}, {"residual", "L^2 midpoint rule"}};
}

CoefVec true_vector(const ExperimentConfig& cfg) {
  CoefVec x(cfg.n());
  for (const auto& [index, value] : cfg.true_coefficients) x[index - 1] = value;
  return x;
}

json read_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

template <class T, class Reader>
T read_csv_file(const fs::path& path, Reader reader) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  try {
    return reader(is);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::string to_string(SolverKind k) { return k == SolverKind::Dtigra ? "dtigra" : "landweber"; }

void ExperimentConfig::validate() const {
  require(levels >= 1 && levels <= 20, "levels must lie in 1..20");
  require(p > 1.0 && p <= 2.0, "p must satisfy 1 < p <= 2");
  require(noise > 0.0 && noise < 1.0, "noise must lie in (0, 1)");
  require(std::isfinite(start_norm) && start_norm >= 0.0, "start_norm must be finite and >= 0");
  if (solver == SolverKind::Landweber) require(start_norm > 0.0, "landweber needs start_norm > 0");
  require(!true_coefficients.empty(), "true_coefficients must not be empty");
  std::set<std::size_t> seen;
  for (const auto& [index, value] : true_coefficients) {
    require(index >= 1 && index <= n(), "true coefficient index " + std::to_string(index) +
                                            " outside 1.." + std::to_string(n()));
    require(seen.insert(index).second, "duplicate true coefficient index " + std::to_string(index));
    require(std::isfinite(value), "true coefficient values must be finite");
  }
  if (uses_theoretical_steps(*this)) {
    require(assumptions.has_value(), "theoretical step policy needs 'assumptions'");
  }
  build_dtigra(*this, uses_theoretical_steps(*this)).validate();
  require(landweber.tau > 1.0, "landweber tau must exceed 1");
  require(landweber.beta_cap > 0.0, "landweber beta_cap must be positive");
}

json to_json(const ExperimentConfig& cfg) {
  json step;
  if (const auto* ps = std::get_if<PracticalStep>(&cfg.dtigra.step_policy)) {
    step = {{"kind", "practical"}, {"cap", ps->cap}};
  } else {
    step = {{"kind", "theoretical"}};
  }
  json coeffs = json::array();
  for (const auto& [index, value] : cfg.true_coefficients) coeffs.push_back({index, value});
  json j = {
      {"levels", cfg.levels},
      {"p", cfg.p},
      {"noise", cfg.noise},
      {"start_norm", cfg.start_norm},
      {"seeds", {{"noise", cfg.seed_noise}, {"start", cfg.seed_start}}},
      {"solver", to_string(cfg.solver)},
      {"dtigra",
       {{"alpha0", cfg.dtigra.alpha0},
        {"qbar", cfg.dtigra.qbar},
        {"tau", cfg.dtigra.tau},
        {"step_policy", step},
        {"inner_grad_factor", cfg.dtigra.inner_grad_factor},
        {"inner_max_iters", cfg.dtigra.inner_max_iters},
        {"outer_max_iters", cfg.dtigra.outer_max_iters},
        {"alpha_floor", cfg.dtigra.alpha_floor}}},
      {"landweber",
       {{"tau", cfg.landweber.tau},
        {"beta_cap", cfg.landweber.beta_cap},
        {"max_iters", cfg.landweber.max_iters}}},
      {"true_coefficients", coeffs},
  };
  if (cfg.assumptions) j["assumptions"] = assumptions_to_json(*cfg.assumptions);
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig cfg) {
  check_keys(j, {"levels", "n", "p", "noise", "start_norm", "seeds", "solver", "dtigra",
                 "landweber", "assumptions", "true_coefficients"},
             "config");
  read_key(j, "levels", cfg.levels);
  read_key(j, "p", cfg.p);
  read_key(j, "noise", cfg.noise);
  read_key(j, "start_norm", cfg.start_norm);
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    check_keys(s, {"noise", "start"}, "seeds");
    read_key(s, "noise", cfg.seed_noise);
    read_key(s, "start", cfg.seed_start);
  }
  if (j.contains("solver")) {
    std::string kind;
    read_key(j, "solver", kind);
    require(kind == "dtigra" || kind == "landweber", "solver must be 'dtigra' or 'landweber'");
    cfg.solver = kind == "dtigra" ? SolverKind::Dtigra : SolverKind::Landweber;
  }
  if (j.contains("dtigra")) {
    const json& d = j.at("dtigra");
    check_keys(d, {"alpha0", "qbar", "tau", "step_policy", "inner_grad_factor", "inner_max_iters",
                   "outer_max_iters", "alpha_floor"},
               "dtigra");
    read_key(d, "alpha0", cfg.dtigra.alpha0);
    read_key(d, "qbar", cfg.dtigra.qbar);
    read_key(d, "tau", cfg.dtigra.tau);
    read_key(d, "inner_grad_factor", cfg.dtigra.inner_grad_factor);
    read_key(d, "inner_max_iters", cfg.dtigra.inner_max_iters);
    read_key(d, "outer_max_iters", cfg.dtigra.outer_max_iters);
    read_key(d, "alpha_floor", cfg.dtigra.alpha_floor);
    if (d.contains("step_policy")) {
      const json& sp = d.at("step_policy");
      check_keys(sp, {"kind", "cap"}, "step_policy");
      std::string kind = "practical";
      read_key(sp, "kind", kind);
      if (kind == "practical") {
        PracticalStep ps;
        if (const auto* cur = std::get_if<PracticalStep>(&cfg.dtigra.step_policy)) ps = *cur;
        read_key(sp, "cap", ps.cap);
        cfg.dtigra.step_policy = ps;
      } else if (kind == "theoretical") {
        // Placeholder constants; the real ones are built from 'assumptions' at solve time.
        cfg.dtigra.step_policy = TheoreticalStep{theory::TheoryConstants(
            theory::AssumptionParams{}, cfg.dtigra.inner_grad_factor)};
      } else {
        throw std::invalid_argument("step_policy kind must be 'practical' or 'theoretical'");
      }
    }
  }
  if (j.contains("landweber")) {
    const json& l = j.at("landweber");
    check_keys(l, {"tau", "beta_cap", "max_iters"}, "landweber");
    read_key(l, "tau", cfg.landweber.tau);
    read_key(l, "beta_cap", cfg.landweber.beta_cap);
    read_key(l, "max_iters", cfg.landweber.max_iters);
  }
  if (j.contains("assumptions")) {
    const json& a = j.at("assumptions");
    check_keys(a, {"c", "L", "s", "varrho", "delta", "K", "A", "p"}, "assumptions");
    cfg.assumptions = assumptions_from_json(a, cfg.assumptions.value_or(theory::AssumptionParams{}));
  }
  if (j.contains("true_coefficients")) {
    const json& tc = j.at("true_coefficients");
    require(tc.is_array(), "true_coefficients must be an array of [index, value] pairs");
    cfg.true_coefficients.clear();
    for (const json& e : tc) {
      require(e.is_array() && e.size() == 2 && e[0].is_number_unsigned() && e[1].is_number(),
              "true_coefficients entries must be [index, value]");
      cfg.true_coefficients.emplace_back(e[0].get<std::size_t>(), e[1].get<double>());
    }
  }
  if (j.contains("n")) {
    std::size_t n = 0;
    read_key(j, "n", n);
    require(n == cfg.n(), "config n does not equal 2^levels");
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path, ExperimentConfig base) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
  return config_from_json(j, std::move(base));
}

// ---------------------------------------------------------------------------
// generate

void cmd_generate(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  const ComposedForward fwd(cfg.levels);
  const CoefVec x_true = true_vector(cfg);
  const Signal f_true = fwd.synthesis().synthesize(x_true);
  const Signal y = fwd.apply(x_true);
  const NoisyData nd = add_noise(y, {cfg.noise, cfg.seed_noise});

  json meta = {
      {"format", kBundleFormat},
      {"levels", cfg.levels},
      {"n", cfg.n()},
      {"noise", cfg.noise},
      {"delta", nd.delta},
      {"data_norm", l2_norm(y)},
      {"seed_metadata", seed_metadata(cfg)},
      {"norm_conventions", norm_conventions()},
      {"files",
       {{"x_true", "x_true.csv"}, {"f_true", "f_true.csv"}, {"y", "y.csv"}, {"y_delta", "y_delta.csv"}}},
      {"config", to_json(cfg)},
  };

  Staging stage(out);
  stage.add("x_true.csv", render([&](std::ostream& os) { csv::write_coefficients(os, x_true); }));
  stage.add("f_true.csv", render([&](std::ostream& os) { csv::write_signal(os, f_true); }));
  stage.add("y.csv", render([&](std::ostream& os) { csv::write_signal(os, y); }));
  stage.add("y_delta.csv", render([&](std::ostream& os) { csv::write_signal(os, nd.data); }));
  stage.add("metadata.json", dump(meta));
  stage.commit();
}

// ---------------------------------------------------------------------------
// solve

namespace {

struct Bundle {
  json meta;
  unsigned levels = 0;
  std::size_t n = 0;
  double noise = 0.0;
  double delta = 0.0;
  std::uint64_t seed_noise = 0;
  CoefVec x_true;
  Signal data;
};

Bundle read_bundle(const fs::path& dir) {
  Bundle b;
  b.meta = read_json_file(dir / "metadata.json");
  try {
    require(b.meta.value("format", "") == kBundleFormat, "not a dtigra data bundle");
    b.levels = b.meta.at("levels").get<unsigned>();
    b.n = b.meta.at("n").get<std::size_t>();
    b.noise = b.meta.at("noise").get<double>();
    b.delta = b.meta.at("delta").get<double>();
    b.seed_noise = b.meta.at("seed_metadata").at("noise").get<std::uint64_t>();
  } catch (const std::exception& e) {
    throw std::runtime_error((dir / "metadata.json").string() + ": " + e.what());
  }
  if (b.levels < 1 || b.levels > 20 || b.n != (std::size_t{1} << b.levels)) {
    throw std::runtime_error("bundle metadata: n does not equal 2^levels");
  }
  if (!(b.delta > 0.0) || !std::isfinite(b.delta)) {
    throw std::runtime_error("bundle metadata: delta must be positive");
  }
  b.x_true = read_csv_file<CoefVec>(dir / "x_true.csv", csv::read_coefficients);
  b.data = read_csv_file<Signal>(dir / "y_delta.csv", csv::read_signal);
  if (b.x_true.size() != b.n) {
    throw std::runtime_error("x_true.csv has " + std::to_string(b.x_true.size()) +
                             " entries, metadata says n = " + std::to_string(b.n));
  }
  if (b.data.grid_size() != b.n) {
    throw std::runtime_error("y_delta.csv has " + std::to_string(b.data.grid_size()) +
                             " samples, metadata says n = " + std::to_string(b.n));
  }
  return b;
}

json result_json(const ExperimentConfig& cfg, const SolverResult& res, double delta,
                 double threshold) {
  json j = {
      {"solver", to_string(cfg.solver)},
      {"alpha_final", res.alpha_final},
      {"k_star", res.k_star},
      {"stop_reason", to_string(res.trace.stop_reason)},
      {"final_residual", res.final_residual},
      {"delta", delta},
      {"discrepancy_threshold", threshold},
      {"seed_metadata", seed_metadata(cfg)},
      {"norm_conventions", norm_conventions()},
      {"config", to_json(cfg)},
  };
  j["j_star"] = cfg.solver == SolverKind::Dtigra ? json(res.j_star + 1) : json(nullptr);
  j["relative_error"] = res.relative_error ? json(*res.relative_error) : json(nullptr);
  return j;
}

}  // namespace

SolveReport cmd_solve(const ExperimentConfig& cfg, const fs::path& bundle_dir, const fs::path& out) {
  cfg.validate();
  const Bundle b = read_bundle(bundle_dir);
  if (b.levels != cfg.levels) {
    throw std::runtime_error("dimension mismatch: config has levels = " +
                             std::to_string(cfg.levels) + ", bundle has " +
                             std::to_string(b.levels));
  }
  if (b.noise != cfg.noise || b.seed_noise != cfg.seed_noise) {
    throw std::runtime_error("config noise level/seed differ from the bundle metadata");
  }

  auto fwd = std::make_shared<ComposedForward>(cfg.levels);
  const ProblemInstance prob(fwd, b.data, b.delta, Exponent(cfg.p));
  const CoefVec x0 = random_start(cfg.n(), cfg.start_norm, prob.exponent(), cfg.seed_start);

  SolveReport rep;
  rep.delta = b.delta;
  double threshold = 0.0;
  if (cfg.solver == SolverKind::Dtigra) {
    const DtigraConfig d = build_dtigra(cfg, uses_theoretical_steps(cfg));
    threshold = d.tau * b.delta;
    rep.result = dtigra_solve(prob, x0, d, b.x_true);
  } else {
    threshold = cfg.landweber.tau * b.delta;
    rep.result = landweber_solve(prob, x0, cfg.landweber, b.x_true);
  }
  rep.exit_code =
      rep.result.trace.stop_reason == StopReason::Discrepancy ? kExitOk : kExitSafeguard;

  Staging stage(out);
  stage.add("result.json", dump(result_json(cfg, rep.result, b.delta, threshold)));
  stage.add("trace.csv", render([&](std::ostream& os) { csv::write_trace(os, rep.result.trace); }));
  stage.add("x_final.csv",
            render([&](std::ostream& os) { csv::write_coefficients(os, rep.result.x_final); }));
  stage.commit();
  return rep;
}

// ---------------------------------------------------------------------------
// constants

json cmd_constants(const json& params) {
  check_keys(params, {"c", "L", "s", "varrho", "delta", "K", "A", "p", "alpha0", "qbar",
                      "inner_grad_factor", "alphas", "misfit_at_zero", "deriv_norm_at_zero"},
             "constants params");
  theory::AssumptionParams a = assumptions_from_json(params);
  double alpha0 = 1e6;
  double qbar = 0.7;
  double factor = 1.5;
  read_key(params, "alpha0", alpha0);
  read_key(params, "qbar", qbar);
  read_key(params, "inner_grad_factor", factor);

  json derived = json::object();
  if (params.contains("misfit_at_zero")) {
    double misfit = 0.0;
    read_key(params, "misfit_at_zero", misfit);
    a.A = theory::norm_bound_A(a.p, theory::alpha_star(a), misfit);
    derived["A"] = a.A;
  }
  if (params.contains("deriv_norm_at_zero")) {
    double dn = 0.0;
    read_key(params, "deriv_norm_at_zero", dn);
    a.K = theory::derivative_bound_K(a.L, a.A, dn);
    derived["K"] = a.K;
  }

  const theory::TheoryConstants tc(a, factor);
  std::vector<double> alphas = {tc.alpha_star(), alpha0};
  read_key(params, "alphas", alphas);

  json j = {
      {"params", assumptions_to_json(a)},
      {"alpha_star", tc.alpha_star()},
      {"gamma", tc.gamma()},
      {"qbar0", tc.qbar0()},
      {"qbar", qbar},
      {"tau", theory::tau_discrepancy(qbar, a.s)},
      {"sigma", tc.sigma()},
      {"c_A", theory::c_A(a)},
      {"c_tilde_p", tc.c_tilde_p()},
      {"alpha0", alpha0},
      {"rho", theory::rho_upd(a, alpha0)},
      {"qbar_admissible", theory::qbar_admissible(a, alpha0, qbar, tc.d_alpha_policy())},
      {"inner_grad_factor", factor},
      {"d_alpha_policy", "c_bar_A(alpha) * r_alpha^2"},
  };
  if (!derived.empty()) j["derived"] = derived;
  json rows = json::array();
  for (double alpha : alphas) {
    const theory::AlphaConstants k = tc.at(alpha);
    json row = {{"alpha", alpha},     {"r_alpha", k.r_alpha}, {"d_alpha", k.d_alpha},
                {"c_bar_A", k.c_bar_A}, {"c_tilde_q", k.c_tilde_q}, {"C_alpha", k.C_alpha},
                {"kappa", k.kappa},   {"T", k.T},             {"c_p", k.c_p},
                {"M", k.M}};
    const double next = qbar * alpha;
    row["inner_stop_ceiling"] =
        next >= tc.alpha_star()
            ? json(theory::inner_stop_ceiling(a, alpha, next, tc.d_alpha_policy()))
            : json(nullptr);
    rows.push_back(row);
  }
  j["at_alpha"] = rows;
  return j;
}

// ---------------------------------------------------------------------------
// reproduce-tables

CellOutcome run_cell(const ExperimentConfig& master, SolverKind solver, double p, double noise,
                     double start_norm) {
  CellOutcome c;
  c.solver = solver;
  c.p = p;
  c.noise = noise;
  c.start_norm = start_norm;
  try {
    ExperimentConfig cfg = master;
    cfg.solver = solver;
    cfg.p = p;
    cfg.noise = noise;
    cfg.start_norm = start_norm;
    cfg.validate();
    auto fwd = std::make_shared<ComposedForward>(cfg.levels);
    const CoefVec x_true = true_vector(cfg);
    const NoisyData nd = add_noise(fwd->apply(x_true), {noise, cfg.seed_noise});
    const ProblemInstance prob(fwd, nd.data, nd.delta, Exponent(p));
    const CoefVec x0 = random_start(cfg.n(), start_norm, prob.exponent(), cfg.seed_start);
    const SolverResult res =
        solver == SolverKind::Dtigra
            ? dtigra_solve(prob, x0, build_dtigra(cfg, uses_theoretical_steps(cfg)), x_true)
            : landweber_solve(prob, x0, cfg.landweber, x_true);
    c.stop = res.trace.stop_reason;
    c.alpha = res.alpha_final;
    c.j_star = res.j_star + 1;
    c.k_star = res.k_star;
    c.relative_error = *res.relative_error;
  } catch (const std::exception& e) {
    c.failure = e.what();
  }
  return c;
}

namespace {

std::string table_csv(const std::vector<CellOutcome>& cells, SolverKind solver) {
  std::ostringstream os;
  const bool dt = solver == SolverKind::Dtigra;
  os << (dt ? "p,noise,start_norm,alpha,j_star,k_star,relative_error\n"
            : "p,noise,start_norm,alpha,k_star,relative_error\n");
  for (const CellOutcome& c : cells) {
    if (c.solver != solver) continue;
    os << csv::format_double(c.p) << ',' << csv::format_double(c.noise) << ','
       << csv::format_double(c.start_norm) << ',';
    if (c.converged()) {
      os << csv::format_double(c.alpha) << ',';
      if (dt) os << c.j_star << ',';
      os << c.k_star << ',' << csv::format_double(c.relative_error) << '\n';
    } else {
      os << (dt ? "--,--,--,--\n" : "--,--,--\n");
    }
  }
  return os.str();
}

json cell_json(const CellOutcome& c) {
  json j = {{"solver", to_string(c.solver)},
            {"p", c.p},
            {"noise", c.noise},
            {"start_norm", c.start_norm}};
  if (!c.failure.empty()) {
    j["failure"] = c.failure;
    return j;
  }
  j["stop_reason"] = dtigra::to_string(c.stop);
  j["alpha"] = c.alpha;
  if (c.solver == SolverKind::Dtigra) j["j_star"] = c.j_star;
  j["k_star"] = c.k_star;
  j["relative_error"] = c.relative_error;
  return j;
}

}  // namespace

std::vector<CellOutcome> cmd_reproduce_tables(const ExperimentConfig& master, const TableGrid& grid,
                                              const fs::path& out, unsigned threads) {
  master.validate();
  struct Job {
    SolverKind solver;
    double p, noise, start_norm;
  };
  std::vector<Job> jobs;
  for (double noise : grid.noise) {
    for (double x0 : grid.start_norms_dtigra) {
      for (double p : grid.p) jobs.push_back({SolverKind::Dtigra, p, noise, x0});
    }
  }
  for (double noise : grid.noise) {
    for (double x0 : grid.start_norms_landweber) {
      for (double p : grid.p) jobs.push_back({SolverKind::Landweber, p, noise, x0});
    }
  }

  std::vector<CellOutcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      results[i] = run_cell(master, job.solver, job.p, job.noise, job.start_norm);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  json cells = json::array();
  for (const auto& c : results) cells.push_back(cell_json(c));
  json meta = {{"config", to_json(master)},
               {"seed_metadata", seed_metadata(master)},
               {"norm_conventions", norm_conventions()},
               {"grid",
                {{"noise", grid.noise},
                 {"start_norms_dtigra", grid.start_norms_dtigra},
                 {"start_norms_landweber", grid.start_norms_landweber},
                 {"p", grid.p}}},
               {"sentinel", "--"},
               {"cells", cells}};

  Staging stage(out);
  stage.add("table1.csv", table_csv(results, SolverKind::Dtigra));
  stage.add("table2.csv", table_csv(results, SolverKind::Landweber));
  stage.add("tables.json", dump(meta));
  stage.commit();
  return results;
}

// ---------------------------------------------------------------------------
// Argument handling

namespace {

struct CommonFlags {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed_noise;
  std::optional<std::uint64_t> seed_start;
  std::optional<std::string> solver;
  std::optional<double> p;
  std::optional<double> noise;
  std::optional<double> start_norm;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON configuration file");
    app->add_option("--out", out, "output directory")->capture_default_str();
    app->add_option("--seed-noise", seed_noise, "seed of the noise generator");
    app->add_option("--seed-start", seed_start, "seed of the random start vector");
    app->add_option("--solver", solver, "dtigra or landweber")
        ->check(CLI::IsMember({"dtigra", "landweber"}));
    app->add_option("--p", p, "exponent p in (1, 2]");
    app->add_option("--noise", noise, "relative noise level");
    app->add_option("--start-norm", start_norm, "l^p norm of the random start vector");
  }

  ExperimentConfig apply(ExperimentConfig cfg) const {
    if (!config.empty()) cfg = load_config(config, cfg);
    if (seed_noise) cfg.seed_noise = *seed_noise;
    if (seed_start) cfg.seed_start = *seed_start;
    if (solver) cfg.solver = *solver == "dtigra" ? SolverKind::Dtigra : SolverKind::Landweber;
    if (p) cfg.p = *p;
    if (noise) cfg.noise = *noise;
    if (start_norm) cfg.start_norm = *start_norm;
    return cfg;
  }
};

std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual TIGRA and dual modified Landweber for l^p-penalized autoconvolution"};
  app.require_subcommand(1);

  CommonFlags gen_flags, solve_flags, const_flags, tab_flags;
  std::string bundle;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic data bundle");
  gen_flags.attach(gen);
  CLI::App* solve = app.add_subcommand("solve", "run a solver on a data bundle");
  solve_flags.attach(solve);
  solve->add_option("--bundle", bundle, "data bundle directory (default: --out)");
  CLI::App* cons = app.add_subcommand("constants", "evaluate the analysis constants");
  cons->add_option("--config", const_flags.config, "JSON file with assumption parameters");
  cons->add_option("--out", const_flags.out, "also write constants.json here");
  CLI::App* tab = app.add_subcommand("reproduce-tables", "run the table grids");
  tab_flags.attach(tab);
  tab->add_option("--threads", threads, "concurrent cells")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) {
      const ExperimentConfig cfg = gen_flags.apply({});
      cmd_generate(cfg, gen_flags.out);
      out << "wrote bundle to " << gen_flags.out << "\n";
      return kExitOk;
    }
    if (*solve) {
      const fs::path bdir = bundle.empty() ? fs::path(solve_flags.out) : fs::path(bundle);
      // Start from the configuration the bundle was generated with.
      ExperimentConfig base;
      const fs::path meta = bdir / "metadata.json";
      if (fs::exists(meta)) {
        const json m = read_json_file(meta);
        if (m.contains("config")) base = config_from_json(m.at("config"));
      }
      const ExperimentConfig cfg = solve_flags.apply(base);
      const SolveReport rep = cmd_solve(cfg, bdir, solve_flags.out);
      const SolverResult& r = rep.result;
      out << to_string(cfg.solver) << ": " << dtigra::to_string(r.trace.stop_reason)
          << " alpha=" << fmt_g(r.alpha_final);
      if (cfg.solver == SolverKind::Dtigra) out << " j*=" << r.j_star + 1;
      out << " k*=" << r.k_star << " e=" << fmt_g(r.relative_error.value_or(NAN)) << "\n";
      return rep.exit_code;
    }
    if (*cons) {
      json params = json::object();
      if (!const_flags.config.empty()) params = read_json_file(const_flags.config);
      const json c = cmd_constants(params);
      if (cons->count("--out") > 0) {
        Staging stage(const_flags.out);
        stage.add("constants.json", dump(c));
        stage.commit();
      }
      out << c.dump(2) << "\n";
      return kExitOk;
    }
    if (*tab) {
      const ExperimentConfig master = tab_flags.apply({});
      TableGrid grid;
      if (tab_flags.p) grid.p = {*tab_flags.p};
      if (tab_flags.noise) grid.noise = {*tab_flags.noise};
      if (tab_flags.start_norm) {
        grid.start_norms_dtigra = {*tab_flags.start_norm};
        grid.start_norms_landweber = {*tab_flags.start_norm};
      }
      if (tab_flags.solver) {
        if (*tab_flags.solver == "dtigra") grid.start_norms_landweber.clear();
        else grid.start_norms_dtigra.clear();
      }
      const auto cells = cmd_reproduce_tables(master, grid, tab_flags.out, threads);
      std::size_t failed = 0;
      for (const auto& c : cells) failed += c.failure.empty() ? 0 : 1;
      out << "wrote " << cells.size() << " cells to " << tab_flags.out << "\n";
      if (failed > 0) err << failed << " cells failed; see tables.json\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace dtigra::cli
