#include "experiment_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "clipopt/errors.hpp"

namespace clipopt::cli {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in '" + where + "'");
}

template <typename T>
void get_to(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(out);
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + where + "." + key + "': " + e.what());
  }
}

// tau fields accept a number or the string "inf" (JSON has no infinity).
void get_tau(const json& obj, const char* key, double& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") {
      out = std::numeric_limits<double>::infinity();
      return;
    }
    throw ConfigError("bad value for '" + where + "." + key +
                      "': expected a number or \"inf\"");
  }
  get_to(obj, key, out, where);
}

json tau_json(double tau) {
  if (std::isinf(tau)) return json("inf");
  return json(tau);
}

void parse_problem(const json& j, ProblemSpec& s) {
  require_keys(j, "problem", {"kind", "m", "n", "lambda", "bound", "mu",
                              "data_seed", "load"});
  get_to(j, "kind", s.kind, "problem");
  get_to(j, "m", s.m, "problem");
  get_to(j, "n", s.n, "problem");
  get_to(j, "lambda", s.lambda, "problem");
  get_to(j, "bound", s.bound, "problem");
  get_to(j, "mu", s.mu, "problem");
  get_to(j, "data_seed", s.data_seed, "problem");
  get_to(j, "load", s.load, "problem");
  if (s.kind != "lasso-box" && s.kind != "robust-regression" && s.kind != "quad-box")
    throw ConfigError("problem.kind must be lasso-box, robust-regression, or quad-box");
}

void parse_noise(const json& j, NoiseSpec& s, const std::string& where) {
  require_keys(j, where, {"kind", "alpha", "sigma"});
  get_to(j, "kind", s.kind, where);
  get_to(j, "alpha", s.alpha, where);
  get_to(j, "sigma", s.sigma, where);
  if (s.kind != "pareto-sym" && s.kind != "cauchy" && s.kind != "gaussian" &&
      s.kind != "none")
    throw ConfigError(where + ".kind must be pareto-sym, cauchy, gaussian, or none");
}

void parse_solver(const json& j, SolverSpec& s) {
  require_keys(j, "solver", {"algo", "K", "eta_schedule", "eta", "eta_seq",
                             "theta", "tau", "tau0", "tau_seq", "x0",
                             "store_iterates", "obj_z_cadence"});
  get_to(j, "algo", s.algo, "solver");
  get_to(j, "K", s.K, "solver");
  get_to(j, "eta_schedule", s.eta_schedule, "solver");
  get_to(j, "eta", s.eta, "solver");
  get_to(j, "eta_seq", s.eta_seq, "solver");
  get_to(j, "theta", s.theta, "solver");
  get_tau(j, "tau", s.tau, "solver");
  if (j.contains("tau0")) {
    double t = 0.0;
    get_tau(j, "tau0", t, "solver");
    s.tau0 = t;
  }
  get_to(j, "tau_seq", s.tau_seq, "solver");
  get_to(j, "x0", s.x0, "solver");
  get_to(j, "store_iterates", s.store_iterates, "solver");
  get_to(j, "obj_z_cadence", s.obj_z_cadence, "solver");
  if (s.algo != "spgm" && s.algo != "spgm-momentum")
    throw ConfigError("solver.algo must be spgm or spgm-momentum");
  if (s.eta_schedule != "constant" && s.eta_schedule != "scvx" &&
      s.eta_schedule != "sequence")
    throw ConfigError("solver.eta_schedule must be constant, scvx, or sequence");
  if (s.eta_schedule == "sequence" && s.eta_seq.empty())
    throw ConfigError("solver.eta_schedule = sequence requires solver.eta_seq");
}

void parse_biasvar(const json& j, BiasVarSpec& s) {
  require_keys(j, "biasvar", {"models", "a", "tau", "n_samples"});
  if (j.contains("models")) {
    s.models.clear();
    for (const json& m : j.at("models")) {
      NoiseSpec ns;
      parse_noise(m, ns, "biasvar.models[]");
      s.models.push_back(ns);
    }
  }
  get_to(j, "a", s.a, "biasvar");
  get_to(j, "tau", s.tau, "biasvar");
  get_to(j, "n_samples", s.n_samples, "biasvar");
}

void parse_sweep(const json& j, SweepSpec& s) {
  require_keys(j, "sweep", {"tau", "alpha", "eta", "seeds", "cell_cap"});
  get_to(j, "tau", s.tau, "sweep");
  get_to(j, "alpha", s.alpha, "sweep");
  get_to(j, "eta", s.eta, "sweep");
  get_to(j, "seeds", s.seeds, "sweep");
  get_to(j, "cell_cap", s.cell_cap, "sweep");
}

void parse_bounds(const json& j, BoundsSpec& s) {
  require_keys(j, "bounds", {"eps", "F0", "tau", "sigma_tau_min",
                             "sigma_tau_max", "sigma_tau_points", "constants"});
  get_to(j, "eps", s.eps, "bounds");
  if (j.contains("F0")) s.F0 = j.at("F0").get<double>();
  if (j.contains("tau")) {
    double t = 0.0;
    get_tau(j, "tau", t, "bounds");
    s.tau = t;
  }
  get_to(j, "sigma_tau_min", s.sigma_tau_min, "bounds");
  get_to(j, "sigma_tau_max", s.sigma_tau_max, "bounds");
  get_to(j, "sigma_tau_points", s.sigma_tau_points, "bounds");
  if (j.contains("constants")) {
    const json& c = j.at("constants");
    require_keys(c, "bounds.constants", {"L_f", "mu_f", "U_f", "D_h", "F_low"});
    ProblemConstants pc;
    get_to(c, "L_f", pc.L_f, "bounds.constants");
    get_to(c, "mu_f", pc.mu_f, "bounds.constants");
    get_to(c, "U_f", pc.U_f, "bounds.constants");
    get_to(c, "D_h", pc.D_h, "bounds.constants");
    get_to(c, "F_low", pc.F_low, "bounds.constants");
    s.constants = pc;
  }
}

json noise_json(const NoiseSpec& s) {
  return json{{"kind", s.kind}, {"alpha", s.alpha}, {"sigma", s.sigma}};
}

// The echo pins what was computed, not where or how: out and jobs change the
// destination and the thread count but never the bytes of any artifact, so
// they are omitted to keep serial and parallel reruns byte-identical.
json effective_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["problem"] = {{"kind", c.problem.kind},       {"m", c.problem.m},
                  {"n", c.problem.n},             {"lambda", c.problem.lambda},
                  {"bound", c.problem.bound},     {"mu", c.problem.mu},
                  {"data_seed", c.problem.data_seed}, {"load", c.problem.load}};
  j["noise"] = noise_json(c.noise);
  json sv{{"algo", c.solver.algo},
          {"K", c.solver.K},
          {"eta_schedule", c.solver.eta_schedule},
          {"eta", c.solver.eta},
          {"eta_seq", c.solver.eta_seq},
          {"theta", c.solver.theta},
          {"tau", tau_json(c.solver.tau)},
          {"tau_seq", c.solver.tau_seq},
          {"x0", c.solver.x0},
          {"store_iterates", c.solver.store_iterates},
          {"obj_z_cadence", c.solver.obj_z_cadence}};
  if (c.solver.tau0) sv["tau0"] = tau_json(*c.solver.tau0);
  j["solver"] = sv;
  if (c.command == "biasvar") {
    json models = json::array();
    for (const NoiseSpec& m : c.biasvar.models) models.push_back(noise_json(m));
    j["biasvar"] = {{"models", models},
                    {"a", c.biasvar.a},
                    {"tau", c.biasvar.tau},
                    {"n_samples", c.biasvar.n_samples}};
  }
  if (c.command == "sweep")
    j["sweep"] = {{"tau", c.sweep.tau},
                  {"alpha", c.sweep.alpha},
                  {"eta", c.sweep.eta},
                  {"seeds", c.sweep.seeds},
                  {"cell_cap", c.sweep.cell_cap}};
  if (c.command == "bounds") {
    json b{{"eps", c.bounds.eps},
           {"sigma_tau_min", c.bounds.sigma_tau_min},
           {"sigma_tau_max", c.bounds.sigma_tau_max},
           {"sigma_tau_points", c.bounds.sigma_tau_points}};
    if (c.bounds.F0) b["F0"] = *c.bounds.F0;
    if (c.bounds.tau) b["tau"] = tau_json(*c.bounds.tau);
    if (c.bounds.constants)
      b["constants"] = {{"L_f", c.bounds.constants->L_f},
                        {"mu_f", c.bounds.constants->mu_f},
                        {"U_f", c.bounds.constants->U_f},
                        {"D_h", c.bounds.constants->D_h},
                        {"F_low", c.bounds.constants->F_low}};
    j["bounds"] = b;
  }
  return j;
}

}  // namespace

ExperimentConfig load_config(const std::string& command,
                             const std::string& config_path,
                             std::optional<std::uint64_t> seed_flag,
                             std::optional<std::string> out_flag,
                             std::optional<int> jobs_flag) {
  ExperimentConfig cfg;
  cfg.command = command;

  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) throw std::ios_base::failure("cannot open config: " + config_path);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ConfigError("config is not valid JSON (" + config_path + "): " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    require_keys(j, "(root)", {"command", "seed", "out", "jobs", "problem",
                               "noise", "solver", "biasvar", "sweep", "bounds"});
    if (j.contains("command")) {
      const std::string file_cmd = j.at("command").get<std::string>();
      if (file_cmd != command)
        throw ConfigError("config 'command' is '" + file_cmd +
                          "' but the invoked subcommand is '" + command + "'");
    }
    get_to(j, "seed", cfg.seed, "(root)");
    get_to(j, "out", cfg.out, "(root)");
    get_to(j, "jobs", cfg.jobs, "(root)");
    if (j.contains("problem")) parse_problem(j.at("problem"), cfg.problem);
    if (j.contains("noise")) parse_noise(j.at("noise"), cfg.noise, "noise");
    if (j.contains("solver")) parse_solver(j.at("solver"), cfg.solver);
    if (j.contains("biasvar")) parse_biasvar(j.at("biasvar"), cfg.biasvar);
    if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg.sweep);
    if (j.contains("bounds")) parse_bounds(j.at("bounds"), cfg.bounds);
  }

  if (seed_flag) cfg.seed = *seed_flag;
  if (out_flag) cfg.out = *out_flag;
  if (jobs_flag) cfg.jobs = *jobs_flag;
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.out.empty()) throw ConfigError("out directory must be nonempty");

  // Resolve defaults that depend on other fields so the echoed config is
  // complete and a rerun from it reproduces the outputs byte for byte.
  if (cfg.command == "biasvar") {
    if (cfg.biasvar.models.empty())
      cfg.biasvar.models = {{"pareto-sym", 0.5, 1.0},
                            {"cauchy", 1.0, 1.0},
                            {"pareto-sym", 1.5, 1.0},
                            {"gaussian", 2.0, 1.0}};
    if (cfg.biasvar.tau.empty())
      for (int t = 1; t <= 100; ++t) cfg.biasvar.tau.push_back(double(t));
    if (cfg.biasvar.a.empty()) throw ConfigError("biasvar.a must be nonempty");
    if (cfg.biasvar.n_samples < 2)
      throw ConfigError("biasvar.n_samples must be >= 2");
  }
  if (cfg.command == "sweep") {
    if (cfg.sweep.tau.empty()) cfg.sweep.tau = {cfg.solver.tau};
    if (cfg.sweep.alpha.empty()) cfg.sweep.alpha = {cfg.noise.alpha};
    if (cfg.sweep.eta.empty()) cfg.sweep.eta = {cfg.solver.eta};
    if (cfg.sweep.seeds.empty()) cfg.sweep.seeds = {cfg.seed};
    if (cfg.sweep.alpha.size() > 1 && cfg.noise.kind != "pareto-sym")
      throw ConfigError("sweep.alpha applies only to pareto-sym noise");
    const std::int64_t cells =
        std::int64_t(cfg.sweep.tau.size()) * std::int64_t(cfg.sweep.alpha.size()) *
        std::int64_t(cfg.sweep.eta.size()) * std::int64_t(cfg.sweep.seeds.size());
    if (cells > cfg.sweep.cell_cap)
      throw ConfigError("sweep has " + std::to_string(cells) +
                        " cells, over the cap of " +
                        std::to_string(cfg.sweep.cell_cap));
  }
  if (cfg.command == "bounds") {
    if (cfg.bounds.eps.empty()) throw ConfigError("bounds.eps must be nonempty");
    for (double e : cfg.bounds.eps)
      if (!(e > 0.0) || e >= 1.0)
        throw ConfigError("bounds.eps values must lie in (0, 1)");
    if (cfg.bounds.constants && !cfg.bounds.F0)
      throw ConfigError("bounds.F0 is required with explicit bounds.constants");
    if (cfg.bounds.sigma_tau_points < 2)
      throw ConfigError("bounds.sigma_tau_points must be >= 2");
  }

  cfg.effective = effective_json(cfg);
  return cfg;
}

NoiseModel make_noise(const NoiseSpec& s) {
  if (s.kind == "pareto-sym") return NoiseModel::pareto_sym(s.alpha);
  if (s.kind == "cauchy") return NoiseModel::cauchy();
  if (s.kind == "gaussian") return NoiseModel::gaussian(s.sigma);
  return NoiseModel::none();
}

std::unique_ptr<CompositeProblem> make_problem(const ProblemSpec& s) {
  if (!s.load.empty()) return load_problem(s.load);
  if (s.kind == "lasso-box")
    return make_lasso_box(s.m, s.n, s.lambda, s.bound, s.data_seed);
  if (s.kind == "robust-regression")
    return make_robust_regression(s.m, s.n, s.lambda, s.bound, s.data_seed);
  return make_quad_box(s.n, s.mu, s.lambda, s.bound, s.data_seed);
}

ClipPlan make_clip_plan(const SolverSpec& s) {
  if (!s.tau_seq.empty()) return ClipPlan::sequence(s.tau_seq);
  if (s.tau0) return ClipPlan::with_init(*s.tau0, s.tau);
  return ClipPlan::constant(s.tau);
}

StepPlan make_step_plan(const SolverSpec& s, const ProblemConstants& pc) {
  if (s.eta_schedule == "scvx") {
    if (!(pc.mu_f > 0.0))
      throw UnsupportedRegime("scvx step schedule requires mu_f > 0");
    return StepPlan::scvx(pc.mu_f);
  }
  if (s.eta_schedule == "sequence") return StepPlan::sequence(s.eta_seq);
  return StepPlan::constant(s.eta);
}

SolverConfig make_solver_config(const SolverSpec& s, const ProblemConstants& pc) {
  SolverConfig c;
  c.K = s.K;
  c.step = make_step_plan(s, pc);
  c.clip = make_clip_plan(s);
  if (!s.x0.empty())
    c.x0 = Eigen::Map<const Vector>(s.x0.data(), Eigen::Index(s.x0.size()));
  c.store_iterates = s.store_iterates;
  c.obj_z_cadence = s.obj_z_cadence;
  return c;
}

std::vector<std::string> config_echo_lines(const ExperimentConfig& cfg) {
  return {"clipopt " + cfg.command, "config " + cfg.effective.dump()};
}

}  // namespace clipopt::cli
