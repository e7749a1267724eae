#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "clipopt/biasvar.hpp"
#include "clipopt/csv.hpp"
#include "clipopt/errors.hpp"
#include "clipopt/schedules.hpp"
#include "plots.hpp"

namespace clipopt::cli {

namespace fs = std::filesystem;

const char* kSummaryCsvHeader =
    "cell,algo,problem,noise,alpha,seed,tau,eta0,theta,K,"
    "obj_x0,obj_x_final,obj_z_final,best_obj,resid_final,iota,traj";
const char* kBoundsCsvHeader =
    "eps,tau1,tau2,tau_used,sigma_sq_used,sigma_sq_floor,"
    "eta_convex,K_convex,eta_scvx_k0,C_scvx,K_scvx,scvx_degenerate,"
    "eta_ncvx,theta_ncvx,K_ncvx";
const char* kSigmaCurveCsvHeader = "tau,sigma_sq";

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  return (fs::path(cfg.out) / name).string();
}

// Runs work(0..n_cells-1) on up to `jobs` threads. Cells are independent by
// construction (own stream, own output file); results land in caller-owned
// slots indexed by cell, so ordering never depends on completion order.
void run_cells(int jobs, int n_cells, const std::function<void(int)>& work) {
  jobs = std::max(1, std::min(jobs, n_cells));
  if (jobs == 1) {
    for (int c = 0; c < n_cells; ++c) work(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int c; (c = next.fetch_add(1)) < n_cells;) work(c);
      } catch (...) {
        errors[std::size_t(t)] = std::current_exception();
        next.store(n_cells);
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string traj_file_name(int cell) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "traj_%05d.csv", cell);
  return buf;
}

std::string summary_row(int cell, const CompositeProblem& problem,
                        const NoiseModel& model, std::uint64_t seed, double tau,
                        double eta0, double theta, const Trajectory& t,
                        const std::string& traj_file) {
  std::ostringstream os;
  os << cell << ',' << t.algo << ',' << problem.name() << ',' << model.name()
     << ',' << fmt_double(model.alpha()) << ',' << seed << ',' << fmt_double(tau)
     << ',' << fmt_double(eta0) << ',' << fmt_double(theta) << ',' << t.K << ','
     << fmt_double(t.obj_x.front()) << ',' << fmt_double(t.obj_x.back()) << ','
     << fmt_double(t.obj_z.back()) << ',' << fmt_double(t.best_obj) << ','
     << fmt_double(t.resid.back()) << ',' << t.iota << ',' << traj_file;
  return os.str();
}

Trajectory run_algo(const std::string& algo, const CompositeProblem& problem,
                    NoisyGradientOracle& oracle, const SolverConfig& scfg,
                    double theta) {
  if (algo == "spgm-momentum")
    return run_spgm_momentum(problem, oracle, scfg, theta);
  return run_spgm(problem, oracle, scfg);
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  os << body;
}

}  // namespace

int cmd_biasvar(const ExperimentConfig& cfg) {
  const BiasVarSpec& bv = cfg.biasvar;
  const int n_models = int(bv.models.size());
  const int n_a = int(bv.a.size());
  const int n_tau = int(bv.tau.size());
  const int n_cells = n_models * n_a * n_tau;

  std::vector<NoiseModel> models;
  for (const NoiseSpec& s : bv.models) models.push_back(make_noise(s));

  std::vector<std::string> rows(static_cast<std::size_t>(n_cells));
  run_cells(cfg.jobs, n_cells, [&](int c) {
    const int mi = c / (n_a * n_tau);
    const int ai = (c / n_tau) % n_a;
    const int ti = c % n_tau;
    const NoiseModel& model = models[std::size_t(mi)];
    const double a = bv.a[std::size_t(ai)];
    const double tau = bv.tau[std::size_t(ti)];
    // One stream per (model, a) row, re-derived per cell: every threshold in
    // a row sees the same draws, so tau comparisons are paired.
    RngStream rng = RngStream(cfg.seed).split(std::uint64_t(mi * n_a + ai));
    BiasVarEstimate est = estimate_bias_variance(model, a, tau, bv.n_samples, rng);
    double bias_bound = kNan, var_bound = kNan;
    if (model.kind() != NoiseKind::none) {
      const TailBoundConstants tbc = model.constants(0.0, 1);
      if (tau >= tbc.z1 + std::abs(a)) {
        bias_bound = lemma31_bias_bound(model, tbc, a, tau);
        var_bound = lemma31_var_bound(tbc, a, tau);
      }
    }
    rows[std::size_t(c)] =
        biasvar_csv_row(model, a, tau, est, bias_bound, var_bound, cfg.seed);
  });

  CsvWriter w(out_path(cfg, "biasvar.csv"));
  for (const std::string& line : config_echo_lines(cfg)) w.comment(line);
  w.header(kBiasVarCsvHeader);
  for (const std::string& r : rows) w.row(r);
  write_text_file(out_path(cfg, "plot_biasvar.py"), plot_biasvar_script());
  return 0;
}

int cmd_solve(const ExperimentConfig& cfg) {
  auto problem = make_problem(cfg.problem);
  const NoiseModel model = make_noise(cfg.noise);
  const SolverConfig scfg = make_solver_config(cfg.solver, problem->constants());
  NoisyGradientOracle oracle(*problem, model, RngStream(cfg.seed));
  const Trajectory traj = run_algo(cfg.solver.algo, *problem, oracle, scfg,
                                   cfg.solver.theta);

  const std::vector<std::string> echo = config_echo_lines(cfg);
  write_trajectory_csv(out_path(cfg, "trajectory.csv"), traj, echo);
  CsvWriter w(out_path(cfg, "summary.csv"));
  for (const std::string& line : echo) w.comment(line);
  w.header(kSummaryCsvHeader);
  const double theta = cfg.solver.algo == "spgm-momentum" ? cfg.solver.theta : kNan;
  w.row(summary_row(0, *problem, model, cfg.seed, cfg.solver.tau,
                    scfg.step.at(0), theta, traj, "trajectory.csv"));
  write_text_file(out_path(cfg, "plot_trajectory.py"), plot_trajectory_script());
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out);  // workers write their cell files directly
  const SweepSpec& sw = cfg.sweep;
  auto problem = make_problem(cfg.problem);
  const ProblemConstants& pc = problem->constants();

  const int n_seeds = int(sw.seeds.size());
  const int n_alpha = int(sw.alpha.size());
  const int n_tau = int(sw.tau.size());
  const int n_eta = int(sw.eta.size());
  const int n_cells = n_seeds * n_alpha * n_tau * n_eta;

  const std::vector<std::string> echo = config_echo_lines(cfg);
  std::vector<std::string> rows(static_cast<std::size_t>(n_cells));
  run_cells(cfg.jobs, n_cells, [&](int c) {
    int rest = c;
    const int ei = rest % n_eta;
    rest /= n_eta;
    const int ti = rest % n_tau;
    rest /= n_tau;
    const int ai = rest % n_alpha;
    const int si = rest / n_alpha;
    const std::uint64_t seed = sw.seeds[std::size_t(si)];
    const double tau = sw.tau[std::size_t(ti)];
    const double eta = sw.eta[std::size_t(ei)];

    NoiseSpec ns = cfg.noise;
    ns.alpha = sw.alpha[std::size_t(ai)];
    const NoiseModel model = make_noise(ns);

    SolverSpec ss = cfg.solver;
    ss.tau = tau;
    ss.tau_seq.clear();
    ss.eta = eta;
    const SolverConfig scfg = make_solver_config(ss, pc);

    // The oracle stream depends on the cell's seed alone: cells that differ
    // only in (alpha, tau, eta) run under common random numbers, and serial
    // and parallel execution are identical by construction.
    NoisyGradientOracle oracle(*problem, model, RngStream(seed));
    const Trajectory traj = run_algo(ss.algo, *problem, oracle, scfg, ss.theta);

    const std::string traj_file = traj_file_name(c);
    std::vector<std::string> cell_echo = echo;
    {
      std::ostringstream os;
      os << "cell " << c << ": seed=" << seed << " alpha=" << fmt_double(ns.alpha)
         << " tau=" << fmt_double(tau) << " eta=" << fmt_double(eta);
      cell_echo.push_back(os.str());
    }
    write_trajectory_csv((fs::path(cfg.out) / traj_file).string(), traj, cell_echo);
    const double theta = ss.algo == "spgm-momentum" ? ss.theta : kNan;
    rows[std::size_t(c)] = summary_row(c, *problem, model, seed, tau,
                                       scfg.step.at(0), theta, traj, traj_file);
  });

  CsvWriter w(out_path(cfg, "summary.csv"));
  for (const std::string& line : echo) w.comment(line);
  w.header(kSummaryCsvHeader);
  for (const std::string& r : rows) w.row(r);
  write_text_file(out_path(cfg, "plot_sweep.py"), plot_sweep_script());
  return 0;
}

int cmd_bounds(const ExperimentConfig& cfg) {
  const NoiseModel model = make_noise(cfg.noise);
  if (model.kind() == NoiseKind::none)
    throw UnsupportedRegime("bounds: the zero-noise model has no tail constants");

  ProblemConstants pc;
  double F0 = 0.0;
  int dim = cfg.problem.n;
  if (cfg.bounds.constants) {
    pc = *cfg.bounds.constants;
    F0 = *cfg.bounds.F0;  // presence enforced at config load
  } else {
    auto problem = make_problem(cfg.problem);
    pc = problem->constants();
    dim = problem->dim();
    const Vector x0 = project_box(Vector::Zero(dim), problem->reg().lower(),
                                  problem->reg().upper());
    F0 = cfg.bounds.F0 ? *cfg.bounds.F0 : problem->objective(x0);
  }

  const TailBoundConstants tbc = model.constants(pc.U_f, dim);
  const double tau_floor = tbc.z1 + pc.U_f;
  const double s2_floor = sigma_sq(tau_floor, tbc);

  const std::vector<std::string> echo = config_echo_lines(cfg);
  CsvWriter w(out_path(cfg, "bounds.csv"));
  for (const std::string& line : echo) w.comment(line);
  w.header(kBoundsCsvHeader);

  // eta formulas consume K as an integer count; past this the table keeps the
  // K column exact and leaves eta blank rather than overflow the cast.
  const double kKCastLimit = 4.0e18;

  for (const double eps : cfg.bounds.eps) {
    const double tau1 =
        tbc.alpha > 1.0 ? tau1_eps(eps, tbc, tau_floor) : kNan;
    const double tau2 = tau2_eps(eps, tbc, model.gamma1(), model.gamma2(),
                                 model.tau2_min());
    const double tau_used =
        cfg.bounds.tau ? *cfg.bounds.tau : (tbc.alpha > 1.0 ? tau1 : tau2);
    const double s2 = sigma_sq(tau_used, tbc);

    const double Kc = k_bound_convex(eps, pc, s2);
    const double eta_c =
        Kc <= kKCastLimit ? eta_convex(std::int64_t(Kc), pc, s2) : kNan;

    double eta_s = kNan, C_s = kNan, Ks = kNan;
    double degenerate = kNan;
    if (pc.mu_f > 0.0) {
      const ScvxBound sb = k_bound_scvx(eps, pc, s2);
      Ks = sb.k;
      C_s = sb.C;
      degenerate = sb.degenerate ? 1.0 : 0.0;
      eta_s = eta_scvx(0, pc.mu_f);
    }

    const double Kn = k_bound_ncvx(eps, pc, s2, s2_floor, F0);
    double eta_n = kNan, theta_n = kNan;
    if (Kn <= kKCastLimit) {
      const EtaTheta et = eta_theta_ncvx(std::int64_t(Kn), pc, s2, s2_floor, F0);
      eta_n = et.eta;
      theta_n = et.theta;
    }

    for (const auto& [label, value] :
         {std::pair<const char*, double>{"K_convex", Kc},
          {"K_scvx", Ks},
          {"K_ncvx", Kn}})
      if (value > 1e9)
        std::fprintf(stderr, "warning: %s = %s exceeds 1e9 at eps = %s\n", label,
                     fmt_double(value).c_str(), fmt_double(eps).c_str());

    std::ostringstream os;
    os << fmt_double(eps) << ',' << fmt_double(tau1) << ',' << fmt_double(tau2)
       << ',' << fmt_double(tau_used) << ',' << fmt_double(s2) << ','
       << fmt_double(s2_floor) << ',' << fmt_double(eta_c) << ','
       << fmt_double(Kc) << ',' << fmt_double(eta_s) << ',' << fmt_double(C_s)
       << ',' << fmt_double(Ks) << ',' << fmt_double(degenerate) << ','
       << fmt_double(eta_n) << ',' << fmt_double(theta_n) << ','
       << fmt_double(Kn);
    w.row(os.str());
    std::printf("eps = %s: tau_used = %s, sigma_sq = %s, K_convex = %s, "
                "K_scvx = %s, K_ncvx = %s\n",
                fmt_double(eps).c_str(), fmt_double(tau_used).c_str(),
                fmt_double(s2).c_str(), fmt_double(Kc).c_str(),
                fmt_double(Ks).c_str(), fmt_double(Kn).c_str());
  }

  const double grid_min =
      cfg.bounds.sigma_tau_min > 0.0 ? cfg.bounds.sigma_tau_min : tau_floor;
  const double grid_max =
      cfg.bounds.sigma_tau_max > 0.0 ? cfg.bounds.sigma_tau_max : 100.0 * grid_min;
  if (!(grid_max > grid_min))
    throw ConfigError("bounds sigma grid needs sigma_tau_max > sigma_tau_min");
  CsvWriter sc(out_path(cfg, "sigma_curve.csv"));
  for (const std::string& line : echo) sc.comment(line);
  sc.header(kSigmaCurveCsvHeader);
  const int P = cfg.bounds.sigma_tau_points;
  for (int i = 0; i < P; ++i) {
    const double t =
        grid_min * std::pow(grid_max / grid_min, double(i) / double(P - 1));
    sc.row(fmt_double(t) + "," + fmt_double(sigma_sq(t, tbc)));
  }
  write_text_file(out_path(cfg, "plot_bounds.py"), plot_bounds_script());
  return 0;
}

namespace {

struct SelfTest {
  int failures = 0;
  void check(const std::string& name, bool ok) {
    std::printf("selftest: %-38s %s\n", name.c_str(), ok ? "ok" : "FAIL");
    if (!ok) ++failures;
  }
};

}  // namespace

int cmd_selftest(const ExperimentConfig& cfg) {
  SelfTest st;
  RngStream rng(cfg.seed);

  {  // prox optimality: 0 must lie in dh(p) + (p - v)/eta, coordinate-wise.
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const int n = 1 + int(rng.below(6));
      Vector l(n), u(n), v(n);
      for (int k = 0; k < n; ++k) {
        l(k) = -2.0 * rng.uniform01();
        u(k) = 2.0 * rng.uniform01();
        v(k) = 6.0 * rng.uniform01() - 3.0;
      }
      const double lambda = rng.uniform01();
      const double eta = 0.05 + rng.uniform01();
      BoxL1Regularizer reg(lambda, l, u);
      const Vector p = prox_box_l1(v, eta, reg);
      ok = subdiff_distance_box_l1(reg, p, (p - v) / eta) <= 1e-9;
    }
    st.check("prox optimality certificate", ok);
  }
  {  // clipping is nonexpansive and the identity inside the ball.
    bool ok = true;
    for (int i = 0; i < 2000 && ok; ++i) {
      Vector a(4), b(4);
      for (int k = 0; k < 4; ++k) {
        a(k) = 20.0 * rng.uniform01() - 10.0;
        b(k) = 20.0 * rng.uniform01() - 10.0;
      }
      const double tau = 8.0 * rng.uniform01();
      ok = (clip_inf(a, tau) - clip_inf(b, tau)).norm() <= (a - b).norm() + 1e-12;
      if (ok && a.lpNorm<Eigen::Infinity>() <= tau)
        ok = (clip_inf(a, tau) - a).norm() == 0.0;
    }
    st.check("clip nonexpansive / identity", ok);
  }
  {  // pareto tail law at one grid point, 5 binomial standard errors.
    const NoiseModel m = NoiseModel::pareto_sym(1.0);
    const std::int64_t N = 200000;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < N; ++i)
      if (std::abs(m.sample(rng)) >= 4.0) ++hits;
    const double p = 0.25, se = std::sqrt(p * (1 - p) / double(N));
    st.check("pareto-sym tail mass",
             std::abs(double(hits) / double(N) - p) <= 5.0 * se);
  }
  {  // sigma_sq closed form: 1*[1*2^1 + 2*1*(4+0)/(1*2^1)] = 6.
    TailBoundConstants c;
    c.alpha = 1.0;
    c.lambda1 = 1.0;
    c.lambda2 = 1.0;
    c.z1 = 1.0;
    c.Uf = 0.0;
    c.n = 1;
    st.check("sigma_sq worked value", sigma_sq(2.0, c) == 6.0);
  }
  {  // k_bound_convex worked value.
    ProblemConstants pc;
    pc.L_f = 1.0;
    pc.D_h = 1.0;
    st.check("k_bound_convex worked value",
             k_bound_convex(0.1, pc, 1.0) == 1000.0);
  }
  {  // identical (config, seed) runs are bitwise identical.
    auto p = make_quad_box(8, 1.0, 0.1, 1.0, 7);
    SolverConfig scfg;
    scfg.K = 300;
    scfg.step = StepPlan::constant(0.2);
    scfg.clip = ClipPlan::constant(5.0);
    NoisyGradientOracle o1(*p, NoiseModel::pareto_sym(1.5), RngStream(cfg.seed));
    NoisyGradientOracle o2(*p, NoiseModel::pareto_sym(1.5), RngStream(cfg.seed));
    const Trajectory t1 = run_spgm_momentum(*p, o1, scfg, 0.5);
    const Trajectory t2 = run_spgm_momentum(*p, o2, scfg, 0.5);
    st.check("bitwise-deterministic runs",
             t1.obj_x == t2.obj_x && t1.potential == t2.potential &&
                 t1.iota == t2.iota &&
                 (t1.x_final - t2.x_final).norm() == 0.0);
  }
  {  // fmt_double round-trips exactly.
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i) {
      const double v = (rng.uniform01() - 0.5) * std::pow(10.0, double(i % 61) - 30.0);
      ok = std::stod(fmt_double(v)) == v;
    }
    st.check("csv number round-trip", ok);
  }

  std::printf("selftest: %d failure(s)\n", st.failures);
  return st.failures == 0 ? 0 : 1;
}

}  // namespace clipopt::cli
