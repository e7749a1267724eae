#include "clipopt/solver.hpp"

#include <cmath>
#include <sstream>

#include "clipopt/csv.hpp"
#include "clipopt/errors.hpp"

namespace clipopt {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_tau(double tau) {
  if (std::isnan(tau) || tau < 0.0)
    throw InvalidInput("ClipPlan: tau must be >= 0 (inf allowed)");
}
void check_eta(double eta) {
  if (!(eta > 0.0) || std::isinf(eta))
    throw InvalidInput("StepPlan: eta must be positive and finite");
}
}  // namespace

ClipPlan ClipPlan::constant(double tau) {
  check_tau(tau);
  ClipPlan p;
  p.tau_ = tau;
  return p;
}

ClipPlan ClipPlan::with_init(double tau0, double tau) {
  check_tau(tau0);
  check_tau(tau);
  ClipPlan p;
  p.tau_ = tau;
  p.tau0_ = tau0;
  return p;
}

ClipPlan ClipPlan::sequence(std::vector<double> taus) {
  if (taus.empty()) throw InvalidInput("ClipPlan: empty sequence");
  for (double t : taus) check_tau(t);
  ClipPlan p;
  p.seq_ = std::move(taus);
  return p;
}

double ClipPlan::at(std::int64_t k) const {
  if (!seq_.empty())
    return seq_[static_cast<std::size_t>(
        std::min<std::int64_t>(k, static_cast<std::int64_t>(seq_.size()) - 1))];
  if (k == 0 && tau0_ >= 0.0) return tau0_;
  return tau_;
}

StepPlan StepPlan::constant(double eta) {
  check_eta(eta);
  StepPlan p;
  p.kind_ = Kind::constant;
  p.value_ = eta;
  return p;
}

StepPlan StepPlan::scvx(double mu) {
  if (!(mu > 0.0)) throw InvalidInput("StepPlan::scvx: mu must be > 0");
  StepPlan p;
  p.kind_ = Kind::scvx;
  p.value_ = mu;
  return p;
}

StepPlan StepPlan::sequence(std::vector<double> etas) {
  if (etas.empty()) throw InvalidInput("StepPlan: empty sequence");
  for (double e : etas) check_eta(e);
  StepPlan p;
  p.kind_ = Kind::sequence;
  p.seq_ = std::move(etas);
  return p;
}

double StepPlan::at(std::int64_t k) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::scvx: return 2.0 / (value_ * static_cast<double>(k + 1));
    case Kind::sequence:
      return seq_[static_cast<std::size_t>(
          std::min<std::int64_t>(k, static_cast<std::int64_t>(seq_.size()) - 1))];
  }
  return value_;
}

double stationarity_residual(const Vector& x_next, const Vector& x_prev,
                             const Vector& m_prev, double eta,
                             const Vector& grad_next) {
  if (!(eta > 0.0)) throw InvalidInput("stationarity_residual: eta must be > 0");
  if (x_next.size() != x_prev.size() || x_next.size() != m_prev.size() ||
      x_next.size() != grad_next.size())
    throw InvalidInput("stationarity_residual: dimension mismatch");
  return (grad_next - m_prev - (x_next - x_prev) / eta).norm();
}

double subdiff_distance_box_l1(const BoxL1Regularizer& reg, const Vector& x,
                               const Vector& grad) {
  if (x.size() != reg.dim() || grad.size() != reg.dim())
    throw InvalidInput("subdiff_distance_box_l1: dimension mismatch");
  if (!reg.contains(x)) throw InvalidInput("subdiff_distance_box_l1: x outside box");
  const double lambda = reg.lambda();
  const double inf = std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double s_lo, s_hi;
    if (x(i) > 0.0) s_lo = s_hi = lambda;
    else if (x(i) < 0.0) s_lo = s_hi = -lambda;
    else { s_lo = -lambda; s_hi = lambda; }
    const double n_lo = (x(i) == reg.lower()(i)) ? -inf : 0.0;
    const double n_hi = (x(i) == reg.upper()(i)) ? inf : 0.0;
    const double lo = grad(i) + s_lo + n_lo;
    const double hi = grad(i) + s_hi + n_hi;
    double d = 0.0;
    if (lo > 0.0) d = lo;
    else if (hi < 0.0) d = -hi;
    acc += d * d;
  }
  return std::sqrt(acc);
}

namespace {

Vector start_point(const CompositeProblem& problem, const SolverConfig& cfg) {
  const BoxL1Regularizer& reg = problem.reg();
  if (cfg.x0.size() == 0)
    return project_box(Vector::Zero(problem.dim()), reg.lower(), reg.upper());
  if (cfg.x0.size() != reg.dim())
    throw InvalidStart("solver: x0 dimension mismatch");
  if (!reg.contains(cfg.x0)) throw InvalidStart("solver: x0 outside dom h");
  return cfg.x0;
}

std::int64_t z_cadence(const SolverConfig& cfg) {
  if (cfg.obj_z_cadence > 0) return cfg.obj_z_cadence;
  if (cfg.K <= 10000) return 1;
  return (cfg.K + 9999) / 10000;
}

void reserve(Trajectory& t, std::int64_t K) {
  const auto n = static_cast<std::size_t>(K + 1);
  t.obj_x.reserve(n);
  t.obj_z.reserve(n);
  t.resid.reserve(n);
  t.potential.reserve(n);
  t.subdiff.reserve(n);
  t.tau_k.reserve(n);
  t.eta_k.reserve(n);
}

void check_feasible(const BoxL1Regularizer& reg, const Vector& x) {
  // prox output is clamped, so a violation means a programming error.
  if (!reg.contains(x))
    throw std::logic_error("solver: iterate left dom h");
}

}  // namespace

Trajectory run_spgm(const CompositeProblem& problem,
                    StochasticGradientOracle& oracle, const SolverConfig& cfg) {
  if (cfg.K < 1) throw InvalidInput("run_spgm: K must be >= 1");
  const BoxL1Regularizer& reg = problem.reg();
  Vector x = start_point(problem, cfg);
  const std::int64_t cadence = z_cadence(cfg);

  Trajectory traj;
  traj.algo = "spgm";
  traj.K = cfg.K;
  reserve(traj, cfg.K);

  const double F0 = problem.objective(x);
  traj.obj_x.push_back(F0);
  traj.obj_z.push_back(kNan);
  traj.resid.push_back(kNan);
  traj.potential.push_back(kNan);
  traj.subdiff.push_back(subdiff_distance_box_l1(reg, x, problem.smooth_grad(x)));
  traj.tau_k.push_back(kNan);
  traj.eta_k.push_back(kNan);
  traj.best_obj = F0;
  if (cfg.store_iterates) {
    traj.xs.push_back(x);
    traj.zs.push_back(x);
  }

  Vector z = x;
  for (std::int64_t k = 0; k < cfg.K; ++k) {
    const double eta = cfg.step.at(k);
    const double tau = cfg.clip.at(k);
    const Vector gc = clip_inf(oracle.sample_gradient(x), tau);
    const Vector x_next = prox_box_l1(x - eta * gc, eta, reg);
    check_feasible(reg, x_next);
    const Vector grad_next = problem.smooth_grad(x_next);

    if (k == 0) z = x_next;
    else z += (x_next - z) / static_cast<double>(k + 1);

    const double obj = problem.objective(x_next);
    traj.obj_x.push_back(obj);
    traj.best_obj = std::min(traj.best_obj, obj);
    if ((k + 1) % cadence == 0 || k + 1 == cfg.K) {
      const double objz = problem.objective(z);
      traj.obj_z.push_back(objz);
      traj.best_obj = std::min(traj.best_obj, objz);
    } else {
      traj.obj_z.push_back(kNan);
    }
    traj.resid.push_back(stationarity_residual(x_next, x, gc, eta, grad_next));
    traj.potential.push_back(kNan);
    traj.subdiff.push_back(subdiff_distance_box_l1(reg, x_next, grad_next));
    traj.tau_k.push_back(tau);
    traj.eta_k.push_back(eta);
    if (cfg.store_iterates) {
      traj.xs.push_back(x_next);
      traj.zs.push_back(z);
    }
    x = x_next;
  }

  traj.x_final = x;
  traj.z_final = z;
  return traj;
}

Trajectory run_spgm_momentum(const CompositeProblem& problem,
                             StochasticGradientOracle& oracle,
                             const SolverConfig& cfg, double theta) {
  if (cfg.K < 1) throw InvalidInput("run_spgm_momentum: K must be >= 1");
  if (!cfg.step.is_constant())
    throw InvalidInput("run_spgm_momentum: requires a constant step");
  if (!(theta > 0.0) || theta > 1.0)
    throw InvalidInput("run_spgm_momentum: theta must be in (0, 1]");
  const BoxL1Regularizer& reg = problem.reg();
  const double eta = cfg.step.at(0);
  const double L = problem.constants().L_f;
  Vector x = start_point(problem, cfg);

  Trajectory traj;
  traj.algo = "spgm-momentum";
  traj.K = cfg.K;
  reserve(traj, cfg.K);

  Vector grad_x = problem.smooth_grad(x);
  Vector m = clip_inf(oracle.sample_gradient(x), cfg.clip.at(0));

  const double F0 = problem.objective(x);
  traj.obj_x.push_back(F0);
  traj.obj_z.push_back(kNan);
  traj.resid.push_back(kNan);
  traj.potential.push_back(
      L > 0.0 ? problem.smooth_value(x) + (m - grad_x).squaredNorm() / L : kNan);
  traj.subdiff.push_back(subdiff_distance_box_l1(reg, x, grad_x));
  traj.tau_k.push_back(cfg.clip.at(0));
  traj.eta_k.push_back(kNan);
  traj.best_obj = F0;
  if (cfg.store_iterates) {
    traj.xs.push_back(x);
    traj.ms.push_back(m);
  }

  for (std::int64_t k = 0; k < cfg.K; ++k) {
    const Vector x_next = prox_box_l1(x - eta * m, eta, reg);
    check_feasible(reg, x_next);
    const Vector grad_next = problem.smooth_grad(x_next);
    const double res = stationarity_residual(x_next, x, m, eta, grad_next);

    const double tau_next = cfg.clip.at(k + 1);
    const Vector gc = clip_inf(oracle.sample_gradient(x_next), tau_next);
    m = (1.0 - theta) * m + theta * gc;

    const double obj = problem.objective(x_next);
    traj.obj_x.push_back(obj);
    traj.best_obj = std::min(traj.best_obj, obj);
    traj.obj_z.push_back(kNan);
    traj.resid.push_back(res);
    traj.potential.push_back(
        L > 0.0 ? problem.smooth_value(x_next) + (m - grad_next).squaredNorm() / L
                : kNan);
    traj.subdiff.push_back(subdiff_distance_box_l1(reg, x_next, grad_next));
    traj.tau_k.push_back(tau_next);
    traj.eta_k.push_back(eta);
    if (cfg.store_iterates) {
      traj.xs.push_back(x_next);
      traj.ms.push_back(m);
    }
    x = x_next;
  }

  traj.x_final = x;
  traj.m_final = m;
  // Final draw of the run's stream selects the reported iterate uniformly
  // from {1..K}. Oracles without a stream fall back to the last iterate.
  if (RngStream* s = oracle.stream())
    traj.iota = 1 + static_cast<std::int64_t>(s->below(static_cast<std::uint64_t>(cfg.K)));
  else
    traj.iota = cfg.K;
  return traj;
}

const char* kTrajectoryCsvHeader = "iter,obj_x,obj_z,resid,potential,tau_k,eta_k";

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::string>& config_echo) {
  CsvWriter w(path);
  for (const std::string& line : config_echo) w.comment(line);
  w.header(kTrajectoryCsvHeader);
  for (std::size_t k = 0; k < traj.obj_x.size(); ++k) {
    std::ostringstream os;
    os << k << ',' << fmt_double(traj.obj_x[k]) << ',' << fmt_double(traj.obj_z[k])
       << ',' << fmt_double(traj.resid[k]) << ',' << fmt_double(traj.potential[k])
       << ',' << fmt_double(traj.tau_k[k]) << ',' << fmt_double(traj.eta_k[k]);
    w.row(os.str());
  }
}

}  // namespace clipopt
