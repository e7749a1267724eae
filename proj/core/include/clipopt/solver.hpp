#ifndef CLIPOPT_SOLVER_HPP
#define CLIPOPT_SOLVER_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "clipopt/noise.hpp"
#include "clipopt/problem.hpp"
#include "clipopt/vec.hpp"

namespace clipopt {

// Clipping threshold per iteration. `constant` uses one tau throughout;
// `with_init` lets iteration 0 (the momentum initializer) use its own
// threshold; `sequence` holds the last entry once exhausted. +inf disables
// clipping.
class ClipPlan {
 public:
  static ClipPlan constant(double tau);
  static ClipPlan with_init(double tau0, double tau);
  static ClipPlan sequence(std::vector<double> taus);

  double at(std::int64_t k) const;

 private:
  ClipPlan() = default;
  double tau_ = 0.0;
  double tau0_ = -1.0;  // < 0 means "same as tau_"
  std::vector<double> seq_;
};

// Step size per iteration: constant, the strongly-convex schedule
// 2/(mu (k+1)), or an explicit sequence (last entry held).
class StepPlan {
 public:
  static StepPlan constant(double eta);
  static StepPlan scvx(double mu);
  static StepPlan sequence(std::vector<double> etas);

  double at(std::int64_t k) const;
  bool is_constant() const { return kind_ == Kind::constant; }

 private:
  enum class Kind { constant, scvx, sequence };
  StepPlan() = default;
  Kind kind_ = Kind::constant;
  double value_ = 0.0;
  std::vector<double> seq_;
};

struct SolverConfig {
  std::int64_t K = 1000;
  StepPlan step = StepPlan::constant(1e-3);
  ClipPlan clip = ClipPlan::constant(std::numeric_limits<double>::infinity());
  Vector x0;                      // empty: project_box of the origin
  bool store_iterates = false;    // keep xs/zs/ms (memory: K+1 vectors each)
  std::int64_t obj_z_cadence = 0; // 0: every iteration up to K = 10^4, then
                                  // every ceil(K/10^4)-th (last always done)
};

// Per-iteration log of a run. Row k describes the state after k prox steps;
// row 0 is the start point. tau_k / eta_k are the threshold and step used in
// the update that produced row k (nan in row 0 for Algorithm 1; row 0 of the
// momentum method logs the initializer threshold).
struct Trajectory {
  std::vector<double> obj_x;      // F(x^k)
  std::vector<double> obj_z;      // F(z^k), nan off-cadence or without averaging
  std::vector<double> resid;      // || grad f(x^k) - m^{k-1} - (x^k - x^{k-1})/eta ||
  std::vector<double> potential;  // f(x^k) + ||m^k - grad f(x^k)||^2 / L_f (momentum)
  std::vector<double> subdiff;    // exact dist(0, grad f(x^k) + dh(x^k))
  std::vector<double> tau_k;
  std::vector<double> eta_k;

  std::vector<Vector> xs, zs, ms;  // populated only with store_iterates

  Vector x_final, z_final, m_final;
  std::int64_t K = 0;
  std::int64_t iota = -1;  // momentum only: uniform index in {1..K}, the
                           // stream's final draw
  double best_obj = std::numeric_limits<double>::infinity();

  std::string algo;
};

// || grad_next - m_prev - (x_next - x_prev)/eta ||: stationarity residual of
// one prox step, derived from its optimality condition.
double stationarity_residual(const Vector& x_next, const Vector& x_prev,
                             const Vector& m_prev, double eta,
                             const Vector& grad_next);

// Exact Euclidean distance from 0 to grad + d(lambda ||.||_1 + box indicator)
// at x, evaluated per coordinate.
double subdiff_distance_box_l1(const BoxL1Regularizer& reg, const Vector& x,
                               const Vector& grad);

// Algorithm: x^{k+1} = prox_{eta_k h}(x^k - eta_k clip(G(x^k; xi_k), tau_k)),
// with the running average z^{k+1} of x^1..x^{k+1}. Draws one oracle sample
// per iteration.
Trajectory run_spgm(const CompositeProblem& problem,
                    StochasticGradientOracle& oracle, const SolverConfig& cfg);

// Momentum variant (constant step only):
//   m^0 = clip(G(x^0; xi_0), tau_0)
//   x^{k+1} = prox_{eta h}(x^k - eta m^k)
//   m^{k+1} = (1 - theta) m^k + theta clip(G(x^{k+1}; xi_{k+1}), tau_{k+1}).
// Draws K+1 oracle samples, then one uniform index iota in {1..K} from the
// oracle's stream as the run's final draw.
Trajectory run_spgm_momentum(const CompositeProblem& problem,
                             StochasticGradientOracle& oracle,
                             const SolverConfig& cfg, double theta);

// Writes the pinned trajectory schema
// (iter,obj_x,obj_z,resid,potential,tau_k,eta_k), preceded by '#' comment
// lines echoing the effective configuration.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::string>& config_echo);
extern const char* kTrajectoryCsvHeader;

}  // namespace clipopt

#endif  // CLIPOPT_SOLVER_HPP
