#ifndef CLIPOPT_TOOLS_EXPERIMENT_CONFIG_HPP
#define CLIPOPT_TOOLS_EXPERIMENT_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "clipopt/noise.hpp"
#include "clipopt/problems.hpp"
#include "clipopt/solver.hpp"

namespace clipopt::cli {

// Structurally bad config (unknown key, bad enum value, axis over the cell
// cap). Mapped to exit code 2; numeric-regime errors from the library map to
// 3 and I/O failures to 4.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ProblemSpec {
  std::string kind = "lasso-box";  // lasso-box | robust-regression | quad-box
  int m = 200;
  int n = 100;
  double lambda = 1.0;
  double bound = 100.0;
  double mu = 1.0;  // quad-box curvature
  std::uint64_t data_seed = 1;
  std::string load;  // when nonempty, read the instance from this file instead
};

struct NoiseSpec {
  std::string kind = "pareto-sym";  // pareto-sym | cauchy | gaussian | none
  double alpha = 1.5;
  double sigma = 1.0;
};

struct SolverSpec {
  std::string algo = "spgm";  // spgm | spgm-momentum
  std::int64_t K = 10000;
  std::string eta_schedule = "constant";  // constant | scvx | sequence
  double eta = 1e-3;
  std::vector<double> eta_seq;
  double theta = 0.25;
  double tau = std::numeric_limits<double>::infinity();
  std::optional<double> tau0;  // momentum initializer threshold
  std::vector<double> tau_seq;
  std::vector<double> x0;  // empty: box projection of the origin
  bool store_iterates = false;
  std::int64_t obj_z_cadence = 0;
};

struct BiasVarSpec {
  std::vector<NoiseSpec> models;  // empty: the four-panel default grid
  std::vector<double> a{1.0};
  std::vector<double> tau;  // empty: 1..100 step 1
  std::int64_t n_samples = 100000;
};

struct SweepSpec {
  std::vector<double> tau;            // empty: {solver.tau}
  std::vector<double> alpha;          // empty: {noise.alpha}; pareto-sym only
  std::vector<double> eta;            // empty: {solver.eta}
  std::vector<std::uint64_t> seeds;   // empty: {seed}
  std::int64_t cell_cap = 10000;
};

struct BoundsSpec {
  std::vector<double> eps{0.1, 0.05, 0.01};
  std::optional<double> F0;   // required when constants are given explicitly
  std::optional<double> tau;  // manual threshold override for sigma^2(tau)
  double sigma_tau_min = 0.0;  // 0: validity floor z1 + U_f
  double sigma_tau_max = 0.0;  // 0: 100x the floor
  int sigma_tau_points = 50;
  std::optional<ProblemConstants> constants;  // bypasses the problem spec
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 20250815;
  std::string out = "out";
  int jobs = 1;
  ProblemSpec problem;
  NoiseSpec noise;
  SolverSpec solver;
  BiasVarSpec biasvar;
  SweepSpec sweep;
  BoundsSpec bounds;

  // Fully-resolved config (defaults applied, flags folded in), echoed as
  // comment lines into every artifact so outputs are self-describing.
  nlohmann::json effective;
};

// Reads the JSON file (empty path: all defaults), applies flag overrides,
// validates every key, and freezes the effective config. Unreadable file ->
// std::ios_base::failure; malformed JSON or unknown/bad values -> ConfigError.
ExperimentConfig load_config(const std::string& command,
                             const std::string& config_path,
                             std::optional<std::uint64_t> seed_flag,
                             std::optional<std::string> out_flag,
                             std::optional<int> jobs_flag);

NoiseModel make_noise(const NoiseSpec& s);
std::unique_ptr<CompositeProblem> make_problem(const ProblemSpec& s);
ClipPlan make_clip_plan(const SolverSpec& s);
StepPlan make_step_plan(const SolverSpec& s, const ProblemConstants& pc);
SolverConfig make_solver_config(const SolverSpec& s, const ProblemConstants& pc);

// "clipopt <command>" plus the compact effective-config dump; prefixed with
// "# " by the CSV writer.
std::vector<std::string> config_echo_lines(const ExperimentConfig& cfg);

}  // namespace clipopt::cli

#endif  // CLIPOPT_TOOLS_EXPERIMENT_CONFIG_HPP
