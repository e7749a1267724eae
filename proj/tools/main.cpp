#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "clipopt/errors.hpp"
#include "commands.hpp"
#include "experiment_config.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file (defaults apply without it)");
  cmd->add_option("--seed", f.seed, "root RNG seed (overrides the config)");
  cmd->add_option("--out", f.out, "output directory (overrides the config)");
  cmd->add_option("--jobs", f.jobs, "worker threads for independent cells");
}

int dispatch(const std::string& command, const CommonFlags& f) {
  using namespace clipopt::cli;
  const ExperimentConfig cfg =
      load_config(command, f.config, f.seed, f.out, f.jobs);
  if (command == "biasvar") return cmd_biasvar(cfg);
  if (command == "solve") return cmd_solve(cfg);
  if (command == "sweep") return cmd_sweep(cfg);
  if (command == "bounds") return cmd_bounds(cfg);
  return cmd_selftest(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clipped stochastic proximal gradient experiment harness"};
  app.require_subcommand(1);

  const char* descriptions[][2] = {
      {"biasvar", "Monte-Carlo bias/variance of the clipped estimator over a (model, a, tau) grid"},
      {"solve", "run one solver configuration and export its trajectory"},
      {"sweep", "run a (seed, alpha, tau, eta) grid of solver cells"},
      {"bounds", "theorem calculators: sigma^2 curve, thresholds, step recipes, iteration bounds"},
      {"selftest", "fast internal consistency checks"},
  };
  CommonFlags flags[5];
  for (int i = 0; i < 5; ++i)
    add_common_flags(app.add_subcommand(descriptions[i][0], descriptions[i][1]),
                     flags[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  int idx = 0;
  for (int i = 0; i < 5; ++i)
    if (command == descriptions[i][0]) idx = i;

  try {
    return dispatch(command, flags[idx]);
  } catch (const clipopt::cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const clipopt::InvalidInput& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const clipopt::InvalidRegularizer& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const clipopt::InvalidStart& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    // UnsupportedRegime, DomainError, UnsupportedModel.
    std::fprintf(stderr, "regime error: %s\n", e.what());
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
