#ifndef CLIPOPT_TOOLS_COMMANDS_HPP
#define CLIPOPT_TOOLS_COMMANDS_HPP

#include "experiment_config.hpp"

namespace clipopt::cli {

// Each command writes its artifacts under cfg.out and returns an exit code
// (0 on success; selftest returns 1 when a check fails). Config, regime, and
// I/O errors are thrown and mapped to 2/3/4 by main.
int cmd_biasvar(const ExperimentConfig& cfg);
int cmd_solve(const ExperimentConfig& cfg);
int cmd_sweep(const ExperimentConfig& cfg);
int cmd_bounds(const ExperimentConfig& cfg);
int cmd_selftest(const ExperimentConfig& cfg);

extern const char* kSummaryCsvHeader;
extern const char* kBoundsCsvHeader;
extern const char* kSigmaCurveCsvHeader;

}  // namespace clipopt::cli

#endif  // CLIPOPT_TOOLS_COMMANDS_HPP
