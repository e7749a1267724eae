#ifndef CLIPOPT_TOOLS_PLOTS_HPP
#define CLIPOPT_TOOLS_PLOTS_HPP

#include <string>

namespace clipopt::cli {

// Python sources written beside the CSVs. Each script reads only the CSVs in
// its own directory and renders a PNG; nothing in the toolkit executes them.
std::string plot_biasvar_script();
std::string plot_trajectory_script();
std::string plot_sweep_script();
std::string plot_bounds_script();

}  // namespace clipopt::cli

#endif  // CLIPOPT_TOOLS_PLOTS_HPP
