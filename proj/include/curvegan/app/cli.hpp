#pragma once

#include "curvegan/geometry/curve.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace curvegan::app {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2 };

/// Entry point of the command-line tool: dataset, train, generate, evaluate, serve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Evenly spaced latent vectors, k per dimension (0.5 when k == 1), last
/// dimension varying fastest.
std::vector<std::vector<double>> latent_grid(std::size_t dim, std::size_t k);

/// All curves on one page, `columns` per row, drawn with a shared scale.
std::string svg_sheet(const std::vector<geom::Curve>& curves, std::size_t columns);

} // namespace curvegan::app
