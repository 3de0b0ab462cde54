#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmmsel::cli {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

/// args excludes the program name, e.g. {"fit", "--data", "d.csv"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread count: --threads if given (>= 0), else LMMSEL_THREADS, else 0
/// meaning the OpenMP runtime default.
int resolve_threads(int flag_value);

}  // namespace lmmsel::cli
