#pragma once

#include <ostream>

namespace avw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDegenerateVariance = 3;

/// Entry point of the avw command line. Subcommands: test, estimate-p1,
/// simulate. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace avw::cli
