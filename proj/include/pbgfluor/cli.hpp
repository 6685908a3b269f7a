// cli.hpp: command-line entry point
//
//   pbgfluor <kernel|spectrum|scan|order-check|validate> [--config FILE] [--set key=value ...]
//            [--out DIR] [--format csv|json] [--threads N]
//
// Exit codes: 0 success, 1 validation suite failure, 2 configuration error,
// 3 numerical-conditioning failure, 4 other numerical failure.
// PBGFLUOR_THREADS sets the thread count when --threads is absent.

#pragma once

#include <ostream>

#include "pbgfluor/config.hpp"

namespace pbgfluor {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidateFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConditioning = 3;
inline constexpr int kExitNumerical = 4;

int run(RunConfig cfg, std::ostream& log);
int run_cli(int argc, char** argv);

const char* library_version();

} // namespace pbgfluor
