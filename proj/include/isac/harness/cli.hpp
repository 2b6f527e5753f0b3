// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include <ostream>

namespace isac::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// Name of the environment variable holding the default output directory.
inline constexpr const char *kOutputDirEnv = "ISAC_OUTPUT_DIR";

// Entry point of the `isac` tool:
//   isac run <config> [--out PATH] [--seed S] [--trials T] [--workers W]
//   isac preset fig3|fig4 [--out PATH] [--seed S] [--trials T] [--workers W]
// Returns the process exit code.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace isac::harness
