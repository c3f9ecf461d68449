// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nbrdf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O, format and runtime failures
inline constexpr int kExitUsage = 2;    // bad flags or invalid values

/// Environment variable naming a directory searched for relative input paths
/// that do not exist relative to the working directory.
inline constexpr const char *kDataDirEnv = "NBRDF_DATA_DIR";

/// Runs the `nbrdf` command line; args[0] is the program name. Results go to
/// `out`, diagnostics and the effective configuration to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv);

}  // namespace nbrdf::cli
