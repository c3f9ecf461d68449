// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace nbrdf {

/// Reads `key = value` lines. Blank lines and lines starting with '#' or ';'
/// are skipped; keys and values are trimmed. Throws IOError / FormatError.
std::map<std::string, std::string> read_key_values(const std::filesystem::path &path);

}  // namespace nbrdf
