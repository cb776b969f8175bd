// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rankprobe::io {

/// Parses RFC-4180-style CSV (quoted fields, "" escapes, LF or CRLF rows).
/// Throws MalformedCsv with the 1-based line number of the offending row.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string csv_escape(const std::string& field);

/// Atomic text write (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rankprobe::io
