// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace rankprobe::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Current threshold, initialized once from the PROBE_LOG environment
/// variable (error|warn|info|debug; default warn).
Level threshold();

void set_threshold(Level level);

void write(Level level, const std::string& message);

inline void error(const std::string& m) { write(Level::Error, m); }
inline void warn(const std::string& m) { write(Level::Warn, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void debug(const std::string& m) { write(Level::Debug, m); }

}  // namespace rankprobe::log
