// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace rankprobe::log {

namespace {

Level parse_env() {
    const char* v = std::getenv("PROBE_LOG");
    if (v == nullptr) return Level::Warn;
    const std::string s(v);
    if (s == "error") return Level::Error;
    if (s == "warn") return Level::Warn;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
}

Level g_threshold = parse_env();
std::mutex g_mutex;

const char* tag(Level level) {
    switch (level) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
    }
    return "?";
}

}  // namespace

Level threshold() { return g_threshold; }

void set_threshold(Level level) { g_threshold = level; }

void write(Level level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(g_threshold)) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[probe:%s] %s\n", tag(level), message.c_str());
}

}  // namespace rankprobe::log
