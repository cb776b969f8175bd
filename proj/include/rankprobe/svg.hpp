// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rankprobe::io {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal self-contained SVG line chart: axes, ticks, legend, one polyline
/// per series. Deterministic output for identical input.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series);

}  // namespace rankprobe::io
