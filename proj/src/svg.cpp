// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rankprobe::io {

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 160.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmin <= xmax)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) {
        ymax = ymin + (ymin == 0.0 ? 1.0 : std::abs(ymin) * 0.5);
        ymin -= (ymin == 0.0 ? 0.0 : std::abs(ymin) * 0.5);
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    out += "<rect width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
           "font-family=\"sans-serif\">" + xml_escape(title) + "</text>\n";

    // axes
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" +
           fmt(kLeft + plot_w) + "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        out += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" +
               fmt(px(fx)) + "\" y2=\"" + fmt(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(kTop + plot_h + 20) +
               "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" + fmt(fx) +
               "</text>\n";
        out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(fy) + 4) +
               "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" + fmt(fy) +
               "</text>\n";
    }
    out += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 15) +
           "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
           xml_escape(x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + fmt(kTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 18 " +
           fmt(kTop + plot_h / 2) + ")\">" + xml_escape(y_label) + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (!series[si].points.empty()) {
            out += "<polyline fill=\"none\" stroke=\"";
            out += color;
            out += "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : series[si].points) {
                out += fmt(px(x)) + "," + fmt(py(y)) + " ";
            }
            out += "\"/>\n";
        }
        const double ly = kTop + 14.0 * static_cast<double>(si);
        out += "<line x1=\"" + fmt(kLeft + plot_w + 10) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
               fmt(kLeft + plot_w + 30) + "\" y2=\"" + fmt(ly) + "\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(kLeft + plot_w + 35) + "\" y=\"" + fmt(ly + 4) +
               "\" font-size=\"11\" font-family=\"sans-serif\">" + xml_escape(series[si].label) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace rankprobe::io
