// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rankprobe/errors.hpp"
#include "rankprobe/rng.hpp"

namespace rankprobe::nn {

namespace {

void standardize_columns(Dataset& d) {
    const std::size_t dim = d.feature_size();
    for (std::size_t j = 0; j < dim; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < d.n_samples; ++i) mean += d.features[i * dim + j];
        mean /= static_cast<double>(d.n_samples);
        double var = 0.0;
        for (std::size_t i = 0; i < d.n_samples; ++i) {
            const double c = d.features[i * dim + j] - mean;
            var += c * c;
        }
        var /= static_cast<double>(d.n_samples);
        const double inv = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
        for (std::size_t i = 0; i < d.n_samples; ++i) {
            d.features[i * dim + j] = (d.features[i * dim + j] - mean) * inv;
        }
    }
}

}  // namespace

Dataset make_blobs(const BlobsParams& params, std::uint64_t seed) {
    if (params.n == 0 || params.classes < 2) {
        throw ConfigError("make_blobs: need n >= 1 and classes >= 2");
    }
    Rng rng(seed);
    Dataset d;
    d.n_samples = params.n;
    d.n_classes = params.classes;
    d.feature_shape = {2};
    d.features.resize(params.n * 2);
    d.labels.resize(params.n);
    const double radius =
        params.classes == 2
            ? params.separation / 2.0
            : params.separation / (2.0 * std::sin(std::numbers::pi / static_cast<double>(params.classes)));
    for (std::size_t i = 0; i < params.n; ++i) {
        const int label = static_cast<int>(i % params.classes);
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(label) /
                             static_cast<double>(params.classes);
        d.features[i * 2] = radius * std::cos(angle) + rng.normal();
        d.features[i * 2 + 1] = radius * std::sin(angle) + rng.normal();
        d.labels[i] = label;
    }
    return d;
}

Dataset make_two_moons(const TwoMoonsParams& params, std::uint64_t seed) {
    if (params.n < 2) throw ConfigError("make_two_moons: need n >= 2");
    Rng rng(seed);
    Dataset d;
    d.n_samples = params.n;
    d.n_classes = 2;
    d.feature_shape = {2};
    d.features.resize(params.n * 2);
    d.labels.resize(params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
        const double t = std::numbers::pi * rng.uniform();
        double x, y;
        int label;
        if (i % 2 == 0) {
            x = std::cos(t);
            y = std::sin(t);
            label = 0;
        } else {
            x = 1.0 - std::cos(t);
            y = 0.5 - std::sin(t);
            label = 1;
        }
        d.features[i * 2] = x + params.noise * rng.normal();
        d.features[i * 2 + 1] = y + params.noise * rng.normal();
        d.labels[i] = label;
    }
    standardize_columns(d);
    return d;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Dataset load_tiny_images(const TinyImagesParams& params) {
    std::ifstream in(params.csv_path);
    if (!in) throw MalformedCsv("tiny images: cannot open " + params.csv_path, 0);

    std::string line;
    if (!std::getline(in, line)) throw MalformedCsv("tiny images: empty file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 2 || header[0] != "label") {
        throw MalformedCsv("tiny images: header must start with 'label,px0,...'", 1);
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] != "px" + std::to_string(i - 1)) {
            throw MalformedCsv("tiny images: unexpected header column '" + header[i] + "'", 1);
        }
    }
    const std::size_t pixels = header.size() - 1;

    Dataset d;
    d.feature_shape = params.shape.empty() ? std::vector<std::size_t>{pixels} : params.shape;
    if (d.feature_size() != pixels) {
        throw ConfigError("tiny images: declared shape does not match " +
                          std::to_string(pixels) + " pixel columns");
    }

    int max_label = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw MalformedCsv("tiny images: expected " + std::to_string(header.size()) +
                                   " fields, got " + std::to_string(fields.size()),
                               line_no);
        }
        try {
            std::size_t pos = 0;
            const int label = std::stoi(fields[0], &pos);
            if (pos != fields[0].size() || label < 0) throw std::invalid_argument("label");
            max_label = std::max(max_label, label);
            d.labels.push_back(label);
            for (std::size_t i = 1; i < fields.size(); ++i) {
                const double v = std::stod(fields[i], &pos);
                if (pos != fields[i].size() || !(v >= 0.0 && v <= 1.0)) {
                    throw std::invalid_argument("pixel");
                }
                d.features.push_back(v);
            }
        } catch (const MalformedCsv&) {
            throw;
        } catch (const std::exception&) {
            throw MalformedCsv("tiny images: unparseable field", line_no);
        }
        ++d.n_samples;
    }
    if (d.n_samples == 0) throw MalformedCsv("tiny images: no data rows", line_no);
    d.n_classes = static_cast<std::size_t>(max_label) + 1;
    if (d.n_classes < 2) d.n_classes = 2;
    return d;
}

Dataset make_dataset(const DatasetSpec& spec) {
    switch (spec.kind) {
        case DatasetSpec::Kind::Blobs: return make_blobs(spec.blobs, spec.seed);
        case DatasetSpec::Kind::TwoMoons: return make_two_moons(spec.moons, spec.seed);
        case DatasetSpec::Kind::TinyImages: return load_tiny_images(spec.images);
    }
    throw ConfigError("make_dataset: unknown dataset kind");
}

}  // namespace rankprobe::nn
