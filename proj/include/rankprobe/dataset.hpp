// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rankprobe::nn {

struct Dataset {
    std::vector<double> features;  // n_samples * feature_size, row per sample
    std::vector<int> labels;       // 0-based class ids
    std::vector<std::size_t> feature_shape;
    std::size_t n_samples = 0;
    std::size_t n_classes = 0;

    std::size_t feature_size() const {
        std::size_t s = 1;
        for (std::size_t d : feature_shape) s *= d;
        return s;
    }
    std::span<const double> sample(std::size_t i) const {
        return std::span<const double>(features).subspan(i * feature_size(), feature_size());
    }
};

struct BlobsParams {
    std::size_t n = 200;
    std::size_t classes = 2;
    double separation = 4.0;  // center distance in units of the unit noise sigma
};

struct TwoMoonsParams {
    std::size_t n = 400;
    double noise = 0.1;
};

struct TinyImagesParams {
    std::string csv_path;
    std::vector<std::size_t> shape;  // e.g. {1, 6, 6}; empty keeps the flat pixel vector
};

/// Gaussian blobs on a ring, labels assigned round-robin so classes stay
/// balanced within one sample.
Dataset make_blobs(const BlobsParams& params, std::uint64_t seed);

/// Two interleaving half circles with Gaussian jitter, standardized to zero
/// mean and unit variance per coordinate. Byte-deterministic for a seed.
Dataset make_two_moons(const TwoMoonsParams& params, std::uint64_t seed);

/// Loads `label,px0,px1,...` CSV rows: 0-based integer labels, pixels in
/// [0, 1]. Throws MalformedCsv with the offending 1-based line number.
Dataset load_tiny_images(const TinyImagesParams& params);

struct DatasetSpec {
    enum class Kind { Blobs, TwoMoons, TinyImages };
    Kind kind = Kind::TwoMoons;
    BlobsParams blobs;
    TwoMoonsParams moons;
    TinyImagesParams images;
    std::uint64_t seed = 0;
};

Dataset make_dataset(const DatasetSpec& spec);

}  // namespace rankprobe::nn
