// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rankprobe/evbmf.hpp"
#include "rankprobe/matrix.hpp"

namespace rankprobe::metrics {

/// Per-layer probing metrics for one epoch. estimated_rank == 0 implies
/// stable_rank == 0 and quality == 0 (the empty-factorization degenerate
/// path, where condition is pinned to its worst value 1).
struct LayerMetrics {
    double stable_rank = 0.0;  // in [0, 1]
    double condition = 1.0;    // in [0, 1]
    double quality = 0.0;      // in [0, pi/2]
    std::size_t estimated_rank = 0;
    std::size_t layer_index = 0;  // 1-based
};

/// Network-level quality for one epoch; network_quality is always
/// recomputable from per_layer within 1e-12.
struct QualityReport {
    std::size_t epoch = 0;
    std::vector<LayerMetrics> per_layer;
    double network_quality = 0.0;
};

/// Normalized squared-spectrum energy of the retained factorization,
/// sum(sigma_i^2) / (n * sigma_1^2); zero for an empty factorization.
double stable_rank(const evbmf::FactorizedLayer& f);

/// 1 - sigma_min/sigma_max of the retained spectrum. Throws
/// EmptyFactorization when the rank is zero.
double condition(const evbmf::FactorizedLayer& f);

/// arctan(s / k), with the limit conventions q = 0 when s == 0 and
/// q = pi/2 when k == 0 with s > 0.
double layer_quality(double s, double k);

/// (1 / sqrt(L)) * sum(q_l^2). Throws EmptyNetwork for an empty vector.
double network_quality(std::span<const double> q);

QualityReport make_report(std::size_t epoch, std::vector<LayerMetrics> per_layer);

struct ProbeOptions {
    /// Test hook: skip noise estimation and retain the raw SVD spectrum.
    bool force_zero_noise = false;
    std::size_t layer_index = 0;
};

struct ModeMetrics {
    LayerMetrics metrics;
    double noise_variance = 0.0;
};

/// Result of probing one weight-bearing layer. For 4-D tensors both channel
/// unfoldings are measured and `combined` carries their arithmetic mean per
/// metric; the per-mode values are retained for inspection.
struct LayerProbe {
    ModeMetrics combined;
    std::optional<ModeMetrics> input_mode;   // 4-D only
    std::optional<ModeMetrics> output_mode;  // 4-D only
};

/// Probes a 2-D weight matrix (orientation normalized at ingestion).
/// Throws UnmeasurableLayer wrapping DegenerateInput/NonConvergence.
LayerProbe measure_layer(const Matrix& w, const ProbeOptions& opts = {});

/// Probes a 4-D convolution tensor via both unfolding modes.
LayerProbe measure_layer(const Tensor4D& w, const ProbeOptions& opts = {});

/// Pearson linear correlation coefficient. Inputs must have equal length
/// >= 3; throws ConstantInput for a zero-variance vector.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank-order correlation with average ranks on ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace rankprobe::metrics
