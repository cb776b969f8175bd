// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rankprobe/errors.hpp"

namespace rankprobe::metrics {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

LayerMetrics metrics_from_factorization(const evbmf::FactorizedLayer& f, std::size_t layer_index) {
    LayerMetrics lm;
    lm.layer_index = layer_index;
    lm.estimated_rank = f.estimated_rank;
    if (f.estimated_rank == 0) {
        // Empty signal: worst quality without evaluating the condition ratio.
        lm.stable_rank = 0.0;
        lm.condition = 1.0;
        lm.quality = 0.0;
        return lm;
    }
    lm.stable_rank = stable_rank(f);
    lm.condition = condition(f);
    lm.quality = layer_quality(lm.stable_rank, lm.condition);
    return lm;
}

ModeMetrics probe_matrix(const Matrix& w, const ProbeOptions& opts) {
    try {
        const evbmf::FactorizedLayer f = opts.force_zero_noise
                                             ? evbmf::factorize_with_variance(w, 0.0)
                                             : evbmf::factorize(w);
        return ModeMetrics{metrics_from_factorization(f, opts.layer_index), f.noise_variance};
    } catch (const DegenerateInput& e) {
        throw UnmeasurableLayer(std::string("layer unmeasurable: ") + e.what());
    } catch (const NonConvergence& e) {
        throw UnmeasurableLayer(std::string("layer unmeasurable: ") + e.what());
    }
}

}  // namespace

double stable_rank(const evbmf::FactorizedLayer& f) {
    if (f.estimated_rank == 0) return 0.0;
    const double top = f.retained_singular_values.front();
    double energy = 0.0;
    for (double s : f.retained_singular_values) energy += s * s;
    return energy / (static_cast<double>(f.n) * top * top);
}

double condition(const evbmf::FactorizedLayer& f) {
    if (f.estimated_rank == 0) {
        throw EmptyFactorization("condition: factorization has rank 0");
    }
    return 1.0 - f.retained_singular_values.back() / f.retained_singular_values.front();
}

double layer_quality(double s, double k) {
    if (s < 0.0 || s > 1.0 || k < 0.0 || k > 1.0) {
        throw std::invalid_argument("layer_quality: inputs must lie in [0, 1]");
    }
    if (s == 0.0) return 0.0;
    if (k == 0.0) return kHalfPi;
    return std::atan(s / k);
}

double network_quality(std::span<const double> q) {
    if (q.empty()) throw EmptyNetwork("network_quality: no layers");
    double sum = 0.0;
    for (double v : q) sum += v * v;
    return sum / std::sqrt(static_cast<double>(q.size()));
}

QualityReport make_report(std::size_t epoch, std::vector<LayerMetrics> per_layer) {
    QualityReport r;
    r.epoch = epoch;
    r.per_layer = std::move(per_layer);
    std::vector<double> q(r.per_layer.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = r.per_layer[i].quality;
    r.network_quality = network_quality(q);
    return r;
}

LayerProbe measure_layer(const Matrix& w, const ProbeOptions& opts) {
    return LayerProbe{probe_matrix(w.oriented(), opts), std::nullopt, std::nullopt};
}

LayerProbe measure_layer(const Tensor4D& w, const ProbeOptions& opts) {
    // One channel axis of size 1 leaves that unfolding degenerate; the other
    // mode still carries the layer, so measure what is measurable and only
    // fail when both modes are out.
    std::optional<ModeMetrics> in, out;
    std::string why;
    try {
        in = probe_matrix(unfold(w, UnfoldMode::InputChannel), opts);
    } catch (const UnmeasurableLayer& e) {
        why = e.what();
    }
    try {
        out = probe_matrix(unfold(w, UnfoldMode::OutputChannel), opts);
    } catch (const UnmeasurableLayer& e) {
        why = e.what();
    }
    if (!in && !out) throw UnmeasurableLayer(why);

    LayerProbe probe{ModeMetrics{}, in, out};
    LayerMetrics& c = probe.combined.metrics;
    c.layer_index = opts.layer_index;
    if (in && out) {
        c.stable_rank = 0.5 * (in->metrics.stable_rank + out->metrics.stable_rank);
        c.condition = 0.5 * (in->metrics.condition + out->metrics.condition);
        c.quality = 0.5 * (in->metrics.quality + out->metrics.quality);
        // Rounded mean; 0.5 rounds up so a half-retained layer is never
        // reported as rank 0 while its averaged stable rank is positive.
        c.estimated_rank = static_cast<std::size_t>(std::llround(
            0.5 * static_cast<double>(in->metrics.estimated_rank + out->metrics.estimated_rank)));
        probe.combined.noise_variance = 0.5 * (in->noise_variance + out->noise_variance);
    } else {
        const ModeMetrics& only = in ? *in : *out;
        c = only.metrics;
        c.layer_index = opts.layer_index;
        probe.combined.noise_variance = only.noise_variance;
    }
    return probe;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ConstantInput("pearson: correlation of a constant vector is undefined");
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman: need at least 3 points");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

}  // namespace rankprobe::metrics
