// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rankprobe/matrix.hpp"

namespace rankprobe::optim {

/// A weight-bearing layer anchors one group; bias-like parameters attach to
/// the nearest preceding weight-bearing layer and inherit its learning rate.
struct LayerGroup {
    std::size_t layer_index = 0;  // 1-based
    std::string weight_ref;
    std::vector<std::string> attached_params;
};

struct Hyper {
    double alpha = 0.9;  // SGD momentum
    double beta = 0.98;  // learning momentum
    double zeta = 1.0;   // stable-rank delta gain
    double eta0 = 0.03;  // initial per-layer step size
};

struct ParamSpec {
    std::size_t size = 0;
    std::size_t group = 0;  // 0-based group index
};

struct ParamRef {
    std::span<double> values;
    std::span<const double> grad;
};

/// Momentum-SGD state with one learning rate per layer group, updated once
/// per epoch from the stable-rank delta. Applied rates stay positive: a raw
/// non-positive update is clamped to a 1e-8 floor, counted, and logged.
class OptimizerState {
public:
    OptimizerState(std::vector<ParamSpec> params, std::size_t num_groups, Hyper hyper);

    /// One minibatch update: v <- alpha*v - eta_g*g; w <- w + v.
    /// Validates every gradient first; throws NonFiniteGradient without
    /// touching any parameter if a NaN/Inf is found.
    void sgd_step(std::span<const ParamRef> params);

    /// Epoch-boundary rate revision: eta_l <- beta*eta_l + zeta*(s_l - prev_s_l),
    /// then prev_s_l <- s_l. Throws LayerCountMismatch.
    void epoch_lr_update(std::span<const double> current_stable_ranks);

    std::span<const double> per_layer_lr() const { return lr_; }
    std::span<const double> raw_lr() const { return raw_lr_; }
    std::span<const double> prev_stable_rank() const { return prev_s_; }
    std::span<const double> velocity(std::size_t param_index) const { return velocity_[param_index]; }
    std::size_t epoch() const { return epoch_; }
    std::size_t clamp_count() const { return clamp_count_; }
    std::size_t num_groups() const { return lr_.size(); }
    const Hyper& hyper() const { return hyper_; }

private:
    std::vector<ParamSpec> specs_;
    std::vector<std::vector<double>> velocity_;
    std::vector<double> lr_;
    std::vector<double> raw_lr_;
    std::vector<double> prev_s_;
    Hyper hyper_;
    std::size_t epoch_ = 0;
    std::size_t clamp_count_ = 0;
};

/// Momentum-free step-size rule: zeta * (curr_s - prev_s). Exposed for the
/// stable-rank monotonicity experiments; may be non-positive.
double vanilla_rank_lr(double prev_s, double curr_s, double zeta);

/// Lower bound on the step size that keeps the stable rank non-decreasing,
/// max of a trace-ratio expression and 0. Diagnostic only, never applied.
/// Throws DegenerateDenominator when the denominator expression vanishes
/// (including the zero-gradient epoch).
double rank_monotonicity_lr_bound(const Matrix& w, const Matrix& accumulated_grad);

struct LayerLrStats {
    double min_lr = 0.0;
    double max_lr = 0.0;
    double final_lr = 0.0;
};

struct LrFlag {
    enum class Kind { ExceedsBound, NonPositive };
    std::size_t epoch = 0;
    std::size_t layer = 0;  // 0-based
    double value = 0.0;
    Kind kind = Kind::ExceedsBound;
};

struct BoundednessReport {
    std::vector<LayerLrStats> per_layer;
    std::vector<LrFlag> flags;
    double eta0 = 0.0;
    double bound = 0.0;  // 10 * eta0
    bool ok() const { return flags.empty(); }
};

/// Scans a per-epoch, per-layer learning-rate history (pass raw pre-clamp
/// values to detect non-positives) and flags entries above 10*eta0 or <= 0.
BoundednessReport lr_boundedness_monitor(const std::vector<std::vector<double>>& history,
                                         double eta0);

}  // namespace rankprobe::optim
