// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rankprobe/errors.hpp"
#include "rankprobe/log.hpp"
#include "rankprobe/svd.hpp"

namespace rankprobe::optim {

namespace {

constexpr double kLrFloor = 1.0e-8;

void validate_hyper(const Hyper& h) {
    if (!(h.alpha >= 0.0 && h.alpha < 1.0)) {
        throw std::invalid_argument("optimizer: alpha must lie in [0, 1)");
    }
    if (!(h.beta >= 0.0 && h.beta < 1.0)) {
        throw std::invalid_argument("optimizer: beta must lie in [0, 1)");
    }
    if (!(h.zeta >= 0.0)) throw std::invalid_argument("optimizer: zeta must be >= 0");
    if (!(h.eta0 > 0.0)) throw std::invalid_argument("optimizer: eta0 must be > 0");
}

}  // namespace

OptimizerState::OptimizerState(std::vector<ParamSpec> params, std::size_t num_groups, Hyper hyper)
    : specs_(std::move(params)), hyper_(hyper) {
    validate_hyper(hyper_);
    if (num_groups == 0) throw std::invalid_argument("optimizer: need at least one layer group");
    for (const ParamSpec& s : specs_) {
        if (s.group >= num_groups) {
            throw std::invalid_argument("optimizer: parameter group index out of range");
        }
        velocity_.emplace_back(s.size, 0.0);
    }
    lr_.assign(num_groups, hyper_.eta0);
    raw_lr_.assign(num_groups, hyper_.eta0);
    prev_s_.assign(num_groups, 0.0);
}

void OptimizerState::sgd_step(std::span<const ParamRef> params) {
    if (params.size() != specs_.size()) {
        throw std::invalid_argument("sgd_step: parameter count mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].values.size() != specs_[i].size || params[i].grad.size() != specs_[i].size) {
            throw std::invalid_argument("sgd_step: parameter size mismatch");
        }
        for (double g : params[i].grad) {
            if (!std::isfinite(g)) {
                throw NonFiniteGradient("sgd_step: non-finite gradient entry");
            }
        }
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double eta = lr_[specs_[i].group];
        std::vector<double>& v = velocity_[i];
        std::span<double> w = params[i].values;
        std::span<const double> g = params[i].grad;
        for (std::size_t k = 0; k < v.size(); ++k) {
            v[k] = hyper_.alpha * v[k] - eta * g[k];
            w[k] += v[k];
        }
    }
}

void OptimizerState::epoch_lr_update(std::span<const double> current_stable_ranks) {
    if (current_stable_ranks.size() != lr_.size()) {
        throw LayerCountMismatch("epoch_lr_update: got " +
                                 std::to_string(current_stable_ranks.size()) +
                                 " stable ranks for " + std::to_string(lr_.size()) + " groups");
    }
    for (std::size_t l = 0; l < lr_.size(); ++l) {
        const double raw =
            hyper_.beta * lr_[l] + hyper_.zeta * (current_stable_ranks[l] - prev_s_[l]);
        raw_lr_[l] = raw;
        if (raw <= 0.0) {
            ++clamp_count_;
            log::warn("epoch_lr_update: layer " + std::to_string(l + 1) +
                      " raw learning rate " + std::to_string(raw) + " clamped to floor");
            lr_[l] = kLrFloor;
        } else {
            lr_[l] = raw;
        }
        prev_s_[l] = current_stable_ranks[l];
    }
    ++epoch_;
}

double vanilla_rank_lr(double prev_s, double curr_s, double zeta) {
    if (zeta < 0.0) throw std::invalid_argument("vanilla_rank_lr: zeta must be >= 0");
    return zeta * (curr_s - prev_s);
}

double rank_monotonicity_lr_bound(const Matrix& w, const Matrix& accumulated_grad) {
    if (w.rows() != accumulated_grad.rows() || w.cols() != accumulated_grad.cols()) {
        throw std::invalid_argument("rank_monotonicity_lr_bound: shape mismatch");
    }
    double tr_ww = 0.0, tr_gg = 0.0, tr_wg = 0.0;
    const std::span<const double> dw = w.data();
    const std::span<const double> dg = accumulated_grad.data();
    for (std::size_t i = 0; i < dw.size(); ++i) {
        tr_ww += dw[i] * dw[i];
        tr_gg += dg[i] * dg[i];
        tr_wg += dw[i] * dg[i];
    }
    if (tr_gg == 0.0) {
        throw DegenerateDenominator("rank_monotonicity_lr_bound: zero accumulated gradient");
    }
    if (tr_ww == 0.0) {
        throw DegenerateDenominator("rank_monotonicity_lr_bound: zero weight matrix");
    }
    const double spec_w = singular_values(w).front();
    const double spec_g = singular_values(accumulated_grad).front();
    const double ratio = spec_g / spec_w;
    const double denom = tr_gg - ratio * ratio * tr_ww;
    const double scale = tr_gg + ratio * ratio * tr_ww;
    if (std::abs(denom) <= 1.0e-14 * scale) {
        throw DegenerateDenominator("rank_monotonicity_lr_bound: denominator trace expression vanishes");
    }
    const double numer = tr_wg + ratio * tr_ww;
    return std::max(2.0 * numer / denom, 0.0);
}

BoundednessReport lr_boundedness_monitor(const std::vector<std::vector<double>>& history,
                                         double eta0) {
    if (history.empty()) throw std::invalid_argument("lr_boundedness_monitor: empty history");
    const std::size_t layers = history.front().size();
    BoundednessReport report;
    report.eta0 = eta0;
    report.bound = 10.0 * eta0;
    report.per_layer.assign(layers, LayerLrStats{std::numeric_limits<double>::infinity(),
                                                 -std::numeric_limits<double>::infinity(), 0.0});
    for (std::size_t t = 0; t < history.size(); ++t) {
        if (history[t].size() != layers) {
            throw std::invalid_argument("lr_boundedness_monitor: ragged history");
        }
        for (std::size_t l = 0; l < layers; ++l) {
            const double eta = history[t][l];
            LayerLrStats& st = report.per_layer[l];
            st.min_lr = std::min(st.min_lr, eta);
            st.max_lr = std::max(st.max_lr, eta);
            st.final_lr = eta;
            if (eta > report.bound) {
                report.flags.push_back(LrFlag{t, l, eta, LrFlag::Kind::ExceedsBound});
            }
            if (eta <= 0.0) {
                report.flags.push_back(LrFlag{t, l, eta, LrFlag::Kind::NonPositive});
            }
        }
    }
    return report;
}

}  // namespace rankprobe::optim
