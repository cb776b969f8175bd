// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "rankprobe/errors.hpp"
#include "rankprobe/log.hpp"
#include "rankprobe/rng.hpp"

namespace rankprobe::nn {

namespace {

void validate_config(const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw ConfigError("train.epochs: must be >= 1");
    if (cfg.batch_size < 1) throw ConfigError("train.batch_size: must be >= 1");
    if (!(cfg.eval_split >= 0.0 && cfg.eval_split < 1.0)) {
        throw ConfigError("train.eval_split: must lie in [0, 1)");
    }
    if (cfg.optimizer == OptimizerKind::SgdFixed && !(cfg.fixed_eta > 0.0)) {
        throw ConfigError("train.eta: fixed step size must be > 0");
    }
}

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

Split split_dataset(std::size_t n, double eval_split, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    const std::size_t n_test = static_cast<std::size_t>(std::llround(eval_split * static_cast<double>(n)));
    Split s;
    s.test.assign(idx.begin(), idx.begin() + n_test);
    s.train.assign(idx.begin() + n_test, idx.end());
    if (s.train.empty()) throw ConfigError("train.eval_split: leaves no training samples");
    return s;
}

void gather(const Dataset& data, const std::vector<std::size_t>& idx, std::size_t begin,
            std::size_t count, std::vector<double>& x, std::vector<int>& y) {
    const std::size_t dim = data.feature_size();
    x.resize(count * dim);
    y.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::span<const double> s = data.sample(idx[begin + i]);
        std::copy(s.begin(), s.end(), x.begin() + i * dim);
        y[i] = data.labels[idx[begin + i]];
    }
}

double accuracy(const Network& net, const Dataset& data, const std::vector<std::size_t>& idx) {
    if (idx.empty()) return 0.0;
    std::vector<double> x;
    std::vector<int> y;
    gather(data, idx, 0, idx.size(), x, y);
    const std::vector<int> pred = net.predict(x, idx.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (pred[i] == y[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(idx.size());
}

std::vector<metrics::LayerProbe> probe_layers(const Network& net, std::size_t threads) {
    const std::size_t groups = net.num_weight_layers();
    std::vector<metrics::LayerProbe> probes(groups);
    auto probe_one = [&](std::size_t g) {
        metrics::ProbeOptions opts;
        opts.layer_index = g + 1;
        try {
            const std::variant<Matrix, Tensor4D> view = net.weight_view(g);
            if (const auto* m = std::get_if<Matrix>(&view)) {
                probes[g] = metrics::measure_layer(*m, opts);
            } else {
                probes[g] = metrics::measure_layer(std::get<Tensor4D>(view), opts);
            }
        } catch (const UnmeasurableLayer& e) {
            // Unmeasurable this epoch: keep the empty-signal metrics so the
            // group decays geometrically instead of aborting the run.
            log::warn("layer " + std::to_string(g + 1) + " unmeasurable: " + e.what());
            probes[g] = metrics::LayerProbe{};
            probes[g].combined.metrics.layer_index = g + 1;
        }
    };
    if (threads <= 1 || groups <= 1) {
        for (std::size_t g = 0; g < groups; ++g) probe_one(g);
        return probes;
    }
    std::vector<std::future<void>> futs;
    futs.reserve(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        futs.push_back(std::async(std::launch::async, probe_one, g));
    }
    for (auto& f : futs) f.get();
    return probes;
}

}  // namespace

TrainResult train(const NetworkSpec& spec, const TrainConfig& cfg) {
    validate_config(cfg);
    const Dataset data = make_dataset(cfg.dataset);
    if (data.n_samples == 0) throw ConfigError("train.dataset: produced no samples");

    Network net(spec);
    if (data.feature_shape != spec.input_shape) {
        throw ConfigError("network.input_shape: does not match the dataset feature shape");
    }
    if (data.n_classes != net.num_classes()) {
        throw ConfigError("network.layers: logit count does not match dataset classes");
    }

    Rng rng(cfg.shuffle_seed);
    Split split = split_dataset(data.n_samples, cfg.eval_split, rng);

    optim::Hyper hyper = cfg.hyper;
    if (cfg.optimizer == OptimizerKind::SgdFixed) hyper.eta0 = cfg.fixed_eta;
    optim::OptimizerState state(net.param_specs(), net.num_weight_layers(), hyper);

    TrainResult result{std::vector<EpochRecord>{}, std::move(net), 0,
                       std::vector<double>(state.per_layer_lr().begin(), state.per_layer_lr().end())};
    Network& network = result.network;

    std::vector<double> bx;
    std::vector<int> by;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Minibatch pass with the rates from the previous boundary.
        rng.shuffle(split.train);
        for (std::size_t off = 0; off < split.train.size(); off += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, split.train.size() - off);
            gather(data, split.train, off, count, bx, by);
            const double loss = network.forward_backward(bx, count, by);
            if (!std::isfinite(loss)) {
                throw DivergedTraining("train: loss became non-finite at epoch " +
                                       std::to_string(epoch));
            }
            std::vector<Network::ParamView> views = network.params();
            std::vector<optim::ParamRef> refs;
            refs.reserve(views.size());
            for (Network::ParamView& v : views) {
                refs.push_back(optim::ParamRef{v.values, v.grads});
            }
            try {
                state.sgd_step(refs);
            } catch (const NonFiniteGradient& e) {
                throw DivergedTraining(std::string("train: ") + e.what() + " at epoch " +
                                       std::to_string(epoch));
            }
        }

        // Epoch boundary: factorize and measure every weight layer, then revise rates.
        EpochRecord rec;
        rec.epoch = epoch;
        gather(data, split.train, 0, split.train.size(), bx, by);
        rec.train_loss = network.loss_only(bx, split.train.size(), by);
        if (!std::isfinite(rec.train_loss)) {
            throw DivergedTraining("train: loss became non-finite at epoch " + std::to_string(epoch));
        }
        rec.train_accuracy = accuracy(network, data, split.train);
        rec.test_accuracy = accuracy(network, data, split.test);
        rec.probes = probe_layers(network, cfg.threads);

        std::vector<metrics::LayerMetrics> per_layer;
        per_layer.reserve(rec.probes.size());
        for (const metrics::LayerProbe& p : rec.probes) per_layer.push_back(p.combined.metrics);
        rec.quality = metrics::make_report(epoch, std::move(per_layer));

        if (cfg.optimizer == OptimizerKind::Rmsgd) {
            std::vector<double> ranks(rec.probes.size());
            for (std::size_t g = 0; g < rec.probes.size(); ++g) {
                ranks[g] = rec.probes[g].combined.metrics.stable_rank;
            }
            state.epoch_lr_update(ranks);
        }
        rec.per_layer_lr.assign(state.per_layer_lr().begin(), state.per_layer_lr().end());
        rec.raw_lr.assign(state.raw_lr().begin(), state.raw_lr().end());
        result.records.push_back(std::move(rec));
        log::debug("epoch " + std::to_string(epoch) + " done, train loss " +
                   std::to_string(result.records.back().train_loss));
    }
    result.clamp_count = state.clamp_count();
    return result;
}

double gradcheck(const NetworkSpec& spec, std::size_t n_samples, double step) {
    Network net(spec);
    if (net.num_params() >= 10000) {
        throw ConfigError("gradcheck: network too large (>= 1e4 parameters)");
    }
    Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<double> x(n_samples * net.input_size());
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    std::vector<int> y(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        y[i] = static_cast<int>(i % net.num_classes());
    }

    net.forward_backward(x, n_samples, y);
    std::vector<Network::ParamView> views = net.params();
    std::vector<std::vector<double>> analytic;
    analytic.reserve(views.size());
    for (const Network::ParamView& v : views) {
        analytic.emplace_back(v.grads.begin(), v.grads.end());
    }

    double max_rel = 0.0;
    for (std::size_t p = 0; p < views.size(); ++p) {
        std::span<double> vals = views[p].values;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double keep = vals[i];
            vals[i] = keep + step;
            const double up = net.loss_only(x, n_samples, y);
            vals[i] = keep - step;
            const double down = net.loss_only(x, n_samples, y);
            vals[i] = keep;
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic[p][i];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1.0e-4});
            max_rel = std::max(max_rel, std::abs(a - numeric) / denom);
        }
    }
    return max_rel;
}

}  // namespace rankprobe::nn
