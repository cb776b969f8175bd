// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "rankprobe/dataset.hpp"
#include "rankprobe/metrics.hpp"
#include "rankprobe/network.hpp"
#include "rankprobe/optimizer.hpp"

namespace rankprobe::nn {

enum class OptimizerKind { Rmsgd, SgdFixed };

struct TrainConfig {
    std::size_t epochs = 1;
    std::size_t batch_size = 32;
    OptimizerKind optimizer = OptimizerKind::Rmsgd;
    optim::Hyper hyper;      // Rmsgd hyper-parameters (eta0 is the initial rate)
    double fixed_eta = 0.1;  // SgdFixed step size
    DatasetSpec dataset;
    double eval_split = 0.5;  // held-out fraction
    std::uint64_t shuffle_seed = 0;
    std::size_t threads = 1;  // layer probing fan-out at epoch boundaries
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    metrics::QualityReport quality;
    std::vector<metrics::LayerProbe> probes;  // per weight layer, with per-mode detail
    std::vector<double> per_layer_lr;         // rates after this epoch's update stage
    std::vector<double> raw_lr;               // pre-clamp values of the same update
};

struct TrainResult {
    std::vector<EpochRecord> records;
    Network network;  // final trained state
    std::size_t clamp_count = 0;
    std::vector<double> initial_lr;  // rates in effect during epoch 1
};

/// Runs the two-stage epoch loop: minibatch momentum-SGD updates with the
/// rates from the previous boundary, then factorize/measure/update at the
/// epoch boundary. Fully deterministic for fixed seeds. Throws
/// DivergedTraining when the loss goes non-finite.
TrainResult train(const NetworkSpec& spec, const TrainConfig& cfg);

/// Max relative error between analytic gradients and central finite
/// differences (step 1e-5) on a fixed seeded batch.
double gradcheck(const NetworkSpec& spec, std::size_t n_samples = 16, double step = 1.0e-5);

}  // namespace rankprobe::nn
