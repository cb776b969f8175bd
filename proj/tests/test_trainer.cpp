// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "rankprobe/dataset.hpp"
#include "rankprobe/errors.hpp"
#include "rankprobe/network.hpp"
#include "rankprobe/trainer.hpp"

using namespace rankprobe;
using namespace rankprobe::nn;

namespace {

NetworkSpec mlp_spec(std::vector<std::size_t> widths, ActKind act, std::uint64_t seed,
                     InitKind init = InitKind::KaimingUniform) {
    NetworkSpec spec;
    spec.input_shape = {widths.front()};
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        spec.layers.push_back(DenseSpec{widths[i], widths[i + 1]});
        if (i + 2 < widths.size()) spec.layers.push_back(ActivationSpec{act});
    }
    spec.layers.push_back(SoftmaxCrossEntropySpec{});
    spec.seed = seed;
    spec.init = init;
    return spec;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("dataset: blobs are balanced with the declared shape") {
    const Dataset d = make_blobs(BlobsParams{200, 2, 4.0}, 3);
    CHECK(d.n_samples == 200);
    CHECK(d.n_classes == 2);
    CHECK(d.feature_shape == std::vector<std::size_t>{2});
    std::size_t ones = 0;
    for (int label : d.labels) ones += static_cast<std::size_t>(label);
    CHECK(ones == 100);
}

TEST_CASE("dataset: two moons is byte-deterministic per seed") {
    const Dataset a = make_two_moons(TwoMoonsParams{400, 0.1}, 5);
    const Dataset b = make_two_moons(TwoMoonsParams{400, 0.1}, 5);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    const Dataset c = make_two_moons(TwoMoonsParams{400, 0.1}, 6);
    CHECK(a.features != c.features);
}

TEST_CASE("dataset: tiny images CSV") {
    const auto path = temp_file("rankprobe_tiny_ok.csv");
    {
        std::ofstream f(path);
        f << "label,px0,px1,px2,px3\n";
        f << "0,0.0,0.25,0.5,1.0\n";
        f << "1,1.0,0.75,0.5,0.0\n";
        f << "1,0.1,0.2,0.3,0.4\n";
    }
    SUBCASE("valid three-row file loads with declared shape") {
        const Dataset d = load_tiny_images(TinyImagesParams{path.string(), {1, 2, 2}});
        CHECK(d.n_samples == 3);
        CHECK(d.n_classes == 2);
        CHECK(d.feature_shape == std::vector<std::size_t>{1, 2, 2});
        CHECK(d.sample(1)[0] == 1.0);
    }
    SUBCASE("bad pixel value reports the line number") {
        const auto bad = temp_file("rankprobe_tiny_bad.csv");
        std::ofstream f(bad);
        f << "label,px0,px1\n0,0.5,0.5\n0,0.5,7.5\n";
        f.close();
        try {
            load_tiny_images(TinyImagesParams{bad.string(), {}});
            FAIL("expected MalformedCsv");
        } catch (const MalformedCsv& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("bad header is line 1") {
        const auto bad = temp_file("rankprobe_tiny_hdr.csv");
        std::ofstream f(bad);
        f << "class,px0\n0,0.5\n";
        f.close();
        try {
            load_tiny_images(TinyImagesParams{bad.string(), {}});
            FAIL("expected MalformedCsv");
        } catch (const MalformedCsv& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("shape mismatch is a config error") {
        CHECK_THROWS_AS(load_tiny_images(TinyImagesParams{path.string(), {1, 3, 3}}), ConfigError);
    }
}

TEST_CASE("network spec validation") {
    NetworkSpec spec = mlp_spec({2, 8, 2}, ActKind::Tanh, 1);
    CHECK_NOTHROW(Network{spec});

    SUBCASE("head must be last") {
        NetworkSpec bad = spec;
        bad.layers.insert(bad.layers.begin(), SoftmaxCrossEntropySpec{});
        CHECK_THROWS_AS(Network{bad}, ConfigError);
    }
    SUBCASE("shape mismatch") {
        NetworkSpec bad = spec;
        bad.input_shape = {3};
        CHECK_THROWS_AS(Network{bad}, ConfigError);
    }
    SUBCASE("needs a weight layer") {
        NetworkSpec bad;
        bad.input_shape = {2};
        bad.layers = {ActivationSpec{ActKind::ReLU}, SoftmaxCrossEntropySpec{}};
        CHECK_THROWS_AS(Network{bad}, ConfigError);
    }
}

TEST_CASE("uniform network loss equals ln(num_classes)") {
    NetworkSpec spec = mlp_spec({2, 8, 3}, ActKind::Tanh, 2);
    Network net(spec);
    for (auto& view : net.params()) {
        for (double& v : view.values) v = 0.0;
    }
    const std::vector<double> x{0.3, -0.7, 1.1, 0.2, -0.5, 0.9};
    const std::vector<int> y{0, 1, 2};
    CHECK(net.loss_only(x, 3, y) == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("zero weights and zero inputs give exactly zero gradients") {
    NetworkSpec spec = mlp_spec({2, 8, 2}, ActKind::Tanh, 3);
    Network net(spec);
    for (auto& view : net.params()) {
        for (double& v : view.values) v = 0.0;
    }
    const std::vector<double> x(8 * 2, 0.0);
    const std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1};  // balanced
    net.forward_backward(x, 8, y);
    for (const auto& view : net.params()) {
        for (double g : view.grads) CHECK(g == 0.0);
    }
}

TEST_CASE("gradcheck: dense fixture under 1e-6") {
    const NetworkSpec spec = mlp_spec({2, 8, 2}, ActKind::Tanh, 7);
    CHECK(gradcheck(spec, 16) < 1e-6);
}

TEST_CASE("gradcheck: conv fixture under 1e-5") {
    NetworkSpec spec;
    spec.input_shape = {1, 6, 6};
    spec.layers = {Conv2DSpec{3, 3, 1, 4, 1}, ActivationSpec{ActKind::Tanh}, FlattenSpec{},
                   DenseSpec{64, 2}, SoftmaxCrossEntropySpec{}};
    spec.seed = 11;
    CHECK(gradcheck(spec, 8) < 1e-5);
}

TEST_CASE("gradcheck: strided conv with relu head stays small") {
    NetworkSpec spec;
    spec.input_shape = {2, 5, 5};
    spec.layers = {Conv2DSpec{2, 2, 2, 3, 2}, ActivationSpec{ActKind::Tanh}, FlattenSpec{},
                   DenseSpec{12, 3}, SoftmaxCrossEntropySpec{}};
    spec.seed = 13;
    CHECK(gradcheck(spec, 6) < 1e-5);
}

TEST_CASE("gradcheck rejects oversized networks") {
    const NetworkSpec spec = mlp_spec({64, 128, 64}, ActKind::Tanh, 1);
    CHECK_THROWS_AS(gradcheck(spec), ConfigError);
}

TEST_CASE("training on separable blobs reaches 99% train accuracy") {
    const NetworkSpec spec = mlp_spec({2, 16, 2}, ActKind::Tanh, 1);
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.batch_size = 16;
    cfg.optimizer = OptimizerKind::SgdFixed;
    cfg.fixed_eta = 0.1;
    cfg.dataset.kind = DatasetSpec::Kind::Blobs;
    cfg.dataset.blobs = BlobsParams{200, 2, 4.0};
    cfg.dataset.seed = 12;
    cfg.eval_split = 0.25;
    cfg.shuffle_seed = 4;
    const TrainResult r = train(spec, cfg);
    CHECK(r.records.back().train_accuracy >= 0.99);
}

TEST_CASE("constant classifier scores the class prior on balanced blobs") {
    NetworkSpec spec = mlp_spec({2, 4, 2}, ActKind::Tanh, 5);
    Network net(spec);
    for (auto& view : net.params()) {
        for (double& v : view.values) v = 0.0;
    }
    const Dataset d = make_blobs(BlobsParams{200, 2, 4.0}, 12);
    const std::vector<int> pred = net.predict(d.features, d.n_samples);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < d.n_samples; ++i) {
        if (pred[i] == d.labels[i]) ++hits;
    }
    CHECK(std::abs(static_cast<double>(hits) / 200.0 - 0.5) <= 0.01);
}

TEST_CASE("zero-epoch config is rejected") {
    const NetworkSpec spec = mlp_spec({2, 4, 2}, ActKind::Tanh, 1);
    TrainConfig cfg;
    cfg.epochs = 0;
    cfg.dataset.kind = DatasetSpec::Kind::Blobs;
    CHECK_THROWS_AS(train(spec, cfg), ConfigError);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
    const NetworkSpec spec = mlp_spec({2, 12, 2}, ActKind::ReLU, 21);
    TrainConfig cfg;
    cfg.epochs = 8;
    cfg.batch_size = 32;
    cfg.optimizer = OptimizerKind::Rmsgd;
    cfg.dataset.kind = DatasetSpec::Kind::TwoMoons;
    cfg.dataset.moons = TwoMoonsParams{300, 0.1};
    cfg.dataset.seed = 2;
    cfg.eval_split = 0.4;
    cfg.shuffle_seed = 8;
    const TrainResult a = train(spec, cfg);
    const TrainResult b = train(spec, cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t) {
        CHECK(a.records[t].train_loss == b.records[t].train_loss);
        CHECK(a.records[t].train_accuracy == b.records[t].train_accuracy);
        CHECK(a.records[t].test_accuracy == b.records[t].test_accuracy);
        CHECK(a.records[t].per_layer_lr == b.records[t].per_layer_lr);
        CHECK(a.records[t].quality.network_quality == b.records[t].quality.network_quality);
        for (std::size_t g = 0; g < a.records[t].quality.per_layer.size(); ++g) {
            CHECK(a.records[t].quality.per_layer[g].stable_rank ==
                  b.records[t].quality.per_layer[g].stable_rank);
        }
    }
}

TEST_CASE("probe fan-out with threads matches single-threaded results") {
    const NetworkSpec spec = mlp_spec({2, 12, 8, 2}, ActKind::Tanh, 23);
    TrainConfig cfg;
    cfg.epochs = 4;
    cfg.batch_size = 32;
    cfg.dataset.kind = DatasetSpec::Kind::TwoMoons;
    cfg.dataset.moons = TwoMoonsParams{200, 0.1};
    cfg.dataset.seed = 3;
    cfg.eval_split = 0.5;
    cfg.shuffle_seed = 1;
    const TrainResult a = train(spec, cfg);
    cfg.threads = 3;
    const TrainResult b = train(spec, cfg);
    for (std::size_t t = 0; t < a.records.size(); ++t) {
        CHECK(a.records[t].per_layer_lr == b.records[t].per_layer_lr);
        CHECK(a.records[t].quality.network_quality == b.records[t].quality.network_quality);
    }
}

TEST_CASE("recorded rates replay through the closed-form recurrence") {
    const NetworkSpec spec = mlp_spec({2, 16, 8, 2}, ActKind::Tanh, 2);
    TrainConfig cfg;
    cfg.epochs = 25;
    cfg.batch_size = 32;
    cfg.optimizer = OptimizerKind::Rmsgd;
    cfg.dataset.kind = DatasetSpec::Kind::TwoMoons;
    cfg.dataset.moons = TwoMoonsParams{400, 0.15};
    cfg.dataset.seed = 7;
    cfg.eval_split = 0.5;
    cfg.shuffle_seed = 3;
    const TrainResult r = train(spec, cfg);
    REQUIRE(r.clamp_count == 0);
    const std::size_t groups = r.records.front().per_layer_lr.size();
    for (std::size_t g = 0; g < groups; ++g) {
        double eta = cfg.hyper.eta0;
        double prev_s = 0.0;
        for (const EpochRecord& rec : r.records) {
            const double s = rec.quality.per_layer[g].stable_rank;
            eta = cfg.hyper.beta * eta + cfg.hyper.zeta * (s - prev_s);
            prev_s = s;
            CHECK(std::abs(eta - rec.per_layer_lr[g]) < 1e-12);
        }
    }
}

TEST_CASE("diverging configuration raises DivergedTraining") {
    // two stacked linear layers compound the oversized step multiplicatively
    NetworkSpec spec;
    spec.input_shape = {2};
    spec.layers = {DenseSpec{2, 16}, DenseSpec{16, 2}, SoftmaxCrossEntropySpec{}};
    spec.seed = 3;
    TrainConfig cfg;
    cfg.epochs = 10;
    cfg.batch_size = 16;
    cfg.optimizer = OptimizerKind::SgdFixed;
    cfg.fixed_eta = 1.0e6;
    cfg.dataset.kind = DatasetSpec::Kind::Blobs;
    cfg.dataset.blobs = BlobsParams{64, 2, 4.0};
    cfg.dataset.seed = 1;
    cfg.eval_split = 0.25;
    CHECK_THROWS_AS(train(spec, cfg), DivergedTraining);
}

TEST_CASE("rise-then-decay shape on the reference two-moons prefix") {
    // 40-epoch prefix of the shipped reference configuration; the full run is
    // exercised by the acceptance suite.
    NetworkSpec spec;
    spec.input_shape = {2};
    spec.layers = {DenseSpec{2, 64}, ActivationSpec{ActKind::Tanh}, DenseSpec{64, 8},
                   ActivationSpec{ActKind::Tanh}, DenseSpec{8, 2}, SoftmaxCrossEntropySpec{}};
    spec.seed = 2;
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.batch_size = 32;
    cfg.optimizer = OptimizerKind::Rmsgd;
    cfg.dataset.kind = DatasetSpec::Kind::TwoMoons;
    cfg.dataset.moons = TwoMoonsParams{1000, 0.15};
    cfg.dataset.seed = 7;
    cfg.eval_split = 0.5;
    cfg.shuffle_seed = 3;
    const TrainResult r = train(spec, cfg);
    double max_eta = 0.0, final_eta = 0.0;
    std::size_t argmax = 0;
    for (const EpochRecord& rec : r.records) {
        double m = 0.0;
        for (double e : rec.per_layer_lr) m = std::max(m, e);
        if (m > max_eta) {
            max_eta = m;
            argmax = rec.epoch;
        }
        final_eta = m;
    }
    CHECK(argmax > 1);
    CHECK(final_eta < max_eta);
    CHECK(r.clamp_count == 0);
}
