// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Budgets and tolerances are pinned in the checks below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rankprobe/csv.hpp"
#include "rankprobe/errors.hpp"
#include "rankprobe/evbmf.hpp"
#include "rankprobe/matrix.hpp"
#include "rankprobe/metrics.hpp"
#include "rankprobe/optimizer.hpp"
#include "rankprobe/rng.hpp"
#include "rankprobe/svd.hpp"
#include "rankprobe/tensor_archive.hpp"
#include "rankprobe/trainer.hpp"

namespace fs = std::filesystem;
using namespace rankprobe;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(),
                seconds, o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++g_failures;
}

void run_criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("unexpected exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, name, o, seconds);
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix planted_rank(std::size_t rows, std::size_t cols, std::size_t rank, double noise_sigma,
                    Rng& rng) {
    std::vector<double> a(rows * rank), b(cols * rank);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    std::vector<double> data(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < rank; ++k) acc += a[i * rank + k] * b[j * rank + k];
            data[i * cols + j] = acc + noise_sigma * rng.normal();
        }
    }
    return Matrix(rows, cols, std::move(data));
}

// ---------------------------------------------------------------------------

void criterion1_metric_oracles(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.index(40);
        const std::size_t rank = rng.index(n + 1);
        std::vector<double> spectrum(rank);
        double top = std::pow(10.0, rng.uniform(-4.0, 4.0));
        for (std::size_t i = 0; i < rank; ++i) {
            spectrum[i] = top;
            top *= rng.uniform(0.2, 1.0);
        }
        evbmf::FactorizedLayer f;
        f.retained_singular_values = spectrum;
        f.estimated_rank = rank;
        f.n = n;
        f.m = 2 * n;

        const double s = metrics::stable_rank(f);
        o.require(std::abs(s - oracle::stable_rank(spectrum, n)) <= 1e-12, "stable_rank mismatch");
        o.require(s >= 0.0 && s <= 1.0, "stable_rank out of [0,1]");
        if (rank > 0) {
            const double k = metrics::condition(f);
            o.require(std::abs(k - oracle::condition(spectrum)) <= 1e-12, "condition mismatch");
            o.require(k >= 0.0 && k <= 1.0, "condition out of [0,1]");
            const double q = metrics::layer_quality(s, k);
            o.require(std::abs(q - oracle::quality(s, k)) <= 1e-12, "quality mismatch");
            o.require(q >= 0.0 && q <= kHalfPi, "quality out of [0,pi/2]");
        }
        const std::size_t layers = 1 + rng.index(12);
        std::vector<double> qv(layers);
        for (double& v : qv) v = rng.uniform(0.0, kHalfPi);
        o.require(std::abs(metrics::network_quality(qv) - oracle::network_quality(qv)) <= 1e-12,
                  "network_quality mismatch");
        if (!o.ok) return;
    }
    o.require(elapsed(t0) < 5.0, "runtime budget of 5 s exceeded");
}

void criterion2_evbmf_recovery(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t noise_rank_zero = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + seed);
        std::vector<double> data(64 * 32);
        for (double& v : data) v = rng.normal();
        if (evbmf::factorize(Matrix(64, 32, std::move(data))).estimated_rank == 0) {
            ++noise_rank_zero;
        }
    }
    o.require(noise_rank_zero >= 95, "pure-noise rank-0 rate " + std::to_string(noise_rank_zero) +
                                         "/100 below 95");

    std::size_t planted_exact = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(2000 + seed);
        const Matrix m = planted_rank(64, 32, 5, 0.01, rng);
        const evbmf::FactorizedLayer f = evbmf::factorize(m);
        if (f.estimated_rank == 5) ++planted_exact;

        std::vector<double> scaled(m.data().begin(), m.data().end());
        for (double& v : scaled) v *= 7.25;
        o.require(evbmf::factorize(Matrix(64, 32, std::move(scaled))).estimated_rank ==
                      f.estimated_rank,
                  "scale invariance violated at seed " + std::to_string(seed));
        const evbmf::FactorizedLayer ft = evbmf::factorize(m.transposed());
        bool same = ft.estimated_rank == f.estimated_rank;
        for (std::size_t i = 0; same && i < f.estimated_rank; ++i) {
            same = std::abs(ft.retained_singular_values[i] - f.retained_singular_values[i]) <=
                   1e-9 * std::max(1.0, f.retained_singular_values[i]);
        }
        o.require(same, "transpose invariance violated at seed " + std::to_string(seed));
        if (!o.ok) return;
    }
    o.require(planted_exact >= 95, "planted rank-5 exact rate " + std::to_string(planted_exact) +
                                       "/100 below 95");
    o.require(elapsed(t0) < 60.0, "runtime budget of 60 s exceeded");
}

void criterion3_optimizer_arithmetic(Outcome& o) {
    // Closed-form unrolling over 200 synthetic epochs.
    optim::Hyper h;
    optim::OptimizerState state({optim::ParamSpec{1, 0}}, 1, h);
    Rng rng(71);
    std::vector<double> s_hist;
    double s = 0.0;
    for (int t = 0; t < 200; ++t) {
        s = std::min(1.0, std::max(0.0, s + rng.uniform(-0.005, 0.02)));
        s_hist.push_back(s);
        state.epoch_lr_update(std::vector<double>{s});
    }
    long double eta = std::pow(0.98L, 200.0L) * 0.03L;
    for (int t = 1; t <= 200; ++t) {
        const long double delta =
            static_cast<long double>(s_hist[t - 1]) - (t >= 2 ? s_hist[t - 2] : 0.0L);
        eta += std::pow(0.98L, static_cast<long double>(200 - t)) * delta;
    }
    o.require(state.clamp_count() == 0, "unexpected clamps in synthetic unroll");
    o.require(std::abs(state.per_layer_lr()[0] - static_cast<double>(eta)) < 1e-12,
              "closed-form unrolling mismatch");

    // Hand-unrolled momentum fixtures.
    optim::Hyper h2;
    h2.eta0 = 0.1;
    optim::OptimizerState st2({optim::ParamSpec{1, 0}}, 1, h2);
    std::vector<double> w{0.0}, g{1.0};
    std::vector<optim::ParamRef> refs{optim::ParamRef{w, g}};
    st2.sgd_step(refs);
    o.require(st2.velocity(0)[0] == -0.1 && w[0] == -0.1, "first momentum step mismatch");
    st2.sgd_step(refs);
    o.require(st2.velocity(0)[0] == 0.9 * -0.1 - 0.1, "second velocity mismatch");
    o.require(std::abs(st2.velocity(0)[0] + 0.19) < 1e-15, "velocity != -0.19");
    o.require(std::abs(w[0] + 0.29) < 1e-15, "total displacement != -0.29");

    optim::OptimizerState st3({optim::ParamSpec{1, 0}}, 1, optim::Hyper{});
    st3.epoch_lr_update(std::vector<double>{0.1});
    o.require(std::abs(st3.per_layer_lr()[0] - 0.1294) < 1e-12, "0.1294 fixture mismatch");
}

void criterion4_gradcheck(Outcome& o) {
    nn::NetworkSpec mlp;
    mlp.input_shape = {2};
    mlp.layers = {nn::DenseSpec{2, 8}, nn::ActivationSpec{nn::ActKind::Tanh}, nn::DenseSpec{8, 2},
                  nn::SoftmaxCrossEntropySpec{}};
    mlp.seed = 7;
    const double mlp_err = nn::gradcheck(mlp, 16);
    o.require(mlp_err < 1e-5, "dense fixture gradcheck error " + std::to_string(mlp_err));

    nn::NetworkSpec conv;
    conv.input_shape = {1, 6, 6};
    conv.layers = {nn::Conv2DSpec{3, 3, 1, 4, 1}, nn::ActivationSpec{nn::ActKind::Tanh},
                   nn::FlattenSpec{}, nn::DenseSpec{64, 2}, nn::SoftmaxCrossEntropySpec{}};
    conv.seed = 11;
    const double conv_err = nn::gradcheck(conv, 8);
    o.require(conv_err < 1e-5, "conv fixture gradcheck error " + std::to_string(conv_err));
}

void criterion5_rank_monotonicity(Outcome& o) {
    // Least-squares fixture: single 16x8 linear layer pulled toward a planted
    // rank-5 target by full-batch gradient descent, step size from the
    // momentum-free rank-delta rule after the first epoch.
    const std::size_t out_d = 16, in_d = 8, n_samples = 256, epochs = 50;
    Rng rng(101);
    const std::size_t target_rank = 5;
    std::vector<double> fa(out_d * target_rank), fb(in_d * target_rank);
    for (double& v : fa) v = rng.normal();
    for (double& v : fb) v = rng.normal();
    std::vector<double> wstar(out_d * in_d);
    for (std::size_t i = 0; i < out_d; ++i) {
        for (std::size_t k = 0; k < in_d; ++k) {
            double acc = 0.0;
            for (std::size_t r = 0; r < target_rank; ++r) {
                acc += fa[i * target_rank + r] * fb[k * target_rank + r];
            }
            wstar[i * in_d + k] = acc;
        }
    }
    std::vector<double> x(n_samples * in_d), y(n_samples * out_d);
    for (double& v : x) v = rng.normal();
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t od = 0; od < out_d; ++od) {
            double acc = 0.0;
            for (std::size_t k = 0; k < in_d; ++k) acc += wstar[od * in_d + k] * x[i * in_d + k];
            y[i * out_d + od] = acc + 0.01 * rng.normal();
        }
    }
    std::vector<double> w(out_d * in_d);
    const double bound = std::sqrt(6.0 / static_cast<double>(in_d));
    for (double& v : w) v = rng.uniform(-bound, bound);

    double eta = 0.25, prev_s = 0.0;
    std::size_t nondecreasing = 0;
    for (std::size_t t = 1; t <= epochs; ++t) {
        std::vector<double> grad(out_d * in_d, 0.0);
        for (std::size_t i = 0; i < n_samples; ++i) {
            for (std::size_t od = 0; od < out_d; ++od) {
                double r = -y[i * out_d + od];
                for (std::size_t k = 0; k < in_d; ++k) r += w[od * in_d + k] * x[i * in_d + k];
                for (std::size_t k = 0; k < in_d; ++k) {
                    grad[od * in_d + k] +=
                        2.0 * r * x[i * in_d + k] / static_cast<double>(n_samples);
                }
            }
        }
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= eta * grad[j];
        const double s = metrics::stable_rank(evbmf::factorize(Matrix(out_d, in_d, w)));
        if (s >= prev_s - 1e-8) ++nondecreasing;
        eta = optim::vanilla_rank_lr(prev_s, s, 1.0);
        prev_s = s;
    }
    o.require(nondecreasing * 10 >= epochs * 9,
              "stable rank non-decreasing on only " + std::to_string(nondecreasing) + "/50");
    o.require(prev_s > 0.1, "fixture never developed a positive stable rank");

    // Trace-expression oracle at 1e-10 on 100 random 4x4 instances.
    Rng orng(83);
    std::size_t checked = 0;
    while (checked < 100) {
        std::vector<double> wd(16), gd(16);
        for (double& v : wd) v = orng.normal();
        for (double& v : gd) v = 0.25 * orng.normal();
        const Matrix wm(4, 4, std::move(wd));
        const Matrix gm(4, 4, std::move(gd));
        double got;
        try {
            got = optim::rank_monotonicity_lr_bound(wm, gm);
        } catch (const DegenerateDenominator&) {
            continue;
        }
        const double want = oracle::rank_bound(wm, gm);
        o.require(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)),
                  "trace oracle mismatch at instance " + std::to_string(checked));
        if (!o.ok) return;
        ++checked;
    }
}

nn::NetworkSpec reference_spec() {
    nn::NetworkSpec spec;
    spec.input_shape = {2};
    spec.layers = {nn::DenseSpec{2, 64}, nn::ActivationSpec{nn::ActKind::Tanh},
                   nn::DenseSpec{64, 8}, nn::ActivationSpec{nn::ActKind::Tanh},
                   nn::DenseSpec{8, 2},  nn::SoftmaxCrossEntropySpec{}};
    spec.seed = 2;
    return spec;
}

nn::TrainConfig reference_config() {
    nn::TrainConfig cfg;
    cfg.epochs = 100;
    cfg.batch_size = 32;
    cfg.optimizer = nn::OptimizerKind::Rmsgd;  // alpha 0.9, beta 0.98, zeta 1, eta0 0.03
    cfg.dataset.kind = nn::DatasetSpec::Kind::TwoMoons;
    cfg.dataset.moons = nn::TwoMoonsParams{1000, 0.15};
    cfg.dataset.seed = 7;
    cfg.eval_split = 0.5;
    cfg.shuffle_seed = 3;
    return cfg;
}

void criterion6_end_to_end(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const nn::TrainResult r = nn::train(reference_spec(), reference_config());

    double best_test = 0.0;
    std::vector<std::vector<double>> lr_hist, raw_hist;
    for (const nn::EpochRecord& rec : r.records) {
        best_test = std::max(best_test, rec.test_accuracy);
        lr_hist.push_back(rec.per_layer_lr);
        raw_hist.push_back(rec.raw_lr);
    }
    const double final_test = r.records.back().test_accuracy;
    o.require(best_test >= 0.97, "test accuracy peaked at " + std::to_string(best_test));
    o.require(r.clamp_count == 0, std::to_string(r.clamp_count) + " learning-rate clamps fired");

    const optim::BoundednessReport mon = optim::lr_boundedness_monitor(lr_hist, 0.03);
    o.require(mon.ok(), std::to_string(mon.flags.size()) + " boundedness flags (eta > 10*eta0)");
    const optim::BoundednessReport raw_mon = optim::lr_boundedness_monitor(raw_hist, 0.03);
    o.require(raw_mon.ok(), "raw learning rates flagged");

    // Warm-up/decay shape of the per-epoch max rate.
    double max_eta = 0.0, final_eta = 0.0;
    std::size_t argmax_epoch = 0;
    for (const nn::EpochRecord& rec : r.records) {
        double m = 0.0;
        for (double e : rec.per_layer_lr) m = std::max(m, e);
        if (m > max_eta) {
            max_eta = m;
            argmax_epoch = rec.epoch;
        }
        final_eta = m;
    }
    o.require(argmax_epoch > 1, "rate peaked at epoch " + std::to_string(argmax_epoch));
    o.require(final_eta < max_eta, "rate did not decay from its peak");

    // Fixed-rate SGD baseline, grid-tuned on final test accuracy.
    double baseline = 0.0;
    for (double eta : {0.05, 0.1, 0.2}) {
        nn::TrainConfig cfg = reference_config();
        cfg.optimizer = nn::OptimizerKind::SgdFixed;
        cfg.fixed_eta = eta;
        const nn::TrainResult sr = nn::train(reference_spec(), cfg);
        baseline = std::max(baseline, sr.records.back().test_accuracy);
    }
    o.require(final_test >= baseline - 0.01,
              "final test acc " + std::to_string(final_test) + " below SGD baseline " +
                  std::to_string(baseline) + " - 1pp");
    o.require(elapsed(t0) < 120.0, "runtime budget of 120 s exceeded");
}

void criterion7_q_correlation(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> final_q, final_acc;
    const std::size_t widths[] = {8, 16, 32};
    const std::size_t epochs_for_width[] = {4, 30, 80};
    for (std::size_t wi = 0; wi < 3; ++wi) {
        for (nn::InitKind init : {nn::InitKind::KaimingUniform, nn::InitKind::Orthogonal}) {
            for (nn::OptimizerKind opt : {nn::OptimizerKind::Rmsgd, nn::OptimizerKind::SgdFixed}) {
                nn::NetworkSpec spec;
                spec.input_shape = {2};
                spec.layers = {nn::DenseSpec{2, widths[wi]},
                               nn::ActivationSpec{nn::ActKind::Tanh},
                               nn::DenseSpec{widths[wi], 2}, nn::SoftmaxCrossEntropySpec{}};
                spec.seed = 40 + wi;
                spec.init = init;
                nn::TrainConfig cfg;
                cfg.epochs = epochs_for_width[wi];
                cfg.batch_size = 32;
                cfg.optimizer = opt;
                cfg.fixed_eta = 0.1;
                cfg.dataset.kind = nn::DatasetSpec::Kind::TwoMoons;
                cfg.dataset.moons = nn::TwoMoonsParams{1000, 0.15};
                cfg.dataset.seed = 7;
                cfg.eval_split = 0.5;
                cfg.shuffle_seed = 3;
                const nn::TrainResult r = nn::train(spec, cfg);
                final_q.push_back(r.records.back().quality.network_quality);
                final_acc.push_back(r.records.back().test_accuracy);
            }
        }
    }
    const double rocc = metrics::spearman(final_q, final_acc);
    o.require(rocc > 0.0, "Spearman(final Q, test acc) = " + std::to_string(rocc));
    o.require(elapsed(t0) < 600.0, "runtime budget of 10 min exceeded");
}

void criterion8_io(Outcome& o) {
    // Library-level byte round trip.
    Rng rng(55);
    io::TensorArchive archive;
    io::TensorEntry e1;
    e1.name = "dense1.weight";
    e1.dtype = io::Dtype::F64;
    e1.dims = {12, 6};
    for (std::size_t i = 0; i < 72; ++i) e1.values.push_back(rng.normal());
    archive.add(std::move(e1));
    io::TensorEntry e2;
    e2.name = "dense1.bias";
    e2.dtype = io::Dtype::F32;
    e2.dims = {12};
    for (std::size_t i = 0; i < 12; ++i) e2.values.push_back(rng.normal());
    archive.add(std::move(e2));
    const std::vector<std::uint8_t> once = io::serialize_archive(archive);
    const std::vector<std::uint8_t> twice = io::serialize_archive(io::parse_archive(once));
    o.require(once == twice, "archive round trip not byte-identical");

    // CLI-level pipeline.
    const fs::path dir = fs::temp_directory_path() / "rankprobe_acceptance";
    fs::create_directories(dir);
    {
        std::ofstream m(dir / "manifest.json");
        m << R"({
  "id": "acceptance-io",
  "network": {
    "input_shape": [2], "seed": 2,
    "layers": [
      {"type": "dense", "in": 2, "out": 16}, {"type": "tanh"},
      {"type": "dense", "in": 16, "out": 2}, {"type": "softmax_cross_entropy"}
    ]
  },
  "train": {
    "epochs": 3, "batch_size": 32, "optimizer": "rmsgd",
    "eval_split": 0.5, "shuffle_seed": 3,
    "dataset": {"kind": "two_moons", "n": 300, "noise": 0.15, "seed": 7}
  }
})";
    }
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(PROBE_BIN) + " " + args + " >/dev/null 2>/dev/null";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    o.require(run("train --manifest " + (dir / "manifest.json").string() + " --out " +
                  (dir / "out").string()) == 0,
              "train command failed");
    o.require(run("analyze --checkpoint " + (dir / "out" / "checkpoint.rptk").string() +
                  " --out " + (dir / "analysis.csv").string()) == 0,
              "analyze command failed");

    // Checkpoint round trip through the filesystem.
    const io::TensorArchive ck = io::read_archive(dir / "out" / "checkpoint.rptk");
    io::write_archive(ck, dir / "rewritten.rptk");
    o.require(slurp(dir / "out" / "checkpoint.rptk") == slurp(dir / "rewritten.rptk"),
              "checkpoint rewrite not byte-identical");

    // Analyze output matches the final-epoch metrics rows within 1e-9.
    const auto metrics_rows = io::parse_csv(slurp(dir / "out" / "metrics.csv"));
    const auto analysis_rows = io::parse_csv(slurp(dir / "analysis.csv"));
    o.require(metrics_rows.front() ==
                  std::vector<std::string>{"epoch", "layer_index", "layer_name", "mode",
                                           "estimated_rank", "noise_variance", "stable_rank",
                                           "condition", "quality", "learning_rate"},
              "metrics.csv schema header changed");
    o.require(analysis_rows.front() ==
                  std::vector<std::string>{"name", "dims", "estimated_rank", "noise_variance",
                                           "stable_rank", "condition", "quality"},
              "analysis csv schema header changed");
    std::size_t compared = 0;
    for (std::size_t ai = 1; ai < analysis_rows.size(); ++ai) {
        const auto& arow = analysis_rows[ai];
        if (arow[0] == "NETWORK") continue;
        for (std::size_t mi = 1; mi < metrics_rows.size(); ++mi) {
            const auto& mrow = metrics_rows[mi];
            if (mrow[0] != "3" || mrow[2] != arow[0]) continue;
            o.require(std::abs(std::stod(mrow[6]) - std::stod(arow[4])) < 1e-9 &&
                          std::abs(std::stod(mrow[7]) - std::stod(arow[5])) < 1e-9 &&
                          std::abs(std::stod(mrow[8]) - std::stod(arow[6])) < 1e-9,
                      "analyze/train metric mismatch for " + arow[0]);
            ++compared;
        }
    }
    o.require(compared >= 2, "expected at least two comparable tensors");

    // Corrupted archive exits 4.
    const std::string full = slurp(dir / "out" / "checkpoint.rptk");
    std::ofstream(dir / "corrupt.rptk", std::ios::binary) << full.substr(0, full.size() - 7);
    o.require(run("analyze --checkpoint " + (dir / "corrupt.rptk").string() + " --out " +
                  (dir / "x.csv").string()) == 4,
              "corrupted archive did not exit 4");
}

}  // namespace

int main() {
    std::printf("rankprobe acceptance suite\n");
    run_criterion(1, "metric oracles on 1000 random spectra", criterion1_metric_oracles);
    run_criterion(2, "factorization rank recovery", criterion2_evbmf_recovery);
    run_criterion(3, "optimizer arithmetic", criterion3_optimizer_arithmetic);
    run_criterion(4, "gradient check", criterion4_gradcheck);
    run_criterion(5, "rank monotonicity and step-size bound", criterion5_rank_monotonicity);
    run_criterion(6, "end-to-end two-moons training", criterion6_end_to_end);
    run_criterion(7, "quality/accuracy correlation sign", criterion7_q_correlation);
    run_criterion(8, "archive and CSV round trips", criterion8_io);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
