// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0
//
// probe: train desk-scale networks with rank-adaptive learning rates,
// analyze weight checkpoints, and correlate quality scores with accuracy.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankprobe/csv.hpp"
#include "rankprobe/errors.hpp"
#include "rankprobe/log.hpp"
#include "rankprobe/metrics.hpp"
#include "rankprobe/svg.hpp"
#include "rankprobe/tensor_archive.hpp"
#include "rankprobe/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rankprobe;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitArchive = 4;
constexpr int kExitNoTensors = 5;
constexpr int kExitBadTable = 6;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Manifest parsing

template <typename T>
T require_field(const json& j, const std::string& context, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(context + "." + key + ": missing required field");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(context + "." + key + ": wrong type");
    }
}

template <typename T>
T optional_field(const json& j, const std::string& context, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(context + "." + key + ": wrong type");
    }
}

nn::NetworkSpec parse_network(const json& j) {
    nn::NetworkSpec spec;
    spec.input_shape = require_field<std::vector<std::size_t>>(j, "network", "input_shape");
    spec.seed = optional_field<std::uint64_t>(j, "network", "seed", 0);
    const std::string init = optional_field<std::string>(j, "network", "init", "kaiming_uniform");
    if (init == "kaiming_uniform") {
        spec.init = nn::InitKind::KaimingUniform;
    } else if (init == "orthogonal") {
        spec.init = nn::InitKind::Orthogonal;
    } else {
        throw ConfigError("network.init: must be kaiming_uniform or orthogonal");
    }
    if (!j.contains("layers") || !j.at("layers").is_array()) {
        throw ConfigError("network.layers: missing layer array");
    }
    for (const json& lj : j.at("layers")) {
        const std::string type = require_field<std::string>(lj, "network.layers[]", "type");
        if (type == "dense") {
            spec.layers.push_back(nn::DenseSpec{
                require_field<std::size_t>(lj, "network.layers[dense]", "in"),
                require_field<std::size_t>(lj, "network.layers[dense]", "out")});
        } else if (type == "conv2d") {
            spec.layers.push_back(nn::Conv2DSpec{
                require_field<std::size_t>(lj, "network.layers[conv2d]", "kh"),
                require_field<std::size_t>(lj, "network.layers[conv2d]", "kw"),
                require_field<std::size_t>(lj, "network.layers[conv2d]", "in"),
                require_field<std::size_t>(lj, "network.layers[conv2d]", "out"),
                optional_field<std::size_t>(lj, "network.layers[conv2d]", "stride", 1)});
        } else if (type == "relu") {
            spec.layers.push_back(nn::ActivationSpec{nn::ActKind::ReLU});
        } else if (type == "tanh") {
            spec.layers.push_back(nn::ActivationSpec{nn::ActKind::Tanh});
        } else if (type == "flatten") {
            spec.layers.push_back(nn::FlattenSpec{});
        } else if (type == "softmax_cross_entropy") {
            spec.layers.push_back(nn::SoftmaxCrossEntropySpec{});
        } else {
            throw ConfigError("network.layers[].type: unknown layer type '" + type + "'");
        }
    }
    return spec;
}

nn::DatasetSpec parse_dataset(const json& j) {
    nn::DatasetSpec d;
    const std::string kind = require_field<std::string>(j, "train.dataset", "kind");
    d.seed = optional_field<std::uint64_t>(j, "train.dataset", "seed", 0);
    if (kind == "blobs") {
        d.kind = nn::DatasetSpec::Kind::Blobs;
        d.blobs.n = require_field<std::size_t>(j, "train.dataset", "n");
        d.blobs.classes = optional_field<std::size_t>(j, "train.dataset", "classes", 2);
        d.blobs.separation = optional_field<double>(j, "train.dataset", "separation", 4.0);
    } else if (kind == "two_moons") {
        d.kind = nn::DatasetSpec::Kind::TwoMoons;
        d.moons.n = require_field<std::size_t>(j, "train.dataset", "n");
        d.moons.noise = optional_field<double>(j, "train.dataset", "noise", 0.1);
    } else if (kind == "tiny_images") {
        d.kind = nn::DatasetSpec::Kind::TinyImages;
        d.images.csv_path = require_field<std::string>(j, "train.dataset", "path");
        d.images.shape =
            optional_field<std::vector<std::size_t>>(j, "train.dataset", "shape", {});
    } else {
        throw ConfigError("train.dataset.kind: must be blobs, two_moons, or tiny_images");
    }
    return d;
}

nn::TrainConfig parse_train(const json& j) {
    nn::TrainConfig cfg;
    cfg.epochs = require_field<std::size_t>(j, "train", "epochs");
    if (cfg.epochs < 1) throw ConfigError("train.epochs: must be >= 1");
    cfg.batch_size = optional_field<std::size_t>(j, "train", "batch_size", 32);
    if (cfg.batch_size < 1) throw ConfigError("train.batch_size: must be >= 1");
    const std::string opt = optional_field<std::string>(j, "train", "optimizer", "rmsgd");
    if (opt == "rmsgd") {
        cfg.optimizer = nn::OptimizerKind::Rmsgd;
    } else if (opt == "sgd") {
        cfg.optimizer = nn::OptimizerKind::SgdFixed;
    } else {
        throw ConfigError("train.optimizer: must be rmsgd or sgd");
    }
    cfg.hyper.alpha = optional_field<double>(j, "train", "alpha", 0.9);
    cfg.hyper.beta = optional_field<double>(j, "train", "beta", 0.98);
    cfg.hyper.zeta = optional_field<double>(j, "train", "zeta", 1.0);
    cfg.hyper.eta0 = optional_field<double>(j, "train", "eta0", 0.03);
    cfg.fixed_eta = optional_field<double>(j, "train", "eta", 0.1);
    cfg.eval_split = optional_field<double>(j, "train", "eval_split", 0.5);
    cfg.shuffle_seed = optional_field<std::uint64_t>(j, "train", "shuffle_seed", 0);
    if (!j.contains("dataset")) throw ConfigError("train.dataset: missing required field");
    cfg.dataset = parse_dataset(j.at("dataset"));
    return cfg;
}

struct Manifest {
    std::string id;
    nn::NetworkSpec network;
    nn::TrainConfig train;
};

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("manifest: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: invalid JSON: ") + e.what());
    }
    Manifest m;
    m.id = require_field<std::string>(j, "manifest", "id");
    if (m.id.empty() || m.id.find_first_of("/\\:*?\"<>| ") != std::string::npos) {
        throw ConfigError("manifest.id: must be non-empty and filesystem-safe");
    }
    if (!j.contains("network")) throw ConfigError("manifest.network: missing required field");
    if (!j.contains("train")) throw ConfigError("manifest.train: missing required field");
    m.network = parse_network(j.at("network"));
    m.train = parse_train(j.at("train"));
    return m;
}

// ---------------------------------------------------------------------------
// Glob matching for --filter (supports * and ?)

bool match_glob(const std::string& pattern, const std::string& text) {
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

// ---------------------------------------------------------------------------
// Metrics CSV emission

constexpr const char* kMetricsHeader =
    "epoch,layer_index,layer_name,mode,estimated_rank,noise_variance,stable_rank,condition,"
    "quality,learning_rate";

void append_metric_row(std::string& out, std::size_t epoch, std::size_t layer_index,
                       const std::string& name, const std::string& mode,
                       const metrics::ModeMetrics& mm, double lr) {
    out += std::to_string(epoch) + "," + std::to_string(layer_index) + "," + name + "," + mode +
           "," + std::to_string(mm.metrics.estimated_rank) + "," +
           fmt_double(mm.noise_variance) + "," + fmt_double(mm.metrics.stable_rank) + "," +
           fmt_double(mm.metrics.condition) + "," + fmt_double(mm.metrics.quality) + "," +
           fmt_double(lr) + "\n";
}

std::string render_metrics_csv(const std::vector<nn::EpochRecord>& records,
                               const std::vector<optim::LayerGroup>& groups) {
    std::string out = std::string(kMetricsHeader) + "\n";
    for (const nn::EpochRecord& rec : records) {
        for (std::size_t g = 0; g < rec.probes.size(); ++g) {
            const metrics::LayerProbe& p = rec.probes[g];
            const std::string& name = groups[g].weight_ref;
            const double lr = rec.per_layer_lr[g];
            if (p.input_mode.has_value() || p.output_mode.has_value()) {
                if (p.input_mode) {
                    append_metric_row(out, rec.epoch, g + 1, name, "mode3", *p.input_mode, lr);
                }
                if (p.output_mode) {
                    append_metric_row(out, rec.epoch, g + 1, name, "mode4", *p.output_mode, lr);
                }
                append_metric_row(out, rec.epoch, g + 1, name, "avg", p.combined, lr);
            } else {
                append_metric_row(out, rec.epoch, g + 1, name, "dense", p.combined, lr);
            }
        }
        out += std::to_string(rec.epoch) + ",-1,NETWORK,net,,,,," +
               fmt_double(rec.quality.network_quality) + ",\n";
    }
    return out;
}

std::string render_lr_csv(const std::vector<nn::EpochRecord>& records,
                          const std::vector<optim::LayerGroup>& groups,
                          const std::vector<double>& initial_lr) {
    std::string out = "epoch,layer_index,layer_name,learning_rate,raw_learning_rate\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        out += "0," + std::to_string(g + 1) + "," + groups[g].weight_ref + "," +
               fmt_double(initial_lr[g]) + "," + fmt_double(initial_lr[g]) + "\n";
    }
    for (const nn::EpochRecord& rec : records) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            out += std::to_string(rec.epoch) + "," + std::to_string(g + 1) + "," +
                   groups[g].weight_ref + "," + fmt_double(rec.per_layer_lr[g]) + "," +
                   fmt_double(rec.raw_lr[g]) + "\n";
        }
    }
    return out;
}

io::TensorArchive checkpoint_archive(nn::Network& net) {
    io::TensorArchive archive;
    for (const nn::Network::ParamView& view : net.params()) {
        io::TensorEntry e;
        e.name = view.name;
        e.dtype = io::Dtype::F64;
        if (view.name.ends_with(".bias")) {
            e.dims = {static_cast<std::uint32_t>(view.values.size())};
        } else {
            const std::variant<Matrix, Tensor4D> w = net.weight_view(view.group);
            if (const auto* mat = std::get_if<Matrix>(&w)) {
                e.dims = {static_cast<std::uint32_t>(mat->rows()),
                          static_cast<std::uint32_t>(mat->cols())};
            } else {
                const Tensor4D& t = std::get<Tensor4D>(w);
                e.dims = {static_cast<std::uint32_t>(t.h()), static_cast<std::uint32_t>(t.w()),
                          static_cast<std::uint32_t>(t.n_in()),
                          static_cast<std::uint32_t>(t.n_out())};
            }
        }
        e.values.assign(view.values.begin(), view.values.end());
        archive.add(std::move(e));
    }
    return archive;
}

void write_plots(const fs::path& dir, const std::vector<nn::EpochRecord>& records,
                 const std::vector<optim::LayerGroup>& groups,
                 const std::vector<double>& initial_lr) {
    std::vector<io::Series> lr_series(groups.size());
    std::vector<io::Series> metric_series(groups.size() * 3);
    std::vector<io::Series> acc_series(2);
    acc_series[0].label = "train";
    acc_series[1].label = "test";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        lr_series[g].label = groups[g].weight_ref;
        lr_series[g].points.push_back({0.0, initial_lr[g]});
        metric_series[g * 3].label = groups[g].weight_ref + " s";
        metric_series[g * 3 + 1].label = groups[g].weight_ref + " cond";
        metric_series[g * 3 + 2].label = groups[g].weight_ref + " q";
    }
    for (const nn::EpochRecord& rec : records) {
        const double x = static_cast<double>(rec.epoch);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            lr_series[g].points.push_back({x, rec.per_layer_lr[g]});
            const metrics::LayerMetrics& m = rec.probes[g].combined.metrics;
            metric_series[g * 3].points.push_back({x, m.stable_rank});
            metric_series[g * 3 + 1].points.push_back({x, m.condition});
            metric_series[g * 3 + 2].points.push_back({x, m.quality});
        }
        acc_series[0].points.push_back({x, rec.train_accuracy});
        acc_series[1].points.push_back({x, rec.test_accuracy});
    }
    io::write_text_atomic(dir / "learning_rates.svg",
                          io::render_line_chart("Per-layer learning rates", "epoch",
                                                "learning rate", lr_series));
    io::write_text_atomic(dir / "layer_metrics.svg",
                          io::render_line_chart("Per-layer probing metrics", "epoch", "value",
                                                metric_series));
    io::write_text_atomic(dir / "accuracy.svg",
                          io::render_line_chart("Accuracy", "epoch", "accuracy", acc_series));
}

// ---------------------------------------------------------------------------
// Subcommands

struct TrainCliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<double> alpha, beta, zeta, eta0;
};

int cmd_train(const fs::path& manifest_path, const fs::path& out_dir,
              const TrainCliOverrides& ovr) {
    Manifest manifest = load_manifest(manifest_path);
    if (ovr.seed) {
        manifest.network.seed = *ovr.seed;
        manifest.train.shuffle_seed = *ovr.seed + 1000003ULL;
    }
    if (ovr.threads) manifest.train.threads = *ovr.threads;
    if (ovr.alpha) manifest.train.hyper.alpha = *ovr.alpha;
    if (ovr.beta) manifest.train.hyper.beta = *ovr.beta;
    if (ovr.zeta) manifest.train.hyper.zeta = *ovr.zeta;
    if (ovr.eta0) manifest.train.hyper.eta0 = *ovr.eta0;

    fs::create_directories(out_dir);
    log::info("training experiment " + manifest.id);
    nn::TrainResult result = nn::train(manifest.network, manifest.train);
    const std::vector<optim::LayerGroup> groups = result.network.layer_groups();

    io::write_text_atomic(out_dir / "metrics.csv", render_metrics_csv(result.records, groups));
    io::write_text_atomic(out_dir / "lr_trajectory.csv",
                          render_lr_csv(result.records, groups, result.initial_lr));
    io::write_archive(checkpoint_archive(result.network), out_dir / "checkpoint.rptk");
    write_plots(out_dir, result.records, groups, result.initial_lr);

    const nn::EpochRecord& last = result.records.back();
    std::printf("experiment %s: %zu epochs, final train acc %.4f, test acc %.4f, Q %.6f, "
                "lr clamps %zu\n",
                manifest.id.c_str(), manifest.train.epochs, last.train_accuracy,
                last.test_accuracy, last.quality.network_quality, result.clamp_count);
    return 0;
}

int cmd_analyze(const fs::path& checkpoint, const std::string& filter, const fs::path& out_csv) {
    const io::TensorArchive archive = io::read_archive(checkpoint);

    struct Row {
        std::string name;
        std::string dims;
        metrics::ModeMetrics mm;
    };
    std::vector<Row> rows;
    for (const io::TensorEntry& e : archive.entries) {
        if (!filter.empty() && !match_glob(filter, e.name)) continue;
        if (e.dims.size() != 2 && e.dims.size() != 4) continue;
        std::string dims;
        for (std::size_t i = 0; i < e.dims.size(); ++i) {
            if (i > 0) dims += "x";
            dims += std::to_string(e.dims[i]);
        }
        try {
            metrics::ProbeOptions opts;
            opts.layer_index = rows.size() + 1;
            metrics::LayerProbe probe;
            if (e.dims.size() == 2) {
                probe = metrics::measure_layer(Matrix(e.dims[0], e.dims[1], e.values), opts);
            } else {
                probe = metrics::measure_layer(
                    Tensor4D(e.dims[0], e.dims[1], e.dims[2], e.dims[3], e.values), opts);
            }
            rows.push_back(Row{e.name, dims, probe.combined});
        } catch (const UnmeasurableLayer& ex) {
            log::warn("skipping " + e.name + ": " + ex.what());
        }
    }
    if (rows.empty()) {
        std::fprintf(stderr, "probe analyze: no probe-able tensors in %s\n",
                     checkpoint.string().c_str());
        return kExitNoTensors;
    }

    std::string out = "name,dims,estimated_rank,noise_variance,stable_rank,condition,quality\n";
    std::vector<double> q;
    for (const Row& r : rows) {
        out += r.name + "," + r.dims + "," + std::to_string(r.mm.metrics.estimated_rank) + "," +
               fmt_double(r.mm.noise_variance) + "," + fmt_double(r.mm.metrics.stable_rank) +
               "," + fmt_double(r.mm.metrics.condition) + "," +
               fmt_double(r.mm.metrics.quality) + "\n";
        q.push_back(r.mm.metrics.quality);
    }
    out += "NETWORK,,,,,," + fmt_double(metrics::network_quality(q)) + "\n";
    io::write_text_atomic(out_csv, out);
    std::printf("analyzed %zu tensors from %s -> %s\n", rows.size(), checkpoint.string().c_str(),
                out_csv.string().c_str());
    return 0;
}

int cmd_correlate(const fs::path& table_path) {
    std::vector<std::vector<std::string>> rows;
    try {
        rows = io::read_csv(table_path);
    } catch (const MalformedCsv& e) {
        std::fprintf(stderr, "probe correlate: %s\n", e.what());
        return kExitBadTable;
    }
    if (rows.empty() || rows.front() !=
                            std::vector<std::string>{"group", "q_metric", "test_acc", "gen_gap"}) {
        std::fprintf(stderr, "probe correlate: expected header group,q_metric,test_acc,gen_gap\n");
        return kExitBadTable;
    }
    struct GroupData {
        std::vector<double> q, acc, gap;
    };
    std::map<std::string, GroupData> groups;
    std::vector<std::string> order;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 4) {
            std::fprintf(stderr, "probe correlate: row %zu has %zu fields, expected 4\n", i + 1,
                         rows[i].size());
            return kExitBadTable;
        }
        try {
            std::size_t pos = 0;
            const double q = std::stod(rows[i][1], &pos);
            if (pos != rows[i][1].size()) throw std::invalid_argument("q");
            const double acc = std::stod(rows[i][2], &pos);
            if (pos != rows[i][2].size()) throw std::invalid_argument("acc");
            const double gap = std::stod(rows[i][3], &pos);
            if (pos != rows[i][3].size()) throw std::invalid_argument("gap");
            if (groups.find(rows[i][0]) == groups.end()) order.push_back(rows[i][0]);
            GroupData& g = groups[rows[i][0]];
            g.q.push_back(q);
            g.acc.push_back(acc);
            g.gap.push_back(gap);
        } catch (const std::exception&) {
            std::fprintf(stderr, "probe correlate: non-numeric value in row %zu\n", i + 1);
            return kExitBadTable;
        }
    }
    if (groups.empty()) {
        std::fprintf(stderr, "probe correlate: no data rows\n");
        return kExitBadTable;
    }
    std::printf("group,plcc_gen_gap,plcc_test_acc,rocc_gen_gap,rocc_test_acc\n");
    for (const std::string& name : order) {
        const GroupData& g = groups.at(name);
        if (g.q.size() < 3) {
            std::fprintf(stderr, "probe correlate: group %s has fewer than 3 rows\n", name.c_str());
            return kExitBadTable;
        }
        try {
            const double plcc_gap = 100.0 * metrics::pearson(g.q, g.gap);
            const double plcc_acc = 100.0 * metrics::pearson(g.q, g.acc);
            const double rocc_gap = 100.0 * metrics::spearman(g.q, g.gap);
            const double rocc_acc = 100.0 * metrics::spearman(g.q, g.acc);
            std::printf("%s,%.2f,%.2f,%.2f,%.2f\n", name.c_str(), plcc_gap, plcc_acc, rocc_gap,
                        rocc_acc);
        } catch (const ConstantInput& e) {
            std::fprintf(stderr, "probe correlate: group %s: %s\n", name.c_str(), e.what());
            return kExitBadTable;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"layer probing metrics and rank-adaptive SGD training"};
    app.require_subcommand(1);

    std::string manifest_path, out_dir;
    TrainCliOverrides ovr;
    std::uint64_t seed_val = 0;
    std::size_t threads_val = 0;
    double alpha_val = 0, beta_val = 0, zeta_val = 0, eta0_val = 0;

    CLI::App* train = app.add_subcommand("train", "run a training experiment from a manifest");
    train->add_option("--manifest", manifest_path, "experiment manifest (JSON)")->required();
    train->add_option("--out", out_dir, "output directory")->required();
    CLI::Option* o_seed = train->add_option("--seed", seed_val, "override init and shuffle seeds");
    CLI::Option* o_threads = train->add_option("--threads", threads_val, "probe fan-out threads");
    CLI::Option* o_alpha = train->add_option("--alpha", alpha_val, "override SGD momentum");
    CLI::Option* o_beta = train->add_option("--beta", beta_val, "override learning momentum");
    CLI::Option* o_zeta = train->add_option("--zeta", zeta_val, "override stable-rank gain");
    CLI::Option* o_eta0 = train->add_option("--eta0", eta0_val, "override initial step size");

    std::string checkpoint_path, filter, analyze_out;
    CLI::App* analyze = app.add_subcommand("analyze", "probe tensors in a weight checkpoint");
    analyze->add_option("--checkpoint", checkpoint_path, "tensor archive path")->required();
    analyze->add_option("--filter", filter, "glob filter on tensor names");
    analyze->add_option("--out", analyze_out, "output CSV path")->required();

    std::string table_path;
    CLI::App* correlate = app.add_subcommand("correlate", "quality vs accuracy correlations");
    correlate->add_option("--table", table_path, "CSV with group,q_metric,test_acc,gen_gap")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (train->parsed()) {
            if (o_seed->count() > 0) ovr.seed = seed_val;
            if (o_threads->count() > 0) ovr.threads = threads_val;
            if (o_alpha->count() > 0) ovr.alpha = alpha_val;
            if (o_beta->count() > 0) ovr.beta = beta_val;
            if (o_zeta->count() > 0) ovr.zeta = zeta_val;
            if (o_eta0->count() > 0) ovr.eta0 = eta0_val;
            return cmd_train(manifest_path, out_dir, ovr);
        }
        if (analyze->parsed()) return cmd_analyze(checkpoint_path, filter, analyze_out);
        if (correlate->parsed()) return cmd_correlate(table_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "probe: %s\n", e.what());
        return kExitConfig;
    } catch (const MalformedCsv& e) {
        std::fprintf(stderr, "probe: %s\n", e.what());
        return kExitConfig;
    } catch (const DivergedTraining& e) {
        std::fprintf(stderr, "probe: %s\n", e.what());
        return kExitDiverged;
    } catch (const ArchiveError& e) {
        std::fprintf(stderr, "probe: %s\n", e.what());
        return kExitArchive;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "probe: %s\n", e.what());
        return kExitConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "probe: %s\n", e.what());
        return 1;
    }
    return 0;
}
