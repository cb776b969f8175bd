// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rankprobe/matrix.hpp"
#include "rankprobe/optimizer.hpp"

namespace rankprobe::nn {

enum class InitKind { KaimingUniform, Orthogonal };
enum class ActKind { ReLU, Tanh };

struct DenseSpec {
    std::size_t in = 0, out = 0;
};
struct Conv2DSpec {
    std::size_t kh = 0, kw = 0, n_in = 0, n_out = 0, stride = 1;
};
struct ActivationSpec {
    ActKind kind = ActKind::ReLU;
};
struct FlattenSpec {};
struct SoftmaxCrossEntropySpec {};

using LayerSpec =
    std::variant<DenseSpec, Conv2DSpec, ActivationSpec, FlattenSpec, SoftmaxCrossEntropySpec>;

struct NetworkSpec {
    std::vector<LayerSpec> layers;  // must end with the softmax cross-entropy head
    std::vector<std::size_t> input_shape;
    std::uint64_t seed = 0;
    InitKind init = InitKind::KaimingUniform;
};

/// Feedforward network with analytic backprop for the two weight-bearing
/// layer kinds. Construction validates shape composition and initializes
/// parameters deterministically from the spec seed.
class Network {
public:
    explicit Network(const NetworkSpec& spec);

    std::size_t num_weight_layers() const { return groups_.size(); }
    std::size_t num_classes() const { return num_classes_; }
    std::size_t num_params() const;
    std::size_t input_size() const { return input_size_; }

    /// Forward + backward over a contiguous batch; fills the internal
    /// gradient buffers and returns the mean cross-entropy loss.
    double forward_backward(std::span<const double> x, std::size_t batch,
                            std::span<const int> labels);

    /// Loss without touching gradients.
    double loss_only(std::span<const double> x, std::size_t batch,
                     std::span<const int> labels) const;

    /// Argmax class predictions.
    std::vector<int> predict(std::span<const double> x, std::size_t batch) const;

    struct ParamView {
        std::string name;
        std::span<double> values;
        std::span<const double> grads;
        std::size_t group = 0;  // 0-based weight-layer group
    };
    std::vector<ParamView> params();

    std::vector<optim::ParamSpec> param_specs() const;
    std::vector<optim::LayerGroup> layer_groups() const { return groups_; }

    /// Probe view of one weight-bearing layer: Matrix for dense, Tensor4D
    /// for convolution kernels.
    std::variant<Matrix, Tensor4D> weight_view(std::size_t group) const;

    /// Replaces a weight tensor from flat data (used when restoring).
    void set_weights(std::size_t group, std::span<const double> weight,
                     std::span<const double> bias);

private:
    struct DenseNode {
        DenseSpec spec;
        std::vector<double> w, b, gw, gb;
        std::size_t group = 0;
    };
    struct ConvNode {
        Conv2DSpec spec;
        std::size_t in_h = 0, in_w = 0, out_h = 0, out_w = 0;
        std::vector<double> k, b, gk, gb;
        std::size_t group = 0;
    };
    struct ActNode {
        ActKind kind;
    };
    struct FlattenNode {};
    using Node = std::variant<DenseNode, ConvNode, ActNode, FlattenNode>;

    void forward_pass(std::span<const double> x, std::size_t batch,
                      std::vector<std::vector<double>>& acts) const;
    void softmax_rows(std::vector<double>& logits, std::size_t batch) const;

    std::vector<Node> nodes_;
    std::vector<optim::LayerGroup> groups_;
    std::vector<std::size_t> group_node_;  // group -> node index
    std::size_t input_size_ = 0;
    std::size_t num_classes_ = 0;
};

}  // namespace rankprobe::nn
