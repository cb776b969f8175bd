// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rankprobe/errors.hpp"
#include "rankprobe/rng.hpp"

namespace rankprobe::nn {

namespace {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
    std::size_t s = 1;
    for (std::size_t d : shape) s *= d;
    return s;
}

// Kaiming-style uniform fill: U(+-sqrt(6 / fan_in)).
void init_kaiming(std::vector<double>& w, std::size_t fan_in, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& v : w) v = rng.uniform(-bound, bound);
}

// Semi-orthogonal init on the (rows, cols) matricization via modified
// Gram-Schmidt on the shorter side of a Gaussian draw.
void init_orthogonal(std::vector<double>& w, std::size_t rows, std::size_t cols, Rng& rng) {
    for (double& v : w) v = rng.normal();
    const bool wide = cols >= rows;
    const std::size_t vecs = wide ? rows : cols;
    const std::size_t dim = wide ? cols : rows;
    auto at = [&](std::size_t v, std::size_t d) -> double& {
        return wide ? w[v * cols + d] : w[d * cols + v];
    };
    for (std::size_t i = 0; i < vecs; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += at(i, d) * at(j, d);
            for (std::size_t d = 0; d < dim; ++d) at(i, d) -= dot * at(j, d);
        }
        double norm = 0.0;
        for (std::size_t d = 0; d < dim; ++d) norm += at(i, d) * at(i, d);
        norm = std::sqrt(norm);
        if (norm < 1.0e-12) {
            for (std::size_t d = 0; d < dim; ++d) at(i, d) = rng.normal();
            --i;
            continue;
        }
        for (std::size_t d = 0; d < dim; ++d) at(i, d) /= norm;
    }
}

}  // namespace

Network::Network(const NetworkSpec& spec) {
    if (spec.layers.empty()) throw ConfigError("network.layers: must not be empty");
    if (spec.input_shape.empty()) throw ConfigError("network.input_shape: must not be empty");
    if (!std::holds_alternative<SoftmaxCrossEntropySpec>(spec.layers.back())) {
        throw ConfigError("network.layers: last layer must be the softmax cross-entropy head");
    }

    std::vector<std::size_t> shape = spec.input_shape;
    input_size_ = shape_size(shape);
    Rng rng(spec.seed);

    for (std::size_t li = 0; li + 1 < spec.layers.size(); ++li) {
        const LayerSpec& ls = spec.layers[li];
        if (std::holds_alternative<SoftmaxCrossEntropySpec>(ls)) {
            throw ConfigError("network.layers: head must be the final layer only");
        }
        if (const auto* d = std::get_if<DenseSpec>(&ls)) {
            if (d->in == 0 || d->out == 0) throw ConfigError("dense layer: in/out must be positive");
            if (shape.size() != 1 || shape[0] != d->in) {
                throw ConfigError("dense layer " + std::to_string(li) +
                                  ": input size mismatch (expected " + std::to_string(d->in) + ")");
            }
            DenseNode node;
            node.spec = *d;
            node.w.resize(d->out * d->in);
            node.b.assign(d->out, 0.0);
            node.gw.assign(node.w.size(), 0.0);
            node.gb.assign(d->out, 0.0);
            if (spec.init == InitKind::KaimingUniform) {
                init_kaiming(node.w, d->in, rng);
            } else {
                init_orthogonal(node.w, d->out, d->in, rng);
            }
            node.group = groups_.size();
            groups_.push_back(optim::LayerGroup{groups_.size() + 1,
                                                "dense" + std::to_string(groups_.size() + 1) + ".weight",
                                                {"dense" + std::to_string(groups_.size() + 1) + ".bias"}});
            group_node_.push_back(nodes_.size());
            nodes_.push_back(std::move(node));
            shape = {d->out};
        } else if (const auto* c = std::get_if<Conv2DSpec>(&ls)) {
            if (c->kh == 0 || c->kw == 0 || c->n_in == 0 || c->n_out == 0 || c->stride == 0) {
                throw ConfigError("conv layer: all dimensions and stride must be positive");
            }
            if (shape.size() != 3 || shape[0] != c->n_in) {
                throw ConfigError("conv layer " + std::to_string(li) +
                                  ": expects (channels, height, width) input with channels = " +
                                  std::to_string(c->n_in));
            }
            const std::size_t in_h = shape[1], in_w = shape[2];
            if (in_h < c->kh || in_w < c->kw) {
                throw ConfigError("conv layer " + std::to_string(li) + ": kernel larger than input");
            }
            ConvNode node;
            node.spec = *c;
            node.in_h = in_h;
            node.in_w = in_w;
            node.out_h = (in_h - c->kh) / c->stride + 1;
            node.out_w = (in_w - c->kw) / c->stride + 1;
            node.k.resize(c->kh * c->kw * c->n_in * c->n_out);
            node.b.assign(c->n_out, 0.0);
            node.gk.assign(node.k.size(), 0.0);
            node.gb.assign(c->n_out, 0.0);
            const std::size_t fan_in = c->kh * c->kw * c->n_in;
            if (spec.init == InitKind::KaimingUniform) {
                init_kaiming(node.k, fan_in, rng);
            } else {
                // Orthogonalize the (n_out, fan_in) matricization, then scatter
                // back into (kh, kw, n_in, n_out) layout.
                std::vector<double> flat(c->n_out * fan_in);
                init_orthogonal(flat, c->n_out, fan_in, rng);
                for (std::size_t co = 0; co < c->n_out; ++co) {
                    for (std::size_t f = 0; f < fan_in; ++f) {
                        node.k[f * c->n_out + co] = flat[co * fan_in + f];
                    }
                }
            }
            node.group = groups_.size();
            groups_.push_back(optim::LayerGroup{groups_.size() + 1,
                                                "conv" + std::to_string(groups_.size() + 1) + ".kernel",
                                                {"conv" + std::to_string(groups_.size() + 1) + ".bias"}});
            group_node_.push_back(nodes_.size());
            nodes_.push_back(std::move(node));
            shape = {c->n_out, node.out_h, node.out_w};
        } else if (const auto* a = std::get_if<ActivationSpec>(&ls)) {
            nodes_.push_back(ActNode{a->kind});
        } else if (std::holds_alternative<FlattenSpec>(ls)) {
            nodes_.push_back(FlattenNode{});
            shape = {shape_size(shape)};
        }
    }

    if (groups_.empty()) throw ConfigError("network.layers: need at least one weight-bearing layer");
    if (shape.size() != 1 || shape[0] < 2) {
        throw ConfigError("network.layers: head expects a flat logit vector of >= 2 classes");
    }
    num_classes_ = shape[0];
}

std::size_t Network::num_params() const {
    std::size_t n = 0;
    for (const Node& node : nodes_) {
        if (const auto* d = std::get_if<DenseNode>(&node)) {
            n += d->w.size() + d->b.size();
        } else if (const auto* c = std::get_if<ConvNode>(&node)) {
            n += c->k.size() + c->b.size();
        }
    }
    return n;
}

void Network::forward_pass(std::span<const double> x, std::size_t batch,
                           std::vector<std::vector<double>>& acts) const {
    acts.clear();
    acts.reserve(nodes_.size() + 1);
    acts.emplace_back(x.begin(), x.end());
    for (std::size_t ni = 0; ni < nodes_.size(); ++ni) {
        const std::vector<double>& in = acts.back();
        std::vector<double> out;
        if (const auto* d = std::get_if<DenseNode>(&nodes_[ni])) {
            out.assign(batch * d->spec.out, 0.0);
            for (std::size_t s = 0; s < batch; ++s) {
                const double* xi = in.data() + s * d->spec.in;
                double* yo = out.data() + s * d->spec.out;
                for (std::size_t o = 0; o < d->spec.out; ++o) {
                    const double* wr = d->w.data() + o * d->spec.in;
                    double acc = d->b[o];
                    for (std::size_t i = 0; i < d->spec.in; ++i) acc += wr[i] * xi[i];
                    yo[o] = acc;
                }
            }
        } else if (const auto* c = std::get_if<ConvNode>(&nodes_[ni])) {
            const Conv2DSpec& cs = c->spec;
            const std::size_t in_sz = cs.n_in * c->in_h * c->in_w;
            const std::size_t out_sz = cs.n_out * c->out_h * c->out_w;
            out.assign(batch * out_sz, 0.0);
            for (std::size_t s = 0; s < batch; ++s) {
                const double* xi = in.data() + s * in_sz;
                double* yo = out.data() + s * out_sz;
                for (std::size_t co = 0; co < cs.n_out; ++co) {
                    for (std::size_t oi = 0; oi < c->out_h; ++oi) {
                        for (std::size_t oj = 0; oj < c->out_w; ++oj) {
                            double acc = c->b[co];
                            for (std::size_t a = 0; a < cs.kh; ++a) {
                                for (std::size_t bb = 0; bb < cs.kw; ++bb) {
                                    for (std::size_t ci = 0; ci < cs.n_in; ++ci) {
                                        const double xv =
                                            xi[(ci * c->in_h + oi * cs.stride + a) * c->in_w +
                                               oj * cs.stride + bb];
                                        acc += xv * c->k[((a * cs.kw + bb) * cs.n_in + ci) * cs.n_out + co];
                                    }
                                }
                            }
                            yo[(co * c->out_h + oi) * c->out_w + oj] = acc;
                        }
                    }
                }
            }
        } else if (const auto* act = std::get_if<ActNode>(&nodes_[ni])) {
            out = in;
            if (act->kind == ActKind::ReLU) {
                for (double& v : out) v = v > 0.0 ? v : 0.0;
            } else {
                for (double& v : out) v = std::tanh(v);
            }
        } else {
            out = in;  // flatten: layout already contiguous
        }
        acts.push_back(std::move(out));
    }
}

void Network::softmax_rows(std::vector<double>& logits, std::size_t batch) const {
    for (std::size_t s = 0; s < batch; ++s) {
        double* row = logits.data() + s * num_classes_;
        double mx = row[0];
        for (std::size_t c = 1; c < num_classes_; ++c) mx = std::max(mx, row[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < num_classes_; ++c) {
            row[c] = std::exp(row[c] - mx);
            sum += row[c];
        }
        for (std::size_t c = 0; c < num_classes_; ++c) row[c] /= sum;
    }
}

double Network::forward_backward(std::span<const double> x, std::size_t batch,
                                 std::span<const int> labels) {
    std::vector<std::vector<double>> acts;
    forward_pass(x, batch, acts);

    std::vector<double> probs = acts.back();
    softmax_rows(probs, batch);
    double loss = 0.0;
    for (std::size_t s = 0; s < batch; ++s) {
        loss -= std::log(std::max(probs[s * num_classes_ + labels[s]], 1.0e-300));
    }
    loss /= static_cast<double>(batch);

    // dL/dlogits = (p - onehot) / batch
    std::vector<double> delta = std::move(probs);
    for (std::size_t s = 0; s < batch; ++s) {
        for (std::size_t c = 0; c < num_classes_; ++c) {
            delta[s * num_classes_ + c] =
                (delta[s * num_classes_ + c] - (static_cast<int>(c) == labels[s] ? 1.0 : 0.0)) /
                static_cast<double>(batch);
        }
    }

    for (std::size_t ni = nodes_.size(); ni-- > 0;) {
        const std::vector<double>& in = acts[ni];
        const std::vector<double>& out = acts[ni + 1];
        if (auto* d = std::get_if<DenseNode>(&nodes_[ni])) {
            std::fill(d->gw.begin(), d->gw.end(), 0.0);
            std::fill(d->gb.begin(), d->gb.end(), 0.0);
            std::vector<double> dx(batch * d->spec.in, 0.0);
            for (std::size_t s = 0; s < batch; ++s) {
                const double* xi = in.data() + s * d->spec.in;
                const double* dl = delta.data() + s * d->spec.out;
                double* dxi = dx.data() + s * d->spec.in;
                for (std::size_t o = 0; o < d->spec.out; ++o) {
                    const double dv = dl[o];
                    d->gb[o] += dv;
                    double* gwr = d->gw.data() + o * d->spec.in;
                    const double* wr = d->w.data() + o * d->spec.in;
                    for (std::size_t i = 0; i < d->spec.in; ++i) {
                        gwr[i] += dv * xi[i];
                        dxi[i] += dv * wr[i];
                    }
                }
            }
            delta = std::move(dx);
        } else if (auto* c = std::get_if<ConvNode>(&nodes_[ni])) {
            const Conv2DSpec& cs = c->spec;
            std::fill(c->gk.begin(), c->gk.end(), 0.0);
            std::fill(c->gb.begin(), c->gb.end(), 0.0);
            const std::size_t in_sz = cs.n_in * c->in_h * c->in_w;
            const std::size_t out_sz = cs.n_out * c->out_h * c->out_w;
            std::vector<double> dx(batch * in_sz, 0.0);
            for (std::size_t s = 0; s < batch; ++s) {
                const double* xi = in.data() + s * in_sz;
                const double* dl = delta.data() + s * out_sz;
                double* dxi = dx.data() + s * in_sz;
                for (std::size_t co = 0; co < cs.n_out; ++co) {
                    for (std::size_t oi = 0; oi < c->out_h; ++oi) {
                        for (std::size_t oj = 0; oj < c->out_w; ++oj) {
                            const double dv = dl[(co * c->out_h + oi) * c->out_w + oj];
                            c->gb[co] += dv;
                            for (std::size_t a = 0; a < cs.kh; ++a) {
                                for (std::size_t bb = 0; bb < cs.kw; ++bb) {
                                    for (std::size_t ci = 0; ci < cs.n_in; ++ci) {
                                        const std::size_t xidx =
                                            (ci * c->in_h + oi * cs.stride + a) * c->in_w +
                                            oj * cs.stride + bb;
                                        const std::size_t kidx =
                                            ((a * cs.kw + bb) * cs.n_in + ci) * cs.n_out + co;
                                        c->gk[kidx] += dv * xi[xidx];
                                        dxi[xidx] += dv * c->k[kidx];
                                    }
                                }
                            }
                        }
                    }
                }
            }
            delta = std::move(dx);
        } else if (const auto* act = std::get_if<ActNode>(&nodes_[ni])) {
            if (act->kind == ActKind::ReLU) {
                for (std::size_t i = 0; i < delta.size(); ++i) {
                    if (in[i] <= 0.0) delta[i] = 0.0;
                }
            } else {
                for (std::size_t i = 0; i < delta.size(); ++i) {
                    delta[i] *= 1.0 - out[i] * out[i];
                }
            }
        }
        // flatten: gradient passes through unchanged
    }
    return loss;
}

double Network::loss_only(std::span<const double> x, std::size_t batch,
                          std::span<const int> labels) const {
    std::vector<std::vector<double>> acts;
    forward_pass(x, batch, acts);
    std::vector<double> probs = acts.back();
    softmax_rows(probs, batch);
    double loss = 0.0;
    for (std::size_t s = 0; s < batch; ++s) {
        loss -= std::log(std::max(probs[s * num_classes_ + labels[s]], 1.0e-300));
    }
    return loss / static_cast<double>(batch);
}

std::vector<int> Network::predict(std::span<const double> x, std::size_t batch) const {
    std::vector<std::vector<double>> acts;
    forward_pass(x, batch, acts);
    const std::vector<double>& logits = acts.back();
    std::vector<int> out(batch);
    for (std::size_t s = 0; s < batch; ++s) {
        const double* row = logits.data() + s * num_classes_;
        std::size_t best = 0;
        for (std::size_t c = 1; c < num_classes_; ++c) {
            if (row[c] > row[best]) best = c;
        }
        out[s] = static_cast<int>(best);
    }
    return out;
}

std::vector<Network::ParamView> Network::params() {
    std::vector<ParamView> out;
    for (Node& node : nodes_) {
        if (auto* d = std::get_if<DenseNode>(&node)) {
            const std::string base = "dense" + std::to_string(d->group + 1);
            out.push_back(ParamView{base + ".weight", d->w, d->gw, d->group});
            out.push_back(ParamView{base + ".bias", d->b, d->gb, d->group});
        } else if (auto* c = std::get_if<ConvNode>(&node)) {
            const std::string base = "conv" + std::to_string(c->group + 1);
            out.push_back(ParamView{base + ".kernel", c->k, c->gk, c->group});
            out.push_back(ParamView{base + ".bias", c->b, c->gb, c->group});
        }
    }
    return out;
}

std::vector<optim::ParamSpec> Network::param_specs() const {
    std::vector<optim::ParamSpec> out;
    for (const Node& node : nodes_) {
        if (const auto* d = std::get_if<DenseNode>(&node)) {
            out.push_back(optim::ParamSpec{d->w.size(), d->group});
            out.push_back(optim::ParamSpec{d->b.size(), d->group});
        } else if (const auto* c = std::get_if<ConvNode>(&node)) {
            out.push_back(optim::ParamSpec{c->k.size(), c->group});
            out.push_back(optim::ParamSpec{c->b.size(), c->group});
        }
    }
    return out;
}

std::variant<Matrix, Tensor4D> Network::weight_view(std::size_t group) const {
    if (group >= group_node_.size()) throw std::out_of_range("weight_view: bad group");
    const Node& node = nodes_[group_node_[group]];
    if (const auto* d = std::get_if<DenseNode>(&node)) {
        return Matrix(d->spec.out, d->spec.in, d->w);
    }
    const auto& c = std::get<ConvNode>(node);
    return Tensor4D(c.spec.kh, c.spec.kw, c.spec.n_in, c.spec.n_out, c.k);
}

void Network::set_weights(std::size_t group, std::span<const double> weight,
                          std::span<const double> bias) {
    if (group >= group_node_.size()) throw std::out_of_range("set_weights: bad group");
    Node& node = nodes_[group_node_[group]];
    if (auto* d = std::get_if<DenseNode>(&node)) {
        if (weight.size() != d->w.size() || bias.size() != d->b.size()) {
            throw std::invalid_argument("set_weights: size mismatch");
        }
        std::copy(weight.begin(), weight.end(), d->w.begin());
        std::copy(bias.begin(), bias.end(), d->b.begin());
        return;
    }
    auto& c = std::get<ConvNode>(node);
    if (weight.size() != c.k.size() || bias.size() != c.b.size()) {
        throw std::invalid_argument("set_weights: size mismatch");
    }
    std::copy(weight.begin(), weight.end(), c.k.begin());
    std::copy(bias.begin(), bias.end(), c.b.begin());
}

}  // namespace rankprobe::nn
