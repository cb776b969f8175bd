// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rankprobe {

/// Dense row-major matrix of 64-bit floats. Construction rejects NaN/Inf
/// entries and size mismatches; all metric math runs in doubles even when
/// checkpoints store 32-bit values.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transposed() const;

    /// Returns this matrix if rows >= cols, otherwise its transpose, so the
    /// n <= m orientation holds for every downstream consumer.
    Matrix oriented() const;

    double frobenius_norm() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// 4-D convolution weight tensor, shape (h, w, n_in, n_out), row-major.
class Tensor4D {
public:
    Tensor4D(std::size_t h, std::size_t w, std::size_t n_in, std::size_t n_out);
    Tensor4D(std::size_t h, std::size_t w, std::size_t n_in, std::size_t n_out,
             std::vector<double> data);

    std::size_t h() const { return h_; }
    std::size_t w() const { return w_; }
    std::size_t n_in() const { return n_in_; }
    std::size_t n_out() const { return n_out_; }
    std::size_t size() const { return data_.size(); }

    double& at(std::size_t i, std::size_t j, std::size_t ci, std::size_t co) {
        return data_[((i * w_ + j) * n_in_ + ci) * n_out_ + co];
    }
    double at(std::size_t i, std::size_t j, std::size_t ci, std::size_t co) const {
        return data_[((i * w_ + j) * n_in_ + ci) * n_out_ + co];
    }

    std::span<const double> data() const { return data_; }

    double frobenius_norm() const;

private:
    std::size_t h_;
    std::size_t w_;
    std::size_t n_in_;
    std::size_t n_out_;
    std::vector<double> data_;
};

/// Unfolding axis for a 4-D convolution tensor: collapse onto the input
/// channels (mode-3) or onto the output channels (mode-4).
enum class UnfoldMode { InputChannel, OutputChannel };

/// Matricizes a 4-D tensor along the chosen channel axis and transposes the
/// result if needed so that rows >= cols.
Matrix unfold(const Tensor4D& t, UnfoldMode mode);

}  // namespace rankprobe
