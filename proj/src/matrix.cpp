// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rankprobe/errors.hpp"

namespace rankprobe {

namespace {

void check_finite(std::span<const double> data, const char* what) {
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("Matrix: dimensions must be positive");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("Matrix: dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("Matrix: data length does not match rows*cols");
    }
    check_finite(data_, "Matrix");
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::oriented() const {
    if (cols_ > rows_) return transposed();
    return *this;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

Tensor4D::Tensor4D(std::size_t h, std::size_t w, std::size_t n_in, std::size_t n_out)
    : h_(h), w_(w), n_in_(n_in), n_out_(n_out), data_(h * w * n_in * n_out, 0.0) {
    if (h == 0 || w == 0 || n_in == 0 || n_out == 0) {
        throw std::invalid_argument("Tensor4D: dimensions must be positive");
    }
}

Tensor4D::Tensor4D(std::size_t h, std::size_t w, std::size_t n_in, std::size_t n_out,
                   std::vector<double> data)
    : h_(h), w_(w), n_in_(n_in), n_out_(n_out), data_(std::move(data)) {
    if (h == 0 || w == 0 || n_in == 0 || n_out == 0) {
        throw std::invalid_argument("Tensor4D: dimensions must be positive");
    }
    if (data_.size() != h * w * n_in * n_out) {
        throw std::invalid_argument("Tensor4D: data length does not match h*w*n_in*n_out");
    }
    check_finite(data_, "Tensor4D");
}

double Tensor4D::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

Matrix unfold(const Tensor4D& t, UnfoldMode mode) {
    const std::size_t h = t.h(), w = t.w(), ci_n = t.n_in(), co_n = t.n_out();
    if (mode == UnfoldMode::InputChannel) {
        // (h*w*n_out) x n_in; row index runs over (i, j, co).
        Matrix m(h * w * co_n, ci_n);
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < w; ++j) {
                for (std::size_t co = 0; co < co_n; ++co) {
                    const std::size_t r = (i * w + j) * co_n + co;
                    for (std::size_t ci = 0; ci < ci_n; ++ci) {
                        m(r, ci) = t.at(i, j, ci, co);
                    }
                }
            }
        }
        return m.oriented();
    }
    // (h*w*n_in) x n_out; row index runs over (i, j, ci).
    Matrix m(h * w * ci_n, co_n);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            for (std::size_t ci = 0; ci < ci_n; ++ci) {
                const std::size_t r = (i * w + j) * ci_n + ci;
                for (std::size_t co = 0; co < co_n; ++co) {
                    m(r, co) = t.at(i, j, ci, co);
                }
            }
        }
    }
    return m.oriented();
}

}  // namespace rankprobe
