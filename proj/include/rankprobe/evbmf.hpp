// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "rankprobe/matrix.hpp"

namespace rankprobe::evbmf {

/// Result of splitting a weight matrix into a low-rank signal plus noise.
/// `retained_singular_values` are the shrunk singular values of the signal
/// component, descending and strictly positive; `estimated_rank` equals their
/// count and may be zero (purely-noise matrix, empty signal).
struct FactorizedLayer {
    std::vector<double> retained_singular_values;
    std::size_t estimated_rank = 0;
    double noise_variance = 0.0;
    std::size_t n = 0;  // smaller matrix dimension
    std::size_t m = 0;  // larger matrix dimension
};

/// Variational Bayesian factorization with internally estimated noise
/// variance. Orientation (n <= m) is normalized internally, so the transpose
/// of a matrix factorizes identically. If the analytic threshold would retain
/// all n singular values, the rank is capped at n-1 and a diagnostic logged.
/// Throws DegenerateInput when min(m, n) < 2.
FactorizedLayer factorize(const Matrix& w);

/// Same retention/shrinkage rule at a caller-supplied noise variance.
/// With noise_variance == 0 this degenerates to the raw SVD spectrum
/// (numerically-zero values dropped, no shrinkage, no rank cap).
FactorizedLayer factorize_with_variance(const Matrix& w, double noise_variance);

/// The noise variance minimizing the variational objective, located by
/// golden-section search over brackets derived from the squared singular
/// values. Zero matrix yields 0. Throws DegenerateInput when min(m, n) < 2.
double estimate_noise_variance(const Matrix& w);

}  // namespace rankprobe::evbmf
