// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "rankprobe/matrix.hpp"

namespace rankprobe {

/// Thin SVD of an m x n matrix: singular values descending, left vectors
/// m x k, right vectors n x k with k = min(m, n), so that
/// input = U * diag(sigma) * V^T.
struct SvdResult {
    std::vector<double> singular_values;
    Matrix left_vectors;
    Matrix right_vectors;
};

/// One-sided Jacobi SVD. Deterministic for a fixed input; throws
/// NonConvergence if the rotation sweeps do not settle.
SvdResult svd(const Matrix& m);

/// Singular values only (same kernel, skips assembling the vector matrices).
std::vector<double> singular_values(const Matrix& m);

}  // namespace rankprobe
