// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankprobe/errors.hpp"

namespace rankprobe {

namespace {

constexpr double kOrthTol = 1.0e-14;
constexpr int kMaxSweeps = 64;

// One-sided Jacobi on a column-major m x n buffer (m >= n). Columns of `a`
// converge to U * diag(sigma); `v` accumulates the right rotations.
void jacobi_orthogonalize(std::vector<double>& a, std::vector<double>& v,
                          std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;
    if (n < 2) return;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* cp = a.data() + p * m;
                double* cq = a.data() + q * m;
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    app += cp[k] * cp[k];
                    aqq += cq[k] * cq[k];
                    apq += cp[k] * cq[k];
                }
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= kOrthTol * std::sqrt(app) * std::sqrt(aqq)) continue;
                rotated = true;

                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;

                for (std::size_t k = 0; k < m; ++k) {
                    const double xp = cp[k], xq = cq[k];
                    cp[k] = c * xp - s * xq;
                    cq[k] = s * xp + c * xq;
                }
                double* vp = v.data() + p * n;
                double* vq = v.data() + q * n;
                for (std::size_t k = 0; k < n; ++k) {
                    const double xp = vp[k], xq = vq[k];
                    vp[k] = c * xp - s * xq;
                    vq[k] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) return;
    }
    throw NonConvergence("svd: Jacobi sweeps exceeded limit");
}

SvdResult svd_tall(const Matrix& input) {
    const std::size_t m = input.rows(), n = input.cols();
    std::vector<double> a(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[j * m + i] = input(i, j);
    }
    std::vector<double> v(n * n, 0.0);
    jacobi_orthogonalize(a, v, m, n);

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0.0;
        for (std::size_t k = 0; k < m; ++k) s2 += a[j * m + k] * a[j * m + k];
        sigma[j] = std::sqrt(s2);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult r{std::vector<double>(n), Matrix(m, n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        const double s = sigma[src];
        r.singular_values[j] = s;
        const double inv = s > 0.0 ? 1.0 / s : 0.0;
        for (std::size_t k = 0; k < m; ++k) r.left_vectors(k, j) = a[src * m + k] * inv;
        for (std::size_t k = 0; k < n; ++k) r.right_vectors(k, j) = v[src * n + k];
    }
    return r;
}

}  // namespace

SvdResult svd(const Matrix& m) {
    if (m.rows() >= m.cols()) return svd_tall(m);
    SvdResult t = svd_tall(m.transposed());
    return SvdResult{std::move(t.singular_values), std::move(t.right_vectors),
                     std::move(t.left_vectors)};
}

std::vector<double> singular_values(const Matrix& input) {
    const Matrix o = input.oriented();
    const std::size_t m = o.rows(), n = o.cols();
    std::vector<double> a(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[j * m + i] = o(i, j);
    }
    std::vector<double> v(n * n, 0.0);
    jacobi_orthogonalize(a, v, m, n);
    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0.0;
        for (std::size_t k = 0; k < m; ++k) s2 += a[j * m + k] * a[j * m + k];
        sigma[j] = std::sqrt(s2);
    }
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

}  // namespace rankprobe
