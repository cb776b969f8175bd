// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/evbmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankprobe/errors.hpp"
#include "rankprobe/log.hpp"
#include "rankprobe/svd.hpp"

namespace rankprobe::evbmf {

namespace {

// Squared singular values below this fraction of the largest are treated as
// structural zeros of the input rather than observations of noise.
constexpr double kStructuralZero = 1.0e-28;

constexpr double kSearchTolRel = 1.0e-12;

struct Problem {
    std::vector<double> s2;  // squared singular values, descending
    std::size_t L = 0;       // smaller dimension
    std::size_t M = 0;       // larger dimension
    double alpha = 0.0;      // L / M
    double tau_bar = 0.0;    // retention constant, root of log(1+t)+a*log(1+t/a)=t
    double x_bar = 0.0;      // normalized squared-singular-value threshold
};

// The positive root of f(t) = log(1+t) + alpha*log(1+t/alpha) - t. f is
// positive on (0, root) and negative beyond, so plain bisection applies.
double solve_tau_bar(double alpha) {
    auto f = [alpha](double t) { return std::log1p(t) + alpha * std::log1p(t / alpha) - t; };
    double hi = 1.0;
    while (f(hi) > 0.0) hi *= 2.0;
    double lo = hi / 2.0;
    while (f(lo) <= 0.0) lo /= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Problem make_problem(std::vector<double> sigma, std::size_t rows, std::size_t cols) {
    Problem p;
    p.L = cols;
    p.M = rows;
    p.alpha = static_cast<double>(p.L) / static_cast<double>(p.M);
    p.tau_bar = solve_tau_bar(p.alpha);
    p.x_bar = (1.0 + p.tau_bar) * (1.0 + p.alpha / p.tau_bar);
    p.s2.resize(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) p.s2[i] = sigma[i] * sigma[i];
    return p;
}

// Per-component free-energy contribution of the variational objective as a
// function of the noise variance. Components with normalized energy above
// x_bar take the retained branch; structural zeros keep only their
// log(sigma2) dependence (the infinite constant is dropped).
double objective(const Problem& p, double sigma2) {
    const double m = static_cast<double>(p.M);
    const double zero_cut = p.s2.front() * kStructuralZero;
    double obj = 0.0;
    for (double s2 : p.s2) {
        if (s2 <= zero_cut) {
            obj += std::log(sigma2);
            continue;
        }
        const double x = s2 / (m * sigma2);
        if (x <= p.x_bar) {
            obj += x - std::log(x);
        } else {
            const double d = x - (1.0 + p.alpha);
            const double tau = 0.5 * (d + std::sqrt(std::max(0.0, d * d - 4.0 * p.alpha)));
            obj += x - tau + std::log((tau + 1.0) / x) + p.alpha * std::log(tau / p.alpha + 1.0);
        }
    }
    return obj;
}

double golden_section(const Problem& p, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = objective(p, x1);
    double f2 = objective(p, x2);
    for (int i = 0; i < 300 && (b - a) > kSearchTolRel * 0.5 * (a + b); ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = objective(p, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = objective(p, x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

// Global minimum over brackets whose endpoints are the squared singular
// values rescaled two ways: by m*n (energy brackets) and by M*x_bar (the
// exact kink points of the objective, so each bracket is smooth inside).
double search_noise_variance(const Problem& p) {
    const double m = static_cast<double>(p.M);
    const double mn = static_cast<double>(p.M) * static_cast<double>(p.L);
    const double energy = [&] {
        double e = 0.0;
        for (double s2 : p.s2) e += s2;
        return e;
    }();
    const double ub = energy / mn;
    const double zero_cut = p.s2.front() * kStructuralZero;
    double smallest_pos = p.s2.front();
    for (double s2 : p.s2) {
        if (s2 > zero_cut) smallest_pos = s2;
    }
    const double lo = std::max(smallest_pos / (m * p.x_bar) * 1.0e-9,
                               std::numeric_limits<double>::min());

    std::vector<double> pts;
    pts.reserve(2 * p.s2.size() + 2);
    pts.push_back(lo);
    pts.push_back(ub);
    for (double s2 : p.s2) {
        if (s2 <= zero_cut) continue;
        pts.push_back(s2 / mn);
        pts.push_back(s2 / (m * p.x_bar));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double x) { return x < lo || x > ub; }),
              pts.end());
    if (pts.empty() || pts.front() > lo) pts.insert(pts.begin(), lo);
    if (pts.back() < ub) pts.push_back(ub);

    double best_x = ub;
    double best_f = objective(p, ub);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        if (b - a <= kSearchTolRel * 0.5 * (a + b)) continue;
        const double cand = golden_section(p, a, b);
        const double f = objective(p, cand);
        if (f < best_f) {
            best_f = f;
            best_x = cand;
        }
    }
    for (double x : pts) {
        const double f = objective(p, x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    return best_x;
}

// Posterior-mean shrinkage of a retained singular value.
double shrink(double s, double sigma2, double L, double M) {
    const double s2 = s * s;
    const double c = (L + M) * sigma2 / s2;
    const double disc = std::max(0.0, (1.0 - c) * (1.0 - c) - 4.0 * L * M * sigma2 * sigma2 / (s2 * s2));
    const double d = 0.5 * s * (1.0 - c + std::sqrt(disc));
    return std::min(d, s);
}

struct OrientedSpectrum {
    std::vector<double> sigma;
    std::size_t rows = 0;  // larger dim
    std::size_t cols = 0;  // smaller dim
};

OrientedSpectrum oriented_spectrum(const Matrix& w) {
    if (std::min(w.rows(), w.cols()) < 2 || std::max(w.rows(), w.cols()) < 2) {
        throw DegenerateInput("factorize: both matrix dimensions must be >= 2");
    }
    const Matrix o = w.oriented();
    return OrientedSpectrum{singular_values(o), o.rows(), o.cols()};
}

FactorizedLayer retain(const OrientedSpectrum& sp, double sigma2, bool cap_full_rank) {
    FactorizedLayer out;
    out.n = sp.cols;
    out.m = sp.rows;
    out.noise_variance = sigma2;
    if (sp.sigma.empty() || sp.sigma.front() == 0.0) return out;

    double gamma_threshold;
    if (sigma2 > 0.0) {
        const double alpha = static_cast<double>(sp.cols) / static_cast<double>(sp.rows);
        const double tau_bar = solve_tau_bar(alpha);
        const double x_bar = (1.0 + tau_bar) * (1.0 + alpha / tau_bar);
        gamma_threshold = std::sqrt(static_cast<double>(sp.rows) * sigma2 * x_bar);
    } else {
        gamma_threshold = sp.sigma.front() * 1.0e-12;
    }

    std::size_t pos = 0;
    while (pos < sp.sigma.size() && sp.sigma[pos] > gamma_threshold) ++pos;
    if (cap_full_rank && pos == sp.cols) {
        log::warn("factorize: threshold retained all " + std::to_string(sp.cols) +
                  " singular values; capping rank at n-1");
        pos = sp.cols - 1;
    }

    out.retained_singular_values.reserve(pos);
    for (std::size_t i = 0; i < pos; ++i) {
        out.retained_singular_values.push_back(
            shrink(sp.sigma[i], sigma2, static_cast<double>(sp.cols), static_cast<double>(sp.rows)));
    }
    out.estimated_rank = out.retained_singular_values.size();
    return out;
}

}  // namespace

FactorizedLayer factorize(const Matrix& w) {
    OrientedSpectrum sp = oriented_spectrum(w);
    if (sp.sigma.front() == 0.0) {
        FactorizedLayer out;
        out.n = sp.cols;
        out.m = sp.rows;
        return out;
    }
    const Problem p = make_problem(sp.sigma, sp.rows, sp.cols);
    const double sigma2 = search_noise_variance(p);
    return retain(sp, sigma2, /*cap_full_rank=*/true);
}

FactorizedLayer factorize_with_variance(const Matrix& w, double noise_variance) {
    if (noise_variance < 0.0 || !std::isfinite(noise_variance)) {
        throw std::invalid_argument("factorize_with_variance: noise variance must be finite and >= 0");
    }
    OrientedSpectrum sp = oriented_spectrum(w);
    if (sp.sigma.front() == 0.0) {
        FactorizedLayer out;
        out.n = sp.cols;
        out.m = sp.rows;
        out.noise_variance = noise_variance;
        return out;
    }
    return retain(sp, noise_variance, /*cap_full_rank=*/false);
}

double estimate_noise_variance(const Matrix& w) {
    OrientedSpectrum sp = oriented_spectrum(w);
    if (sp.sigma.front() == 0.0) return 0.0;
    const Problem p = make_problem(sp.sigma, sp.rows, sp.cols);
    return search_noise_variance(p);
}

}  // namespace rankprobe::evbmf
