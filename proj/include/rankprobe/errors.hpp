// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rankprobe {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative SVD kernel failed to converge; the layer is unmeasurable this epoch.
class NonConvergence final : public Error {
public:
    using Error::Error;
};

/// Matrix too small for the factorization threshold formulas (min dim < 2).
class DegenerateInput final : public Error {
public:
    using Error::Error;
};

/// Condition number requested on an empty factorization (rank 0).
class EmptyFactorization final : public Error {
public:
    using Error::Error;
};

/// Correlation of a constant vector is undefined.
class ConstantInput final : public Error {
public:
    using Error::Error;
};

/// Network quality of an empty layer list is undefined.
class EmptyNetwork final : public Error {
public:
    using Error::Error;
};

/// A layer could not be probed; wraps the underlying cause message.
class UnmeasurableLayer final : public Error {
public:
    using Error::Error;
};

/// A gradient contained NaN/Inf; the epoch is aborted.
class NonFiniteGradient final : public Error {
public:
    using Error::Error;
};

/// Stable-rank vector length does not match the optimizer's layer groups.
class LayerCountMismatch final : public Error {
public:
    using Error::Error;
};

/// The trace expression in the step-size lower bound has a vanishing denominator.
class DegenerateDenominator final : public Error {
public:
    using Error::Error;
};

/// Training loss became non-finite.
class DivergedTraining final : public Error {
public:
    using Error::Error;
};

/// CSV input could not be parsed; carries the 1-based line number.
class MalformedCsv final : public Error {
public:
    MalformedCsv(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Tensor archive is unreadable: bad magic, truncated payload, or checksum mismatch.
class ArchiveError final : public Error {
public:
    using Error::Error;
};

/// Invalid network spec, train config, or experiment manifest.
class ConfigError final : public Error {
public:
    using Error::Error;
};

}  // namespace rankprobe
