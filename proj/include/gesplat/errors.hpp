// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gesplat {

// Exit codes for the CLI. 0 = success, 1 = usage (handled by the arg parser).
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitValidation = 2,
    kExitDivergence = 3,
    kExitIo = 4,
};

/// Bad dataset, config, or argument contents detected before any work starts.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Training produced NaN/Inf or emptied the cloud.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem or file-format failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A splat whose covariance is numerically unusable.
struct DegenerateSplatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (e.g. projecting a point behind
/// the near plane without culling it first).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace gesplat
