// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rmsim {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent configuration input. The message may span several
// lines, one per offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Event scheduled in the past, or a horizon before the current clock.
class CausalityError : public Error {
public:
    using Error::Error;
};

// Failure-rate calibration could not bracket or reach the target overhead.
class CalibrationError : public Error {
public:
    using Error::Error;
};

// A simulated job exceeded the non-termination guard.
class RunawayJobError : public Error {
public:
    using Error::Error;
};

// Input samples unsuitable for a tail fit (too few, non-positive, ...).
class FitError : public Error {
public:
    using Error::Error;
};

} // namespace rmsim
