// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace rmsim::engine {

// Deterministic random stream identified by (seed, stream id). Streams with
// different ids are independent, so consumers (fault injection, workload
// generation, prediction noise) never perturb each other's draw sequences.
//
// All distributions are implemented on top of the raw 64-bit generator
// instead of <random>'s distribution adaptors, whose output is
// implementation-defined; this keeps traces bit-reproducible across
// platforms and standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view stream_id);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    // Uniform on [a, b).
    double uniform(double a, double b);

    // Uniform on [-1, 1).
    double uniform_signed();

    // Exponential with the given mean (mean > 0).
    double exponential(double mean);

    const std::string& stream_id() const { return stream_id_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::string stream_id_;
    std::mt19937_64 gen_;
};

// Stable 64-bit hash used to derive per-stream seeds from labels.
std::uint64_t hash_stream_id(std::string_view id);

} // namespace rmsim::engine
