// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/rng.hpp"

using rmsim::engine::RngStream;

TEST_CASE("same (seed, stream id) reproduces the draw sequence") {
    RngStream a(42, "faults"), b(42, "faults");
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream ids are decoupled") {
    RngStream a(42, "faults"), b(42, "workload");
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("uniform01 stays in [0, 1)") {
    RngStream rng(7, "u");
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform_signed stays in [-1, 1)") {
    RngStream rng(7, "s");
    double lo = 1.0, hi = -1.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform_signed();
        CHECK(u >= -1.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < -0.9);
    CHECK(hi > 0.9);
}

TEST_CASE("exponential draws hit the requested mean") {
    RngStream rng(11, "exp");
    const double mean = 4.0;
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.exponential(mean);
    CHECK(std::fabs(sum / n - mean) / mean < 0.02);
}
