// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/thermal.hpp"

using rmsim::platform::ThermalConfig;
using rmsim::platform::ThermalGrid;

namespace {

std::vector<double> random_power_map(std::uint64_t seed) {
    rmsim::engine::RngStream rng(seed, "power");
    std::vector<double> p(16);
    for (double& v : p) v = rng.uniform(0.0, 12.0);
    return p;
}

std::vector<double> mirrored_lr(const std::vector<double>& p) {
    std::vector<double> m(16);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m[r * 4 + (3 - c)] = p[r * 4 + c];
    return m;
}

} // namespace

TEST_CASE("zero power gives ambient everywhere") {
    ThermalGrid grid;
    for (double t : grid.steady_state()) CHECK(t == doctest::Approx(318.0).epsilon(1e-12));
}

TEST_CASE("uniform 12 W per cell injects 192 W and heats symmetrically") {
    ThermalGrid grid;
    std::vector<double> p(16, 12.0);
    grid.set_power_flat(p);
    CHECK(grid.total_power() == 192.0);
    const auto t = grid.steady_state();
    // 4-fold symmetry of the uniform map.
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            CHECK(t[r * 4 + c] == doctest::Approx(t[r * 4 + (3 - c)]).epsilon(1e-12));
            CHECK(t[r * 4 + c] == doctest::Approx(t[(3 - r) * 4 + c]).epsilon(1e-12));
        }
    for (double v : t) CHECK(v > 318.0);
}

TEST_CASE("mirrored power maps give mirrored temperatures") {
    ThermalGrid a, b;
    const auto p = random_power_map(3);
    a.set_power_flat(p);
    b.set_power_flat(mirrored_lr(p));
    const auto ta = a.steady_state();
    const auto tb = mirrored_lr(b.steady_state());
    for (int i = 0; i < 16; ++i)
        CHECK(std::fabs(ta[i] - tb[i]) / ta[i] < 1e-9);
}

TEST_CASE("steady state is linear in the power map") {
    ThermalGrid g1, g2, g12;
    const auto p1 = random_power_map(4);
    auto p2 = random_power_map(5);
    for (double& v : p2) v *= 0.5; // keep the sum under the per-cell cap
    auto p12 = p1;
    for (int i = 0; i < 16; ++i) p12[i] = 0.5 * p1[i] + 0.5 * p2[i];
    g1.set_power_flat(p1);
    g2.set_power_flat(p2);
    g12.set_power_flat(p12);
    const auto t1 = g1.steady_state();
    const auto t2 = g2.steady_state();
    const auto t12 = g12.steady_state();
    const double amb = 318.0;
    for (int i = 0; i < 16; ++i) {
        const double expected = 0.5 * (t1[i] - amb) + 0.5 * (t2[i] - amb);
        CHECK(std::fabs((t12[i] - amb) - expected) / (expected + 1e-12) < 1e-9);
    }
}

TEST_CASE("steady state balances injected and extracted power") {
    ThermalGrid grid;
    grid.set_power_flat(random_power_map(6));
    const auto t = grid.steady_state();
    double extracted = 0.0;
    for (double v : t) extracted += grid.config().g_vertical_w_per_k * (v - 318.0);
    CHECK(std::fabs(extracted - grid.total_power()) / grid.total_power() < 1e-6);
}

TEST_CASE("transient stepping converges to the steady state") {
    ThermalGrid grid;
    grid.set_power_flat(random_power_map(7));
    const auto target = grid.steady_state();
    for (int i = 0; i < 20000; ++i) grid.step(1e-3); // 1 kHz sampling, 20 s
    for (int i = 0; i < 16; ++i)
        CHECK(std::fabs(grid.temperatures()[i] - target[i]) < 0.01);
}

TEST_CASE("zero power at ambient is a fixed point of the update") {
    ThermalGrid grid;
    grid.step(1e-3);
    for (double t : grid.temperatures()) CHECK(t == 318.0);
}

TEST_CASE("unstable step sizes are rejected with the bound") {
    ThermalGrid grid;
    const double bound = grid.stable_dt_bound();
    CHECK(bound > 1e-3); // the 1 kHz measurement rate is within the stable range
    try {
        grid.step(bound * 1.01);
        FAIL("expected rejection");
    } catch (const rmsim::Error& e) {
        CHECK(std::string(e.what()).find("require dt <") != std::string::npos);
    }
}

TEST_CASE("per-cell power is capped") {
    ThermalGrid grid;
    CHECK_THROWS_AS(grid.set_power(0, 0, 12.5), rmsim::ConfigError);
    CHECK_THROWS_AS(grid.set_power(0, 0, -1.0), rmsim::ConfigError);
    CHECK_NOTHROW(grid.set_power(0, 0, 12.0));
}

TEST_CASE("non-positive conductances are rejected") {
    ThermalConfig cfg;
    cfg.g_vertical_w_per_k = 0.0;
    CHECK_THROWS_AS(ThermalGrid{cfg}, rmsim::ConfigError);
}
