// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Statistical behavior of the checkpoint policies under replicated
// workloads: orderings, monotonicity and calibration. These run on a
// scaled-down scenario; the acceptance suite re-runs them at full scale.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/reliability.hpp"

using namespace rmsim::reliability;

namespace {

Scenario small_scenario() {
    Scenario sc;
    sc.arrival_rate_per_s = 0.004; // ~80 jobs per replica
    sc.replicas = 10;
    sc.seed = 99;
    return sc;
}

} // namespace

TEST_CASE("zero failure rate means zero overhead (bracket floor)") {
    CHECK(median_overhead(small_scenario(), RestartOnly{}, 0.0, 0.0) == 0.0);
}

TEST_CASE("median restart-only overhead is non-decreasing in the failure rate") {
    const Scenario sc = small_scenario();
    const double rates[] = {1e-4, 5e-4, 2e-3, 8e-3, 3e-2};
    double prev = -1.0;
    for (double rate : rates) {
        const double o = median_overhead(sc, RestartOnly{}, rate, 0.0);
        CHECK(o >= prev);
        prev = o;
    }
}

TEST_CASE("calibration lands in the target band and reproduces itself") {
    const Scenario sc = small_scenario();
    const CalibrationResult cal = calibrate_failure_rate(sc);
    CHECK(cal.median_overhead >= 0.95);
    CHECK(cal.median_overhead <= 1.05);
    CHECK(cal.rate_per_s >= 1e-8);
    CHECK(cal.rate_per_s <= 1e-1);

    // Deterministic: same scenario, same result.
    const CalibrationResult again = calibrate_failure_rate(sc);
    CHECK(again.rate_per_s == cal.rate_per_s);
    CHECK(again.median_overhead == cal.median_overhead);

    // Self-consistency: fresh seeds at the calibrated rate stay near 1.
    Scenario fresh = sc;
    fresh.seed = 12345;
    const double o = median_overhead(fresh, RestartOnly{}, cal.rate_per_s, 0.0);
    CHECK(o >= 0.9);
    CHECK(o <= 1.1);
}

TEST_CASE("free restarts require a higher rate to reach unit slowdown") {
    const Scenario base = small_scenario();
    Scenario free_restart = base;
    free_restart.costs.r_min = 0.0;
    free_restart.costs.r_max = 0.0;
    const double rate_base = calibrate_failure_rate(base).rate_per_s;
    const double rate_free = calibrate_failure_rate(free_restart).rate_per_s;
    // Lost work alone must account for the slowdown, so failures must be
    // more frequent.
    CHECK(rate_free > rate_base);
}

TEST_CASE("an impossible target band raises a calibration error") {
    Scenario sc = small_scenario();
    sc.mean_t_ideal_s = 1e-3; // even the bracket ceiling barely hurts such jobs
    CHECK_THROWS_AS(calibrate_failure_rate(sc), rmsim::CalibrationError);
}

TEST_CASE("policy ordering and paired dominance at zero prediction error") {
    const Scenario sc = small_scenario();
    const double rate = calibrate_failure_rate(sc).rate_per_s;
    int chain = 0, pb_le_fr = 0;
    for (int r = 0; r < sc.replicas; ++r) {
        const double pb = run_replica(sc, PredictionBased{}, rate, 0.0, r).mean_overhead;
        const double et = run_replica(sc, ErrorTolerant{}, rate, 0.0, r).mean_overhead;
        const double fr = run_replica(sc, FixedRate{}, rate, 0.0, r).mean_overhead;
        if (pb < et && et < fr) ++chain;
        if (pb <= fr) ++pb_le_fr;
    }
    CHECK(chain >= (sc.replicas * 3) / 4);
    CHECK(pb_le_fr >= (sc.replicas * 9) / 10); // paired dominance
}

TEST_CASE("prediction-based overhead is non-decreasing in the error bound") {
    const Scenario sc = small_scenario();
    const double rate = calibrate_failure_rate(sc).rate_per_s;
    const double grid[] = {0.0, 0.01, 0.025, 0.05, 0.1};
    double prev = -1.0;
    int inversions = 0;
    for (double eps : grid) {
        const double o = median_overhead(sc, PredictionBased{}, rate, eps);
        if (o < prev - 0.02) ++inversions;
        prev = std::max(prev, o);
    }
    CHECK(inversions == 0);
}

TEST_CASE("fixed-rate ignores the prediction error entirely") {
    const Scenario sc = small_scenario();
    const double a = median_overhead(sc, FixedRate{}, 5e-3, 0.0);
    const double b = median_overhead(sc, FixedRate{}, 5e-3, 0.1);
    CHECK(a == b);
}

TEST_CASE("error-tolerant attempts at most one more checkpoint per failure interval") {
    // Single failure at varying gaps; exact predictions.
    for (double gap : {20.0, 50.0, 80.0, 95.0}) {
        rmsim::engine::RngStream rng_pb(1, "p"), rng_et(1, "p");
        std::vector<RunEvent> trace_pb, trace_et;
        const JobCosts costs{0.0175, 0.175};
        execute_job(100.0, PredictionBased{}, costs, std::vector<double>{gap}, Predictor{0.0},
                    rng_pb, {}, &trace_pb);
        execute_job(100.0, ErrorTolerant{}, costs, std::vector<double>{gap}, Predictor{0.0},
                    rng_et, {}, &trace_et);
        const auto attempts = [](const std::vector<RunEvent>& trace) {
            int n = 0;
            for (const RunEvent& e : trace)
                if (e.kind == RunEvent::Kind::CheckpointStart) ++n;
            return n;
        };
        CHECK(attempts(trace_et) <= attempts(trace_pb) + 1);
    }
}
