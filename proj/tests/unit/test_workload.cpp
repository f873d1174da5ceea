// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/workload.hpp"

using namespace rmsim::workload;
using rmsim::engine::RngStream;

TEST_CASE("window spans window_factor x mean ideal time") {
    RngStream rng(1, "workload");
    WorkloadParams params;
    params.window_factor = 200.0;
    params.mean_t_ideal_s = 100.0;
    const WorkloadTrace trace = generate_workload(rng, params);
    CHECK(trace.window_s == 20000.0);
}

TEST_CASE("zero arrival rate gives an empty trace") {
    RngStream rng(1, "workload");
    WorkloadParams params;
    params.arrival_rate_per_s = 0.0;
    CHECK(generate_workload(rng, params).jobs.empty());
}

TEST_CASE("inter-arrival times average to 1/rate") {
    RngStream rng(2, "workload");
    WorkloadParams params;
    params.arrival_rate_per_s = 1.0; // ~20000 arrivals over the window
    const WorkloadTrace trace = generate_workload(rng, params);
    REQUIRE(trace.jobs.size() > 10000);
    double prev = 0.0, sum = 0.0;
    for (const Job& job : trace.jobs) {
        sum += job.arrival_s - prev;
        prev = job.arrival_s;
    }
    const double mean_gap = sum / static_cast<double>(trace.jobs.size());
    CHECK(std::fabs(mean_gap - 1.0) < 0.05);
}

TEST_CASE("generated jobs respect the documented ranges") {
    RngStream rng(3, "workload");
    WorkloadParams params;
    const WorkloadTrace trace = generate_workload(rng, params);
    REQUIRE(!trace.jobs.empty());
    for (const Job& job : trace.jobs) {
        CHECK(job.t_ideal_s >= 0.5 * params.mean_t_ideal_s);
        CHECK(job.t_ideal_s <= 2.0 * params.mean_t_ideal_s);
        CHECK(job.arrival_s >= 0.0);
        CHECK(job.arrival_s <= trace.window_s);
        for (const KernelSpec& k : job.kernels)
            CHECK(job.recipe.entries.count(k.id) == 1);
    }
}

TEST_CASE("same seed regenerates the identical trace") {
    WorkloadParams params;
    RngStream a(4, "workload"), b(4, "workload");
    std::ostringstream csv_a, csv_b;
    write_csv(csv_a, generate_workload(a, params));
    write_csv(csv_b, generate_workload(b, params));
    CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("workload csv round-trips") {
    WorkloadParams params;
    RngStream rng(5, "workload");
    const WorkloadTrace trace = generate_workload(rng, params);
    std::stringstream io;
    write_csv(io, trace);
    const WorkloadTrace back = read_csv(io);
    REQUIRE(back.jobs.size() == trace.jobs.size());
    for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
        CHECK(back.jobs[i].id == trace.jobs[i].id);
        CHECK(back.jobs[i].arrival_s == trace.jobs[i].arrival_s);
        CHECK(back.jobs[i].t_ideal_s == trace.jobs[i].t_ideal_s);
        CHECK(back.jobs[i].cls == trace.jobs[i].cls);
    }
}

TEST_CASE("execution time scales with device speed") {
    KernelSpec kernel{"k0", {}};
    Implementation impl;
    impl.kind = rmsim::platform::DeviceKind::Gpu;
    impl.base_time_s = 10.0;
    impl.jitter.kind = JitterModel::Kind::None;
    rmsim::platform::Device dev;
    dev.kind = rmsim::platform::DeviceKind::Gpu;
    dev.speed_factor = 2.0;
    RngStream rng(6, "jitter");
    CHECK(sample_exec_time(kernel, impl, dev, rng) == 5.0);
    // Zero-jitter draws are all identical.
    CHECK(sample_exec_time(kernel, impl, dev, rng) == 5.0);
}

TEST_CASE("kind mismatch is rejected") {
    KernelSpec kernel{"k0", {}};
    Implementation impl;
    impl.kind = rmsim::platform::DeviceKind::Fpga;
    impl.base_time_s = 10.0;
    rmsim::platform::Device dev; // CPU
    RngStream rng(6, "jitter");
    CHECK_THROWS_AS(sample_exec_time(kernel, impl, dev, rng), rmsim::Error);
}

TEST_CASE("exponential jitter inflates the mean by its scale") {
    KernelSpec kernel{"k0", {}};
    Implementation impl;
    impl.kind = rmsim::platform::DeviceKind::Cpu;
    impl.base_time_s = 10.0;
    impl.jitter.kind = JitterModel::Kind::Exponential;
    impl.jitter.scale = 0.05;
    rmsim::platform::Device dev; // speed 1 reference
    RngStream rng(7, "jitter");
    double sum = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const double t = sample_exec_time(kernel, impl, dev, rng);
        CHECK(t > 0.0);
        sum += t;
    }
    CHECK(std::fabs(sum / n - 10.0 * 1.05) / (10.0 * 1.05) < 0.03);
}

TEST_CASE("timing presets") {
    CHECK(preset("urgent-nwp").deadline_s == 900.0);
    CHECK(preset("batch-nwp").deadline_s == 86400.0);
    CHECK(preset("urgent-nwp").p == 1.0 - 1e-6);
    CHECK_THROWS_AS(preset("foo"), rmsim::ConfigError);
}
