// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/platform.hpp"
#include "core/rng.hpp"

namespace rmsim::workload {

// Deadline D (relative to arrival) plus the required probability p of
// meeting it; 1-p is the tolerated miss probability.
struct TimingRequirement {
    double deadline_s = 0.0;
    double p = 1.0 - 1e-6;
};

// Named delivery-constraint presets: "urgent-nwp" (15-minute regime) and
// "batch-nwp" (24-hour regime).
TimingRequirement preset(std::string_view name);

// Multiplicative execution-time jitter: sampled factor is (1 + draw).
struct JitterModel {
    enum class Kind { None, Exponential, Uniform };
    Kind kind = Kind::Exponential;
    double scale = 0.05; // Exponential: mean of the draw; Uniform: draw in [0, scale)

    double sample(engine::RngStream& rng) const;
    double mean() const; // expected draw
};

struct Implementation {
    platform::DeviceKind kind = platform::DeviceKind::Cpu;
    double base_time_s = 0.0; // on a speed_factor=1 device, jitter-free
    JitterModel jitter;
};

struct KernelSpec {
    std::string id;
    std::vector<Implementation> implementations; // at least one
};

struct RecipeEntry {
    std::vector<platform::DeviceKind> preferred_kinds;
    double memory_mb = 0.0;
};

// Per-kernel requirement declarations; must cover every kernel of the job.
struct Recipe {
    std::string application;
    std::map<std::string, RecipeEntry> entries; // keyed by kernel id
};

enum class JobClass { Urgent, Batch };

const char* to_string(JobClass cls);

struct Job {
    std::int64_t id = 0;
    double arrival_s = 0.0;
    std::vector<KernelSpec> kernels; // executed sequentially
    Recipe recipe;
    double t_ideal_s = 0.0; // failure-free, overhead-free time on the chosen mapping
    TimingRequirement timing;
    JobClass cls = JobClass::Batch;

    void validate() const; // recipe coverage, positive times
};

struct WorkloadTrace {
    std::vector<Job> jobs; // sorted by arrival
    double window_s = 0.0;
};

struct WorkloadParams {
    double mean_t_ideal_s = 100.0;
    double window_factor = 200.0; // window = factor x mean_t_ideal
    double arrival_rate_per_s = 0.01;
    double urgent_fraction = 0.5;
    int kernels_per_job = 1;
    JitterModel jitter; // applied to every generated implementation
    // Kinds each generated kernel provides an implementation for, with the
    // base-time speedup of that kind relative to CPU.
    std::vector<std::pair<platform::DeviceKind, double>> impl_kinds = {
        {platform::DeviceKind::Cpu, 1.0}};
    TimingRequirement urgent = preset("urgent-nwp");
    TimingRequirement batch = preset("batch-nwp");
};

// Poisson arrivals over the window, log-uniform T_ideal in [0.5, 2] x mean,
// classes assigned by the urgent fraction. Deterministic for a given stream.
WorkloadTrace generate_workload(engine::RngStream& rng, const WorkloadParams& params);

// base_time / device.speed_factor x (1 + jitter draw); the implementation
// kind must match the device kind.
double sample_exec_time(const KernelSpec& kernel, const Implementation& impl,
                        const platform::Device& device, engine::RngStream& rng);

// Jitter-free expected execution time on the device (used for mapping
// scores and T_ideal accounting).
double ideal_exec_time(const Implementation& impl, const platform::Device& device);
double mean_exec_time(const Implementation& impl, const platform::Device& device);

// CSV round trip, header: job_id,arrival_s,t_ideal_s,class,deadline_s,p
void write_csv(std::ostream& os, const WorkloadTrace& trace);
WorkloadTrace read_csv(std::istream& is);

} // namespace rmsim::workload
