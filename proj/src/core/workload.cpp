// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace rmsim::workload {

TimingRequirement preset(std::string_view name) {
    if (name == "urgent-nwp") return TimingRequirement{900.0, 1.0 - 1e-6};
    if (name == "batch-nwp") return TimingRequirement{86400.0, 1.0 - 1e-6};
    throw ConfigError("unknown timing preset '" + std::string(name) +
                      "' (expected urgent-nwp|batch-nwp)");
}

double JitterModel::sample(engine::RngStream& rng) const {
    switch (kind) {
        case Kind::None: return 0.0;
        case Kind::Exponential: return rng.exponential(scale);
        case Kind::Uniform: return rng.uniform(0.0, scale);
    }
    return 0.0;
}

double JitterModel::mean() const {
    switch (kind) {
        case Kind::None: return 0.0;
        case Kind::Exponential: return scale;
        case Kind::Uniform: return 0.5 * scale;
    }
    return 0.0;
}

const char* to_string(JobClass cls) {
    return cls == JobClass::Urgent ? "urgent" : "batch";
}

void Job::validate() const {
    if (!(t_ideal_s > 0.0))
        throw ConfigError("job " + std::to_string(id) + ": T_ideal must be positive");
    if (!(timing.deadline_s > 0.0))
        throw ConfigError("job " + std::to_string(id) + ": deadline must be positive");
    if (!(timing.p > 0.0 && timing.p < 1.0))
        throw ConfigError("job " + std::to_string(id) + ": p must lie in (0,1)");
    for (const KernelSpec& k : kernels) {
        if (k.implementations.empty())
            throw ConfigError("job " + std::to_string(id) + ": kernel '" + k.id +
                              "' has no implementation");
        for (const Implementation& impl : k.implementations)
            if (!(impl.base_time_s > 0.0))
                throw ConfigError("job " + std::to_string(id) + ": kernel '" + k.id +
                                  "' has non-positive base time");
        if (recipe.entries.find(k.id) == recipe.entries.end())
            throw ConfigError("job " + std::to_string(id) + ": recipe does not cover kernel '" +
                              k.id + "'");
    }
}

WorkloadTrace generate_workload(engine::RngStream& rng, const WorkloadParams& params) {
    if (!(params.mean_t_ideal_s > 0.0) || !(params.window_factor > 0.0))
        throw ConfigError("workload: mean_t_ideal and window_factor must be positive");
    if (params.arrival_rate_per_s < 0.0)
        throw ConfigError("workload: arrival rate must be non-negative");
    if (params.urgent_fraction < 0.0 || params.urgent_fraction > 1.0)
        throw ConfigError("workload: urgent_fraction must lie in [0,1]");
    if (params.kernels_per_job < 1)
        throw ConfigError("workload: kernels_per_job must be >= 1");
    if (params.impl_kinds.empty())
        throw ConfigError("workload: at least one implementation kind required");

    WorkloadTrace trace;
    trace.window_s = params.window_factor * params.mean_t_ideal_s;

    if (params.arrival_rate_per_s == 0.0) return trace;

    const double ln_half = std::log(0.5);
    const double ln_two = std::log(2.0);

    double t = rng.exponential(1.0 / params.arrival_rate_per_s);
    std::int64_t id = 0;
    while (t <= trace.window_s) {
        Job job;
        job.id = id++;
        job.arrival_s = t;
        job.t_ideal_s = params.mean_t_ideal_s * std::exp(rng.uniform(ln_half, ln_two));
        job.cls = rng.uniform01() < params.urgent_fraction ? JobClass::Urgent : JobClass::Batch;
        job.timing = job.cls == JobClass::Urgent ? params.urgent : params.batch;
        job.recipe.application = "job" + std::to_string(job.id);

        const double share = job.t_ideal_s / static_cast<double>(params.kernels_per_job);
        for (int k = 0; k < params.kernels_per_job; ++k) {
            KernelSpec kernel;
            kernel.id = "k" + std::to_string(k);
            for (const auto& [kind, speedup] : params.impl_kinds) {
                Implementation impl;
                impl.kind = kind;
                impl.base_time_s = share / speedup;
                impl.jitter = params.jitter;
                kernel.implementations.push_back(impl);
            }
            RecipeEntry entry;
            for (const auto& [kind, speedup] : params.impl_kinds)
                entry.preferred_kinds.push_back(kind);
            job.recipe.entries[kernel.id] = std::move(entry);
            job.kernels.push_back(std::move(kernel));
        }
        job.validate();
        trace.jobs.push_back(std::move(job));
        t += rng.exponential(1.0 / params.arrival_rate_per_s);
    }
    return trace;
}

double sample_exec_time(const KernelSpec& kernel, const Implementation& impl,
                        const platform::Device& device, engine::RngStream& rng) {
    (void)kernel;
    if (impl.kind != device.kind)
        throw Error(std::string("implementation kind ") + platform::to_string(impl.kind) +
                    " does not match device kind " + platform::to_string(device.kind));
    return impl.base_time_s / device.speed_factor * (1.0 + impl.jitter.sample(rng));
}

double ideal_exec_time(const Implementation& impl, const platform::Device& device) {
    return impl.base_time_s / device.speed_factor;
}

double mean_exec_time(const Implementation& impl, const platform::Device& device) {
    return impl.base_time_s / device.speed_factor * (1.0 + impl.jitter.mean());
}

void write_csv(std::ostream& os, const WorkloadTrace& trace) {
    os << "job_id,arrival_s,t_ideal_s,class,deadline_s,p\n";
    for (const Job& job : trace.jobs) {
        os << job.id << ',' << format_double(job.arrival_s) << ','
           << format_double(job.t_ideal_s) << ',' << to_string(job.cls) << ','
           << format_double(job.timing.deadline_s) << ',' << format_double(job.timing.p) << '\n';
    }
}

WorkloadTrace read_csv(std::istream& is) {
    WorkloadTrace trace;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("workload csv: empty input");
    if (line.rfind("job_id,", 0) != 0)
        throw ConfigError("workload csv: unexpected header '" + line + "'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        Job job;
        std::getline(ls, field, ',');
        job.id = std::stoll(field);
        std::getline(ls, field, ',');
        job.arrival_s = std::stod(field);
        std::getline(ls, field, ',');
        job.t_ideal_s = std::stod(field);
        std::getline(ls, field, ',');
        job.cls = field == "urgent" ? JobClass::Urgent : JobClass::Batch;
        std::getline(ls, field, ',');
        job.timing.deadline_s = std::stod(field);
        std::getline(ls, field, ',');
        job.timing.p = std::stod(field);

        KernelSpec kernel;
        kernel.id = "k0";
        kernel.implementations.push_back(
            Implementation{platform::DeviceKind::Cpu, job.t_ideal_s, JitterModel{}});
        job.recipe.application = "job" + std::to_string(job.id);
        job.recipe.entries["k0"] = RecipeEntry{{platform::DeviceKind::Cpu}, 0.0};
        job.kernels.push_back(std::move(kernel));
        job.validate();
        trace.window_s = std::max(trace.window_s, job.arrival_s);
        trace.jobs.push_back(std::move(job));
    }
    return trace;
}

} // namespace rmsim::workload
