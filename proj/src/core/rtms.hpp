// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/engine.hpp"
#include "core/platform.hpp"
#include "core/pwcet.hpp"
#include "core/reliability.hpp"
#include "core/thermal.hpp"
#include "core/workload.hpp"

namespace rmsim::rtms {

struct RtmsConfig {
    // Additive mapping penalty per hop, as a fraction of the chosen
    // implementation's execution time on the device.
    double per_hop_latency_frac = 0.01;
    // Optional power-aware dispatch term: weight x mean busy power x span.
    double power_weight = 0.0;
    // Proactive dispatch penalty for nodes expected to fail mid-job,
    // mirroring the restore cost fraction.
    double failure_penalty_frac = 0.175;
    // Monte-Carlo samples behind each admission tail fit.
    std::size_t admission_samples = 1000;
};

// --- Global manager: coarse-grained node selection ---------------------------

struct NodeDispatchInfo {
    std::int64_t node = 0;
    double committed_load_s = 0.0;
    std::optional<double> predicted_next_failure; // absolute sim time
    bool down = false;
};

// Jitter-free lower bound on the job's execution time anywhere in the
// system (best implementation on the fastest matching device, hops ignored).
double t_ideal_lower_bound(const workload::Job& job, const platform::Topology& topo);

// Least-committed-work dispatch with a proactive failure-avoidance term:
// nodes whose predicted next failure falls inside [now, now + T_lb] score an
// extra failure_penalty_frac x T_lb. Ties break to the smallest node id.
// Returns nullopt when no node can serve the job (reject).
std::optional<std::int64_t> dispatch(const workload::Job& job, const platform::Topology& topo,
                                     const std::vector<NodeDispatchInfo>& nodes,
                                     const RtmsConfig& cfg, double now);

// --- Local manager: kernel-to-device mapping and admission -------------------

struct KernelAssignment {
    std::string kernel_id;
    platform::DeviceKind kind = platform::DeviceKind::Cpu;
    std::int64_t device = 0;
    double ideal_time_s = 0.0;
    double hop_penalty_s = 0.0;
};

struct MappingDecision {
    std::vector<KernelAssignment> assignments;
    double t_ideal_s = 0.0; // sum of chosen times + hop penalties
};

// Greedy per-kernel choice among free devices with a matching
// implementation: minimize sample-mean time + hop penalty. Returns nullopt
// when some kernel has no free compatible device (job queues).
std::optional<MappingDecision> map_kernels(const workload::Job& job,
                                           const platform::GlobalResourceView& view,
                                           const RtmsConfig& cfg);

// Monte-Carlo pWCET estimate of the whole job on its mapping at the
// exceedance probability 1 - job.timing.p.
pwcet::PwcetEstimate estimate_job_pwcet(const workload::Job& job, const MappingDecision& mapping,
                                        const platform::Topology& topo, const RtmsConfig& cfg,
                                        engine::RngStream& rng);

// Accept iff the pWCET at exceedance 1-p stays within the deadline.
bool admit(const workload::Job& job, const MappingDecision& mapping,
           const pwcet::PwcetEstimate& estimate);

// --- Full-cluster simulation --------------------------------------------------

struct NodeDownEvent {
    double time_s = 0.0;
    std::int64_t node = 0;
};

struct ClusterConfig {
    reliability::CheckpointPolicy policy = reliability::FixedRate{};
    double epsilon = 0.0;
    double failure_rate_per_s = 0.0; // per node, at reference temperature
    reliability::FaultModel fault;   // beta_per_k > 0 couples the thermal grid
    reliability::CostParams costs;
    RtmsConfig rtms;
    bool thermal_enabled = false;
    platform::ThermalConfig thermal;
    double thermal_period_s = 1.0;
    std::uint64_t seed = 1;
    double horizon_s = 0.0; // 0: window x 1.5
    double guard_factor = 1000.0;
    std::vector<NodeDownEvent> node_down_events;
    // Fraction of injected faults scoped to a single device (isolated and
    // failed over to a replica when one is free) instead of the whole node.
    double device_fault_fraction = 0.0;
};

enum class JobOutcome { Done, Rejected, Queued, Running, Pending };

const char* to_string(JobOutcome outcome);

struct JobRecord {
    std::int64_t job_id = 0;
    std::string policy;
    double epsilon = 0.0;
    double t_ideal_s = 0.0;
    double t_exe_s = 0.0;
    double overhead = 0.0;
    int failures = 0;
    int checkpoints = 0;
    bool deadline_met = false;
    JobOutcome outcome = JobOutcome::Pending;
};

struct SchedulerLogRow {
    double time = 0.0;
    std::int64_t job_id = 0;
    std::string event; // dispatch|map|admit|reject|failover
    std::int64_t node = engine::kNoId;
    std::string detail;
};

struct ClusterSummary {
    int arrived = 0;
    int done = 0;
    int rejected = 0;
    int queued_at_horizon = 0;
    int running_at_horizon = 0;
    double median_overhead = 0.0;    // over completed jobs
    double deadline_miss_fraction = 0.0;
    double throughput_per_hour = 0.0;
    int failures = 0;
    int checkpoints = 0;
};

struct ClusterResult {
    std::vector<JobRecord> jobs;
    std::vector<SchedulerLogRow> log;
    ClusterSummary summary;
    engine::SimTrace trace;
};

ClusterResult run_cluster(const platform::Topology& topo, const workload::WorkloadTrace& workload,
                          const ClusterConfig& cfg);

} // namespace rmsim::rtms
