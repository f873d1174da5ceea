// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/rtms.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace rmsim::rtms {

using platform::DeviceStatus;
using reliability::JobExecutor;

const char* to_string(JobOutcome outcome) {
    switch (outcome) {
        case JobOutcome::Done: return "done";
        case JobOutcome::Rejected: return "rejected";
        case JobOutcome::Queued: return "queued";
        case JobOutcome::Running: return "running";
        case JobOutcome::Pending: return "pending";
    }
    return "?";
}

double t_ideal_lower_bound(const workload::Job& job, const platform::Topology& topo) {
    double total = 0.0;
    for (const workload::KernelSpec& kernel : job.kernels) {
        double best = std::numeric_limits<double>::infinity();
        for (const workload::Implementation& impl : kernel.implementations)
            for (const platform::Device& dev : topo.devices())
                if (dev.kind == impl.kind)
                    best = std::min(best, workload::ideal_exec_time(impl, dev));
        if (!std::isfinite(best)) return std::numeric_limits<double>::infinity();
        total += best;
    }
    return total;
}

std::optional<std::int64_t> dispatch(const workload::Job& job, const platform::Topology& topo,
                                     const std::vector<NodeDispatchInfo>& nodes,
                                     const RtmsConfig& cfg, double now) {
    const double t_lb = t_ideal_lower_bound(job, topo);
    if (!std::isfinite(t_lb)) return std::nullopt; // no compatible device anywhere

    std::optional<std::int64_t> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (const NodeDispatchInfo& info : nodes) {
        if (info.down) continue;
        double score = info.committed_load_s + t_lb;
        if (info.predicted_next_failure && *info.predicted_next_failure >= now &&
            *info.predicted_next_failure <= now + t_lb)
            score += cfg.failure_penalty_frac * t_lb;
        if (cfg.power_weight > 0.0) {
            double busy = 0.0;
            int count = 0;
            for (const platform::Device& dev : topo.devices())
                if (dev.node == info.node) {
                    busy += dev.busy_w;
                    ++count;
                }
            if (count > 0) score += cfg.power_weight * (busy / count) * t_lb;
        }
        if (score < best_score || (score == best_score && best && info.node < *best)) {
            best_score = score;
            best = info.node;
        }
    }
    return best;
}

std::optional<MappingDecision> map_kernels(const workload::Job& job,
                                           const platform::GlobalResourceView& view,
                                           const RtmsConfig& cfg) {
    MappingDecision decision;
    for (const workload::KernelSpec& kernel : job.kernels) {
        const KernelAssignment* chosen = nullptr;
        KernelAssignment best;
        double best_score = std::numeric_limits<double>::infinity();
        for (const workload::Implementation& impl : kernel.implementations) {
            for (const platform::ViewEntry& entry : view.entries) {
                if (entry.status != DeviceStatus::Free) continue;
                if (entry.device.kind != impl.kind) continue;
                const double mean = workload::mean_exec_time(impl, entry.device);
                const double penalty = entry.hops * cfg.per_hop_latency_frac * mean;
                const double score = mean + penalty;
                if (score < best_score ||
                    (score == best_score && chosen && entry.device.id < best.device)) {
                    best_score = score;
                    best.kernel_id = kernel.id;
                    best.kind = impl.kind;
                    best.device = entry.device.id;
                    best.ideal_time_s = workload::ideal_exec_time(impl, entry.device);
                    best.hop_penalty_s =
                        entry.hops * cfg.per_hop_latency_frac * best.ideal_time_s;
                    chosen = &best;
                }
            }
        }
        if (!chosen) return std::nullopt; // kernel queues until a device frees
        decision.t_ideal_s += best.ideal_time_s + best.hop_penalty_s;
        decision.assignments.push_back(best);
    }
    return decision;
}

pwcet::PwcetEstimate estimate_job_pwcet(const workload::Job& job, const MappingDecision& mapping,
                                        const platform::Topology& topo, const RtmsConfig& cfg,
                                        engine::RngStream& rng) {
    std::vector<double> samples;
    samples.reserve(cfg.admission_samples);
    for (std::size_t s = 0; s < cfg.admission_samples; ++s) {
        double total = 0.0;
        for (std::size_t k = 0; k < mapping.assignments.size(); ++k) {
            const KernelAssignment& a = mapping.assignments[k];
            const workload::KernelSpec& kernel = job.kernels[k];
            const platform::Device& dev = topo.device(a.device);
            const workload::Implementation* impl = nullptr;
            for (const workload::Implementation& cand : kernel.implementations)
                if (cand.kind == a.kind) {
                    impl = &cand;
                    break;
                }
            assert(impl != nullptr);
            total += workload::sample_exec_time(kernel, *impl, dev, rng) + a.hop_penalty_s;
        }
        samples.push_back(total);
    }
    const double p_e = 1.0 - job.timing.p;
    pwcet::PwcetEstimate est;
    try {
        est = pwcet::estimate(samples, p_e);
    } catch (const FitError&) {
        // Degenerate (e.g. jitter-free) distribution: the observed maximum
        // is the bound.
        est.exceedance_probability = p_e;
        est.met = pwcet::met(samples);
        est.value = est.met;
        est.relative_increase = 0.0;
    }
    return est;
}

bool admit(const workload::Job& job, const MappingDecision& mapping,
           const pwcet::PwcetEstimate& estimate) {
    (void)mapping;
    return estimate.value <= job.timing.deadline_s;
}

// --- Cluster simulation --------------------------------------------------------

namespace {

using reliability::Prediction;

class ClusterSim {
public:
    ClusterSim(const platform::Topology& topo, const workload::WorkloadTrace& workload,
               const ClusterConfig& cfg)
        : topo_(topo), workload_(workload), cfg_(cfg), views_(platform::discover(topo)) {
        const double rate0 = cfg_.failure_rate_per_s;
        rate_model_ = cfg_.fault;
        if (rate0 > 0.0) rate_model_.base_mttf_s = 1.0 / rate0;

        nodes_.reserve(topo_.nodes().size());
        for (const platform::Node& n : topo_.nodes()) {
            NodeState state;
            state.id = n.id;
            state.grid = std::make_unique<platform::ThermalGrid>(cfg_.thermal);
            state.rate_bound = node_rate_bound();
            const std::string tag = "/n" + std::to_string(n.id);
            if (state.rate_bound > 0.0)
                state.candidates = std::make_unique<reliability::PoissonFailureSource>(
                    state.rate_bound, engine::RngStream(cfg_.seed, "nodefaults" + tag));
            state.thin_rng =
                std::make_unique<engine::RngStream>(cfg_.seed, "nodethin" + tag);
            state.pred_rng =
                std::make_unique<engine::RngStream>(cfg_.seed, "nodepred" + tag);
            nodes_.push_back(std::move(state));
        }
        device_busy_.assign(topo_.devices().size(), false);
        device_down_.assign(topo_.devices().size(), false);

        jobs_.reserve(workload_.jobs.size());
        for (const workload::Job& job : workload_.jobs) {
            JobState js;
            js.job = &job;
            jobs_.push_back(std::move(js));
        }
    }

    ClusterResult run() {
        for (const workload::Job& job : workload_.jobs)
            sim_.schedule(job.arrival_s, engine::JobArrival{job.id});
        for (const NodeDownEvent& ev : cfg_.node_down_events)
            sim_.schedule(ev.time_s, engine::Failure{ev.node, engine::kNoId, true});
        for (NodeState& node : nodes_) {
            schedule_next_candidate(node, 0.0);
            if (cfg_.thermal_enabled)
                sim_.schedule(cfg_.thermal_period_s, engine::TempStep{node.id});
        }

        const double horizon =
            cfg_.horizon_s > 0.0 ? cfg_.horizon_s : workload_.window_s * 1.5 + 1.0;
        ClusterResult result;
        result.trace = sim_.run_until(
            horizon, [this](engine::Simulation&, const engine::Event& ev) { handle(ev); });

        finalize(result);
        return result;
    }

private:
    struct NodeState {
        std::int64_t id = 0;
        bool down = false;
        std::unique_ptr<platform::ThermalGrid> grid;
        double rate_bound = 0.0;
        std::unique_ptr<reliability::PoissonFailureSource> candidates;
        std::unique_ptr<engine::RngStream> thin_rng;
        std::unique_ptr<engine::RngStream> pred_rng;
        std::optional<double> predicted_next_failure;
        std::vector<std::int64_t> queue; // FIFO of jobs waiting for devices
        double committed_load_s = 0.0;
    };

    struct JobState {
        const workload::Job* job = nullptr;
        JobOutcome outcome = JobOutcome::Pending;
        std::int64_t node = engine::kNoId;
        std::optional<MappingDecision> mapping;
        std::unique_ptr<JobExecutor> executor;
        std::unique_ptr<engine::RngStream> pred_rng;
        reliability::JobCosts costs;
        std::uint64_t token = 0;
        bool started = false;
        double exec_start = 0.0;
        double durable_carry = 0.0; // durable progress carried across nodes
        int failures = 0;
        int checkpoints = 0;
        std::vector<std::int64_t> held_devices;
        JobExecutor::InternalEvent pending{};
        double completion = 0.0;
    };

    double node_rate_bound() const {
        if (cfg_.failure_rate_per_s <= 0.0) return 0.0;
        if (!cfg_.thermal_enabled || cfg_.fault.beta_per_k <= 0.0)
            return cfg_.failure_rate_per_s;
        // Worst-case temperature: every cell at its power cap.
        platform::ThermalGrid grid(cfg_.thermal);
        std::vector<double> full(static_cast<std::size_t>(grid.cells()),
                                 cfg_.thermal.max_cell_power_w);
        grid.set_power_flat(full);
        const auto temps = grid.steady_state();
        const double t_max = *std::max_element(temps.begin(), temps.end());
        return reliability::effective_failure_rate(rate_model_, t_max);
    }

    double node_rate_now(const NodeState& node) const {
        if (!cfg_.thermal_enabled || cfg_.fault.beta_per_k <= 0.0)
            return cfg_.failure_rate_per_s;
        return reliability::effective_failure_rate(rate_model_, node.grid->max_temperature());
    }

    void log(double time, std::int64_t job, const char* event, std::int64_t node,
             std::string detail) {
        log_.push_back(SchedulerLogRow{time, job, event, node, std::move(detail)});
    }

    void set_device_status(std::int64_t device, DeviceStatus status) {
        device_busy_[static_cast<std::size_t>(device)] = status == DeviceStatus::Busy;
        for (platform::GlobalResourceView& view : views_)
            view.entries[static_cast<std::size_t>(device)].status = status;
    }

    // A view with down devices masked out as busy.
    const platform::GlobalResourceView& view_for(std::int64_t node) {
        platform::GlobalResourceView& view = views_[static_cast<std::size_t>(node)];
        for (std::size_t d = 0; d < device_down_.size(); ++d)
            if (device_down_[d] || nodes_[node_of_device(d)].down)
                view.entries[d].status = DeviceStatus::Busy;
        return view;
    }

    std::size_t node_of_device(std::size_t device) const {
        return static_cast<std::size_t>(topo_.devices()[device].node);
    }

    void handle(const engine::Event& ev) {
        std::visit(
            [&](const auto& payload) { this->on(payload, ev.time); },
            ev.kind);
    }

    void on(const engine::JobArrival& ev, double now) { handle_arrival(jobs_[index(ev.job_id)], now); }

    void on(const engine::CheckpointStart& ev, double now) { apply_internal(ev.job_id, ev.token, now); }
    void on(const engine::CheckpointDone& ev, double now) { apply_internal(ev.job_id, ev.token, now); }
    void on(const engine::RestoreDone& ev, double now) { apply_internal(ev.job_id, ev.token, now); }
    void on(const engine::JobDone& ev, double now) { apply_internal(ev.job_id, ev.token, now); }

    void on(const engine::PredictionRearm& ev, double now) {
        JobState& js = jobs_[index(ev.job_id)];
        if (!js.executor || js.outcome != JobOutcome::Running) return;
        // A failure may have intervened at the same instant; the restore
        // path already re-arms on completion.
        if (js.executor->mode() != reliability::ExecMode::Running) return;
        js.executor->rearm(now, arm_prediction(js, now));
        schedule_internal(js, now);
    }

    void on(const engine::Failure& ev, double now) {
        NodeState& node = nodes_[static_cast<std::size_t>(ev.node)];
        if (ev.node_down) {
            handle_node_down(node, now);
            return;
        }
        if (node.down) return;
        // Thinned candidate: accept with rate(T_now)/rate_bound.
        if (node.rate_bound > 0.0) {
            const double p = node_rate_now(node) / node.rate_bound;
            const bool accepted = p >= 1.0 || node.thin_rng->uniform01() < p;
            if (accepted) {
                if (cfg_.device_fault_fraction > 0.0 &&
                    node.thin_rng->uniform01() < cfg_.device_fault_fraction)
                    deliver_device_fault(node, now);
                else
                    deliver_node_fault(node, now);
            }
            schedule_next_candidate(node, now);
        }
    }

    void deliver_device_fault(NodeState& node, double now) {
        std::vector<std::int64_t> local;
        for (const platform::Device& dev : topo_.devices())
            if (dev.node == node.id && !device_down_[static_cast<std::size_t>(dev.id)])
                local.push_back(dev.id);
        if (local.empty()) return;
        const auto pick = static_cast<std::size_t>(node.thin_rng->uniform01() *
                                                   static_cast<double>(local.size()));
        const std::int64_t failed = local[std::min(pick, local.size() - 1)];
        device_down_[static_cast<std::size_t>(failed)] = true;

        for (JobState& js : jobs_) {
            if (js.outcome != JobOutcome::Running || !js.mapping || !js.executor) continue;
            const bool holds = std::find(js.held_devices.begin(), js.held_devices.end(),
                                         failed) != js.held_devices.end();
            if (!holds) continue;
            ++js.token;
            js.executor->on_failure(now);
            // Try a replica of the same kind; preference order: same node,
            // then anywhere free.
            const platform::DeviceKind kind = topo_.device(failed).kind;
            std::int64_t replacement = engine::kNoId;
            for (const platform::ViewEntry& e : view_for(node.id).entries) {
                if (e.device.id == failed || e.device.kind != kind) continue;
                if (e.status != DeviceStatus::Free) continue;
                if (replacement == engine::kNoId ||
                    (e.device.node == node.id &&
                     topo_.device(replacement).node != node.id))
                    replacement = e.device.id;
            }
            if (replacement != engine::kNoId) {
                for (KernelAssignment& a : js.mapping->assignments)
                    if (a.device == failed) a.device = replacement;
                js.held_devices.erase(
                    std::remove(js.held_devices.begin(), js.held_devices.end(), failed),
                    js.held_devices.end());
                set_device_status(replacement, DeviceStatus::Busy);
                js.held_devices.push_back(replacement);
                log(now, js.job->id, "failover", node.id,
                    topo_.device(failed).name + " -> " + topo_.device(replacement).name);
                schedule_internal(js, now); // restore proceeds on the replica
            } else {
                // No replica: hand the job back to the global manager.
                js.failures += js.executor->metrics().failures;
                js.checkpoints += js.executor->metrics().checkpoints;
                js.durable_carry = js.executor->durable_progress();
                js.executor.reset();
                js.mapping.reset();
                release_devices(js, now);
                node.committed_load_s -= js.job->t_ideal_s;
                log(now, js.job->id, "failover", node.id,
                    topo_.device(failed).name + " lost, no replica; re-dispatching");
                handle_arrival(js, now);
            }
        }
    }

    void on(const engine::TempStep& ev, double now) {
        NodeState& node = nodes_[static_cast<std::size_t>(ev.node)];
        update_node_power(node);
        node.grid->advance(cfg_.thermal_period_s);
        if (!node.down) sim_.schedule(now + cfg_.thermal_period_s, engine::TempStep{node.id});
    }

    void update_node_power(NodeState& node) {
        const int cells = node.grid->cells();
        std::vector<double> power(static_cast<std::size_t>(cells), 0.0);
        int pos = 0;
        for (const platform::Device& dev : topo_.devices()) {
            if (dev.node != node.id) continue;
            const double w =
                device_busy_[static_cast<std::size_t>(dev.id)] ? dev.busy_w : dev.idle_w;
            power[static_cast<std::size_t>(pos % cells)] += w;
            ++pos;
        }
        for (double& w : power) w = std::min(w, cfg_.thermal.max_cell_power_w);
        node.grid->set_power_flat(power);
    }

    void schedule_next_candidate(NodeState& node, double now) {
        if (!node.candidates || node.down) return;
        const auto next = node.candidates->next_after(now);
        if (!next) return;
        sim_.schedule(*next, engine::Failure{node.id, engine::kNoId, false});
        // Global-manager-visible prediction of this node's next failure.
        node.predicted_next_failure =
            now + reliability::predict(*next - now, reliability::Predictor{cfg_.epsilon},
                                       *node.pred_rng);
    }

    std::size_t index(std::int64_t job_id) const {
        // Job ids are dense in generated workloads; fall back to search.
        if (job_id >= 0 && static_cast<std::size_t>(job_id) < jobs_.size() &&
            jobs_[static_cast<std::size_t>(job_id)].job->id == job_id)
            return static_cast<std::size_t>(job_id);
        for (std::size_t i = 0; i < jobs_.size(); ++i)
            if (jobs_[i].job->id == job_id) return i;
        throw Error("cluster: unknown job id " + std::to_string(job_id));
    }

    std::optional<Prediction> arm_prediction(JobState& js, double now) {
        if (!(std::holds_alternative<reliability::PredictionBased>(cfg_.policy) ||
              std::holds_alternative<reliability::ErrorTolerant>(cfg_.policy)))
            return std::nullopt;
        NodeState& node = nodes_[static_cast<std::size_t>(js.node)];
        if (!node.candidates) return std::nullopt;
        const auto next = node.candidates->next_after(now);
        if (!next) return std::nullopt;
        return Prediction{now,
                          reliability::predict(*next - now, reliability::Predictor{cfg_.epsilon},
                                               *js.pred_rng),
                          cfg_.epsilon};
    }

    void handle_arrival(JobState& js, double now) {
        std::vector<NodeDispatchInfo> infos;
        infos.reserve(nodes_.size());
        for (const NodeState& n : nodes_)
            infos.push_back(
                NodeDispatchInfo{n.id, n.committed_load_s, n.predicted_next_failure, n.down});
        const auto target = dispatch(*js.job, topo_, infos, cfg_.rtms, now);
        if (!target) {
            js.outcome = JobOutcome::Rejected;
            log(now, js.job->id, "reject", engine::kNoId, "no compatible node");
            return;
        }
        js.node = *target;
        NodeState& node = nodes_[static_cast<std::size_t>(*target)];
        node.committed_load_s += js.job->t_ideal_s;
        log(now, js.job->id, "dispatch", node.id,
            "load=" + format_double(node.committed_load_s));
        try_start(js, node, now);
    }

    void try_start(JobState& js, NodeState& node, double now) {
        const auto mapping = map_kernels(*js.job, view_for(node.id), cfg_.rtms);
        if (!mapping) {
            js.outcome = JobOutcome::Queued;
            node.queue.push_back(js.job->id);
            return;
        }

        std::string devices;
        for (const KernelAssignment& a : mapping->assignments) {
            if (!devices.empty()) devices += ' ';
            devices += topo_.device(a.device).name;
        }
        log(now, js.job->id, "map", node.id,
            devices + " t_ideal=" + format_double(mapping->t_ideal_s));

        if (!js.pred_rng)
            js.pred_rng = std::make_unique<engine::RngStream>(
                cfg_.seed, "pred/j" + std::to_string(js.job->id));

        // Admission: pWCET at exceedance 1-p against the deadline.
        engine::RngStream admission_rng(cfg_.seed, "admission/j" + std::to_string(js.job->id));
        const auto estimate =
            estimate_job_pwcet(*js.job, *mapping, topo_, cfg_.rtms, admission_rng);
        if (!admit(*js.job, *mapping, estimate)) {
            js.outcome = JobOutcome::Rejected;
            node.committed_load_s -= js.job->t_ideal_s;
            log(now, js.job->id, "reject", node.id,
                std::string(js.job->cls == workload::JobClass::Urgent ? "urgent " : "") +
                    "pwcet=" + format_double(estimate.value) +
                    " deadline=" + format_double(js.job->timing.deadline_s));
            return;
        }
        log(now, js.job->id, "admit", node.id, "pwcet=" + format_double(estimate.value));

        js.mapping = mapping;
        for (const KernelAssignment& a : mapping->assignments)
            if (!device_busy_[static_cast<std::size_t>(a.device)]) {
                set_device_status(a.device, DeviceStatus::Busy);
                js.held_devices.push_back(a.device);
            }

        engine::RngStream cost_rng(cfg_.seed, "costs/j" + std::to_string(js.job->id));
        bool fine_grain = false;
        for (const KernelAssignment& a : mapping->assignments)
            if (a.kind == platform::DeviceKind::Fpga) fine_grain = true;
        js.costs = reliability::draw_costs(cfg_.costs, cost_rng, fine_grain);

        reliability::ExecOptions options;
        options.start_time = now;
        options.guard_factor = cfg_.guard_factor;
        js.executor = std::make_unique<JobExecutor>(mapping->t_ideal_s, cfg_.policy, js.costs,
                                                    options);
        js.executor->start(now, std::nullopt, js.durable_carry);
        js.executor->rearm(now, arm_prediction(js, now));
        if (!js.started) {
            js.started = true;
            js.exec_start = now;
        }
        js.outcome = JobOutcome::Running;
        schedule_internal(js, now);
    }

    void schedule_internal(JobState& js, double now) {
        if (!js.executor || js.executor->done()) return;
        ++js.token; // supersede anything still in flight for this job
        js.pending = js.executor->next_internal(now);
        using K = JobExecutor::InternalEvent::Kind;
        switch (js.pending.kind) {
            case K::CheckpointStart:
                sim_.schedule(js.pending.time, engine::CheckpointStart{js.job->id, js.token});
                break;
            case K::CheckpointDone:
                sim_.schedule(js.pending.time, engine::CheckpointDone{js.job->id, js.token});
                break;
            case K::RestoreDone:
                sim_.schedule(js.pending.time, engine::RestoreDone{js.job->id, js.token});
                break;
            case K::JobDone:
                sim_.schedule(js.pending.time, engine::JobDone{js.job->id, js.token});
                break;
        }
    }

    void apply_internal(std::int64_t job_id, std::uint64_t token, double now) {
        JobState& js = jobs_[index(job_id)];
        if (!js.executor || js.outcome != JobOutcome::Running || token != js.token)
            return; // stale event from a superseded schedule
        js.executor->apply(js.pending);
        if (js.executor->done()) {
            complete_job(js, now);
            return;
        }
        if (js.executor->wants_rearm()) {
            sim_.schedule(now, engine::PredictionRearm{js.job->id});
            return;
        }
        schedule_internal(js, now);
    }

    void deliver_node_fault(NodeState& node, double now) {
        // Node-scoped fault: every job executing on this node rolls back.
        for (JobState& js : jobs_) {
            if (js.outcome != JobOutcome::Running || js.node != node.id || !js.executor)
                continue;
            ++js.token; // invalidate in-flight events
            js.executor->on_failure(now);
            schedule_internal(js, now);
        }
    }

    void handle_node_down(NodeState& node, double now) {
        if (node.down) return;
        node.down = true;
        node.predicted_next_failure.reset();
        // Re-dispatch running jobs with their durable progress, then drain
        // the local queue through the global manager again.
        std::vector<std::int64_t> displaced;
        for (JobState& js : jobs_)
            if (js.outcome == JobOutcome::Running && js.node == node.id) {
                displaced.push_back(js.job->id);
            }
        for (std::int64_t id : displaced) {
            JobState& js = jobs_[index(id)];
            ++js.token;
            js.failures += js.executor->metrics().failures;
            js.checkpoints += js.executor->metrics().checkpoints;
            js.durable_carry = js.executor->durable_progress();
            js.executor.reset();
            js.mapping.reset();
            release_devices(js, now);
            node.committed_load_s -= js.job->t_ideal_s;
            log(now, id, "failover", node.id,
                "node down, re-dispatch with durable=" + format_double(js.durable_carry));
            handle_arrival(js, now);
        }
        std::vector<std::int64_t> queued = std::move(node.queue);
        node.queue.clear();
        for (std::int64_t id : queued) {
            JobState& js = jobs_[index(id)];
            node.committed_load_s -= js.job->t_ideal_s;
            log(now, id, "failover", node.id, "node down, re-dispatch queued job");
            handle_arrival(js, now);
        }
    }

    void release_devices(JobState& js, double now) {
        (void)now;
        for (std::int64_t dev : js.held_devices) set_device_status(dev, DeviceStatus::Free);
        js.held_devices.clear();
    }

    void complete_job(JobState& js, double now) {
        const reliability::RunMetrics& m = js.executor->metrics();
        js.failures += m.failures;
        js.checkpoints += m.checkpoints;
        js.executor.reset();
        js.outcome = JobOutcome::Done;
        js.completion = now;
        NodeState& node = nodes_[static_cast<std::size_t>(js.node)];
        node.committed_load_s -= js.job->t_ideal_s;
        release_devices(js, now);
        start_queued(node, now);
    }

    void start_queued(NodeState& node, double now) {
        // FIFO drain: stop at the first job that still cannot map.
        while (!node.queue.empty()) {
            JobState& js = jobs_[index(node.queue.front())];
            const auto mapping = map_kernels(*js.job, view_for(node.id), cfg_.rtms);
            if (!mapping) return;
            node.queue.erase(node.queue.begin());
            try_start(js, node, now);
        }
    }

    void finalize(ClusterResult& result) {
        ClusterSummary& s = result.summary;
        std::vector<double> overheads;
        int misses = 0;
        for (JobState& js : jobs_) {
            if (js.outcome == JobOutcome::Pending) continue; // never arrived
            ++s.arrived;
            JobRecord rec;
            rec.job_id = js.job->id;
            rec.policy = reliability::policy_name(cfg_.policy);
            rec.epsilon = cfg_.epsilon;
            rec.t_ideal_s = js.mapping ? js.mapping->t_ideal_s : js.job->t_ideal_s;
            rec.failures = js.failures + (js.executor ? js.executor->metrics().failures : 0);
            rec.checkpoints =
                js.checkpoints + (js.executor ? js.executor->metrics().checkpoints : 0);
            rec.outcome = js.outcome;
            switch (js.outcome) {
                case JobOutcome::Done: {
                    ++s.done;
                    rec.t_exe_s = js.completion - js.exec_start;
                    rec.overhead = (rec.t_exe_s - rec.t_ideal_s) / rec.t_ideal_s;
                    rec.deadline_met =
                        js.completion - js.job->arrival_s <= js.job->timing.deadline_s;
                    overheads.push_back(rec.overhead);
                    if (!rec.deadline_met) ++misses;
                    break;
                }
                case JobOutcome::Rejected: ++s.rejected; break;
                case JobOutcome::Queued: ++s.queued_at_horizon; break;
                case JobOutcome::Running: ++s.running_at_horizon; break;
                case JobOutcome::Pending: break;
            }
            s.failures += rec.failures;
            s.checkpoints += rec.checkpoints;
            result.jobs.push_back(std::move(rec));
        }
        if (!overheads.empty()) {
            std::sort(overheads.begin(), overheads.end());
            const std::size_t n = overheads.size();
            s.median_overhead = n % 2 == 1 ? overheads[n / 2]
                                           : 0.5 * (overheads[n / 2 - 1] + overheads[n / 2]);
        }
        if (s.done > 0)
            s.deadline_miss_fraction = static_cast<double>(misses) / static_cast<double>(s.done);
        if (workload_.window_s > 0.0)
            s.throughput_per_hour = static_cast<double>(s.done) / workload_.window_s * 3600.0;
        result.log = std::move(log_);
    }

    const platform::Topology& topo_;
    const workload::WorkloadTrace& workload_;
    ClusterConfig cfg_;
    reliability::FaultModel rate_model_;

    engine::Simulation sim_;
    std::vector<platform::GlobalResourceView> views_;
    std::vector<NodeState> nodes_;
    std::vector<JobState> jobs_;
    std::vector<bool> device_busy_;
    std::vector<bool> device_down_;
    std::vector<SchedulerLogRow> log_;
};

} // namespace

ClusterResult run_cluster(const platform::Topology& topo, const workload::WorkloadTrace& workload,
                          const ClusterConfig& cfg) {
    ClusterSim sim(topo, workload, cfg);
    return sim.run();
}

} // namespace rmsim::rtms
