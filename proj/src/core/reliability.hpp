// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/rng.hpp"

namespace rmsim::reliability {

constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// --- Fault model and prediction ---------------------------------------------

// Thermally modulated failure rate: 1/MTTF at the reference temperature,
// scaled by exp(beta * (T - T_ref)).
struct FaultModel {
    double base_mttf_s = 1e4;
    double t_ref_k = 318.0;
    double beta_per_k = 0.0;
};

double effective_failure_rate(const FaultModel& model, double temp_k);

// Homogeneous Poisson failure times on [0, horizon], sorted.
std::vector<double> draw_failures(engine::RngStream& rng, double rate_per_s, double horizon_s);

// Failure-time predictor with bounded signed relative error, uniform on
// [-epsilon, +epsilon].
struct Predictor {
    double epsilon = 0.0;
};

// predicted = true_ttf * (1 + epsilon * u), u ~ U[-1, 1). Requires
// true_ttf > 0 and epsilon in [0, 1).
double predict(double true_ttf, const Predictor& predictor, engine::RngStream& rng);

// --- Checkpoint policies -----------------------------------------------------

struct RestartOnly {};
struct FixedRate {
    // Unset: defaults to 20 x (c x T_ideal) per job.
    std::optional<double> interval_s;
};
struct PredictionBased {};
struct ErrorTolerant {
    double fraction = 0.9;
};

using CheckpointPolicy = std::variant<RestartOnly, FixedRate, PredictionBased, ErrorTolerant>;

std::string policy_name(const CheckpointPolicy& policy);
CheckpointPolicy policy_from_string(std::string_view name);

// Per-job checkpoint/restore cost fractions of T_ideal. One draw per job.
struct CostParams {
    double c_min = 0.015, c_max = 0.02; // checkpoint cost fraction
    double r_min = 0.15, r_max = 0.20;  // restore/restart cost fraction
    // Fine-grain FPGA checkpointing: fraction of the state that is
    // permanent; scales c for jobs flagged as fine-grain.
    double fine_grain_fraction = 1.0;
};

struct JobCosts {
    double c = 0.0175;
    double r = 0.175;
};

JobCosts draw_costs(const CostParams& params, engine::RngStream& rng, bool fine_grain = false);

// --- Single-job execution automaton -----------------------------------------

enum class ExecMode { Running, Checkpointing, Restoring, Done };

// An armed prediction: drawn at `armed_at`, pointing `predicted_ttf` ahead,
// with the predictor's declared error bound attached.
struct Prediction {
    double armed_at = 0.0;
    double predicted_ttf = kInfiniteTime; // infinite: no failure expected
    double epsilon = 0.0;
};

struct ExecSnapshot {
    double t_ideal_s = 0.0;
    double checkpoint_cost_s = 0.0; // c x T_ideal
    double job_start = 0.0;
    double last_checkpoint_anchor = 0.0; // job start or last checkpoint completion
    bool fired_this_arm = false;         // a checkpoint was already placed for the
                                         // currently armed prediction
};

// When the next checkpoint should *start*, or nullopt for none.
//
//  - RestartOnly: never.
//  - FixedRate: anchor + interval (wall-clock periodic).
//  - PredictionBased: one checkpoint per armed prediction, timed to complete
//    at the earliest failure instant consistent with the declared error
//    bound, advanced by at most one checkpoint duration. With epsilon = 0
//    this degenerates to completing exactly at the predicted instant.
//  - ErrorTolerant: starts at 90% (the configured fraction) of the predicted
//    time to failure, measured from the arm point.
std::optional<double> next_checkpoint(const CheckpointPolicy& policy, const ExecSnapshot& state,
                                      double now, const std::optional<Prediction>& prediction);

// Metrics of one simulated job execution.
struct RunMetrics {
    double t_exe_s = 0.0;
    double t_ideal_s = 0.0;
    double overhead = 0.0; // (T_exe - T_ideal) / T_ideal
    int failures = 0;
    int checkpoints = 0; // completed checkpoints
    int checkpoints_aborted = 0;
    bool deadline_met = true;
    bool guard_tripped = false; // run hit the non-termination guard
};

// Per-run event record, for trace audits.
struct RunEvent {
    enum class Kind { CheckpointStart, CheckpointDone, CheckpointAborted, Failure, RestoreStart,
                      RestoreDone, Done };
    Kind kind;
    double time;
    double progress; // work completed at this instant
};

// Source of failure times: returns the first failure strictly after t, or
// nullopt if none remains. Implementations must be monotone (repeated calls
// with non-decreasing t).
class FailureSource {
public:
    virtual ~FailureSource() = default;
    virtual std::optional<double> next_after(double t) = 0;
};

class VectorFailureSource final : public FailureSource {
public:
    explicit VectorFailureSource(std::vector<double> times);
    std::optional<double> next_after(double t) override;

private:
    std::vector<double> times_;
    std::size_t cursor_ = 0;
};

// Draws exponential gaps lazily from its own stream.
class PoissonFailureSource final : public FailureSource {
public:
    PoissonFailureSource(double rate_per_s, engine::RngStream rng);
    std::optional<double> next_after(double t) override;

private:
    double rate_;
    engine::RngStream rng_;
    double last_ = 0.0;
    bool primed_ = false;
};

struct ExecOptions {
    double start_time = 0.0;
    double deadline_s = kInfiniteTime;
    double guard_factor = 1000.0; // abort when T_exe exceeds guard x T_ideal
    bool throw_on_guard = true;   // otherwise cap T_exe and flag via overhead
};

// Incremental automaton for one job: work advances in real time while
// running; checkpoints freeze progress for c x T_ideal and then make it
// durable; a failure discards any in-flight checkpoint and rolls the job
// back (to zero for RestartOnly, to the durable point otherwise) after an
// r x T_ideal penalty. Predictions re-arm at start and after each restore;
// the error-tolerant policy additionally re-arms after each completed
// checkpoint. Shared by the standalone runner and the cluster simulation.
class JobExecutor {
public:
    JobExecutor(double t_ideal_s, const CheckpointPolicy& policy, JobCosts costs,
                ExecOptions options = {});

    struct InternalEvent {
        enum class Kind { CheckpointStart, CheckpointDone, RestoreDone, JobDone };
        Kind kind;
        double time;
    };

    // Start or re-arm with a fresh prediction (nullopt: no failure expected
    // within the horizon). initial_progress seeds durable work carried over
    // from a previous node after a migration.
    void start(double now, std::optional<Prediction> prediction, double initial_progress = 0.0);
    void rearm(double now, std::optional<Prediction> prediction);
    bool wants_rearm() const { return wants_rearm_; }

    // The next internally scheduled transition given the current mode.
    InternalEvent next_internal(double now) const;

    // Apply the transition returned by next_internal.
    void apply(const InternalEvent& ev);

    // External failure at time t (>= last transition time).
    void on_failure(double t);

    ExecMode mode() const { return mode_; }
    double progress() const { return progress_; }
    double durable_progress() const { return durable_; }
    bool done() const { return mode_ == ExecMode::Done; }
    double completion_time() const { return completion_; }
    const RunMetrics& metrics() const { return metrics_; }
    double t_ideal() const { return t_ideal_; }

    void set_trace(std::vector<RunEvent>* trace) { trace_ = trace; }

    // Total work guaranteed re-runnable: used when a job migrates nodes.
    double restart_remaining_work() const { return t_ideal_ - durable_; }

private:
    void advance_progress(double to);
    void record(RunEvent::Kind kind, double t);
    void check_guard(double t) const;

    double t_ideal_;
    CheckpointPolicy policy_;
    JobCosts costs_;
    ExecOptions options_;

    ExecMode mode_ = ExecMode::Running;
    double progress_ = 0.0;
    double durable_ = 0.0;
    double segment_start_ = 0.0; // start of the current Running segment
    double phase_end_ = 0.0;     // end of the current checkpoint/restore phase
    double anchor_ = 0.0;        // fixed-rate cadence anchor
    double completion_ = 0.0;
    std::optional<Prediction> prediction_;
    bool fired_this_arm_ = false;
    bool wants_rearm_ = false;
    ExecSnapshot snapshot(double now) const;

    RunMetrics metrics_;
    std::vector<RunEvent>* trace_ = nullptr;
};

// Runs one job to completion against the failure source. The prediction
// stream provides the relative-error draws (one per re-arm).
RunMetrics execute_job(double t_ideal_s, const CheckpointPolicy& policy, JobCosts costs,
                       FailureSource& failures, const Predictor& predictor,
                       engine::RngStream& prediction_rng, const ExecOptions& options = {},
                       std::vector<RunEvent>* trace = nullptr);

// Convenience overload with a pre-drawn, sorted failure-time list.
RunMetrics execute_job(double t_ideal_s, const CheckpointPolicy& policy, JobCosts costs,
                       const std::vector<double>& failure_times, const Predictor& predictor,
                       engine::RngStream& prediction_rng, const ExecOptions& options = {},
                       std::vector<RunEvent>* trace = nullptr);

// --- Replicated scenario runs and calibration --------------------------------

// Workload-level experiment scenario: random jobs over a long window,
// executed independently against per-job failure processes. Streams are
// derived per (replica, job), so failure traces are identical across
// policies and epsilon values (paired seeds).
struct Scenario {
    double mean_t_ideal_s = 100.0;
    double window_factor = 200.0;
    double arrival_rate_per_s = 0.01;
    double urgent_fraction = 0.5;
    CostParams costs;
    int replicas = 20;
    std::uint64_t seed = 1;
    double guard_factor = 1000.0;
};

struct ReplicaStats {
    double mean_overhead = 0.0;
    int jobs = 0;
    int deadline_misses = 0;
    int failures = 0;
    int checkpoints = 0;
};

ReplicaStats run_replica(const Scenario& scenario, const CheckpointPolicy& policy,
                         double rate_per_s, double epsilon, int replica_index);

// Median (across replicas) of the per-replica mean overhead; the building
// block of calibration and of the experiment sweep.
double median_overhead(const Scenario& scenario, const CheckpointPolicy& policy,
                       double rate_per_s, double epsilon);

struct CalibrationOptions {
    double target_lo = 0.95;
    double target_hi = 1.05;
    double rate_lo = 1e-8;
    double rate_hi = 1e-1;
    int max_iterations = 60;
};

struct CalibrationResult {
    double rate_per_s = 0.0;
    double median_overhead = 0.0;
    int iterations = 0;
};

// Bisection on the failure rate until the RestartOnly median overhead lands
// in [target_lo, target_hi]. Throws CalibrationError when the bracket does
// not contain the target. Deterministic for a fixed (scenario, seed).
CalibrationResult calibrate_failure_rate(const Scenario& scenario,
                                         const CalibrationOptions& options = {});

} // namespace rmsim::reliability
