// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/reliability.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/workload.hpp"

namespace rmsim::reliability {

double effective_failure_rate(const FaultModel& model, double temp_k) {
    if (!(model.base_mttf_s > 0.0)) throw ConfigError("fault model: base MTTF must be positive");
    if (model.beta_per_k < 0.0) throw ConfigError("fault model: beta must be non-negative");
    if (!(temp_k > 0.0)) throw Error("effective_failure_rate: temperature must be positive");
    return std::exp(model.beta_per_k * (temp_k - model.t_ref_k)) / model.base_mttf_s;
}

std::vector<double> draw_failures(engine::RngStream& rng, double rate_per_s, double horizon_s) {
    if (rate_per_s < 0.0) throw Error("draw_failures: rate must be non-negative");
    std::vector<double> times;
    if (rate_per_s == 0.0) return times;
    double t = rng.exponential(1.0 / rate_per_s);
    while (t <= horizon_s) {
        times.push_back(t);
        t += rng.exponential(1.0 / rate_per_s);
    }
    return times;
}

double predict(double true_ttf, const Predictor& predictor, engine::RngStream& rng) {
    if (!(true_ttf > 0.0)) throw Error("predict: time to failure must be positive");
    if (predictor.epsilon < 0.0 || predictor.epsilon >= 1.0)
        throw ConfigError("predictor: epsilon must lie in [0, 1)");
    const double delta = predictor.epsilon * rng.uniform_signed();
    return true_ttf * (1.0 + delta);
}

std::string policy_name(const CheckpointPolicy& policy) {
    struct V {
        std::string operator()(const RestartOnly&) const { return "restart-only"; }
        std::string operator()(const FixedRate&) const { return "fixed-rate"; }
        std::string operator()(const PredictionBased&) const { return "prediction-based"; }
        std::string operator()(const ErrorTolerant&) const { return "error-tolerant"; }
    };
    return std::visit(V{}, policy);
}

CheckpointPolicy policy_from_string(std::string_view name) {
    if (name == "restart-only") return RestartOnly{};
    if (name == "fixed-rate") return FixedRate{};
    if (name == "prediction-based") return PredictionBased{};
    if (name == "error-tolerant") return ErrorTolerant{};
    throw ConfigError("unknown checkpoint policy '" + std::string(name) +
                      "' (expected restart-only|fixed-rate|prediction-based|error-tolerant)");
}

JobCosts draw_costs(const CostParams& params, engine::RngStream& rng, bool fine_grain) {
    if (!(params.c_min > 0.0) || params.c_max < params.c_min)
        throw ConfigError("cost params: need 0 < c_min <= c_max");
    if (params.r_min < 0.0 || params.r_max < params.r_min)
        throw ConfigError("cost params: need 0 <= r_min <= r_max");
    if (!(params.fine_grain_fraction > 0.0) || params.fine_grain_fraction > 1.0)
        throw ConfigError("cost params: fine_grain_fraction must lie in (0, 1]");
    JobCosts costs;
    costs.c = rng.uniform(params.c_min, params.c_max);
    costs.r = rng.uniform(params.r_min, params.r_max);
    if (fine_grain) costs.c *= params.fine_grain_fraction;
    return costs;
}

// --- Policy scheduling --------------------------------------------------------

std::optional<double> next_checkpoint(const CheckpointPolicy& policy, const ExecSnapshot& state,
                                      double now, const std::optional<Prediction>& prediction) {
    struct V {
        const ExecSnapshot& s;
        double now;
        const std::optional<Prediction>& pred;

        std::optional<double> operator()(const RestartOnly&) const { return std::nullopt; }

        std::optional<double> operator()(const FixedRate& p) const {
            const double interval = p.interval_s.value_or(20.0 * s.checkpoint_cost_s);
            return std::max(now, s.last_checkpoint_anchor + interval);
        }

        std::optional<double> operator()(const PredictionBased&) const {
            if (!pred || s.fired_this_arm || !std::isfinite(pred->predicted_ttf))
                return std::nullopt;
            // Aim to complete at the predicted failure instant, advanced to
            // the earliest instant consistent with the declared error bound
            // but by no more than one checkpoint duration. The true time to
            // failure is at least predicted/(1+eps), so the advance hedges
            // late predictions without giving up much lead time.
            const double margin =
                std::min(pred->predicted_ttf * pred->epsilon / (1.0 + pred->epsilon),
                         s.checkpoint_cost_s);
            const double completion = pred->armed_at + pred->predicted_ttf - margin;
            return std::max(now, completion - s.checkpoint_cost_s);
        }

        std::optional<double> operator()(const ErrorTolerant& p) const {
            if (!pred || s.fired_this_arm || !std::isfinite(pred->predicted_ttf))
                return std::nullopt;
            return std::max(now, pred->armed_at + p.fraction * pred->predicted_ttf);
        }
    };
    return std::visit(V{state, now, prediction}, policy);
}

// --- VectorFailureSource / PoissonFailureSource -------------------------------

VectorFailureSource::VectorFailureSource(std::vector<double> times) : times_(std::move(times)) {
    assert(std::is_sorted(times_.begin(), times_.end()));
}

std::optional<double> VectorFailureSource::next_after(double t) {
    while (cursor_ < times_.size() && times_[cursor_] <= t) ++cursor_;
    if (cursor_ == times_.size()) return std::nullopt;
    return times_[cursor_];
}

PoissonFailureSource::PoissonFailureSource(double rate_per_s, engine::RngStream rng)
    : rate_(rate_per_s), rng_(std::move(rng)) {
    if (rate_ < 0.0) throw Error("failure source: rate must be non-negative");
}

std::optional<double> PoissonFailureSource::next_after(double t) {
    if (rate_ == 0.0) return std::nullopt;
    if (!primed_) {
        last_ = rng_.exponential(1.0 / rate_);
        primed_ = true;
    }
    while (last_ <= t) last_ += rng_.exponential(1.0 / rate_);
    return last_;
}

// --- JobExecutor ---------------------------------------------------------------

JobExecutor::JobExecutor(double t_ideal_s, const CheckpointPolicy& policy, JobCosts costs,
                         ExecOptions options)
    : t_ideal_(t_ideal_s), policy_(policy), costs_(costs), options_(options) {
    if (!(t_ideal_ > 0.0)) throw Error("job executor: T_ideal must be positive");
    if (!(costs_.c > 0.0 && costs_.c < 1.0) || !(costs_.r >= 0.0 && costs_.r < 1.0))
        throw Error("job executor: cost fractions out of range");
    metrics_.t_ideal_s = t_ideal_;
}

ExecSnapshot JobExecutor::snapshot(double now) const {
    ExecSnapshot s;
    s.t_ideal_s = t_ideal_;
    s.checkpoint_cost_s = costs_.c * t_ideal_;
    s.job_start = options_.start_time;
    s.last_checkpoint_anchor = anchor_;
    s.fired_this_arm = fired_this_arm_;
    (void)now;
    return s;
}

void JobExecutor::record(RunEvent::Kind kind, double t) {
    if (trace_) trace_->push_back(RunEvent{kind, t, progress_});
}

void JobExecutor::check_guard(double t) const {
    const double elapsed = t - options_.start_time;
    if (elapsed > options_.guard_factor * t_ideal_ && options_.throw_on_guard) {
        std::ostringstream msg;
        msg << "job execution did not terminate: elapsed " << elapsed << " s exceeds "
            << options_.guard_factor << " x T_ideal (" << options_.guard_factor * t_ideal_
            << " s) after " << metrics_.failures << " failures";
        throw RunawayJobError(msg.str());
    }
}

void JobExecutor::advance_progress(double to) {
    assert(to >= segment_start_ - 1e-12);
    progress_ += to - segment_start_;
    segment_start_ = to;
}

void JobExecutor::start(double now, std::optional<Prediction> prediction,
                        double initial_progress) {
    options_.start_time = now;
    segment_start_ = now;
    anchor_ = now;
    mode_ = ExecMode::Running;
    progress_ = durable_ = std::min(initial_progress, t_ideal_);
    prediction_ = std::move(prediction);
    fired_this_arm_ = false;
    wants_rearm_ = false;
}

void JobExecutor::rearm(double now, std::optional<Prediction> prediction) {
    (void)now;
    prediction_ = std::move(prediction);
    fired_this_arm_ = false;
    wants_rearm_ = false;
}

JobExecutor::InternalEvent JobExecutor::next_internal(double now) const {
    switch (mode_) {
        case ExecMode::Running: {
            const double done_time = segment_start_ + (t_ideal_ - progress_);
            const auto ckpt = next_checkpoint(policy_, snapshot(now), now, prediction_);
            if (ckpt && *ckpt < done_time)
                return InternalEvent{InternalEvent::Kind::CheckpointStart, *ckpt};
            return InternalEvent{InternalEvent::Kind::JobDone, done_time};
        }
        case ExecMode::Checkpointing:
            return InternalEvent{InternalEvent::Kind::CheckpointDone, phase_end_};
        case ExecMode::Restoring:
            return InternalEvent{InternalEvent::Kind::RestoreDone, phase_end_};
        case ExecMode::Done: break;
    }
    throw Error("job executor: no further transitions after completion");
}

void JobExecutor::apply(const InternalEvent& ev) {
    check_guard(ev.time);
    switch (ev.kind) {
        case InternalEvent::Kind::CheckpointStart:
            assert(mode_ == ExecMode::Running);
            advance_progress(ev.time);
            mode_ = ExecMode::Checkpointing;
            phase_end_ = ev.time + costs_.c * t_ideal_;
            fired_this_arm_ = true;
            record(RunEvent::Kind::CheckpointStart, ev.time);
            break;
        case InternalEvent::Kind::CheckpointDone:
            assert(mode_ == ExecMode::Checkpointing);
            durable_ = progress_;
            ++metrics_.checkpoints;
            anchor_ = ev.time;
            mode_ = ExecMode::Running;
            segment_start_ = ev.time;
            record(RunEvent::Kind::CheckpointDone, ev.time);
            // The error-tolerant policy re-evaluates after every completed
            // checkpoint; prediction-based places one checkpoint per armed
            // prediction and waits for the outcome.
            if (std::holds_alternative<ErrorTolerant>(policy_)) wants_rearm_ = true;
            break;
        case InternalEvent::Kind::RestoreDone:
            assert(mode_ == ExecMode::Restoring);
            progress_ = durable_;
            mode_ = ExecMode::Running;
            segment_start_ = ev.time;
            anchor_ = ev.time; // checkpoint cadence restarts after recovery
            record(RunEvent::Kind::RestoreDone, ev.time);
            if (std::holds_alternative<PredictionBased>(policy_) ||
                std::holds_alternative<ErrorTolerant>(policy_))
                wants_rearm_ = true;
            break;
        case InternalEvent::Kind::JobDone:
            assert(mode_ == ExecMode::Running);
            advance_progress(ev.time);
            progress_ = t_ideal_;
            mode_ = ExecMode::Done;
            completion_ = ev.time;
            metrics_.t_exe_s = completion_ - options_.start_time;
            metrics_.overhead = (metrics_.t_exe_s - t_ideal_) / t_ideal_;
            metrics_.deadline_met = metrics_.t_exe_s <= options_.deadline_s;
            record(RunEvent::Kind::Done, ev.time);
            break;
    }
}

void JobExecutor::on_failure(double t) {
    if (mode_ == ExecMode::Done) return;
    check_guard(t);
    ++metrics_.failures;
    if (mode_ == ExecMode::Running) {
        advance_progress(t);
    } else if (mode_ == ExecMode::Checkpointing) {
        // In-flight checkpoint is lost; durable progress stays at the
        // previous completed checkpoint.
        ++metrics_.checkpoints_aborted;
        record(RunEvent::Kind::CheckpointAborted, t);
    }
    record(RunEvent::Kind::Failure, t);
    // RestartOnly never completed a checkpoint, so durable_ is 0 and the
    // restore below degenerates to a restart from scratch.
    mode_ = ExecMode::Restoring;
    phase_end_ = t + costs_.r * t_ideal_;
    prediction_.reset();
    fired_this_arm_ = false;
    wants_rearm_ = false;
    record(RunEvent::Kind::RestoreStart, t);
}

// --- execute_job ---------------------------------------------------------------

namespace {

bool policy_uses_predictions(const CheckpointPolicy& policy) {
    return std::holds_alternative<PredictionBased>(policy) ||
           std::holds_alternative<ErrorTolerant>(policy);
}

std::optional<Prediction> arm_prediction(double now, FailureSource& failures,
                                         const Predictor& predictor, engine::RngStream& rng) {
    const auto next = failures.next_after(now);
    if (!next) return std::nullopt;
    const double ttf = *next - now;
    return Prediction{now, predict(ttf, predictor, rng), predictor.epsilon};
}

} // namespace

RunMetrics execute_job(double t_ideal_s, const CheckpointPolicy& policy, JobCosts costs,
                       FailureSource& failures, const Predictor& predictor,
                       engine::RngStream& prediction_rng, const ExecOptions& options,
                       std::vector<RunEvent>* trace) {
    JobExecutor ex(t_ideal_s, policy, costs, options);
    ex.set_trace(trace);
    const bool predictive = policy_uses_predictions(policy);

    double cursor = options.start_time;
    ex.start(cursor, predictive ? arm_prediction(cursor, failures, predictor, prediction_rng)
                                : std::nullopt);
    std::optional<double> pending_failure = failures.next_after(cursor);
    const double guard_end = options.start_time + options.guard_factor * t_ideal_s;

    while (!ex.done()) {
        const auto ev = ex.next_internal(cursor);
        if (pending_failure && *pending_failure < ev.time) {
            const double ft = *pending_failure;
            if (ft > guard_end && !options.throw_on_guard) break;
            ex.on_failure(ft);
            cursor = ft;
            pending_failure = failures.next_after(cursor);
        } else {
            if (ev.time > guard_end && !options.throw_on_guard) break;
            ex.apply(ev);
            cursor = ev.time;
            if (ex.wants_rearm())
                ex.rearm(cursor, predictive
                                     ? arm_prediction(cursor, failures, predictor, prediction_rng)
                                     : std::nullopt);
        }
    }

    RunMetrics metrics = ex.metrics();
    metrics.t_ideal_s = t_ideal_s;
    if (!ex.done()) {
        // Non-terminating guard hit with throwing disabled: cap the run.
        metrics.guard_tripped = true;
        metrics.t_exe_s = options.guard_factor * t_ideal_s;
        metrics.overhead = options.guard_factor - 1.0;
        metrics.deadline_met = false;
    }
    return metrics;
}

RunMetrics execute_job(double t_ideal_s, const CheckpointPolicy& policy, JobCosts costs,
                       const std::vector<double>& failure_times, const Predictor& predictor,
                       engine::RngStream& prediction_rng, const ExecOptions& options,
                       std::vector<RunEvent>* trace) {
    VectorFailureSource source(failure_times);
    return execute_job(t_ideal_s, policy, costs, source, predictor, prediction_rng, options,
                       trace);
}

// --- Replicated runs and calibration -------------------------------------------

ReplicaStats run_replica(const Scenario& scenario, const CheckpointPolicy& policy,
                         double rate_per_s, double epsilon, int replica_index) {
    workload::WorkloadParams wp;
    wp.mean_t_ideal_s = scenario.mean_t_ideal_s;
    wp.window_factor = scenario.window_factor;
    wp.arrival_rate_per_s = scenario.arrival_rate_per_s;
    wp.urgent_fraction = scenario.urgent_fraction;
    wp.jitter.kind = workload::JitterModel::Kind::None;

    const std::string rep = "/r" + std::to_string(replica_index);
    engine::RngStream workload_rng(scenario.seed, "workload" + rep);
    engine::RngStream cost_rng(scenario.seed, "costs" + rep);
    const workload::WorkloadTrace trace = workload::generate_workload(workload_rng, wp);

    const Predictor predictor{epsilon};
    ReplicaStats stats;
    double overhead_sum = 0.0;
    for (const workload::Job& job : trace.jobs) {
        const JobCosts costs = draw_costs(scenario.costs, cost_rng);
        const std::string tag = rep + "/j" + std::to_string(job.id);
        PoissonFailureSource failures(rate_per_s,
                                      engine::RngStream(scenario.seed, "faults" + tag));
        engine::RngStream prediction_rng(scenario.seed, "pred" + tag);
        ExecOptions options;
        options.deadline_s = job.timing.deadline_s;
        options.guard_factor = scenario.guard_factor;
        options.throw_on_guard = false;
        const RunMetrics m = execute_job(job.t_ideal_s, policy, costs, failures, predictor,
                                         prediction_rng, options);
        overhead_sum += m.overhead;
        stats.jobs += 1;
        stats.deadline_misses += m.deadline_met ? 0 : 1;
        stats.failures += m.failures;
        stats.checkpoints += m.checkpoints;
    }
    stats.mean_overhead = stats.jobs > 0 ? overhead_sum / stats.jobs : 0.0;
    return stats;
}

namespace {

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

double median_overhead(const Scenario& scenario, const CheckpointPolicy& policy,
                       double rate_per_s, double epsilon) {
    std::vector<double> overheads;
    overheads.reserve(static_cast<std::size_t>(scenario.replicas));
    for (int r = 0; r < scenario.replicas; ++r)
        overheads.push_back(run_replica(scenario, policy, rate_per_s, epsilon, r).mean_overhead);
    return median_of(std::move(overheads));
}

CalibrationResult calibrate_failure_rate(const Scenario& scenario,
                                         const CalibrationOptions& options) {
    if (scenario.replicas < 1) throw CalibrationError("calibration: need at least one replica");

    // Probe runs cap runaway executions early; anything beyond the target
    // band behaves identically for the bisection.
    Scenario probe = scenario;
    probe.guard_factor = std::min(scenario.guard_factor, 50.0);

    const auto overhead_at = [&](double rate) {
        return median_overhead(probe, RestartOnly{}, rate, 0.0);
    };

    double lo = options.rate_lo, hi = options.rate_hi;
    const double f_lo = overhead_at(lo);
    if (f_lo > options.target_hi) {
        std::ostringstream msg;
        msg << "calibration: overhead " << f_lo << " at bracket floor " << lo
            << "/s already exceeds the target band [" << options.target_lo << ", "
            << options.target_hi << "]";
        throw CalibrationError(msg.str());
    }
    if (f_lo >= options.target_lo) return CalibrationResult{lo, f_lo, 0};

    const double f_hi = overhead_at(hi);
    if (f_hi < options.target_lo) {
        std::ostringstream msg;
        msg << "calibration: overhead " << f_hi << " at bracket ceiling " << hi
            << "/s stays below the target band [" << options.target_lo << ", "
            << options.target_hi << "]";
        throw CalibrationError(msg.str());
    }
    if (f_hi <= options.target_hi) return CalibrationResult{hi, f_hi, 0};

    // Geometric bisection: the median overhead is monotone in the rate.
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double f_mid = overhead_at(mid);
        if (f_mid >= options.target_lo && f_mid <= options.target_hi) {
            // Report the achieved overhead under the full guard.
            const double achieved = median_overhead(scenario, RestartOnly{}, mid, 0.0);
            return CalibrationResult{mid, achieved, it};
        }
        if (f_mid < options.target_lo)
            lo = mid;
        else
            hi = mid;
    }
    std::ostringstream msg;
    msg << "calibration: no rate in [" << options.rate_lo << ", " << options.rate_hi
        << "]/s reached median overhead in [" << options.target_lo << ", " << options.target_hi
        << "] within " << options.max_iterations << " iterations";
    throw CalibrationError(msg.str());
}

} // namespace rmsim::reliability
