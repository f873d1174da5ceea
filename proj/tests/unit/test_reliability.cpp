// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/reliability.hpp"

using namespace rmsim::reliability;
using rmsim::engine::RngStream;

TEST_CASE("failure rate equals 1/MTTF at the reference temperature") {
    FaultModel model{1e4, 318.0, 0.05};
    CHECK(effective_failure_rate(model, 318.0) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("beta = 0 removes the temperature dependence") {
    FaultModel model{1e4, 318.0, 0.0};
    CHECK(effective_failure_rate(model, 250.0) == effective_failure_rate(model, 400.0));
}

TEST_CASE("thermal acceleration follows the exponential law") {
    FaultModel model{1e4, 318.0, 0.05};
    const double rate = effective_failure_rate(model, 328.0);
    CHECK(rate == doctest::Approx(std::exp(0.5) / 1e4).epsilon(1e-12));
    CHECK(rate == doctest::Approx(1.6487e-4).epsilon(1e-4));
}

TEST_CASE("zero rate draws no failures") {
    RngStream rng(1, "faults");
    CHECK(draw_failures(rng, 0.0, 1e6).empty());
}

TEST_CASE("failure counts match the Poisson intensity") {
    double total = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        RngStream rng(static_cast<std::uint64_t>(s), "faults");
        total += static_cast<double>(draw_failures(rng, 1e-3, 1e6).size());
    }
    const double mean = total / seeds;
    CHECK(std::fabs(mean - 1000.0) / 1000.0 < 0.05);
}

TEST_CASE("failure gaps average to 1/rate") {
    RngStream rng(2, "faults");
    const double rate = 0.01;
    const auto times = draw_failures(rng, rate, 2e6); // ~20000 gaps
    REQUIRE(times.size() > 10000);
    double prev = 0.0, sum = 0.0;
    for (double t : times) {
        CHECK(t > prev);
        sum += t - prev;
        prev = t;
    }
    CHECK(std::fabs(sum / static_cast<double>(times.size()) - 1.0 / rate) * rate < 0.03);
}

TEST_CASE("exact predictor returns the true value") {
    RngStream rng(3, "pred");
    CHECK(predict(1234.5, Predictor{0.0}, rng) == 1234.5);
}

TEST_CASE("prediction error is bounded by epsilon") {
    RngStream rng(4, "pred");
    for (int i = 0; i < 1000; ++i) {
        const double p = predict(1000.0, Predictor{0.05}, rng);
        CHECK(p >= 950.0);
        CHECK(p <= 1050.0);
    }
}

TEST_CASE("mean absolute relative error is epsilon/2") {
    RngStream rng(5, "pred");
    const double eps = 0.1;
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum += std::fabs(predict(100.0, Predictor{eps}, rng) / 100.0 - 1.0);
    CHECK(sum / n <= eps / 2.0 + 0.01);
    CHECK(sum / n >= eps / 2.0 - 0.01);
}

TEST_CASE("cost draws stay inside the configured bands") {
    RngStream rng(6, "costs");
    CostParams params;
    for (int i = 0; i < 1000; ++i) {
        const JobCosts c = draw_costs(params, rng);
        CHECK(c.c >= 0.015);
        CHECK(c.c <= 0.02);
        CHECK(c.r >= 0.15);
        CHECK(c.r <= 0.20);
        CHECK(c.c < c.r);
    }
}

TEST_CASE("fine-grain flag scales the checkpoint fraction") {
    RngStream a(7, "costs"), b(7, "costs");
    CostParams params;
    params.fine_grain_fraction = 0.5;
    const JobCosts coarse = draw_costs(params, a, false);
    const JobCosts fine = draw_costs(params, b, true);
    CHECK(fine.c == doctest::Approx(coarse.c * 0.5));
    CHECK(fine.r == coarse.r);
}

// --- next_checkpoint ---------------------------------------------------------

namespace {

ExecSnapshot snapshot_at_start(double t_ideal, double c) {
    ExecSnapshot s;
    s.t_ideal_s = t_ideal;
    s.checkpoint_cost_s = c * t_ideal;
    s.job_start = 0.0;
    s.last_checkpoint_anchor = 0.0;
    return s;
}

} // namespace

TEST_CASE("fixed-rate interval defaults to 20x the checkpoint time") {
    const auto t = next_checkpoint(FixedRate{}, snapshot_at_start(100.0, 0.02), 0.0, std::nullopt);
    REQUIRE(t.has_value());
    CHECK(*t == 40.0);
}

TEST_CASE("error-tolerant fires at 90% of the predicted time to failure") {
    const Prediction pred{0.0, 1000.0, 0.0};
    const auto t =
        next_checkpoint(ErrorTolerant{}, snapshot_at_start(2000.0, 0.02), 0.0, pred);
    REQUIRE(t.has_value());
    CHECK(*t == 900.0);
}

TEST_CASE("restart-only never checkpoints") {
    const Prediction pred{0.0, 1000.0, 0.0};
    CHECK(!next_checkpoint(RestartOnly{}, snapshot_at_start(100.0, 0.02), 0.0, pred));
}

TEST_CASE("prediction-based completes at the predicted instant when exact") {
    const Prediction pred{0.0, 50.0, 0.0};
    const auto s = snapshot_at_start(100.0, 0.02);
    const auto t = next_checkpoint(PredictionBased{}, s, 0.0, pred);
    REQUIRE(t.has_value());
    CHECK(*t + s.checkpoint_cost_s == 50.0); // completes exactly at the prediction
}

TEST_CASE("prediction-based without a prediction does nothing") {
    CHECK(!next_checkpoint(PredictionBased{}, snapshot_at_start(100.0, 0.02), 0.0, std::nullopt));
}

// --- execute_job ----------------------------------------------------------------

TEST_CASE("failure-free restart-only run has zero overhead") {
    RngStream rng(8, "pred");
    const auto m = execute_job(100.0, RestartOnly{}, JobCosts{0.02, 0.175},
                               std::vector<double>{}, Predictor{0.0}, rng);
    CHECK(m.overhead == 0.0);
    CHECK(m.t_exe_s == 100.0);
    CHECK(m.checkpoints == 0);
    CHECK(m.failures == 0);
}

TEST_CASE("failure-free fixed-rate run pays exactly its checkpoints") {
    RngStream rng(9, "pred");
    std::vector<RunEvent> trace;
    const auto m = execute_job(100.0, FixedRate{}, JobCosts{0.02, 0.175}, std::vector<double>{},
                               Predictor{0.0}, rng, {}, &trace);
    CHECK(m.checkpoints == 2); // at work 40 and 80
    CHECK(m.overhead == doctest::Approx(0.04).epsilon(1e-12));
    // Checkpoints complete at progress 40 and 80.
    std::vector<double> done_progress;
    for (const RunEvent& e : trace)
        if (e.kind == RunEvent::Kind::CheckpointDone) done_progress.push_back(e.progress);
    REQUIRE(done_progress.size() == 2);
    CHECK(done_progress[0] == 40.0);
    CHECK(done_progress[1] == 80.0);
}

TEST_CASE("exact prediction turns a mid-run failure into c + r overhead") {
    RngStream rng(10, "pred");
    const auto m = execute_job(100.0, PredictionBased{}, JobCosts{0.02, 0.175},
                               std::vector<double>{50.0}, Predictor{0.0}, rng);
    CHECK(m.failures == 1);
    CHECK(m.checkpoints == 1);
    CHECK(m.overhead == doctest::Approx(0.02 + 0.175).epsilon(1e-12));
}

TEST_CASE("restart-only loses all progress at a failure") {
    RngStream rng(11, "pred");
    const auto m = execute_job(100.0, RestartOnly{}, JobCosts{0.02, 0.175},
                               std::vector<double>{60.0}, Predictor{0.0}, rng);
    // 60 lost + 17.5 restart + 100 full rerun.
    CHECK(m.t_exe_s == doctest::Approx(60.0 + 17.5 + 100.0).epsilon(1e-12));
    CHECK(m.failures == 1);
}

TEST_CASE("a failure during a checkpoint discards the in-flight checkpoint") {
    RngStream rng(12, "pred");
    // Fixed-rate: first checkpoint spans [40, 42]; fail at 41.
    std::vector<RunEvent> trace;
    const auto m = execute_job(100.0, FixedRate{}, JobCosts{0.02, 0.175},
                               std::vector<double>{41.0}, Predictor{0.0}, rng, {}, &trace);
    CHECK(m.checkpoints_aborted >= 1);
    // Durable progress was still zero, so the job restarted from scratch.
    bool saw_restore = false;
    for (const RunEvent& e : trace)
        if (e.kind == RunEvent::Kind::RestoreDone) {
            saw_restore = true;
            CHECK(e.progress == 0.0);
        }
    CHECK(saw_restore);
}

TEST_CASE("work conservation: running time covers T_ideal exactly when failure-free") {
    RngStream rng(13, "pred");
    std::vector<RunEvent> trace;
    const auto m = execute_job(100.0, FixedRate{}, JobCosts{0.0175, 0.18}, std::vector<double>{},
                               Predictor{0.0}, rng, {}, &trace);
    double frozen = 0.0;
    double ckpt_start = 0.0;
    for (const RunEvent& e : trace) {
        if (e.kind == RunEvent::Kind::CheckpointStart) ckpt_start = e.time;
        if (e.kind == RunEvent::Kind::CheckpointDone) frozen += e.time - ckpt_start;
    }
    CHECK(m.t_exe_s - frozen == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("overhead is zero exactly when nothing happened") {
    RngStream rng(14, "pred");
    for (int s = 0; s < 30; ++s) {
        RngStream frng(static_cast<std::uint64_t>(s), "f");
        const auto failures = draw_failures(frng, 0.005, 400.0);
        const auto m = execute_job(100.0, PredictionBased{}, JobCosts{0.0175, 0.18}, failures,
                                   Predictor{0.0}, rng);
        CHECK(m.overhead >= 0.0);
        if (m.failures == 0 && m.checkpoints == 0 && m.checkpoints_aborted == 0)
            CHECK(m.overhead == 0.0);
        else
            CHECK(m.overhead > 0.0);
    }
}

TEST_CASE("every checkpoint costs c x T_ideal and every restore r x T_ideal") {
    for (int s = 0; s < 20; ++s) {
        RngStream cost_rng(static_cast<std::uint64_t>(s), "costs");
        RngStream fail_rng(static_cast<std::uint64_t>(s), "faults");
        RngStream pred_rng(static_cast<std::uint64_t>(s), "pred");
        const JobCosts costs = draw_costs(CostParams{}, cost_rng);
        const auto failures = draw_failures(fail_rng, 0.01, 5000.0);
        std::vector<RunEvent> trace;
        execute_job(100.0, ErrorTolerant{}, costs, failures, Predictor{0.02}, pred_rng, {},
                    &trace);
        double start = 0.0;
        for (const RunEvent& e : trace) {
            if (e.kind == RunEvent::Kind::CheckpointStart) start = e.time;
            if (e.kind == RunEvent::Kind::CheckpointDone) {
                const double cost = e.time - start;
                CHECK(cost >= 0.015 * 100.0);
                CHECK(cost <= 0.02 * 100.0);
            }
            if (e.kind == RunEvent::Kind::RestoreStart) start = e.time;
            if (e.kind == RunEvent::Kind::RestoreDone) {
                const double cost = e.time - start;
                CHECK(cost >= 0.15 * 100.0);
                CHECK(cost <= 0.20 * 100.0);
            }
        }
    }
}

TEST_CASE("the non-termination guard trips on hopeless rates") {
    RngStream pred_rng(15, "pred");
    RngStream fail_rng(15, "faults");
    PoissonFailureSource failures(0.5, RngStream(15, "f2"));
    ExecOptions opt;
    opt.throw_on_guard = true;
    CHECK_THROWS_AS(execute_job(100.0, RestartOnly{}, JobCosts{0.02, 0.175}, failures,
                                Predictor{0.0}, pred_rng, opt),
                    rmsim::RunawayJobError);

    PoissonFailureSource failures2(0.5, RngStream(15, "f2"));
    opt.throw_on_guard = false;
    const auto m = execute_job(100.0, RestartOnly{}, JobCosts{0.02, 0.175}, failures2,
                               Predictor{0.0}, pred_rng, opt);
    CHECK(m.guard_tripped);
    CHECK(m.overhead == doctest::Approx(999.0));
}

TEST_CASE("deadline flag reflects the executed wall time") {
    RngStream rng(16, "pred");
    ExecOptions opt;
    opt.deadline_s = 110.0;
    const auto miss = execute_job(100.0, RestartOnly{}, JobCosts{0.02, 0.175},
                                  std::vector<double>{50.0}, Predictor{0.0}, rng, opt);
    CHECK(!miss.deadline_met);
    const auto hit = execute_job(100.0, RestartOnly{}, JobCosts{0.02, 0.175},
                                 std::vector<double>{}, Predictor{0.0}, rng, opt);
    CHECK(hit.deadline_met);
}
