// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "core/engine.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"

using namespace rmsim::engine;

TEST_CASE("events at equal time dequeue in insertion order") {
    Simulation sim;
    sim.schedule(5.0, JobArrival{1}); // A
    sim.schedule(5.0, JobArrival{2}); // B
    const SimTrace trace = sim.run_until(10.0);
    REQUIRE(trace.size() == 2);
    CHECK(std::get<JobArrival>(trace[0].kind).job_id == 1);
    CHECK(std::get<JobArrival>(trace[1].kind).job_id == 2);
}

TEST_CASE("events dequeue in time order regardless of insertion") {
    Simulation sim;
    sim.schedule(3.0, JobArrival{1});
    sim.schedule(1.0, JobArrival{2});
    const SimTrace trace = sim.run_until(10.0);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].time == 1.0);
    CHECK(trace[1].time == 3.0);
}

TEST_CASE("scheduling into the past is a causality error") {
    Simulation sim;
    sim.schedule(2.0, JobArrival{1});
    sim.run_until(2.0);
    CHECK_THROWS_AS(sim.schedule(1.0, JobArrival{2}), rmsim::CausalityError);
}

TEST_CASE("empty queue still advances the clock to the horizon") {
    Simulation sim;
    const SimTrace trace = sim.run_until(100.0);
    CHECK(trace.empty());
    CHECK(sim.now() == 100.0);
}

TEST_CASE("horizon is inclusive") {
    Simulation sim;
    sim.schedule(0.0, JobArrival{1});
    const SimTrace trace = sim.run_until(0.0);
    CHECK(trace.size() == 1);
}

TEST_CASE("events beyond the horizon stay queued") {
    Simulation sim;
    sim.schedule(1.0, JobArrival{1});
    sim.schedule(7.0, JobArrival{2});
    CHECK(sim.run_until(5.0).size() == 1);
    CHECK(sim.pending() == 1);
    CHECK(sim.run_until(10.0).size() == 1);
}

TEST_CASE("handlers may schedule follow-up events at the current time") {
    Simulation sim;
    sim.schedule(1.0, JobArrival{1});
    int handled = 0;
    sim.run_until(5.0, [&](Simulation& s, const Event& ev) {
        ++handled;
        if (auto* arrival = std::get_if<JobArrival>(&ev.kind); arrival && arrival->job_id == 1)
            s.schedule(ev.time, JobDone{1, 0});
    });
    CHECK(handled == 2);
}

namespace {

SimTrace random_trace(std::uint64_t seed) {
    rmsim::engine::RngStream rng(seed, "events");
    Simulation sim;
    for (int i = 0; i < 200; ++i) sim.schedule(rng.uniform(0.0, 100.0), JobArrival{i});
    return sim.run_until(200.0, [&](Simulation& s, const Event& ev) {
        if (ev.time < 150.0 && std::holds_alternative<JobArrival>(ev.kind))
            s.schedule(ev.time + rng.uniform(0.0, 10.0), TempStep{0});
    });
}

std::string render(const SimTrace& trace) {
    std::ostringstream os;
    write_trace(os, trace);
    return os.str();
}

} // namespace

TEST_CASE("identical (config, seed) yields byte-identical traces") {
    CHECK(render(random_trace(9)) == render(random_trace(9)));
}

TEST_CASE("trace is ordered by (time, seq) and the clock never decreases") {
    const SimTrace trace = random_trace(10);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i].time >= trace[i - 1].time);
        if (trace[i].time == trace[i - 1].time) CHECK(trace[i].seq > trace[i - 1].seq);
    }
}

TEST_CASE("trace lines are tab-separated with a json payload") {
    Simulation sim;
    sim.schedule(1.5, Failure{3, 2, false});
    const SimTrace trace = sim.run_until(2.0);
    const std::string line = format_trace_line(trace[0]);
    CHECK(line == "1.5\t0\tFailure\t{\"node\":3,\"device\":2}");
}
