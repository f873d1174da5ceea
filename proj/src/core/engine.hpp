// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string>
#include <variant>
#include <vector>

namespace rmsim::engine {

// Simulated time in seconds. Real-valued; checkpoint and restore costs are
// fractions of arbitrary job lengths, so no quantization.
using SimTime = double;

constexpr std::int64_t kNoId = -1;

// --- Event payloads --------------------------------------------------------

struct JobArrival {
    std::int64_t job_id;
};
struct CheckpointStart {
    std::int64_t job_id;
    std::uint64_t token; // job-generation token; stale events are dropped
};
struct CheckpointDone {
    std::int64_t job_id;
    std::uint64_t token;
};
struct Failure {
    std::int64_t node;
    std::int64_t device = kNoId; // >= 0 for device-scoped faults
    bool node_down = false;
};
struct RestoreDone {
    std::int64_t job_id;
    std::uint64_t token;
};
struct JobDone {
    std::int64_t job_id;
    std::uint64_t token;
};
struct PredictionRearm {
    std::int64_t job_id;
};
struct TempStep {
    std::int64_t node;
};

using EventKind = std::variant<JobArrival, CheckpointStart, CheckpointDone, Failure,
                               RestoreDone, JobDone, PredictionRearm, TempStep>;

struct Event {
    SimTime time;
    std::uint64_t seq; // insertion counter, unique per run
    EventKind kind;
};

const char* kind_name(const EventKind& kind);
std::string payload_json(const EventKind& kind);

// One trace line per processed event:
//   time<TAB>seq<TAB>kind<TAB>payload-json-object
std::string format_trace_line(const Event& ev);

using SimTrace = std::vector<Event>;

void write_trace(std::ostream& os, const SimTrace& trace);

// --- Simulation kernel -----------------------------------------------------

// Deterministic event loop. Events are processed in (time, seq) order; the
// handler may schedule further events at or after the current time.
class Simulation {
public:
    using Handler = std::function<void(Simulation&, const Event&)>;

    SimTime now() const { return now_; }

    // Rejects event times before now() (CausalityError).
    void schedule(SimTime time, EventKind kind);

    // Processes every pending event with time <= horizon (inclusive) and
    // returns them in dequeue order. The clock ends at horizon even if the
    // queue empties early. Without a handler, events are traced only.
    SimTrace run_until(SimTime horizon, const Handler& handler = {});

    bool queue_empty() const { return queue_.empty(); }
    std::size_t pending() const { return queue_.size(); }

private:
    struct Ordering {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    SimTime now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Ordering> queue_;
};

} // namespace rmsim::engine
