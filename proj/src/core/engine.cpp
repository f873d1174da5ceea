// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/engine.hpp"

#include <ostream>
#include <sstream>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace rmsim::engine {

namespace {

struct KindNameVisitor {
    const char* operator()(const JobArrival&) const { return "JobArrival"; }
    const char* operator()(const CheckpointStart&) const { return "CheckpointStart"; }
    const char* operator()(const CheckpointDone&) const { return "CheckpointDone"; }
    const char* operator()(const Failure&) const { return "Failure"; }
    const char* operator()(const RestoreDone&) const { return "RestoreDone"; }
    const char* operator()(const JobDone&) const { return "JobDone"; }
    const char* operator()(const PredictionRearm&) const { return "PredictionRearm"; }
    const char* operator()(const TempStep&) const { return "TempStep"; }
};

std::string job_payload(std::int64_t job_id) {
    return "{\"job\":" + std::to_string(job_id) + "}";
}

std::string job_token_payload(std::int64_t job_id, std::uint64_t token) {
    return "{\"job\":" + std::to_string(job_id) + ",\"token\":" + std::to_string(token) + "}";
}

struct PayloadVisitor {
    std::string operator()(const JobArrival& p) const { return job_payload(p.job_id); }
    std::string operator()(const CheckpointStart& p) const {
        return job_token_payload(p.job_id, p.token);
    }
    std::string operator()(const CheckpointDone& p) const {
        return job_token_payload(p.job_id, p.token);
    }
    std::string operator()(const Failure& p) const {
        std::string s = "{\"node\":" + std::to_string(p.node);
        if (p.device != kNoId) s += ",\"device\":" + std::to_string(p.device);
        if (p.node_down) s += ",\"node_down\":true";
        return s + "}";
    }
    std::string operator()(const RestoreDone& p) const {
        return job_token_payload(p.job_id, p.token);
    }
    std::string operator()(const JobDone& p) const { return job_token_payload(p.job_id, p.token); }
    std::string operator()(const PredictionRearm& p) const { return job_payload(p.job_id); }
    std::string operator()(const TempStep& p) const {
        return "{\"node\":" + std::to_string(p.node) + "}";
    }
};

} // namespace

const char* kind_name(const EventKind& kind) {
    return std::visit(KindNameVisitor{}, kind);
}

std::string payload_json(const EventKind& kind) {
    return std::visit(PayloadVisitor{}, kind);
}

std::string format_trace_line(const Event& ev) {
    std::string line = format_double(ev.time);
    line += '\t';
    line += std::to_string(ev.seq);
    line += '\t';
    line += kind_name(ev.kind);
    line += '\t';
    line += payload_json(ev.kind);
    return line;
}

void write_trace(std::ostream& os, const SimTrace& trace) {
    for (const Event& ev : trace) os << format_trace_line(ev) << '\n';
}

void Simulation::schedule(SimTime time, EventKind kind) {
    if (!(time >= now_)) {
        std::ostringstream msg;
        msg << "cannot schedule " << kind_name(kind) << " at t=" << time
            << " before current time t=" << now_;
        throw CausalityError(msg.str());
    }
    queue_.push(Event{time, next_seq_++, std::move(kind)});
}

SimTrace Simulation::run_until(SimTime horizon, const Handler& handler) {
    if (!(horizon >= now_)) {
        std::ostringstream msg;
        msg << "horizon t=" << horizon << " lies before current time t=" << now_;
        throw CausalityError(msg.str());
    }
    SimTrace trace;
    while (!queue_.empty() && queue_.top().time <= horizon) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.time;
        trace.push_back(ev);
        if (handler) handler(*this, ev);
    }
    now_ = horizon;
    return trace;
}

} // namespace rmsim::engine
