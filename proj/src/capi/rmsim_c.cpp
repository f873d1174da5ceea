// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "rmsim/rmsim.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/experiment.hpp"

using rmsim::exp::ExperimentConfig;

struct rmsim_config {
    ExperimentConfig cfg;
};

struct rmsim_sweep_result {
    rmsim::exp::SweepResult result;
};

struct rmsim_pwcet_report {
    std::vector<rmsim::exp::PwcetReportRow> rows;
};

namespace {

thread_local std::string g_last_error;

rmsim_status fail(rmsim_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
rmsim_status wrap(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RMSIM_OK;
    } catch (const rmsim::ConfigError& e) {
        return fail(RMSIM_ERR_CONFIG, e.what());
    } catch (const rmsim::FitError& e) {
        return fail(RMSIM_ERR_CONFIG, e.what());
    } catch (const rmsim::CalibrationError& e) {
        return fail(RMSIM_ERR_CALIBRATION, e.what());
    } catch (const std::exception& e) {
        return fail(RMSIM_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(RMSIM_ERR_RUNTIME, "unknown error");
    }
}

} // namespace

extern "C" {

const char* rmsim_version(void) {
    return "0.1.0";
}

const char* rmsim_last_error(void) {
    return g_last_error.c_str();
}

rmsim_status rmsim_config_load(const char* path, rmsim_config** out) {
    if (!path || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    *out = nullptr;
    return wrap([&] { *out = new rmsim_config{ExperimentConfig::load_file(path)}; });
}

rmsim_status rmsim_config_from_json(const char* json_text, rmsim_config** out) {
    if (!json_text || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    *out = nullptr;
    return wrap([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw rmsim::ConfigError(std::string("invalid JSON: ") + e.what());
        }
        *out = new rmsim_config{ExperimentConfig::from_json(j)};
    });
}

void rmsim_config_free(rmsim_config* cfg) {
    delete cfg;
}

rmsim_status rmsim_config_set_seed(rmsim_config* cfg, uint64_t seed) {
    if (!cfg) return fail(RMSIM_ERR_INVALID_ARG, "null config");
    cfg->cfg.seed = seed;
    return RMSIM_OK;
}

rmsim_status rmsim_config_set_replicas(rmsim_config* cfg, int replicas) {
    if (!cfg) return fail(RMSIM_ERR_INVALID_ARG, "null config");
    if (replicas < 1) return fail(RMSIM_ERR_CONFIG, "replicas: must be >= 1");
    cfg->cfg.replicas = replicas;
    return RMSIM_OK;
}

rmsim_status rmsim_config_set_out_dir(rmsim_config* cfg, const char* dir) {
    if (!cfg || !dir) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    cfg->cfg.out_dir = dir;
    return RMSIM_OK;
}

rmsim_status rmsim_config_set_epsilon_grid(rmsim_config* cfg, const double* grid, size_t count) {
    if (!cfg || (!grid && count > 0)) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    if (count == 0) return fail(RMSIM_ERR_CONFIG, "epsilon_grid: must not be empty");
    std::vector<double> eps(grid, grid + count);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] < 0.0 || eps[i] >= 1.0)
            return fail(RMSIM_ERR_CONFIG, "epsilon_grid: entries must lie in [0, 1)");
        if (i > 0 && eps[i] < eps[i - 1])
            return fail(RMSIM_ERR_CONFIG, "epsilon_grid: must be sorted ascending");
    }
    cfg->cfg.epsilon_grid = std::move(eps);
    return RMSIM_OK;
}

rmsim_status rmsim_config_set_exceedance(rmsim_config* cfg, double exceedance) {
    if (!cfg) return fail(RMSIM_ERR_INVALID_ARG, "null config");
    if (!(exceedance > 0.0 && exceedance < 1.0))
        return fail(RMSIM_ERR_CONFIG, "exceedance: must lie in (0, 1)");
    cfg->cfg.exceedance = exceedance;
    return RMSIM_OK;
}

rmsim_status rmsim_config_set_failure_rate(rmsim_config* cfg, double rate_per_s) {
    if (!cfg) return fail(RMSIM_ERR_INVALID_ARG, "null config");
    if (rate_per_s < 0.0) return fail(RMSIM_ERR_CONFIG, "failure_rate_per_s: must be >= 0");
    cfg->cfg.failure_rate_per_s = rate_per_s;
    return RMSIM_OK;
}

rmsim_status rmsim_calibrate(const rmsim_config* cfg, rmsim_calibration* out) {
    if (!cfg || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    return wrap([&] {
        const auto result = rmsim::exp::run_calibrate(cfg->cfg);
        out->rate_per_s = result.rate_per_s;
        out->median_overhead = result.median_overhead;
        out->iterations = result.iterations;
    });
}

rmsim_status rmsim_sweep(const rmsim_config* cfg, rmsim_sweep_result** out) {
    if (!cfg || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    *out = nullptr;
    return wrap([&] { *out = new rmsim_sweep_result{rmsim::exp::run_sweep(cfg->cfg)}; });
}

size_t rmsim_sweep_row_count(const rmsim_sweep_result* result) {
    return result ? result->result.cells.size() : 0;
}

rmsim_status rmsim_sweep_row(const rmsim_sweep_result* result, size_t index,
                             rmsim_sweep_row* out) {
    if (!result || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    if (index >= result->result.cells.size())
        return fail(RMSIM_ERR_INVALID_ARG, "sweep row index out of range");
    const auto& cell = result->result.cells[index];
    out->policy = cell.policy.c_str();
    out->epsilon = cell.epsilon;
    out->median_overhead = cell.median_overhead;
    out->iqr_overhead = cell.iqr_overhead;
    out->deadline_miss_fraction = cell.deadline_miss_fraction;
    out->replicas = cell.replicas;
    return RMSIM_OK;
}

double rmsim_sweep_failure_rate(const rmsim_sweep_result* result) {
    return result ? result->result.failure_rate_per_s : 0.0;
}

void rmsim_sweep_result_free(rmsim_sweep_result* result) {
    delete result;
}

rmsim_status rmsim_simulate(const rmsim_config* cfg, rmsim_sim_summary* out) {
    if (!cfg || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    return wrap([&] {
        const auto result = rmsim::exp::run_simulate(cfg->cfg);
        const auto& s = result.summary;
        out->arrived = s.arrived;
        out->done = s.done;
        out->rejected = s.rejected;
        out->queued_at_horizon = s.queued_at_horizon;
        out->running_at_horizon = s.running_at_horizon;
        out->median_overhead = s.median_overhead;
        out->deadline_miss_fraction = s.deadline_miss_fraction;
        out->throughput_per_hour = s.throughput_per_hour;
        out->failures = s.failures;
        out->checkpoints = s.checkpoints;
    });
}

rmsim_status rmsim_pwcet(const char* const* sample_files, size_t file_count, double exceedance,
                         const char* out_dir, rmsim_pwcet_report** out) {
    if (!sample_files || !out_dir || !out)
        return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    if (!(exceedance > 0.0 && exceedance < 1.0))
        return fail(RMSIM_ERR_CONFIG, "exceedance: must lie in (0, 1)");
    *out = nullptr;
    return wrap([&] {
        std::vector<std::string> files(sample_files, sample_files + file_count);
        *out = new rmsim_pwcet_report{rmsim::exp::run_pwcet(files, exceedance, out_dir)};
    });
}

size_t rmsim_pwcet_row_count(const rmsim_pwcet_report* report) {
    return report ? report->rows.size() : 0;
}

rmsim_status rmsim_pwcet_row(const rmsim_pwcet_report* report, size_t index,
                             rmsim_pwcet_row* out) {
    if (!report || !out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    if (index >= report->rows.size())
        return fail(RMSIM_ERR_INVALID_ARG, "pwcet row index out of range");
    const auto& r = report->rows[index];
    out->label = r.label.c_str();
    out->n = r.n;
    out->u = r.u;
    out->sigma = r.sigma;
    out->cv = r.cv;
    out->cv_pass = r.pass ? 1 : 0;
    out->met = r.met;
    out->pwcet = r.pwcet;
    out->rel_increase = r.rel_increase;
    return RMSIM_OK;
}

void rmsim_pwcet_report_free(rmsim_pwcet_report* report) {
    delete report;
}

rmsim_status rmsim_report(const char* out_dir, char** summary_out) {
    if (!out_dir || !summary_out) return fail(RMSIM_ERR_INVALID_ARG, "null argument");
    *summary_out = nullptr;
    return wrap([&] {
        const std::string summary = rmsim::exp::run_report(out_dir);
        char* buf = static_cast<char*>(std::malloc(summary.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, summary.c_str(), summary.size() + 1);
        *summary_out = buf;
    });
}

void rmsim_string_free(char* s) {
    std::free(s);
}

} // extern "C"
