// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0
//
// rmsim command-line front end. Talks to the simulation library exclusively
// through the public C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmsim/rmsim.h"

namespace {

struct ConfigDeleter {
    void operator()(rmsim_config* c) const { rmsim_config_free(c); }
};
using ConfigPtr = std::unique_ptr<rmsim_config, ConfigDeleter>;

int exit_code(rmsim_status status) {
    switch (status) {
        case RMSIM_OK: return 0;
        case RMSIM_ERR_CONFIG: return 2;
        case RMSIM_ERR_CALIBRATION: return 3;
        default: return 1;
    }
}

int report_failure(rmsim_status status) {
    std::fprintf(stderr, "error: %s\n", rmsim_last_error());
    return exit_code(status);
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string epsilon_grid;
    std::uint64_t seed = 0;
    int replicas = 0;
    double exceedance = 0.0;
    bool has_seed = false, has_replicas = false, has_exceedance = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* cfg = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) cfg->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "base RNG seed")->each([&](const std::string&) {
        opts.has_seed = true;
    });
    cmd->add_option("--replicas", opts.replicas, "replicas per sweep cell")
        ->each([&](const std::string&) { opts.has_replicas = true; });
    cmd->add_option("--epsilon-grid", opts.epsilon_grid,
                    "comma-separated prediction-error grid, e.g. 0,0.01,0.05");
    cmd->add_option("--exceedance", opts.exceedance, "pWCET exceedance probability")
        ->each([&](const std::string&) { opts.has_exceedance = true; });
}

bool parse_grid(const std::string& text, std::vector<double>& grid, std::string& err) {
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            err = "epsilon-grid: '" + tok + "' is not a number";
            return false;
        }
    }
    if (grid.empty()) {
        err = "epsilon-grid: empty list";
        return false;
    }
    return true;
}

// Loads the config and applies flag overrides; returns nullptr + prints on error.
ConfigPtr load_config(const CommonOpts& opts, rmsim_status& status) {
    rmsim_config* raw = nullptr;
    status = rmsim_config_load(opts.config_path.c_str(), &raw);
    ConfigPtr cfg(raw);
    if (status != RMSIM_OK) return nullptr;
    if (opts.has_seed) status = rmsim_config_set_seed(cfg.get(), opts.seed);
    if (status == RMSIM_OK && opts.has_replicas)
        status = rmsim_config_set_replicas(cfg.get(), opts.replicas);
    if (status == RMSIM_OK && !opts.out_dir.empty())
        status = rmsim_config_set_out_dir(cfg.get(), opts.out_dir.c_str());
    if (status == RMSIM_OK && opts.has_exceedance)
        status = rmsim_config_set_exceedance(cfg.get(), opts.exceedance);
    if (status == RMSIM_OK && !opts.epsilon_grid.empty()) {
        std::vector<double> grid;
        std::string err;
        if (!parse_grid(opts.epsilon_grid, grid, err)) {
            std::fprintf(stderr, "error: %s\n", err.c_str());
            status = RMSIM_ERR_CONFIG;
            return nullptr;
        }
        status = rmsim_config_set_epsilon_grid(cfg.get(), grid.data(), grid.size());
    }
    if (status != RMSIM_OK) return nullptr;
    return cfg;
}

int cmd_calibrate(const CommonOpts& opts) {
    rmsim_status status;
    ConfigPtr cfg = load_config(opts, status);
    if (!cfg) return report_failure(status);
    rmsim_calibration cal{};
    status = rmsim_calibrate(cfg.get(), &cal);
    if (status != RMSIM_OK) return report_failure(status);
    std::printf("calibrated failure rate: %.8g /s\n", cal.rate_per_s);
    std::printf("achieved median overhead: %.4f (target 1.00 +/- 0.05)\n", cal.median_overhead);
    std::printf("bisection iterations: %d\n", cal.iterations);
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    rmsim_status status;
    ConfigPtr cfg = load_config(opts, status);
    if (!cfg) return report_failure(status);
    rmsim_sweep_result* result = nullptr;
    status = rmsim_sweep(cfg.get(), &result);
    if (status != RMSIM_OK) return report_failure(status);
    std::printf("failure rate: %.8g /s\n", rmsim_sweep_failure_rate(result));
    std::printf("%-18s %8s %10s %10s %8s\n", "policy", "epsilon", "median_O", "iqr", "miss");
    for (size_t i = 0; i < rmsim_sweep_row_count(result); ++i) {
        rmsim_sweep_row row{};
        rmsim_sweep_row(result, i, &row);
        std::printf("%-18s %8.4g %10.4f %10.4f %8.4f\n", row.policy, row.epsilon,
                    row.median_overhead, row.iqr_overhead, row.deadline_miss_fraction);
    }
    rmsim_sweep_result_free(result);
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    rmsim_status status;
    ConfigPtr cfg = load_config(opts, status);
    if (!cfg) return report_failure(status);
    rmsim_sim_summary s{};
    status = rmsim_simulate(cfg.get(), &s);
    if (status != RMSIM_OK) return report_failure(status);
    std::printf("jobs: arrived=%d done=%d rejected=%d queued=%d running=%d\n", s.arrived, s.done,
                s.rejected, s.queued_at_horizon, s.running_at_horizon);
    std::printf("median overhead: %.4f\n", s.median_overhead);
    std::printf("deadline miss fraction: %.6f\n", s.deadline_miss_fraction);
    std::printf("throughput: %.3f jobs/h\n", s.throughput_per_hour);
    std::printf("failures: %d, checkpoints: %d\n", s.failures, s.checkpoints);
    return 0;
}

int cmd_pwcet(const CommonOpts& opts, const std::vector<std::string>& files) {
    const double exceedance = opts.has_exceedance ? opts.exceedance : 1e-6;
    const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
    std::vector<const char*> raw;
    raw.reserve(files.size());
    for (const std::string& f : files) raw.push_back(f.c_str());
    rmsim_pwcet_report* report = nullptr;
    const rmsim_status status =
        rmsim_pwcet(raw.data(), raw.size(), exceedance, out_dir.c_str(), &report);
    if (status != RMSIM_OK) return report_failure(status);
    std::printf("%-12s %8s %10s %10s %8s %5s %10s %12s %8s\n", "label", "n", "u", "sigma", "cv",
                "pass", "met", "pwcet", "rel");
    for (size_t i = 0; i < rmsim_pwcet_row_count(report); ++i) {
        rmsim_pwcet_row row{};
        rmsim_pwcet_row(report, i, &row);
        std::printf("%-12s %8zu %10.4f %10.4f %8.4f %5s %10.4f %12.4f %8.4f\n", row.label, row.n,
                    row.u, row.sigma, row.cv, row.cv_pass ? "yes" : "no", row.met, row.pwcet,
                    row.rel_increase);
    }
    rmsim_pwcet_report_free(report);
    return 0;
}

int cmd_report(const CommonOpts& opts) {
    const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
    char* summary = nullptr;
    const rmsim_status status = rmsim_report(out_dir.c_str(), &summary);
    if (status != RMSIM_OK) return report_failure(status);
    std::printf("%s", summary);
    rmsim_string_free(summary);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmsim - checkpoint/restart and timing-analysis simulator for "
                 "heterogeneous clusters"};
    app.set_version_flag("--version", rmsim_version());
    app.require_subcommand(1);

    CommonOpts simulate_opts, calibrate_opts, sweep_opts, pwcet_opts, report_opts;
    std::vector<std::string> sample_files;

    auto* simulate = app.add_subcommand("simulate", "run the full cluster simulation");
    add_common_flags(simulate, simulate_opts, true);

    auto* calibrate =
        app.add_subcommand("calibrate", "pin the failure rate to unit baseline slowdown");
    add_common_flags(calibrate, calibrate_opts, true);

    auto* sweep = app.add_subcommand("sweep", "prediction-error sweep across policies");
    add_common_flags(sweep, sweep_opts, true);

    auto* pwcet = app.add_subcommand("pwcet", "fit exponential tails to execution-time samples");
    add_common_flags(pwcet, pwcet_opts, false);
    pwcet->add_option("samples", sample_files, "sample files, one value per line")
        ->required()
        ->check(CLI::ExistingFile);

    auto* report = app.add_subcommand("report", "rebuild charts from CSVs in --out");
    add_common_flags(report, report_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed()) return cmd_simulate(simulate_opts);
    if (calibrate->parsed()) return cmd_calibrate(calibrate_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (pwcet->parsed()) return cmd_pwcet(pwcet_opts, sample_files);
    if (report->parsed()) return cmd_report(report_opts);
    return 2;
}
