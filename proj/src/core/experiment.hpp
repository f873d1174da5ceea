// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/platform.hpp"
#include "core/pwcet.hpp"
#include "core/reliability.hpp"
#include "core/rtms.hpp"
#include "core/thermal.hpp"
#include "core/workload.hpp"

namespace rmsim::exp {

// Experiment configuration, normally loaded from a JSON file. Validation
// collects all field errors into a single ConfigError listing them
// line-by-line.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    int replicas = 20;
    std::string out_dir = ".";
    std::optional<double> failure_rate_per_s;
    double exceedance = 1e-6;
    std::vector<double> epsilon_grid = {0.0, 0.005, 0.01, 0.025, 0.05, 0.1};
    std::vector<reliability::CheckpointPolicy> policies = {
        reliability::FixedRate{}, reliability::PredictionBased{}, reliability::ErrorTolerant{}};

    workload::WorkloadParams workload;
    reliability::CostParams costs;
    reliability::FaultModel fault;
    std::optional<platform::Topology> topology;

    // Full-system simulation options.
    reliability::CheckpointPolicy sim_policy = reliability::PredictionBased{};
    double sim_epsilon = 0.0;
    double horizon_s = 0.0;
    bool thermal_enabled = true;
    platform::ThermalConfig thermal;
    double thermal_period_s = 1.0;
    rtms::RtmsConfig rtms;
    double device_fault_fraction = 0.0;
    std::vector<rtms::NodeDownEvent> node_down_events;
    std::string trace_file;

    static ExperimentConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
    static ExperimentConfig load_file(const std::string& path);

    reliability::Scenario scenario() const;
};

// --- Commands -----------------------------------------------------------------

// Calibrates the RestartOnly failure rate and writes <out>/calibration.csv.
reliability::CalibrationResult run_calibrate(const ExperimentConfig& cfg);

struct SweepCell {
    std::string policy;
    double epsilon = 0.0;
    double median_overhead = 0.0;
    double iqr_overhead = 0.0;
    double deadline_miss_fraction = 0.0;
    int replicas = 0;
};

struct SweepResult {
    double failure_rate_per_s = 0.0;
    std::vector<SweepCell> cells; // policies x epsilon grid, in config order
};

// Paired-seed sweep over (policy, epsilon); writes <out>/sweep.csv and
// <out>/sweep.svg. The failure rate comes from the config or from a previous
// calibration.csv in the output directory; otherwise CalibrationError.
SweepResult run_sweep(const ExperimentConfig& cfg);

// Full-cluster run; writes <out>/jobs.csv, <out>/sched_log.csv,
// <out>/summary.json and optionally the event trace.
rtms::ClusterResult run_simulate(const ExperimentConfig& cfg);

struct PwcetReportRow {
    std::string label;
    std::size_t n = 0;
    double u = 0.0;
    double sigma = 0.0;
    double cv = 0.0;
    bool pass = false;
    double met = 0.0;
    double pwcet = 0.0;
    double rel_increase = 0.0;
};

// Fits each sample file (one value per line; label = file stem) and writes
// <out>/pwcet_report.csv plus <out>/pwcet.svg.
std::vector<PwcetReportRow> run_pwcet(const std::vector<std::string>& sample_files,
                                      double exceedance, const std::string& out_dir);

// Regenerates the SVG charts from the CSVs already in <out>; returns a short
// human-readable summary.
std::string run_report(const std::string& out_dir);

// --- Shared file helpers (used by commands and tests) --------------------------

std::string sweep_csv_path(const std::string& out_dir);
std::string calibration_csv_path(const std::string& out_dir);
void write_sweep_files(const SweepResult& result, const std::string& out_dir);
SweepResult read_sweep_csv(const std::string& path);
void write_pwcet_files(const std::vector<PwcetReportRow>& rows, const std::string& out_dir);
std::vector<PwcetReportRow> read_pwcet_csv(const std::string& path);

} // namespace rmsim::exp
