// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "core/svg.hpp"
#include "core/text.hpp"

namespace rmsim::exp {

namespace fs = std::filesystem;

namespace {

double quantile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) fields.push_back(cur);
    return fields;
}

} // namespace

// --- Config loading -------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j,
                                             const std::string& base_dir) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    const auto fail = [&](const std::string& field, const std::string& why) {
        errors.push_back(field + ": " + why);
    };

    const auto get_num = [&](const nlohmann::json& obj, const char* key, double lo, double hi,
                             double& target, const std::string& scope) {
        if (!obj.contains(key)) return;
        if (!obj.at(key).is_number()) {
            fail(scope + key, "must be a number");
            return;
        }
        const double v = obj.at(key).get<double>();
        if (v < lo || v > hi) {
            std::ostringstream msg;
            msg << "must lie in [" << lo << ", " << hi << "], got " << v;
            fail(scope + key, msg.str());
            return;
        }
        target = v;
    };

    try {
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("replicas")) {
            cfg.replicas = j.at("replicas").get<int>();
            if (cfg.replicas < 1) fail("replicas", "must be >= 1");
        }
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("failure_rate_per_s")) {
            const double r = j.at("failure_rate_per_s").get<double>();
            if (r < 0.0)
                fail("failure_rate_per_s", "must be non-negative");
            else
                cfg.failure_rate_per_s = r;
        }
        get_num(j, "exceedance", 1e-12, 0.5, cfg.exceedance, "");

        if (j.contains("epsilon_grid")) {
            cfg.epsilon_grid.clear();
            for (const auto& e : j.at("epsilon_grid")) {
                const double v = e.get<double>();
                if (v < 0.0 || v >= 1.0) fail("epsilon_grid", "entries must lie in [0, 1)");
                cfg.epsilon_grid.push_back(v);
            }
            if (!std::is_sorted(cfg.epsilon_grid.begin(), cfg.epsilon_grid.end()))
                fail("epsilon_grid", "must be sorted ascending");
            if (cfg.epsilon_grid.empty()) fail("epsilon_grid", "must not be empty");
        }
        if (j.contains("policies")) {
            cfg.policies.clear();
            for (const auto& p : j.at("policies")) {
                try {
                    cfg.policies.push_back(
                        reliability::policy_from_string(p.get<std::string>()));
                } catch (const ConfigError& e) {
                    fail("policies", e.what());
                }
            }
            if (cfg.policies.empty()) fail("policies", "must not be empty");
        }

        if (j.contains("workload")) {
            const auto& w = j.at("workload");
            const std::string scope = "workload.";
            get_num(w, "mean_t_ideal_s", 1e-9, 1e12, cfg.workload.mean_t_ideal_s, scope);
            get_num(w, "window_factor", 1e-9, 1e9, cfg.workload.window_factor, scope);
            get_num(w, "arrival_rate_per_s", 0.0, 1e9, cfg.workload.arrival_rate_per_s, scope);
            get_num(w, "urgent_fraction", 0.0, 1.0, cfg.workload.urgent_fraction, scope);
            if (w.contains("kernels_per_job")) {
                cfg.workload.kernels_per_job = w.at("kernels_per_job").get<int>();
                if (cfg.workload.kernels_per_job < 1)
                    fail("workload.kernels_per_job", "must be >= 1");
            }
            if (w.contains("jitter")) {
                const auto& jj = w.at("jitter");
                const std::string kind = jj.value("kind", "exponential");
                if (kind == "none")
                    cfg.workload.jitter.kind = workload::JitterModel::Kind::None;
                else if (kind == "exponential")
                    cfg.workload.jitter.kind = workload::JitterModel::Kind::Exponential;
                else if (kind == "uniform")
                    cfg.workload.jitter.kind = workload::JitterModel::Kind::Uniform;
                else
                    fail("workload.jitter.kind", "expected none|exponential|uniform");
                get_num(jj, "scale", 0.0, 10.0, cfg.workload.jitter.scale, "workload.jitter.");
            }
            if (w.contains("impl_kinds")) {
                cfg.workload.impl_kinds.clear();
                for (const auto& ik : w.at("impl_kinds")) {
                    try {
                        const auto kind = platform::device_kind_from_string(
                            ik.at("kind").get<std::string>());
                        const double speedup = ik.value("speedup", 1.0);
                        if (!(speedup > 0.0)) {
                            fail("workload.impl_kinds", "speedup must be positive");
                            continue;
                        }
                        cfg.workload.impl_kinds.emplace_back(kind, speedup);
                    } catch (const std::exception& e) {
                        fail("workload.impl_kinds", e.what());
                    }
                }
                if (cfg.workload.impl_kinds.empty())
                    fail("workload.impl_kinds", "must not be empty");
            }
        }

        if (j.contains("costs")) {
            const auto& c = j.at("costs");
            get_num(c, "c_min", 1e-9, 1.0, cfg.costs.c_min, "costs.");
            get_num(c, "c_max", 1e-9, 1.0, cfg.costs.c_max, "costs.");
            get_num(c, "r_min", 0.0, 1.0, cfg.costs.r_min, "costs.");
            get_num(c, "r_max", 0.0, 1.0, cfg.costs.r_max, "costs.");
            get_num(c, "fine_grain_fraction", 1e-9, 1.0, cfg.costs.fine_grain_fraction,
                    "costs.");
            if (cfg.costs.c_max < cfg.costs.c_min) fail("costs", "c_max must be >= c_min");
            if (cfg.costs.r_max < cfg.costs.r_min) fail("costs", "r_max must be >= r_min");
        }

        if (j.contains("fault")) {
            const auto& f = j.at("fault");
            get_num(f, "base_mttf_s", 1e-9, 1e15, cfg.fault.base_mttf_s, "fault.");
            get_num(f, "t_ref_k", 1.0, 2000.0, cfg.fault.t_ref_k, "fault.");
            get_num(f, "beta_per_k", 0.0, 10.0, cfg.fault.beta_per_k, "fault.");
        }

        if (j.contains("thermal")) {
            const auto& t = j.at("thermal");
            get_num(t, "ambient_k", 1.0, 2000.0, cfg.thermal.ambient_k, "thermal.");
            get_num(t, "g_vertical_w_per_k", 1e-9, 1e6, cfg.thermal.g_vertical_w_per_k,
                    "thermal.");
            get_num(t, "g_lateral_w_per_k", 1e-9, 1e6, cfg.thermal.g_lateral_w_per_k,
                    "thermal.");
            get_num(t, "heat_capacity_j_per_k", 1e-9, 1e6, cfg.thermal.heat_capacity_j_per_k,
                    "thermal.");
            get_num(t, "max_cell_power_w", 1e-9, 1e6, cfg.thermal.max_cell_power_w, "thermal.");
        }

        if (j.contains("topology") && j.contains("topology_file"))
            fail("topology", "give either topology or topology_file, not both");
        if (j.contains("topology")) {
            try {
                cfg.topology = platform::Topology::from_json(j.at("topology"));
            } catch (const ConfigError& e) {
                fail("topology", e.what());
            }
        } else if (j.contains("topology_file")) {
            const fs::path p = j.at("topology_file").get<std::string>();
            const fs::path resolved = p.is_absolute() ? p : fs::path(base_dir) / p;
            try {
                cfg.topology = platform::Topology::load_file(resolved.string());
            } catch (const ConfigError& e) {
                fail("topology_file", e.what());
            }
        }

        if (j.contains("sim")) {
            const auto& s = j.at("sim");
            if (s.contains("policy")) {
                try {
                    cfg.sim_policy =
                        reliability::policy_from_string(s.at("policy").get<std::string>());
                } catch (const ConfigError& e) {
                    fail("sim.policy", e.what());
                }
            }
            get_num(s, "epsilon", 0.0, 0.999, cfg.sim_epsilon, "sim.");
            get_num(s, "horizon_s", 0.0, 1e15, cfg.horizon_s, "sim.");
            if (s.contains("thermal_enabled"))
                cfg.thermal_enabled = s.at("thermal_enabled").get<bool>();
            get_num(s, "thermal_period_s", 1e-6, 1e6, cfg.thermal_period_s, "sim.");
            get_num(s, "per_hop_latency_frac", 0.0, 100.0, cfg.rtms.per_hop_latency_frac,
                    "sim.");
            get_num(s, "power_weight", 0.0, 1e9, cfg.rtms.power_weight, "sim.");
            get_num(s, "device_fault_fraction", 0.0, 1.0, cfg.device_fault_fraction, "sim.");
            if (s.contains("admission_samples")) {
                const auto n = s.at("admission_samples").get<std::int64_t>();
                if (n < 30)
                    fail("sim.admission_samples", "must be >= 30");
                else
                    cfg.rtms.admission_samples = static_cast<std::size_t>(n);
            }
            if (s.contains("trace_file")) cfg.trace_file = s.at("trace_file").get<std::string>();
            if (s.contains("node_down_events")) {
                for (const auto& e : s.at("node_down_events")) {
                    rtms::NodeDownEvent ev;
                    ev.time_s = e.at("time_s").get<double>();
                    ev.node = e.at("node").get<std::int64_t>();
                    if (ev.time_s < 0.0) fail("sim.node_down_events", "time_s must be >= 0");
                    cfg.node_down_events.push_back(ev);
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail("<config>", e.what());
    }

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const std::string& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(j, fs::path(path).parent_path().string());
}

reliability::Scenario ExperimentConfig::scenario() const {
    reliability::Scenario sc;
    sc.mean_t_ideal_s = workload.mean_t_ideal_s;
    sc.window_factor = workload.window_factor;
    sc.arrival_rate_per_s = workload.arrival_rate_per_s;
    sc.urgent_fraction = workload.urgent_fraction;
    sc.costs = costs;
    sc.replicas = replicas;
    sc.seed = seed;
    return sc;
}

// --- Paths ----------------------------------------------------------------------

std::string sweep_csv_path(const std::string& out_dir) {
    return (fs::path(out_dir) / "sweep.csv").string();
}

std::string calibration_csv_path(const std::string& out_dir) {
    return (fs::path(out_dir) / "calibration.csv").string();
}

// --- calibrate --------------------------------------------------------------------

reliability::CalibrationResult run_calibrate(const ExperimentConfig& cfg) {
    const auto result = reliability::calibrate_failure_rate(cfg.scenario());
    fs::create_directories(cfg.out_dir);
    std::ostringstream csv;
    csv << "failure_rate_per_s,median_overhead,replicas,iterations,seed\n";
    csv << format_double(result.rate_per_s) << ',' << format_double(result.median_overhead)
        << ',' << cfg.replicas << ',' << result.iterations << ',' << cfg.seed << '\n';
    write_file(calibration_csv_path(cfg.out_dir), csv.str());
    return result;
}

// --- sweep ------------------------------------------------------------------------

namespace {

double resolve_rate(const ExperimentConfig& cfg) {
    if (cfg.failure_rate_per_s) return *cfg.failure_rate_per_s;
    const std::string path = calibration_csv_path(cfg.out_dir);
    std::ifstream in(path);
    if (!in)
        throw CalibrationError(
            "missing calibration: set failure_rate_per_s in the config or run `calibrate` "
            "into the same output directory first");
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row))
        throw CalibrationError("calibration file '" + path + "' is malformed");
    const auto fields = split(row, ',');
    if (fields.empty()) throw CalibrationError("calibration file '" + path + "' is malformed");
    return std::stod(fields[0]);
}

SweepCell sweep_cell(const reliability::Scenario& scenario,
                     const reliability::CheckpointPolicy& policy, double rate, double epsilon) {
    std::vector<double> overheads;
    long misses = 0, jobs = 0;
    for (int r = 0; r < scenario.replicas; ++r) {
        const auto stats = reliability::run_replica(scenario, policy, rate, epsilon, r);
        overheads.push_back(stats.mean_overhead);
        misses += stats.deadline_misses;
        jobs += stats.jobs;
    }
    SweepCell cell;
    cell.policy = reliability::policy_name(policy);
    cell.epsilon = epsilon;
    cell.median_overhead = quantile(overheads, 0.5);
    cell.iqr_overhead = quantile(overheads, 0.75) - quantile(overheads, 0.25);
    cell.deadline_miss_fraction =
        jobs > 0 ? static_cast<double>(misses) / static_cast<double>(jobs) : 0.0;
    cell.replicas = scenario.replicas;
    return cell;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
    const double rate = resolve_rate(cfg);
    const reliability::Scenario scenario = cfg.scenario();

    struct Cell {
        reliability::CheckpointPolicy policy;
        double epsilon;
    };
    std::vector<Cell> cells;
    for (const auto& policy : cfg.policies)
        for (double eps : cfg.epsilon_grid) cells.push_back(Cell{policy, eps});

    // Cells are independent; run them concurrently and merge in declaration
    // order so outputs stay deterministic.
    std::vector<std::future<SweepCell>> futures;
    futures.reserve(cells.size());
    for (const Cell& cell : cells)
        futures.push_back(std::async(std::launch::async, [&scenario, cell, rate] {
            return sweep_cell(scenario, cell.policy, rate, cell.epsilon);
        }));

    SweepResult result;
    result.failure_rate_per_s = rate;
    for (auto& f : futures) result.cells.push_back(f.get());

    write_sweep_files(result, cfg.out_dir);
    return result;
}

void write_sweep_files(const SweepResult& result, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "policy,epsilon,median_overhead,iqr_overhead,deadline_miss_fraction,replicas\n";
    for (const SweepCell& c : result.cells)
        csv << c.policy << ',' << format_double(c.epsilon) << ','
            << format_double(c.median_overhead) << ',' << format_double(c.iqr_overhead) << ','
            << format_double(c.deadline_miss_fraction) << ',' << c.replicas << '\n';
    write_file(sweep_csv_path(out_dir), csv.str());

    // One series per policy, in first-appearance order.
    std::vector<svg::Series> series;
    for (const SweepCell& c : result.cells) {
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const svg::Series& s) { return s.name == c.policy; });
        if (it == series.end()) {
            series.push_back(svg::Series{c.policy, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(c.epsilon, c.median_overhead);
    }
    write_file((fs::path(out_dir) / "sweep.svg").string(),
               svg::line_chart("Reliability overhead vs prediction error",
                               "relative prediction error",
                               "median overhead (T_exe - T_ideal) / T_ideal", series));
}

SweepResult read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("policy,", 0) != 0)
        throw Error("'" + path + "' is not a sweep csv");
    SweepResult result;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 6) throw Error("'" + path + "': malformed row '" + line + "'");
        SweepCell cell;
        cell.policy = f[0];
        cell.epsilon = std::stod(f[1]);
        cell.median_overhead = std::stod(f[2]);
        cell.iqr_overhead = std::stod(f[3]);
        cell.deadline_miss_fraction = std::stod(f[4]);
        cell.replicas = std::stoi(f[5]);
        result.cells.push_back(std::move(cell));
    }
    return result;
}

// --- simulate -----------------------------------------------------------------

rtms::ClusterResult run_simulate(const ExperimentConfig& cfg) {
    if (!cfg.topology)
        throw ConfigError("invalid configuration:\n  - topology: required for simulate");

    engine::RngStream workload_rng(cfg.seed, "workload/sim");
    const workload::WorkloadTrace trace = workload::generate_workload(workload_rng, cfg.workload);

    rtms::ClusterConfig cluster;
    cluster.policy = cfg.sim_policy;
    cluster.epsilon = cfg.sim_epsilon;
    cluster.failure_rate_per_s = cfg.failure_rate_per_s.value_or(0.0);
    cluster.fault = cfg.fault;
    cluster.costs = cfg.costs;
    cluster.rtms = cfg.rtms;
    cluster.thermal_enabled = cfg.thermal_enabled;
    cluster.thermal = cfg.thermal;
    cluster.thermal_period_s = cfg.thermal_period_s;
    cluster.seed = cfg.seed;
    cluster.horizon_s = cfg.horizon_s;
    cluster.node_down_events = cfg.node_down_events;
    cluster.device_fault_fraction = cfg.device_fault_fraction;

    rtms::ClusterResult result = rtms::run_cluster(*cfg.topology, trace, cluster);

    fs::create_directories(cfg.out_dir);
    {
        std::ostringstream csv;
        csv << "job_id,policy,epsilon,t_ideal_s,t_exe_s,overhead,failures,checkpoints,"
               "deadline_met\n";
        for (const rtms::JobRecord& r : result.jobs) {
            if (r.outcome != rtms::JobOutcome::Done) continue;
            csv << r.job_id << ',' << r.policy << ',' << format_double(r.epsilon) << ','
                << format_double(r.t_ideal_s) << ',' << format_double(r.t_exe_s) << ','
                << format_double(r.overhead) << ',' << r.failures << ',' << r.checkpoints << ','
                << (r.deadline_met ? 1 : 0) << '\n';
        }
        write_file((fs::path(cfg.out_dir) / "jobs.csv").string(), csv.str());
    }
    {
        std::ostringstream csv;
        csv << "time,job_id,event,node,detail\n";
        for (const rtms::SchedulerLogRow& r : result.log)
            csv << format_double(r.time) << ',' << r.job_id << ',' << r.event << ',' << r.node
                << ',' << r.detail << '\n';
        write_file((fs::path(cfg.out_dir) / "sched_log.csv").string(), csv.str());
    }
    {
        nlohmann::json j;
        const rtms::ClusterSummary& s = result.summary;
        j["arrived"] = s.arrived;
        j["done"] = s.done;
        j["rejected"] = s.rejected;
        j["queued_at_horizon"] = s.queued_at_horizon;
        j["running_at_horizon"] = s.running_at_horizon;
        j["median_overhead"] = s.median_overhead;
        j["deadline_miss_fraction"] = s.deadline_miss_fraction;
        j["throughput_per_hour"] = s.throughput_per_hour;
        j["failures"] = s.failures;
        j["checkpoints"] = s.checkpoints;
        write_file((fs::path(cfg.out_dir) / "summary.json").string(), j.dump(2) + "\n");
    }
    if (!cfg.trace_file.empty()) {
        std::ostringstream os;
        for (const engine::Event& ev : result.trace)
            os << engine::format_trace_line(ev) << '\n';
        const fs::path p = fs::path(cfg.trace_file).is_absolute()
                               ? fs::path(cfg.trace_file)
                               : fs::path(cfg.out_dir) / cfg.trace_file;
        write_file(p.string(), os.str());
    }
    return result;
}

// --- pwcet --------------------------------------------------------------------

std::vector<PwcetReportRow> run_pwcet(const std::vector<std::string>& sample_files,
                                      double exceedance, const std::string& out_dir) {
    if (sample_files.empty()) throw ConfigError("pwcet: no sample files given");
    std::vector<PwcetReportRow> rows;
    for (const std::string& path : sample_files) {
        std::ifstream in(path);
        if (!in) throw ConfigError("pwcet: cannot open '" + path + "'");
        const std::string label = fs::path(path).stem().string();
        const pwcet::SampleSet set = pwcet::read_samples(in, label);
        if (set.values.size() < 30)
            throw FitError("samples '" + label + "': need at least 30 values, got " +
                           std::to_string(set.values.size()));
        const pwcet::TailModel model = pwcet::fit_tail(set.values);
        PwcetReportRow row;
        row.label = label;
        row.n = set.values.size();
        row.u = model.threshold;
        row.sigma = model.sigma;
        row.cv = model.cv;
        row.pass = model.cv_pass;
        row.met = pwcet::met(set.values);
        row.pwcet = pwcet::pwcet_quantile(model, exceedance);
        row.rel_increase = pwcet::relative_increase(row.pwcet, row.met);
        rows.push_back(std::move(row));
    }
    write_pwcet_files(rows, out_dir);
    return rows;
}

void write_pwcet_files(const std::vector<PwcetReportRow>& rows, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "label,n,u,sigma,cv,pass,met,pwcet_1e-6,rel_increase\n";
    for (const PwcetReportRow& r : rows)
        csv << r.label << ',' << r.n << ',' << format_double(r.u) << ','
            << format_double(r.sigma) << ',' << format_double(r.cv) << ',' << (r.pass ? 1 : 0)
            << ',' << format_double(r.met) << ',' << format_double(r.pwcet) << ','
            << format_double(r.rel_increase) << '\n';
    write_file((fs::path(out_dir) / "pwcet_report.csv").string(), csv.str());

    std::vector<svg::BarGroup> groups;
    for (const PwcetReportRow& r : rows) {
        svg::BarGroup g;
        g.label = r.label;
        g.bars.emplace_back("MET", r.met);
        g.bars.emplace_back("pWCET", r.pwcet);
        groups.push_back(std::move(g));
    }
    write_file((fs::path(out_dir) / "pwcet.svg").string(),
               svg::grouped_bar_chart("MET vs pWCET estimate", "execution time (s)", groups));
}

std::vector<PwcetReportRow> read_pwcet_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("label,", 0) != 0)
        throw Error("'" + path + "' is not a pwcet report csv");
    std::vector<PwcetReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw Error("'" + path + "': malformed row '" + line + "'");
        PwcetReportRow r;
        r.label = f[0];
        r.n = static_cast<std::size_t>(std::stoull(f[1]));
        r.u = std::stod(f[2]);
        r.sigma = std::stod(f[3]);
        r.cv = std::stod(f[4]);
        r.pass = f[5] == "1";
        r.met = std::stod(f[6]);
        r.pwcet = std::stod(f[7]);
        r.rel_increase = std::stod(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

// --- report -------------------------------------------------------------------

std::string run_report(const std::string& out_dir) {
    std::ostringstream summary;
    bool any = false;
    const std::string sweep_path = sweep_csv_path(out_dir);
    if (fs::exists(sweep_path)) {
        SweepResult sweep = read_sweep_csv(sweep_path);
        write_sweep_files(sweep, out_dir);
        summary << "sweep: " << sweep.cells.size() << " cells -> sweep.svg\n";
        for (const SweepCell& c : sweep.cells)
            summary << "  " << c.policy << " eps=" << format_double(c.epsilon)
                    << " median O=" << format_double(c.median_overhead) << '\n';
        any = true;
    }
    const std::string pwcet_path = (fs::path(out_dir) / "pwcet_report.csv").string();
    if (fs::exists(pwcet_path)) {
        const auto rows = read_pwcet_csv(pwcet_path);
        write_pwcet_files(rows, out_dir);
        summary << "pwcet: " << rows.size() << " labels -> pwcet.svg\n";
        for (const PwcetReportRow& r : rows)
            summary << "  " << r.label << " met=" << format_double(r.met)
                    << " pwcet=" << format_double(r.pwcet) << '\n';
        any = true;
    }
    if (!any)
        throw Error("report: no sweep.csv or pwcet_report.csv found in '" + out_dir + "'");
    return summary.str();
}

} // namespace rmsim::exp
