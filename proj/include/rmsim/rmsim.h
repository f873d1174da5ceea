/*
 * Copyright 2026 the rmsim authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Stable C interface to the rmsim simulation library. All entry points
 * return an rmsim_status; on failure, rmsim_last_error() carries a
 * human-readable message for the calling thread. Objects returned through
 * out-parameters are opaque and must be released with their matching
 * _free function.
 */

#ifndef RMSIM_H
#define RMSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef RMSIM_API
#define RMSIM_API __attribute__((visibility("default")))
#endif

typedef enum rmsim_status {
    RMSIM_OK = 0,
    RMSIM_ERR_INVALID_ARG = 1,
    RMSIM_ERR_CONFIG = 2,      /* bad configuration or input data */
    RMSIM_ERR_CALIBRATION = 3, /* failure-rate calibration failed */
    RMSIM_ERR_RUNTIME = 4      /* anything else */
} rmsim_status;

typedef struct rmsim_config rmsim_config;
typedef struct rmsim_sweep_result rmsim_sweep_result;
typedef struct rmsim_pwcet_report rmsim_pwcet_report;

RMSIM_API const char* rmsim_version(void);

/* Message of the last failing call on this thread; empty string if none. */
RMSIM_API const char* rmsim_last_error(void);

/* --- Configuration ------------------------------------------------------ */

RMSIM_API rmsim_status rmsim_config_load(const char* path, rmsim_config** out);
RMSIM_API rmsim_status rmsim_config_from_json(const char* json_text, rmsim_config** out);
RMSIM_API void rmsim_config_free(rmsim_config* cfg);

RMSIM_API rmsim_status rmsim_config_set_seed(rmsim_config* cfg, uint64_t seed);
RMSIM_API rmsim_status rmsim_config_set_replicas(rmsim_config* cfg, int replicas);
RMSIM_API rmsim_status rmsim_config_set_out_dir(rmsim_config* cfg, const char* dir);
RMSIM_API rmsim_status rmsim_config_set_epsilon_grid(rmsim_config* cfg, const double* grid,
                                                     size_t count);
RMSIM_API rmsim_status rmsim_config_set_exceedance(rmsim_config* cfg, double exceedance);
RMSIM_API rmsim_status rmsim_config_set_failure_rate(rmsim_config* cfg, double rate_per_s);

/* --- Calibration: RestartOnly median slowdown -> 1 ----------------------- */

typedef struct rmsim_calibration {
    double rate_per_s;
    double median_overhead;
    int iterations;
} rmsim_calibration;

/* Writes <out_dir>/calibration.csv as a side effect. */
RMSIM_API rmsim_status rmsim_calibrate(const rmsim_config* cfg, rmsim_calibration* out);

/* --- Prediction-error sweep ---------------------------------------------- */

typedef struct rmsim_sweep_row {
    const char* policy; /* owned by the result object */
    double epsilon;
    double median_overhead;
    double iqr_overhead;
    double deadline_miss_fraction;
    int replicas;
} rmsim_sweep_row;

/* Writes <out_dir>/sweep.csv and <out_dir>/sweep.svg as side effects. */
RMSIM_API rmsim_status rmsim_sweep(const rmsim_config* cfg, rmsim_sweep_result** out);
RMSIM_API size_t rmsim_sweep_row_count(const rmsim_sweep_result* result);
RMSIM_API rmsim_status rmsim_sweep_row(const rmsim_sweep_result* result, size_t index,
                                       rmsim_sweep_row* out);
RMSIM_API double rmsim_sweep_failure_rate(const rmsim_sweep_result* result);
RMSIM_API void rmsim_sweep_result_free(rmsim_sweep_result* result);

/* --- Full-cluster simulation ---------------------------------------------- */

typedef struct rmsim_sim_summary {
    int arrived;
    int done;
    int rejected;
    int queued_at_horizon;
    int running_at_horizon;
    double median_overhead;
    double deadline_miss_fraction;
    double throughput_per_hour;
    int failures;
    int checkpoints;
} rmsim_sim_summary;

/* Writes <out_dir>/jobs.csv, sched_log.csv and summary.json. */
RMSIM_API rmsim_status rmsim_simulate(const rmsim_config* cfg, rmsim_sim_summary* out);

/* --- pWCET fitting ---------------------------------------------------------- */

typedef struct rmsim_pwcet_row {
    const char* label; /* owned by the report object */
    size_t n;
    double u;
    double sigma;
    double cv;
    int cv_pass;
    double met;
    double pwcet;
    double rel_increase;
} rmsim_pwcet_row;

/* One sample file per label (one value per line; label = file stem).
 * Writes <out_dir>/pwcet_report.csv and <out_dir>/pwcet.svg. */
RMSIM_API rmsim_status rmsim_pwcet(const char* const* sample_files, size_t file_count,
                                   double exceedance, const char* out_dir,
                                   rmsim_pwcet_report** out);
RMSIM_API size_t rmsim_pwcet_row_count(const rmsim_pwcet_report* report);
RMSIM_API rmsim_status rmsim_pwcet_row(const rmsim_pwcet_report* report, size_t index,
                                       rmsim_pwcet_row* out);
RMSIM_API void rmsim_pwcet_report_free(rmsim_pwcet_report* report);

/* --- Report regeneration ----------------------------------------------------- */

/* Rebuilds the SVG charts from the CSVs in out_dir; *summary_out receives a
 * malloc'd description to release with rmsim_string_free. */
RMSIM_API rmsim_status rmsim_report(const char* out_dir, char** summary_out);
RMSIM_API void rmsim_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RMSIM_H */
