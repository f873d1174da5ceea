// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmsim::pwcet {

// Execution-time measurements under one configuration. The label is ingest
// metadata only (e.g. "no-rand", "code", "stack", "heap").
struct SampleSet {
    std::vector<double> values; // all > 0
    std::string label;
};

SampleSet read_samples(std::istream& is, std::string label);

// Exponential tail fitted over a threshold u: P(X > x) = p_u e^{-(x-u)/sigma}
// for x >= u, with p_u = n_exceed / n_total.
struct TailModel {
    double threshold = 0.0;   // u, seconds
    double sigma = 0.0;       // mean exceedance above u, seconds
    std::size_t n_total = 0;
    std::size_t n_exceed = 0;
    double cv = 0.0;          // coefficient of variation of the exceedances
    bool cv_pass = false;     // exponentiality gate; false = flagged fit

    double exceedance_fraction() const {
        return static_cast<double>(n_exceed) / static_cast<double>(n_total);
    }
};

struct PwcetEstimate {
    double exceedance_probability = 1e-6;
    double value = 0.0;
    double met = 0.0;
    double relative_increase = 0.0; // (value - met) / met
};

// Maximum of the sample values (MET). Throws on an empty set.
double met(const std::vector<double>& samples);

struct CvTestResult {
    double cv = 0.0;
    std::size_t n_exceed = 0;
    bool pass = false;
};

// Coefficient of variation of the exceedances (x - u | x > u); passes when
// |cv - 1| <= 1.96 / sqrt(n_exceed). Requires at least 10 exceedances.
CvTestResult cv_test(const std::vector<double>& samples, double threshold);

// Peaks-over-threshold fit with an exponential tail. Candidate tail sizes
// are {10%, 8%, 6%, 4%, 2%} of n in that order (at least 10 exceedances);
// the first candidate passing the cv test wins, otherwise the candidate
// with minimal |cv - 1| is returned flagged (cv_pass = false). Requires
// n >= 30.
TailModel fit_tail(const std::vector<double>& samples);

// Exceedance quantile u + sigma ln(p_u / p_e). Requires 0 < p_e < p_u;
// larger p_e values lie inside the observed body.
double pwcet_quantile(const TailModel& model, double exceedance_probability);

// (pwcet - met) / met. Requires met > 0.
double relative_increase(double pwcet_value, double met_value);

// Full pipeline: fit, quantile, relative increase.
PwcetEstimate estimate(const std::vector<double>& samples, double exceedance_probability);

} // namespace rmsim::pwcet
