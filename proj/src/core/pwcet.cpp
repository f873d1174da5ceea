// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/pwcet.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "core/errors.hpp"

namespace rmsim::pwcet {

SampleSet read_samples(std::istream& is, std::string label) {
    SampleSet set;
    set.label = std::move(label);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        // Trim whitespace; skip blank lines.
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        double v = 0.0;
        try {
            std::size_t consumed = 0;
            v = std::stod(token, &consumed);
            if (consumed != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw FitError("samples '" + set.label + "': line " + std::to_string(lineno) +
                           " is not a number: '" + token + "'");
        }
        if (!(v > 0.0))
            throw FitError("samples '" + set.label + "': line " + std::to_string(lineno) +
                           " must be positive");
        set.values.push_back(v);
    }
    return set;
}

double met(const std::vector<double>& samples) {
    if (samples.empty()) throw FitError("met: empty sample set");
    return *std::max_element(samples.begin(), samples.end());
}

CvTestResult cv_test(const std::vector<double>& samples, double threshold) {
    std::vector<double> exceed;
    for (double x : samples)
        if (x > threshold) exceed.push_back(x - threshold);
    if (exceed.size() < 10)
        throw FitError("cv_test: fewer than 10 exceedances above threshold");

    const double n = static_cast<double>(exceed.size());
    double mean = 0.0;
    for (double e : exceed) mean += e;
    mean /= n;
    double var = 0.0;
    for (double e : exceed) var += (e - mean) * (e - mean);
    var /= (n - 1.0);

    CvTestResult result;
    result.n_exceed = exceed.size();
    result.cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
    result.pass = std::fabs(result.cv - 1.0) <= 1.96 / std::sqrt(n);
    return result;
}

TailModel fit_tail(const std::vector<double>& samples) {
    if (samples.size() < 30)
        throw FitError("fit_tail: need at least 30 samples, got " +
                       std::to_string(samples.size()));

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    // Candidate tail sizes in deterministic order; each needs >= 10
    // exceedances to be testable.
    static constexpr double kTailFractions[] = {0.10, 0.08, 0.06, 0.04, 0.02};
    std::vector<std::size_t> candidates;
    for (double frac : kTailFractions) {
        const auto k = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
        if (k >= 10 && k < n) candidates.push_back(k);
    }
    if (candidates.empty()) candidates.push_back(std::min<std::size_t>(10, n - 1));

    TailModel best;
    double best_dist = -1.0;
    for (std::size_t k : candidates) {
        const double u = sorted[n - k - 1];
        std::vector<double> exceed;
        for (std::size_t i = n - k; i < n; ++i)
            if (sorted[i] > u) exceed.push_back(sorted[i] - u);
        if (exceed.size() < 10) continue; // ties collapsed the tail set

        CvTestResult cv;
        try {
            cv = cv_test(sorted, u);
        } catch (const FitError&) {
            continue;
        }
        double sum = 0.0;
        for (double e : exceed) sum += e;

        TailModel model;
        model.threshold = u;
        model.sigma = sum / static_cast<double>(exceed.size());
        model.n_total = n;
        model.n_exceed = cv.n_exceed;
        model.cv = cv.cv;
        model.cv_pass = cv.pass;
        if (model.cv_pass) return model;
        const double dist = std::fabs(model.cv - 1.0);
        if (best_dist < 0.0 || dist < best_dist) {
            best = model;
            best_dist = dist;
        }
    }
    if (best_dist < 0.0)
        throw FitError("fit_tail: no usable threshold (degenerate or constant samples)");
    return best; // flagged: cv_pass = false
}

double pwcet_quantile(const TailModel& model, double exceedance_probability) {
    if (!(model.sigma > 0.0)) throw FitError("pwcet_quantile: tail scale must be positive");
    const double p_u = model.exceedance_fraction();
    if (!(exceedance_probability > 0.0) || exceedance_probability > p_u) {
        std::ostringstream msg;
        msg << "pwcet_quantile: exceedance probability " << exceedance_probability
            << " must lie in (0, " << p_u << "] (the observed tail fraction); use an empirical "
            << "quantile inside the body";
        throw FitError(msg.str());
    }
    return model.threshold + model.sigma * std::log(p_u / exceedance_probability);
}

double relative_increase(double pwcet_value, double met_value) {
    if (!(met_value > 0.0)) throw FitError("relative_increase: MET must be positive");
    return (pwcet_value - met_value) / met_value;
}

PwcetEstimate estimate(const std::vector<double>& samples, double exceedance_probability) {
    PwcetEstimate est;
    est.exceedance_probability = exceedance_probability;
    est.met = met(samples);
    const TailModel model = fit_tail(samples);
    est.value = pwcet_quantile(model, exceedance_probability);
    est.relative_increase = relative_increase(est.value, est.met);
    return est;
}

} // namespace rmsim::pwcet
