// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "core/errors.hpp"
#include "core/pwcet.hpp"
#include "core/rng.hpp"

using namespace rmsim::pwcet;
using rmsim::engine::RngStream;

namespace {

std::vector<double> exp_samples(std::uint64_t seed, std::size_t n, double mean = 1.0) {
    RngStream rng(seed, "exp");
    std::vector<double> v(n);
    for (double& x : v) x = rng.exponential(mean);
    return v;
}

} // namespace

TEST_CASE("met is the sample maximum") {
    CHECK(met({3.0, 1.0, 2.0}) == 3.0);
    CHECK(met({7.5}) == 7.5);
    CHECK_THROWS_AS(met({}), rmsim::FitError);
}

TEST_CASE("identical exceedances give cv 0 and fail the test") {
    std::vector<double> samples(50, 1.0);
    for (int i = 0; i < 15; ++i) samples.push_back(2.0);
    const CvTestResult r = cv_test(samples, 1.0);
    CHECK(r.cv == 0.0);
    CHECK(!r.pass);
}

TEST_CASE("exponential exceedances pass the cv test") {
    const auto samples = exp_samples(1, 10000);
    const CvTestResult r = cv_test(samples, 0.0);
    CHECK(std::fabs(r.cv - 1.0) <= 1.96 / std::sqrt(static_cast<double>(r.n_exceed)));
    CHECK(r.pass);
}

TEST_CASE("uniform exceedances have cv near 0.577 and fail at scale") {
    RngStream rng(2, "uniform");
    std::vector<double> samples(10000);
    for (double& x : samples) x = rng.uniform(0.0, 1.0);
    const CvTestResult r = cv_test(samples, 0.0);
    CHECK(r.cv == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(0.05));
    CHECK(!r.pass);
}

TEST_CASE("too few exceedances is an error") {
    CHECK_THROWS_AS(cv_test({1.0, 2.0, 3.0}, 0.0), rmsim::FitError);
}

TEST_CASE("tail fit recovers the exponential scale") {
    const auto samples = exp_samples(3, 10000);
    const TailModel model = fit_tail(samples);
    CHECK(model.cv_pass);
    CHECK(model.sigma == doctest::Approx(1.0).epsilon(0.10));
    CHECK(model.n_exceed >= 10);
}

TEST_CASE("tail fit needs at least 30 samples") {
    CHECK_THROWS_AS(fit_tail(exp_samples(4, 29)), rmsim::FitError);
}

TEST_CASE("constant samples admit no tail fit") {
    CHECK_THROWS_AS(fit_tail(std::vector<double>(100, 5.0)), rmsim::FitError);
}

TEST_CASE("tail fitting is deterministic") {
    const auto samples = exp_samples(5, 2000);
    const TailModel a = fit_tail(samples);
    const TailModel b = fit_tail(samples);
    CHECK(a.threshold == b.threshold);
    CHECK(a.sigma == b.sigma);
    CHECK(a.n_exceed == b.n_exceed);
    CHECK(a.cv == b.cv);
}

TEST_CASE("quantile of the unit exponential at 1e-6") {
    TailModel model;
    model.threshold = 0.0;
    model.sigma = 1.0;
    model.n_total = 1000;
    model.n_exceed = 1000; // p_u = 1
    model.cv_pass = true;
    CHECK(pwcet_quantile(model, 1e-6) == doctest::Approx(13.815510558).epsilon(1e-9));
}

TEST_CASE("quantile at the observed tail fraction is the threshold") {
    TailModel model;
    model.threshold = 4.2;
    model.sigma = 2.0;
    model.n_total = 1000;
    model.n_exceed = 100;
    CHECK(pwcet_quantile(model, 0.1) == doctest::Approx(4.2).epsilon(1e-12));
}

TEST_CASE("doubling sigma doubles the exceedance margin") {
    TailModel a, b;
    a.threshold = b.threshold = 1.0;
    a.n_total = b.n_total = 1000;
    a.n_exceed = b.n_exceed = 100;
    a.sigma = 1.5;
    b.sigma = 3.0;
    const double qa = pwcet_quantile(a, 1e-6) - 1.0;
    const double qb = pwcet_quantile(b, 1e-6) - 1.0;
    CHECK(qb == doctest::Approx(2.0 * qa).epsilon(1e-12));
}

TEST_CASE("quantiles inside the observed body are rejected") {
    TailModel model;
    model.threshold = 1.0;
    model.sigma = 1.0;
    model.n_total = 1000;
    model.n_exceed = 100;
    CHECK_THROWS_AS(pwcet_quantile(model, 0.2), rmsim::FitError);
}

TEST_CASE("relative increase") {
    CHECK(relative_increase(5.0, 5.0) == 0.0);
    CHECK(relative_increase(5.5, 5.0) == doctest::Approx(0.10));
    CHECK_THROWS_AS(relative_increase(1.0, 0.0), rmsim::FitError);
}

TEST_CASE("quantile decreases as the exceedance probability grows") {
    const auto samples = exp_samples(6, 5000);
    const TailModel model = fit_tail(samples);
    double prev = 1e300;
    for (double pe : {1e-9, 1e-6, 1e-4, 1e-3}) {
        const double q = pwcet_quantile(model, pe);
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("met and pwcet are scale-equivariant") {
    const auto samples = exp_samples(7, 5000);
    std::vector<double> doubled = samples;
    for (double& x : doubled) x *= 2.0; // power of two: exact in binary
    const PwcetEstimate base = estimate(samples, 1e-6);
    const PwcetEstimate scaled = estimate(doubled, 1e-6);
    CHECK(scaled.met == 2.0 * base.met);
    CHECK(scaled.value == doctest::Approx(2.0 * base.value).epsilon(1e-12));
}

TEST_CASE("pwcet dominates the empirical 99.9th percentile when the cv test passes") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto samples = exp_samples(100 + s, 5000);
        const TailModel model = fit_tail(samples);
        if (!model.cv_pass) continue;
        const double q = pwcet_quantile(model, 1e-6);
        std::sort(samples.begin(), samples.end());
        const double p999 = samples[static_cast<std::size_t>(0.999 * samples.size())];
        CHECK(q >= p999);
    }
}

TEST_CASE("sample files parse one positive value per line") {
    std::istringstream good("1.5\n2.5\n\n 3.5 \n");
    const SampleSet set = read_samples(good, "good");
    CHECK(set.values == std::vector<double>{1.5, 2.5, 3.5});

    std::istringstream negative("1.0\n-2.0\n");
    CHECK_THROWS_AS(read_samples(negative, "neg"), rmsim::FitError);

    std::istringstream junk("1.0\nabc\n");
    CHECK_THROWS_AS(read_samples(junk, "junk"), rmsim::FitError);
}
