#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "recal/error.hpp"
#include "recal/logistic.hpp"
#include "recal/mathfn.hpp"

using namespace recal;

namespace {

struct Sample {
    std::vector<double> z;
    std::vector<std::uint8_t> y;
};

Sample draw(std::size_t n, double b0, double b1, std::uint64_t seed, double zlo = 0.0, double zhi = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> uz(zlo, zhi), u(0.0, 1.0);
    Sample s;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = uz(eng);
        s.z.push_back(z);
        s.y.push_back(u(eng) < logistic(b0 + b1 * z) ? 1 : 0);
    }
    return s;
}

// Standard errors from the inverse Fisher information at the fit.
std::pair<double, double> standard_errors(const Sample& s, const LogisticFit& f) {
    double a = 0, b = 0, c = 0;
    for (std::size_t i = 0; i < s.z.size(); ++i) {
        const double p = f.predict(s.z[i]);
        const double w = p * (1 - p);
        a += w;
        b += w * s.z[i];
        c += w * s.z[i] * s.z[i];
    }
    const double det = a * c - b * b;
    return {std::sqrt(c / det), std::sqrt(a / det)};
}

} // namespace

TEST_CASE("null predictor gives the intercept-only fit") {
    const auto s = draw(100000, logit(0.3), 0.0, 1, -2.0, 2.0);
    const auto f = fit_logistic_irls(s.z, s.y);
    REQUIRE(f.converged);
    double my = 0;
    for (auto v : s.y) my += v;
    my /= s.y.size();
    const auto [se0, se1] = standard_errors(s, f);
    CHECK(std::abs(f.beta1) <= 3 * se1);
    CHECK(std::abs(f.beta0 - logit(my)) <= 3 * se0);
}

TEST_CASE("recovers a steep sigmoid") {
    const double b0 = std::log(0.125) - 5.0;
    const auto s = draw(500000, b0, 10.0, 2);
    const auto f = fit_logistic_irls(s.z, s.y);
    REQUIRE(f.converged);
    CHECK(f.beta0 == doctest::Approx(b0).epsilon(0.05));
    CHECK(f.beta1 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("agrees with the gradient-descent oracle") {
    std::mt19937_64 meta(99);
    for (int t = 0; t < 5; ++t) {
        const double b0 = std::normal_distribution<double>(0, 1)(meta);
        const double b1 = std::normal_distribution<double>(0, 2)(meta);
        const auto s = draw(1000, b0, b1, meta(), -1.0, 1.0);
        const auto f = fit_logistic_irls(s.z, s.y);
        const auto g = oracle::logistic_gradient_descent(s.z, s.y);
        REQUIRE(f.converged);
        CHECK(std::abs(f.beta0 - g.beta0) <= 1e-4);
        CHECK(std::abs(f.beta1 - g.beta1) <= 1e-4);
    }
}

TEST_CASE("deviance never increases") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const auto s = draw(20000, -3.0, 6.0, seed);
        const auto f = fit_logistic_irls(s.z, s.y);
        REQUIRE(f.deviance_trace.size() >= 2);
        for (std::size_t i = 1; i < f.deviance_trace.size(); ++i)
            CHECK(f.deviance_trace[i] <= f.deviance_trace[i - 1]);
        CHECK(f.final_deviance == f.deviance_trace.back());
        CHECK(f.final_deviance == doctest::Approx(logistic_deviance(s.z, s.y, f.beta0, f.beta1)));
        CHECK(f.iterations <= 100);
    }
}

TEST_CASE("degenerate inputs") {
    const std::vector<double> z{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(fit_logistic_irls(z, std::vector<std::uint8_t>{1, 1, 1}), FitError);
    CHECK_THROWS_AS(fit_logistic_irls(z, std::vector<std::uint8_t>{0, 0, 0}), FitError);
    CHECK_THROWS_AS(fit_logistic_irls(std::vector<double>{0.1}, std::vector<std::uint8_t>{1}), FitError);
    CHECK_THROWS_AS(fit_logistic_irls(z, std::vector<std::uint8_t>{0, 1}), FitError);
    CHECK_THROWS_AS(fit_logistic_irls(std::vector<double>{0.5, 0.5, 0.5}, std::vector<std::uint8_t>{0, 1, 0}),
                    FitError);
    CHECK_THROWS_AS(fit_logistic_irls(std::vector<double>{0.1, NAN, 0.3}, std::vector<std::uint8_t>{0, 1, 0}),
                    FitError);
}

TEST_CASE("separable data is capped and flagged") {
    const std::vector<double> z{0, 1, 2, 3, 4, 5};
    const std::vector<std::uint8_t> y{0, 0, 0, 1, 1, 1};
    const auto f = fit_logistic_irls(z, y);
    CHECK_FALSE(f.converged);
    CHECK(std::abs(f.beta0) <= 30.0);
    CHECK(std::abs(f.beta1) <= 30.0);
    CHECK(std::isfinite(f.predict(10.0)));
    CHECK(f.predict(1.0) < f.predict(4.0));
}

TEST_CASE("fits are bit-deterministic") {
    const auto s = draw(5000, 0.5, -1.5, 8);
    const auto a = fit_logistic_irls(s.z, s.y);
    const auto b = fit_logistic_irls(s.z, s.y);
    CHECK(a.beta0 == b.beta0);
    CHECK(a.beta1 == b.beta1);
    CHECK(a.deviance_trace == b.deviance_trace);
}
