#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "recal/base_models.hpp"
#include "recal/calibrators.hpp"
#include "recal/datagen.hpp"
#include "recal/error.hpp"
#include "recal/mathfn.hpp"
#include "recal/sampler.hpp"

using namespace recal;

namespace {

struct Sample {
    std::vector<double> gamma_hat;
    std::vector<double> p;
    std::vector<std::uint8_t> y;
};

// Perfect base model on the simulation process: gamma_hat = gamma.
Sample perfect_sample(double b, double pi0, std::size_t n, std::uint64_t seed) {
    DataGenConfig cfg;
    cfg.b = b;
    cfg.n = n;
    cfg.seed = seed;
    auto d = gen_dataset(cfg, 2);
    Sample s;
    s.p = std::move(d.p_true);
    s.y = std::move(d.y);
    for (double p : s.p) s.gamma_hat.push_back(undersampled_posterior(p, pi0));
    return s;
}

// gamma_hat uniform, true gamma through the sigmoid error, p through the prior shift.
Sample sigmoid_sample(std::size_t n, double pi0, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> ug(0.05, 0.95), u(0, 1);
    Sample s;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = ug(eng);
        const double p = analytical_calibrate(sigmoid_error(g, 10, 0.5), pi0);
        s.gamma_hat.push_back(g);
        s.p.push_back(p);
        s.y.push_back(u(eng) < p ? 1 : 0);
    }
    return s;
}

double max_gap(const Calibrator& c, const Sample& s) {
    double gap = 0;
    for (std::size_t i = 0; i < s.p.size(); ++i) gap = std::max(gap, std::abs(c.calibrate(s.gamma_hat[i]) - s.p[i]));
    return gap;
}

double rmse_of(const Calibrator& c, const Sample& s) {
    const auto p_hat = c.calibrate(s.gamma_hat);
    double acc = 0;
    for (std::size_t i = 0; i < s.p.size(); ++i) acc += (p_hat[i] - s.p[i]) * (p_hat[i] - s.p[i]);
    return std::sqrt(acc / s.p.size());
}

} // namespace

TEST_CASE("analytical map examples") {
    for (double pi0 : {0.01, 0.5, 1.0}) {
        CHECK(analytical_calibrate(0.0, pi0) == 0.0);
        CHECK(analytical_calibrate(1.0, pi0) == 1.0);
    }
    for (double g : {0.0, 0.1, 0.77, 1.0}) CHECK(analytical_calibrate(g, 1.0) == g);
    CHECK(analytical_calibrate(0.5, 0.125) == doctest::Approx(0.111111).epsilon(1e-6));
    CHECK(analytical_calibrate(0.5, 0.125) == doctest::Approx(0.0625 / 0.5625).epsilon(1e-15));
    CHECK_THROWS_AS(analytical_calibrate(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(analytical_calibrate(0.5, 1.01), DomainError);
    CHECK_THROWS_AS(analytical_calibrate(1.5, 0.5), DomainError);
}

TEST_CASE("logit_clamped") {
    CHECK(logit_clamped(0.5, 1e-6) == 0.0);
    CHECK(logit_clamped(0.0, 1e-6) == doctest::Approx(-13.8155).epsilon(1e-5));
    CHECK(logit_clamped(0.0, 1e-6) == doctest::Approx(std::log(1e-6 / (1 - 1e-6))).epsilon(1e-15));
    CHECK(logit_clamped(1.0, 1e-6) == doctest::Approx(-logit_clamped(0.0, 1e-6)).epsilon(1e-9));
    for (double g : {0.01, 0.2, 0.4999}) CHECK(logit_clamped(1 - g, 1e-6) == doctest::Approx(-logit_clamped(g, 1e-6)).epsilon(1e-12));
}

TEST_CASE("analytical calibration of a perfect model is exact") {
    const auto s = perfect_sample(1.1, 0.125, 100000, 1);
    const auto c = fit_calibrator(Method::Analytical, s.gamma_hat, s.y, 0.125);
    CHECK(rmse_of(c, s) <= 1e-12);
}

TEST_CASE("Platt recovers the sigmoid-error coefficients") {
    const double pi0 = 0.125;
    const auto s = sigmoid_sample(500000, pi0, 2);
    const auto c = fit_calibrator(Method::Platt, s.gamma_hat, s.y, pi0);
    const auto& f = std::get<LogisticFit>(c.params());
    CHECK(f.beta0 == doctest::Approx(std::log(pi0) - 5).epsilon(0.05));
    CHECK(f.beta1 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("PlattLogit on a perfect model approximates the prior-shift line") {
    const auto s = perfect_sample(1.1, 0.125, 1000000, 3);
    const auto c = fit_calibrator(Method::PlattLogit, s.gamma_hat, s.y, 0.125);
    const auto& f = std::get<LogisticFit>(c.params());
    CHECK(f.beta0 == doctest::Approx(std::log(0.125)).epsilon(0.10));
    CHECK(f.beta1 == doctest::Approx(1.0).epsilon(0.10));

    // Raw-score Platt cannot express this map.
    const auto platt = fit_calibrator(Method::Platt, s.gamma_hat, s.y, 0.125);
    const double gp = max_gap(platt, s), gl = max_gap(c, s);
    MESSAGE("max gap: platt ", gp, ", platt_logit ", gl);
    CHECK(gp >= 10 * gl);
}

TEST_CASE("constant scores") {
    const std::vector<double> g(200, 0.3);
    std::vector<std::uint8_t> y(200, 0);
    y[7] = y[100] = 1;
    for (Method m : {Method::Platt, Method::PlattLogit, Method::Gam, Method::GamLogit})
        CHECK_THROWS_AS(fit_calibrator(m, g, y, 0.5), FitError);
    const auto iso = fit_calibrator(Method::Isotonic, g, y, 0.5);
    CHECK(std::get<IsotonicFit>(iso.params()).values.size() == 1);
    CHECK(iso.calibrate(0.9) == doctest::Approx(0.01));
}

TEST_CASE("the null Platt model predicts one half") {
    const Calibrator c(Method::Platt, LogisticFit{});
    for (double g : {0.0, 0.3, 1.0}) CHECK(c.calibrate(g) == 0.5);
}

TEST_CASE("calibrator construction checks") {
    CHECK_THROWS_AS(Calibrator(Method::Platt, AnalyticalParams{0.5}), ConfigError);
    CHECK_THROWS_AS(Calibrator(Method::Isotonic, LogisticFit{}), ConfigError);
    CHECK_THROWS_AS(Calibrator(Method::PlattLogit, LogisticFit{}, 0.0), ConfigError);
    CHECK_THROWS_AS(Calibrator(Method::PlattLogit, LogisticFit{}, 0.01), ConfigError);
    for (Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("beta"), ConfigError);
}

TEST_CASE("outputs are probabilities and monotone where expected") {
    const auto s = perfect_sample(1.5, 0.02125, 100000, 4);
    std::vector<double> gh = apply_base_model({BaseModelKind::PushToHalf, 0.2, 0}, s.gamma_hat);
    std::vector<double> grid;
    for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
    for (Method m : kAllMethods) {
        CAPTURE(to_string(m));
        const auto c = fit_calibrator(m, gh, s.y, 0.02125);
        const auto out = c.calibrate(grid);
        const bool monotone = m == Method::Analytical || m == Method::Isotonic ||
                              ((m == Method::Platt || m == Method::PlattLogit) &&
                               std::get<LogisticFit>(c.params()).beta1 > 0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK((out[i] >= 0.0 && out[i] <= 1.0));
            CHECK(out[i] == c.calibrate(grid[i]));
            if (monotone && i > 0) CHECK(out[i] >= out[i - 1]);
        }
        if (m == Method::Platt || m == Method::PlattLogit)
            for (std::size_t i = 0; i < grid.size(); ++i) CHECK((out[i] > 0.0 && out[i] < 1.0));
    }
}

TEST_CASE("without undersampling the flexible methods learn the identity") {
    // pi0 = 1 and a perfect model: p_hat should approach gamma_hat = p.
    const auto small = perfect_sample(1.1, 1.0, 20000, 5);
    const auto large = perfect_sample(1.1, 1.0, 400000, 6);
    const auto test = perfect_sample(1.1, 1.0, 50000, 7);
    for (Method m : {Method::Analytical, Method::PlattLogit, Method::Gam, Method::GamLogit, Method::Isotonic}) {
        CAPTURE(to_string(m));
        const double r_small = rmse_of(fit_calibrator(m, small.gamma_hat, small.y, 1.0), test);
        const double r_large = rmse_of(fit_calibrator(m, large.gamma_hat, large.y, 1.0), test);
        if (m == Method::Analytical) {
            CHECK(r_large <= 1e-15);
        } else {
            CHECK(r_large < r_small);
            CHECK(r_large < 0.01);
        }
    }
    // Raw-score Platt has a structural floor: a line in logit space against p itself.
    const double r_platt = rmse_of(fit_calibrator(Method::Platt, large.gamma_hat, large.y, 1.0), test);
    MESSAGE("platt rmse with pi0 = 1: ", r_platt);
    CHECK(r_platt > 0.0);
}

TEST_CASE("JSON round trip is bit-identical") {
    const auto s = perfect_sample(1.1, 0.125, 20000, 8);
    const auto gh = apply_base_model({BaseModelKind::NoisyLogOdds, 0.2, 2}, s.gamma_hat);
    std::vector<double> grid;
    for (int i = 0; i <= 997; ++i) grid.push_back(i / 997.0);
    for (Method m : kAllMethods) {
        CAPTURE(to_string(m));
        const auto c = fit_calibrator(m, gh, s.y, 0.125);
        const auto doc = to_json(c);
        CHECK(doc.at("method") == std::string(to_string(m)));
        CHECK(doc.at("version") == kCalibratorFormatVersion);
        const auto back = calibrator_from_json(nlohmann::json::parse(doc.dump()));
        CHECK(back.method() == m);
        CHECK(back.calibrate(grid) == c.calibrate(grid));
    }
    auto doc = to_json(fit_calibrator(Method::Analytical, gh, s.y, 0.125));
    doc["version"] = 2;
    CHECK_THROWS_AS(calibrator_from_json(doc), ConfigError);
    CHECK_THROWS_AS(calibrator_from_json(nlohmann::json::parse(R"({"method":"platt"})")), ConfigError);
}
