#include <doctest.h>

#include <cmath>
#include <random>

#include "recal/base_models.hpp"
#include "recal/datagen.hpp"
#include "recal/error.hpp"
#include "recal/mathfn.hpp"
#include "recal/rng.hpp"
#include "recal/sampler.hpp"

using namespace recal;

TEST_CASE("perfect model is the identity") {
    for (double g : {0.5, 0.0066929, 0.9}) CHECK(perfect(g) == g);
    CHECK_THROWS_AS(perfect(0.0), DomainError);
}

TEST_CASE("push_to_half examples") {
    CHECK(push_to_half(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(push_to_half(1.0 / (1.0 + std::exp(5.0))) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(push_to_half(1e-4) == 0.0);
    CHECK(push_to_half(1.0 - 1e-4) == 1.0);
    CHECK(push_to_half(1.0 / (1.0 + std::exp(-2.0))) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS_AS(push_to_half(1.0), DomainError);
    CHECK_THROWS_AS(push_to_half(-0.2), DomainError);
}

TEST_CASE("push_to_extremes examples") {
    CHECK(push_to_extremes(0.5) == 0.5);
    CHECK(push_to_extremes(0.2) == doctest::Approx(0.047426).epsilon(1e-5));
    CHECK(push_to_extremes(0.8) == doctest::Approx(0.952574).epsilon(1e-6));
    CHECK(push_to_extremes(0.2) == doctest::Approx(1.0 / (1.0 + std::exp(3.0))).epsilon(1e-14));
    CHECK_THROWS_AS(push_to_extremes(0.0), DomainError);
    CHECK(sigmoid_error(0.2, 10, 0.5) == push_to_extremes(0.2));
}

TEST_CASE("push_to_extremes inverts push_to_half on its unclipped range") {
    const double lo = 1.0 / (1.0 + std::exp(5.0)), hi = 1.0 / (1.0 + std::exp(-5.0));
    for (int i = 1; i < 10000; ++i) {
        const double g = lo + (hi - lo) * i / 10000.0;
        REQUIRE(std::abs(push_to_extremes(push_to_half(g)) - g) <= 1e-12);
    }
}

TEST_CASE("push_to_extremes never reaches the clip bounds") {
    const double lo = 1.0 / (1.0 + std::exp(5.0)), hi = 1.0 / (1.0 + std::exp(-5.0));
    for (double g : {1e-6, 0.3, 0.999999}) {
        CHECK(push_to_extremes(g) > lo);
        CHECK(push_to_extremes(g) < hi);
    }
    // At the ends of (0,1) the bound is approached to within rounding.
    CHECK(push_to_extremes(1e-300) >= lo);
    CHECK(push_to_extremes(1.0 - 1e-16) <= hi);
}

TEST_CASE("deterministic profiles are non-decreasing") {
    double prev_h = -1, prev_e = -1;
    for (int i = 1; i < 5000; ++i) {
        const double g = i / 5000.0;
        CHECK(push_to_half(g) >= prev_h);
        CHECK(push_to_extremes(g) >= prev_e);
        prev_h = push_to_half(g);
        prev_e = push_to_extremes(g);
    }
}

TEST_CASE("noisy_log_odds") {
    Engine eng(1);
    for (double g : {0.01, 0.5, 0.97}) CHECK(noisy_log_odds(g, 0.0, eng) == g);
    CHECK_THROWS_AS(noisy_log_odds(1.0, 0.2, eng), DomainError);

    // The logit of the output is logit(gamma) plus centred noise.
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = noisy_log_odds(0.5, 0.2, eng);
        REQUIRE((v > 0.0 && v < 1.0));
        sum += logit(v);
    }
    CHECK(std::abs(sum / n) <= 3 * 0.2 / std::sqrt(n));

    // For a fixed draw the map is non-decreasing in gamma.
    Engine a(5), b(5);
    CHECK(noisy_log_odds(0.3, 0.2, a) < noisy_log_odds(0.4, 0.2, b));
}

TEST_CASE("apply_base_model is reproducible per seed and stream") {
    std::vector<double> g(1000);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (i + 0.5) / g.size();
    const BaseModelSpec spec{BaseModelKind::NoisyLogOdds, 0.2, 17};
    CHECK(apply_base_model(spec, g, 0) == apply_base_model(spec, g, 0));
    CHECK(apply_base_model(spec, g, 0) != apply_base_model(spec, g, 1));
    CHECK(apply_base_model({BaseModelKind::PushToHalf, 0.2, 0}, g)[500] == push_to_half(g[500]));
    for (auto k : {BaseModelKind::Perfect, BaseModelKind::PushToHalf, BaseModelKind::PushToExtremes,
                   BaseModelKind::NoisyLogOdds})
        CHECK(parse_base_model_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_base_model_kind("unknown"), ConfigError);
}

TEST_CASE("noisy log-odds raise the mean estimate on imbalanced data") {
    const auto& preset = find_preset("b1.5");
    DataGenConfig cfg;
    cfg.b = preset.b;
    cfg.n = 1000000;
    cfg.seed = 21;
    const auto d = gen_dataset(cfg, 2);
    std::vector<double> gamma(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) gamma[i] = undersampled_posterior(d.p_true[i], preset.pi0);
    const auto noisy = apply_base_model({BaseModelKind::NoisyLogOdds, 0.2, 3}, gamma);
    double diff = 0.0, diff2 = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double e = noisy[i] - gamma[i];
        diff += e;
        diff2 += e * e;
    }
    const double n = static_cast<double>(d.size());
    const double mean = diff / n;
    const double se = std::sqrt((diff2 / n - mean * mean) / n);
    MESSAGE("mean(gamma_hat) - mean(gamma) = ", mean, " (se ", se, ")");
    // One-sided: the shift is not significantly negative.
    CHECK(mean >= -3 * se);
}
