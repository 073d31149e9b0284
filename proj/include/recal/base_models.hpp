#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recal {

// Hypothetical base models: each maps the undersampled-data probability
// gamma to the estimate gamma_hat a model with a given error profile would emit.
enum class BaseModelKind { Perfect, PushToHalf, PushToExtremes, NoisyLogOdds };

struct BaseModelSpec {
    BaseModelKind kind = BaseModelKind::Perfect;
    double sigma = 0.2; // NoisyLogOdds only
    std::uint64_t seed = 0;
};

std::string_view to_string(BaseModelKind kind);
BaseModelKind parse_base_model_kind(std::string_view name);

double perfect(double gamma);

// logit(gamma)/10 + 0.5 clipped to [0, 1]; may return exactly 0 or 1.
double push_to_half(double gamma);

// 1 / (1 + exp(-10 (gamma - 0.5))).
double push_to_extremes(double gamma);

// logistic(logit(gamma) + eps), eps ~ N(0, sigma^2) drawn from `eng`.
template <class Engine>
double noisy_log_odds(double gamma, double sigma, Engine& eng);

// Generalized sigmoid error 1 / (1 + exp(-k (x - m))). push_to_extremes is
// k = 10, m = 0.5; as a map from gamma_hat to gamma it is the relationship under
// which logistic calibration on the raw score is well specified.
double sigmoid_error(double x, double k, double m);

// Applies the profile to every gamma. NoisyLogOdds draws its noise from the
// stream derived from (spec.seed, "noise", stream_index).
std::vector<double> apply_base_model(const BaseModelSpec& spec, std::span<const double> gamma,
                                     std::uint64_t stream_index = 0);

namespace detail {
void check_open_unit(double gamma, const char* op);
double noisy_log_odds_impl(double gamma, double eps);
} // namespace detail

template <class Engine>
double noisy_log_odds(double gamma, double sigma, Engine& eng) {
    detail::check_open_unit(gamma, "noisy_log_odds");
    if (sigma == 0.0) return gamma;
    std::normal_distribution<double> noise(0.0, sigma);
    return detail::noisy_log_odds_impl(gamma, noise(eng));
}

} // namespace recal
