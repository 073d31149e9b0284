#include "recal/base_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recal/error.hpp"
#include "recal/mathfn.hpp"
#include "recal/rng.hpp"

namespace recal {

std::string_view to_string(BaseModelKind kind) {
    switch (kind) {
    case BaseModelKind::Perfect: return "perfect";
    case BaseModelKind::PushToHalf: return "push_to_half";
    case BaseModelKind::PushToExtremes: return "push_to_extremes";
    case BaseModelKind::NoisyLogOdds: return "noisy_log_odds";
    }
    return "unknown";
}

BaseModelKind parse_base_model_kind(std::string_view name) {
    for (auto k : {BaseModelKind::Perfect, BaseModelKind::PushToHalf,
                   BaseModelKind::PushToExtremes, BaseModelKind::NoisyLogOdds})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown base model '" + std::string(name) + "'");
}

namespace detail {
void check_open_unit(double gamma, const char* op) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError(std::string(op) + ": gamma must lie in (0, 1)");
}

double noisy_log_odds_impl(double gamma, double eps) {
    return logistic(logit(gamma) + eps);
}
} // namespace detail

double perfect(double gamma) {
    detail::check_open_unit(gamma, "perfect");
    return gamma;
}

double push_to_half(double gamma) {
    detail::check_open_unit(gamma, "push_to_half");
    return std::clamp(-0.1 * std::log(1.0 / gamma - 1.0) + 0.5, 0.0, 1.0);
}

double push_to_extremes(double gamma) {
    detail::check_open_unit(gamma, "push_to_extremes");
    return sigmoid_error(gamma, 10.0, 0.5);
}

double sigmoid_error(double x, double k, double m) { return 1.0 / (1.0 + std::exp(-k * (x - m))); }

std::vector<double> apply_base_model(const BaseModelSpec& spec, std::span<const double> gamma,
                                     std::uint64_t stream_index) {
    if (!(spec.sigma >= 0.0)) throw ConfigError("base model sigma must be non-negative");
    std::vector<double> out(gamma.size());
    switch (spec.kind) {
    case BaseModelKind::Perfect:
        std::transform(gamma.begin(), gamma.end(), out.begin(), perfect);
        break;
    case BaseModelKind::PushToHalf:
        std::transform(gamma.begin(), gamma.end(), out.begin(), push_to_half);
        break;
    case BaseModelKind::PushToExtremes:
        std::transform(gamma.begin(), gamma.end(), out.begin(), push_to_extremes);
        break;
    case BaseModelKind::NoisyLogOdds: {
        Engine eng = make_stream(spec.seed, stream::noise, stream_index);
        for (std::size_t i = 0; i < gamma.size(); ++i)
            out[i] = noisy_log_odds(gamma[i], spec.sigma, eng);
        break;
    }
    }
    return out;
}

} // namespace recal
