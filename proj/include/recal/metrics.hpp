#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace recal {

// Clamp applied to predictions before taking logs in nls().
inline constexpr double kNlsFloor = 0.00001;
inline constexpr double kNlsCeil = 0.99999;

double rmse(std::span<const double> p_hat, std::span<const double> p_true);
double mae(std::span<const double> p_hat, std::span<const double> p_true);

// Mean squared difference to the outcomes. p_hat must lie in [0, 1].
double brier(std::span<const double> p_hat, std::span<const std::uint8_t> y);

// Summed (not averaged) negative log-likelihood with predictions clamped to
// [0.00001, 0.99999].
double nls(std::span<const double> p_hat, std::span<const std::uint8_t> y);

struct MetricsReport {
    std::optional<double> rmse; // only when true probabilities are known
    std::optional<double> mae;
    double brier = 0.0;
    double nls = 0.0;
    std::size_t n = 0;
};

MetricsReport evaluate(std::span<const double> p_hat, std::span<const std::uint8_t> y,
                       std::span<const double> p_true = {});

} // namespace recal
