#include "recal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recal/error.hpp"

namespace recal {

namespace {
void check_lengths(std::size_t a, std::size_t b, const char* op) {
    if (a != b) throw DomainError(std::string(op) + ": length mismatch");
    if (a == 0) throw DomainError(std::string(op) + ": empty input");
}
} // namespace

double rmse(std::span<const double> p_hat, std::span<const double> p_true) {
    check_lengths(p_hat.size(), p_true.size(), "rmse");
    double s = 0.0;
    for (std::size_t i = 0; i < p_hat.size(); ++i) {
        const double d = p_hat[i] - p_true[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(p_hat.size()));
}

double mae(std::span<const double> p_hat, std::span<const double> p_true) {
    check_lengths(p_hat.size(), p_true.size(), "mae");
    double s = 0.0;
    for (std::size_t i = 0; i < p_hat.size(); ++i) s += std::abs(p_hat[i] - p_true[i]);
    return s / static_cast<double>(p_hat.size());
}

double brier(std::span<const double> p_hat, std::span<const std::uint8_t> y) {
    check_lengths(p_hat.size(), y.size(), "brier");
    double s = 0.0;
    for (std::size_t i = 0; i < p_hat.size(); ++i) {
        if (!(p_hat[i] >= 0.0 && p_hat[i] <= 1.0)) throw DomainError("brier: prediction outside [0, 1]");
        const double d = p_hat[i] - static_cast<double>(y[i]);
        s += d * d;
    }
    return s / static_cast<double>(p_hat.size());
}

double nls(std::span<const double> p_hat, std::span<const std::uint8_t> y) {
    check_lengths(p_hat.size(), y.size(), "nls");
    double s = 0.0;
    for (std::size_t i = 0; i < p_hat.size(); ++i) {
        if (std::isnan(p_hat[i])) throw DomainError("nls: prediction is NaN");
        // The probability assigned to the observed class is clamped, so a
        // prediction of exactly 0 or 1 on the wrong side costs exactly -log(0.00001).
        const double assigned = y[i] ? p_hat[i] : 1.0 - p_hat[i];
        s -= std::log(std::clamp(assigned, kNlsFloor, kNlsCeil));
    }
    return s;
}

MetricsReport evaluate(std::span<const double> p_hat, std::span<const std::uint8_t> y,
                       std::span<const double> p_true) {
    MetricsReport r;
    r.n = p_hat.size();
    r.brier = brier(p_hat, y);
    r.nls = nls(p_hat, y);
    if (!p_true.empty()) {
        r.rmse = rmse(p_hat, p_true);
        r.mae = mae(p_hat, p_true);
    }
    return r;
}

} // namespace recal
