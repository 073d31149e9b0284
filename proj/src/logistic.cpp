#include "recal/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recal/error.hpp"
#include "recal/mathfn.hpp"

namespace recal {

namespace detail {

double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

void check_binary_inputs(std::span<const double> z, std::span<const std::uint8_t> y,
                         std::size_t min_n, const char* op) {
    if (z.size() != y.size())
        throw FitError(std::string(op) + ": predictor and outcome lengths differ");
    if (z.size() < min_n)
        throw FitError(std::string(op) + ": at least " + std::to_string(min_n) + " rows required");
    std::size_t positives = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] > 1) throw FitError(std::string(op) + ": outcomes must be 0 or 1");
        if (!std::isfinite(z[i])) throw FitError(std::string(op) + ": predictor must be finite");
        positives += y[i];
    }
    if (positives == 0 || positives == y.size())
        throw FitError(std::string(op) + ": both outcome classes must be present");
}

} // namespace detail

double LogisticFit::predict(double z) const { return logistic(predict_logit(z)); }

double logistic_deviance(std::span<const double> z, std::span<const std::uint8_t> y, double beta0,
                         double beta1) {
    double dev = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double eta = beta0 + beta1 * z[i];
        dev += detail::softplus(eta) - (y[i] ? eta : 0.0);
    }
    return 2.0 * dev;
}

namespace {

struct Accumulated {
    double deviance = 0.0;
    // Hessian of the log-likelihood (negated) and score.
    double h00 = 0.0, h01 = 0.0, h11 = 0.0;
    double g0 = 0.0, g1 = 0.0;
};

Accumulated accumulate(std::span<const double> z, std::span<const std::uint8_t> y, double b0,
                       double b1, double weight_floor) {
    Accumulated a;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double zi = z[i];
        const double eta = b0 + b1 * zi;
        const double mu = logistic(eta);
        const double w = std::max(mu * (1.0 - mu), weight_floor);
        const double r = static_cast<double>(y[i]) - mu;
        a.deviance += detail::softplus(eta) - (y[i] ? eta : 0.0);
        a.h00 += w;
        a.h01 += w * zi;
        a.h11 += w * zi * zi;
        a.g0 += r;
        a.g1 += r * zi;
    }
    a.deviance *= 2.0;
    return a;
}

bool deviance_converged(double prev, double cur, double tol) {
    return std::abs(prev - cur) <= tol * (std::abs(cur) + 0.1);
}

} // namespace

LogisticFit fit_logistic_irls(std::span<const double> z, std::span<const std::uint8_t> y,
                              const LogisticOptions& opts) {
    detail::check_binary_inputs(z, y, 2, "fit_logistic_irls");
    const auto [zmin, zmax] = std::minmax_element(z.begin(), z.end());
    if (*zmin == *zmax) throw FitError("fit_logistic_irls: predictor is constant");

    double ybar = 0.0;
    for (auto v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    ybar = std::clamp(ybar, 1e-10, 1.0 - 1e-10);

    LogisticFit fit;
    double b0 = logit(ybar), b1 = 0.0;
    Accumulated cur = accumulate(z, y, b0, b1, opts.weight_floor);
    fit.deviance_trace.push_back(cur.deviance);

    auto finish = [&](double f0, double f1, bool converged, double deviance) {
        fit.beta0 = f0;
        fit.beta1 = f1;
        fit.converged = converged;
        fit.final_deviance = deviance;
        return fit;
    };

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        fit.iterations = iter;
        const double det = cur.h00 * cur.h11 - cur.h01 * cur.h01;
        if (!(det > 0.0) || !std::isfinite(det)) return finish(b0, b1, false, cur.deviance);
        const double d0 = (cur.h11 * cur.g0 - cur.h01 * cur.g1) / det;
        const double d1 = (cur.h00 * cur.g1 - cur.h01 * cur.g0) / det;

        // Step halving keeps the deviance sequence non-increasing.
        double step = 1.0;
        double n0 = b0 + d0, n1 = b1 + d1;
        Accumulated next = accumulate(z, y, n0, n1, opts.weight_floor);
        int halvings = 0;
        while (!(next.deviance <= cur.deviance) && halvings < 40) {
            step *= 0.5;
            n0 = b0 + step * d0;
            n1 = b1 + step * d1;
            next = accumulate(z, y, n0, n1, opts.weight_floor);
            ++halvings;
        }
        if (!(next.deviance <= cur.deviance)) {
            // No descent direction left at working precision.
            return finish(b0, b1, true, cur.deviance);
        }

        if (std::abs(n0) > opts.coef_cap || std::abs(n1) > opts.coef_cap) {
            const double c0 = std::clamp(n0, -opts.coef_cap, opts.coef_cap);
            const double c1 = std::clamp(n1, -opts.coef_cap, opts.coef_cap);
            return finish(c0, c1, false, logistic_deviance(z, y, c0, c1));
        }

        const double prev_dev = cur.deviance;
        b0 = n0;
        b1 = n1;
        cur = next;
        fit.deviance_trace.push_back(cur.deviance);
        if (deviance_converged(prev_dev, cur.deviance, opts.tol))
            return finish(b0, b1, true, cur.deviance);
    }
    return finish(b0, b1, false, cur.deviance);
}

} // namespace recal
