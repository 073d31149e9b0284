#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace recal {

struct LogisticOptions {
    double tol = 1e-8;          // relative deviance change for convergence
    int max_iter = 100;
    double coef_cap = 30.0;     // |beta| beyond this is treated as quasi-separation
    double weight_floor = 1e-10;
};

// P(Y=1 | z) = logistic(beta0 + beta1 z).
struct LogisticFit {
    double beta0 = 0.0;
    double beta1 = 0.0;
    bool converged = false;
    int iterations = 0;
    double final_deviance = 0.0;
    std::vector<double> deviance_trace; // deviance after each accepted step, starting at the initial point

    double predict_logit(double z) const { return beta0 + beta1 * z; }
    double predict(double z) const;
};

// Maximum-likelihood fit of a single-predictor logistic regression by
// iteratively reweighted least squares, starting at (logit(mean y), 0).
// Throws FitError for fewer than two rows, a single class, or a constant predictor.
// If a coefficient leaves [-coef_cap, coef_cap] the fit stops there, is
// clamped, and is flagged not converged.
LogisticFit fit_logistic_irls(std::span<const double> z, std::span<const std::uint8_t> y,
                              const LogisticOptions& opts = {});

// Binomial deviance of logistic(beta0 + beta1 z).
double logistic_deviance(std::span<const double> z, std::span<const std::uint8_t> y, double beta0,
                         double beta1);

namespace detail {
// log(1 + exp(t)) without overflow.
double softplus(double t);
void check_binary_inputs(std::span<const double> z, std::span<const std::uint8_t> y,
                         std::size_t min_n, const char* op);
} // namespace detail

} // namespace recal
