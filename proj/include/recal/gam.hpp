#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace recal {

enum class SmoothingCriterion {
    Gcv,  // n * sum w (zeta - eta)^2 / (n - edf)^2 on the converged working model
    Ubre, // deviance / n + 2 edf / n - 1 (binomial scale known)
};

enum class KnotPlacement {
    Quantile, // interior knots at empirical quantiles of z
    Uniform,  // interior knots evenly spaced between min and max of z
};

struct GamOptions {
    std::size_t interior_knots = 10;
    KnotPlacement knots = KnotPlacement::Quantile;
    std::size_t grid_points = 25;
    double lambda_min = 1e-6;
    double lambda_max = 1e6;
    std::optional<double> fixed_lambda; // skips the search
    SmoothingCriterion criterion = SmoothingCriterion::Ubre;
    double tol = 1e-8;
    int max_iter = 100;
    double weight_floor = 1e-10;
};

// Logistic GAM with one cubic P-spline smoother: P(Y=1 | z) = logistic(s(z)).
struct GamFit {
    std::vector<double> knots;               // including both boundary knots
    std::vector<double> spline_coefficients; // knots.size() + 2 entries
    double lambda = 0.0;
    int basis_order = 4;
    bool converged = false;
    int iterations = 0;
    double deviance = 0.0;
    double edf = 0.0;   // trace of the influence matrix
    double score = 0.0; // smoothing criterion at the chosen lambda

    double predict_logit(double z) const;
    double predict(double z) const;
};

// Penalized IRLS at each smoothing parameter of a log-uniform grid, keeping the
// one with the lowest smoothing criterion (ties go to the smaller lambda).
// The penalty is the integrated squared second derivative of the spline.
// Requires n >= 50, both classes and at least four distinct z values.
// Throws FitError if no grid point converges.
GamFit fit_penalized_gam(std::span<const double> z, std::span<const std::uint8_t> y,
                         const GamOptions& opts = {});

// Log-uniform grid from lambda_min to lambda_max, ascending.
std::vector<double> lambda_grid(const GamOptions& opts);

} // namespace recal
