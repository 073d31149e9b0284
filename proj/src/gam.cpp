#include "recal/gam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recal/error.hpp"
#include "recal/logistic.hpp"
#include "recal/mathfn.hpp"
#include "recal/spline.hpp"

namespace recal {

double GamFit::predict_logit(double z) const {
    const CubicBSpline basis(knots);
    return basis.value(spline_coefficients, z);
}

double GamFit::predict(double z) const { return logistic(predict_logit(z)); }

std::vector<double> lambda_grid(const GamOptions& opts) {
    if (opts.grid_points == 0 || !(opts.lambda_min > 0.0) || !(opts.lambda_max >= opts.lambda_min))
        throw ConfigError("gam: invalid smoothing-parameter grid");
    std::vector<double> grid(opts.grid_points);
    if (opts.grid_points == 1) {
        grid[0] = opts.lambda_min;
        return grid;
    }
    const double lo = std::log10(opts.lambda_min), hi = std::log10(opts.lambda_max);
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(k) /
                                          static_cast<double>(grid.size() - 1));
    return grid;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Compressed basis: each row has four non-zero entries starting at first[i].
struct BasisRows {
    std::vector<std::size_t> first;
    std::vector<std::array<double, 4>> values;
};

BasisRows evaluate_rows(const CubicBSpline& basis, std::span<const double> z) {
    BasisRows rows;
    rows.first.resize(z.size());
    rows.values.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto r = basis.evaluate(z[i]);
        rows.first[i] = r.first;
        rows.values[i] = r.values;
    }
    return rows;
}

struct Accumulated {
    double deviance = 0.0;
    double pearson = 0.0; // sum w (zeta - eta)^2 = sum (y - mu)^2 / w
    MatrixXd xtwx; // X' W X
    VectorXd score; // X' (y - mu)
};

Accumulated accumulate(const BasisRows& rows, std::span<const std::uint8_t> y, const VectorXd& beta,
                       double weight_floor) {
    const auto m = beta.size();
    Accumulated a;
    a.xtwx = MatrixXd::Zero(m, m);
    a.score = VectorXd::Zero(m);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto f = static_cast<Eigen::Index>(rows.first[i]);
        const auto& v = rows.values[i];
        const double eta = v[0] * beta[f] + v[1] * beta[f + 1] + v[2] * beta[f + 2] + v[3] * beta[f + 3];
        const double mu = logistic(eta);
        const double w = std::max(mu * (1.0 - mu), weight_floor);
        const double r = static_cast<double>(y[i]) - mu;
        a.deviance += detail::softplus(eta) - (y[i] ? eta : 0.0);
        a.pearson += r * r / w;
        for (int p = 0; p < 4; ++p) {
            a.score[f + p] += r * v[p];
            const double wv = w * v[p];
            for (int q = p; q < 4; ++q) a.xtwx(f + p, f + q) += wv * v[q];
        }
    }
    a.deviance *= 2.0;
    a.xtwx.triangularView<Eigen::StrictlyLower>() = a.xtwx.transpose();
    return a;
}

struct LambdaResult {
    VectorXd beta;
    bool converged = false;
    int iterations = 0;
    double deviance = 0.0;
    double edf = 0.0;
    double score = 0.0;
};

LambdaResult fit_at_lambda(const BasisRows& rows, std::span<const std::uint8_t> y,
                           const MatrixXd& penalty, double lambda, VectorXd beta,
                           const GamOptions& opts) {
    LambdaResult res;
    const MatrixXd lp = lambda * penalty;
    auto objective = [&](const Accumulated& a, const VectorXd& b) {
        return a.deviance + b.dot(lp * b);
    };

    Accumulated cur = accumulate(rows, y, beta, opts.weight_floor);
    double cur_obj = objective(cur, beta);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        res.iterations = iter;
        // Newton step on the penalized deviance: (X'WX + lambda P) d = X'(y - mu) - lambda P beta.
        const MatrixXd h = cur.xtwx + lp;
        const Eigen::LDLT<MatrixXd> ldlt(h);
        if (ldlt.info() != Eigen::Success) break;
        const VectorXd step = ldlt.solve(cur.score - lp * beta);
        if (!step.allFinite()) break;

        double t = 1.0;
        VectorXd next_beta = beta + step;
        Accumulated next = accumulate(rows, y, next_beta, opts.weight_floor);
        double next_obj = objective(next, next_beta);
        int halvings = 0;
        while (!(next_obj <= cur_obj) && halvings < 40) {
            t *= 0.5;
            next_beta = beta + t * step;
            next = accumulate(rows, y, next_beta, opts.weight_floor);
            next_obj = objective(next, next_beta);
            ++halvings;
        }
        if (!(next_obj <= cur_obj)) {
            res.converged = true;
            break;
        }
        const double prev_obj = cur_obj;
        beta = std::move(next_beta);
        cur = std::move(next);
        cur_obj = next_obj;
        if (std::abs(prev_obj - cur_obj) <= opts.tol * (std::abs(cur_obj) + 0.1)) {
            res.converged = true;
            break;
        }
    }

    const MatrixXd h = cur.xtwx + lp;
    const Eigen::LDLT<MatrixXd> ldlt(h);
    res.edf = ldlt.solve(cur.xtwx).trace();
    res.beta = std::move(beta);
    res.deviance = cur.deviance;
    const double n = static_cast<double>(y.size());
    if (opts.criterion == SmoothingCriterion::Gcv) {
        // GCV of the working linear model at convergence.
        res.score = n * cur.pearson / ((n - res.edf) * (n - res.edf));
    } else {
        // Unbiased risk estimate with the binomial scale fixed at 1.
        res.score = cur.deviance / n + 2.0 * res.edf / n - 1.0;
    }
    if (!std::isfinite(res.score) || !res.beta.allFinite()) res.converged = false;
    return res;
}

} // namespace

GamFit fit_penalized_gam(std::span<const double> z, std::span<const std::uint8_t> y,
                         const GamOptions& opts) {
    detail::check_binary_inputs(z, y, 50, "fit_penalized_gam");
    if (count_distinct(z) < 4) throw FitError("fit_penalized_gam: fewer than four distinct values");
    if (opts.fixed_lambda && !(*opts.fixed_lambda > 0.0))
        throw ConfigError("gam: lambda must be positive");

    const CubicBSpline basis(opts.knots == KnotPlacement::Quantile
                                 ? quantile_knots(z, opts.interior_knots)
                                 : uniform_knots(z, opts.interior_knots));
    const BasisRows rows = evaluate_rows(basis, z);
    const MatrixXd penalty = curvature_penalty(basis);

    // Start from the unpenalized affine logistic fit, written in the spline basis.
    LogisticOptions lopts;
    lopts.tol = opts.tol;
    lopts.max_iter = opts.max_iter;
    lopts.weight_floor = opts.weight_floor;
    const LogisticFit affine = fit_logistic_irls(z, y, lopts);
    const auto g = basis.greville();
    VectorXd start(static_cast<Eigen::Index>(g.size()));
    for (std::size_t j = 0; j < g.size(); ++j)
        start[static_cast<Eigen::Index>(j)] = affine.beta0 + affine.beta1 * g[j];

    std::vector<double> grid = opts.fixed_lambda ? std::vector<double>{*opts.fixed_lambda}
                                                 : lambda_grid(opts);

    // Walk from the smoothest end, warm-starting each fit from the previous one.
    std::optional<LambdaResult> best;
    double best_lambda = 0.0;
    std::ostringstream diag;
    VectorXd warm = start;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        LambdaResult r = fit_at_lambda(rows, y, penalty, *it, warm, opts);
        if (!r.converged) {
            diag << "lambda=" << *it << " did not converge after " << r.iterations
                 << " iterations (deviance " << r.deviance << ")\n";
            continue;
        }
        warm = r.beta;
        if (!best || r.score <= best->score) {
            best = std::move(r);
            best_lambda = *it;
        }
    }
    if (!best) throw FitError("fit_penalized_gam: no smoothing parameter converged", diag.str());

    GamFit fit;
    fit.knots = basis.knots();
    fit.spline_coefficients.assign(best->beta.data(), best->beta.data() + best->beta.size());
    fit.lambda = best_lambda;
    fit.converged = true;
    fit.iterations = best->iterations;
    fit.deviance = best->deviance;
    fit.edf = best->edf;
    fit.score = best->score;
    return fit;
}

} // namespace recal
