#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace recal {

// Cubic B-spline basis on a knot sequence that includes both boundary knots.
// With k knots the basis has k + 2 functions (boundary knots repeated to
// multiplicity four). Inside [knots.front(), knots.back()] every point has
// exactly four non-zero basis values, which sum to one.
class CubicBSpline {
public:
    static constexpr int kOrder = 4;

    // Throws ConfigError unless there are at least two strictly ascending finite knots.
    explicit CubicBSpline(std::vector<double> knots);

    std::size_t num_basis() const { return knots_.size() + 2; }
    const std::vector<double>& knots() const { return knots_; }
    double lower() const { return knots_.front(); }
    double upper() const { return knots_.back(); }

    struct Row {
        std::size_t first;            // index of the first non-zero basis function
        std::array<double, 4> values; // basis first .. first+3
    };

    // Basis values at z, with z clamped into the knot span.
    Row evaluate(double z) const;

    // Spline value sum_j coef[j] B_j(z), linearly extended outside the knot span.
    double value(std::span<const double> coef, double z) const;

    // First derivative at the boundary knots.
    double left_slope(std::span<const double> coef) const;
    double right_slope(std::span<const double> coef) const;

    // Greville abscissae; coefficients equal to a + b * greville reproduce a + b z exactly.
    std::vector<double> greville() const;

    // Knot at position i of the extended sequence (boundaries repeated).
    double extended_knot(std::ptrdiff_t i) const;

private:
    std::vector<double> knots_;
};

// n x (k + 2) dense basis matrix. Throws FitError when z has fewer than four
// distinct values.
Eigen::MatrixXd build_spline_basis(std::span<const double> z, std::span<const double> knots);

// Boundaries at min/max of z, interior knots at the empirical quantiles j/(K+1).
// Interior knots that coincide with each other or with a boundary are dropped.
std::vector<double> quantile_knots(std::span<const double> z, std::size_t interior);

// Boundaries at min/max of z, interior knots evenly spaced between them.
std::vector<double> uniform_knots(std::span<const double> z, std::size_t interior);

// (k x m) map from coefficients to f'' at each knot, with z rescaled to [0, 1]
// over the knot span. f'' is linear between knots.
Eigen::MatrixXd second_derivative_operator(const CubicBSpline& basis);

// m x m matrix S with c' S c = integral of f''(u)^2 du over the knot span
// (u = z rescaled to [0, 1]). Its null space is exactly the affine functions of z.
Eigen::MatrixXd curvature_penalty(const CubicBSpline& basis);

std::size_t count_distinct(std::span<const double> z);

} // namespace recal
