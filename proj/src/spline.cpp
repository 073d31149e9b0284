#include "recal/spline.hpp"

#include <algorithm>
#include <cmath>

#include "recal/error.hpp"

namespace recal {

CubicBSpline::CubicBSpline(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw ConfigError("spline: at least two knots required");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i])) throw ConfigError("spline: knots must be finite");
        if (i > 0 && !(knots_[i] > knots_[i - 1]))
            throw ConfigError("spline: knots must be strictly ascending");
    }
}

double CubicBSpline::extended_knot(std::ptrdiff_t i) const {
    const auto k = static_cast<std::ptrdiff_t>(knots_.size());
    return knots_[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i - 3, 0, k - 1))];
}

CubicBSpline::Row CubicBSpline::evaluate(double z) const {
    z = std::clamp(z, lower(), upper());
    // Interval s with knots[s] <= z < knots[s+1]; the upper boundary uses the last interval.
    auto it = std::upper_bound(knots_.begin(), knots_.end(), z);
    std::size_t s = static_cast<std::size_t>(it - knots_.begin());
    s = std::clamp<std::size_t>(s, 1, knots_.size() - 1) - 1;
    const auto span = static_cast<std::ptrdiff_t>(s) + 3;

    // Cox-de Boor triangle.
    std::array<double, 4> n{1.0, 0.0, 0.0, 0.0};
    std::array<double, 4> left{}, right{};
    for (int j = 1; j < kOrder; ++j) {
        left[j] = z - extended_knot(span + 1 - j);
        right[j] = extended_knot(span + j) - z;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    return Row{static_cast<std::size_t>(span - 3), n};
}

double CubicBSpline::left_slope(std::span<const double> coef) const {
    return 3.0 * (coef[1] - coef[0]) / (extended_knot(4) - lower());
}

double CubicBSpline::right_slope(std::span<const double> coef) const {
    const std::size_t m = num_basis();
    return 3.0 * (coef[m - 1] - coef[m - 2]) /
           (upper() - extended_knot(static_cast<std::ptrdiff_t>(m) - 1));
}

double CubicBSpline::value(std::span<const double> coef, double z) const {
    const Row row = evaluate(z);
    double v = 0.0;
    for (int k = 0; k < kOrder; ++k) v += coef[row.first + k] * row.values[k];
    if (z < lower()) v += left_slope(coef) * (z - lower());
    else if (z > upper()) v += right_slope(coef) * (z - upper());
    return v;
}

std::vector<double> CubicBSpline::greville() const {
    std::vector<double> g(num_basis());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto i = static_cast<std::ptrdiff_t>(j);
        g[j] = (extended_knot(i + 1) + extended_knot(i + 2) + extended_knot(i + 3)) / 3.0;
    }
    return g;
}

std::size_t count_distinct(std::span<const double> z) {
    std::vector<double> s(z.begin(), z.end());
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

Eigen::MatrixXd build_spline_basis(std::span<const double> z, std::span<const double> knots) {
    if (count_distinct(z) < 4) throw FitError("spline basis: fewer than four distinct values");
    const CubicBSpline basis(std::vector<double>(knots.begin(), knots.end()));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(z.size()),
                                              static_cast<Eigen::Index>(basis.num_basis()));
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto row = basis.evaluate(z[i]);
        for (int k = 0; k < CubicBSpline::kOrder; ++k)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(row.first + k)) = row.values[k];
    }
    return x;
}

std::vector<double> quantile_knots(std::span<const double> z, std::size_t interior) {
    std::vector<double> s(z.begin(), z.end());
    std::sort(s.begin(), s.end());
    const double lo = s.front(), hi = s.back();
    std::vector<double> knots{lo};
    const double last = static_cast<double>(s.size() - 1);
    for (std::size_t j = 1; j <= interior; ++j) {
        // Linear interpolation between order statistics.
        const double h = last * static_cast<double>(j) / static_cast<double>(interior + 1);
        const auto i = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(i);
        double q = s[i];
        if (i + 1 < s.size()) q += frac * (s[i + 1] - s[i]);
        if (q > knots.back() && q < hi) knots.push_back(q);
    }
    if (hi > lo) knots.push_back(hi);
    return knots;
}

std::vector<double> uniform_knots(std::span<const double> z, std::size_t interior) {
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    std::vector<double> knots{*lo};
    if (!(*hi > *lo)) return knots;
    for (std::size_t j = 1; j <= interior; ++j)
        knots.push_back(*lo + (*hi - *lo) * static_cast<double>(j) / static_cast<double>(interior + 1));
    knots.push_back(*hi);
    return knots;
}

Eigen::MatrixXd second_derivative_operator(const CubicBSpline& basis) {
    // Knots mapped to [0, 1] so the penalty does not depend on the units of z.
    const double lo = basis.lower(), width = basis.upper() - basis.lower();
    auto t = [&](std::ptrdiff_t i) { return (basis.extended_knot(i) - lo) / width; };
    const auto m = static_cast<std::ptrdiff_t>(basis.num_basis());

    // First derivative: quadratic spline with coefficients 3 (c_i - c_{i-1}) / (t_{i+3} - t_i).
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(m - 1, m);
    for (std::ptrdiff_t i = 1; i < m; ++i) {
        const double s = 3.0 / (t(i + 3) - t(i));
        d1(i - 1, i - 1) = -s;
        d1(i - 1, i) = s;
    }
    // Second derivative: linear spline whose coefficients are its values at the knots.
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(m - 2, m - 1);
    for (std::ptrdiff_t i = 2; i < m; ++i) {
        const double s = 2.0 / (t(i + 2) - t(i));
        d2(i - 2, i - 2) = -s;
        d2(i - 2, i - 1) = s;
    }
    return d2 * d1;
}

Eigen::MatrixXd curvature_penalty(const CubicBSpline& basis) {
    const Eigen::MatrixXd d = second_derivative_operator(basis);
    const auto& knots = basis.knots();
    const auto k = static_cast<Eigen::Index>(knots.size());
    const double width = basis.upper() - basis.lower();
    // f'' is linear between knots, so integrating its square is exact:
    // over an interval of length h with end values a, b it is h (a^2 + ab + b^2) / 3.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index r = 0; r + 1 < k; ++r) {
        const double h = (knots[static_cast<std::size_t>(r + 1)] - knots[static_cast<std::size_t>(r)]) / width;
        gram(r, r) += h / 3.0;
        gram(r + 1, r + 1) += h / 3.0;
        gram(r, r + 1) += h / 6.0;
        gram(r + 1, r) += h / 6.0;
    }
    return d.transpose() * gram * d;
}

} // namespace recal
