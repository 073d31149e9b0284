#include "recal/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recal/error.hpp"

namespace recal {

namespace {
struct Block {
    double start; // smallest z in the block
    double sum;   // sum of y
    double weight;
};
} // namespace

IsotonicFit fit_pav(std::span<const double> z, std::span<const std::uint8_t> y) {
    if (z.size() != y.size()) throw FitError("fit_pav: predictor and outcome lengths differ");
    if (z.empty()) throw FitError("fit_pav: empty input");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!std::isfinite(z[i])) throw FitError("fit_pav: predictor must be finite");
        if (y[i] > 1) throw FitError("fit_pav: outcomes must be 0 or 1");
    }

    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });

    std::vector<Block> stack;
    stack.reserve(z.size());
    for (std::size_t k = 0; k < order.size();) {
        // Tied z values enter as one pooled observation.
        const double zk = z[order[k]];
        Block cur{zk, 0.0, 0.0};
        for (; k < order.size() && z[order[k]] == zk; ++k) {
            cur.sum += y[order[k]];
            cur.weight += 1.0;
        }
        // Merge while the previous block's mean is not below the current one.
        // Cross-multiplied to compare means without rounding.
        while (!stack.empty() && stack.back().sum * cur.weight >= cur.sum * stack.back().weight) {
            cur.start = stack.back().start;
            cur.sum += stack.back().sum;
            cur.weight += stack.back().weight;
            stack.pop_back();
        }
        stack.push_back(cur);
    }

    IsotonicFit fit;
    fit.breakpoints.reserve(stack.size());
    fit.values.reserve(stack.size());
    for (const auto& b : stack) {
        fit.breakpoints.push_back(b.start);
        fit.values.push_back(b.sum / b.weight);
    }
    return fit;
}

double pav_predict(const IsotonicFit& fit, double z) {
    const auto& bp = fit.breakpoints;
    auto it = std::upper_bound(bp.begin(), bp.end(), z);
    if (it == bp.begin()) return fit.values.front();
    return fit.values[static_cast<std::size_t>(it - bp.begin()) - 1];
}

} // namespace recal
