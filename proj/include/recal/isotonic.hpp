#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace recal {

// Right-continuous step function. values[i] applies on [breakpoints[i], breakpoints[i+1]).
// Adjacent steps always differ (pooled blocks are merged), so values is
// strictly increasing.
struct IsotonicFit {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

// Least-squares non-decreasing fit of y on z by pair-adjacent violators.
// Rows sharing a z value are pooled first, so the fit is a function of z.
IsotonicFit fit_pav(std::span<const double> z, std::span<const std::uint8_t> y);

// Step lookup; clamps to the first/last value outside the breakpoint range.
double pav_predict(const IsotonicFit& fit, double z);

} // namespace recal
