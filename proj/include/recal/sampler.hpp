#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "recal/datagen.hpp"

namespace recal {

struct SamplingConfig {
    double pi0 = 1.0;
    std::uint64_t seed = 0;
};

// Keeps every positive and each negative independently with probability pi0.
// Row order is preserved.
SyntheticDataset undersample(const SyntheticDataset& data, const SamplingConfig& cfg);

// P(Y=1 | x, kept) given P(Y=1 | x) = p: p / (p + (1 - p) pi0).
double undersampled_posterior(double p, double pi0);

// Throws ConfigError unless 0 < pi0 <= 1.
void validate_pi0(double pi0);

// Data-generating process paired with the retention rate that roughly
// balances its undersampled training set.
struct Preset {
    std::string_view name;
    double b;
    double pi0;
    double mean_rate; // reported approximate P(Y=1)
};

inline constexpr std::array<Preset, 3> kPresets{{
    {"rate_0.0022", 2.0, 0.0023, 0.0022},
    {"rate_0.0208", 1.5, 0.02125, 0.0208},
    {"rate_0.1109", 1.1, 0.125, 0.1109},
}};

// Looks a preset up by name or by its b value written as "b2", "b1.5", "b1.1".
const Preset& find_preset(std::string_view key);

} // namespace recal
