#include "recal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recal/error.hpp"
#include "recal/rng.hpp"

namespace recal {

void validate_pi0(double pi0) {
    if (!(pi0 > 0.0 && pi0 <= 1.0))
        throw ConfigError("pi0 must lie in (0, 1], got " + std::to_string(pi0));
}

SyntheticDataset undersample(const SyntheticDataset& data, const SamplingConfig& cfg) {
    validate_pi0(cfg.pi0);
    if (data.size() == 0) throw ConfigError("undersample: dataset is empty");

    Engine eng = make_stream(cfg.seed, stream::undersample);
    std::vector<std::size_t> keep;
    keep.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        // One draw per row regardless of label keeps the stream aligned with row index.
        const double u = uniform01(eng);
        if (data.y[i] == 1 || u < cfg.pi0) keep.push_back(i);
    }

    SyntheticDataset out;
    out.x = CovariateMatrix(keep.size());
    out.p_true.reserve(keep.size());
    out.y.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const std::size_t i = keep[k];
        std::copy(data.x.row(i).begin(), data.x.row(i).end(), out.x.row(k).begin());
        out.p_true.push_back(data.p_true[i]);
        out.y.push_back(data.y[i]);
    }
    return out;
}

double undersampled_posterior(double p, double pi0) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("undersampled_posterior: p must lie in (0, 1)");
    if (!(pi0 > 0.0 && pi0 <= 1.0))
        throw DomainError("undersampled_posterior: pi0 must lie in (0, 1]");
    return p / (p + (1.0 - p) * pi0);
}

const Preset& find_preset(std::string_view key) {
    for (const auto& p : kPresets) {
        if (key == p.name) return p;
        if (key.size() > 1 && key.front() == 'b') {
            try {
                if (std::stod(std::string(key.substr(1))) == p.b) return p;
            } catch (const std::exception&) {
            }
        }
    }
    throw ConfigError("unknown preset '" + std::string(key) + "'");
}

} // namespace recal
