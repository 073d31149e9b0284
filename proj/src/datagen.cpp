#include "recal/datagen.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "parallel.hpp"
#include "recal/csv.hpp"
#include "recal/error.hpp"
#include "recal/mathfn.hpp"
#include "recal/rng.hpp"

namespace recal {

namespace {
constexpr std::array<Range, kNumCovariates> kDefaultRanges{{
    {-0.4, 0.6},
    {-0.2, 0.8},
    {-0.4, 1.0},
    {-0.1, 0.9},
    {0.0, 5.0},
    {0.0, 3.0},
    {1.0, 4.0},
    {1.0, 7.0},
    {1.0, 3.0},
    {0.0, 2.0},
}};

std::size_t block_count(std::size_t n) { return (n + kRowBlock - 1) / kRowBlock; }
} // namespace

CovariateRanges::CovariateRanges() : ranges_(kDefaultRanges) {}

CovariateRanges::CovariateRanges(const std::array<Range, kNumCovariates>& ranges)
    : ranges_(ranges) {}

void CovariateRanges::validate() const {
    for (std::size_t j = 0; j < kNumCovariates; ++j) {
        const auto& r = ranges_[j];
        if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max))
            throw ConfigError("covariate " + std::to_string(j + 1) +
                              ": range requires finite min < max");
    }
}

CovariateMatrix gen_covariates(std::size_t n, const CovariateRanges& ranges, std::uint64_t seed,
                               unsigned threads) {
    if (n == 0) throw ConfigError("gen_covariates: n must be at least 1");
    ranges.validate();
    CovariateMatrix x(n);
    detail::parallel_for(block_count(n), threads, [&](std::size_t block) {
        Engine eng = make_stream(seed, stream::covariates, block);
        const std::size_t end = std::min(n, (block + 1) * kRowBlock);
        for (std::size_t i = block * kRowBlock; i < end; ++i) {
            auto row = x.row(i);
            for (std::size_t j = 0; j < kNumCovariates; ++j) {
                const auto& r = ranges[j];
                row[j] = r.min + (r.max - r.min) * uniform01(eng);
            }
        }
    });
    return x;
}

double true_logit(std::span<const double, kNumCovariates> x, double b) {
    static const double log99 = std::log(99.0);
    double s = 0.0;
    for (double v : x) s += v;
    // x1..x10 are x[0]..x[9]
    s += x[0] * x[2] + x[1] * x[4] + x[3] * x[8] + x[5] * x[6] + x[7] * x[9];
    s += x[0] * x[1] * x[2] * x[3] + x[0] * x[1] * x[8] * x[9];
    return log99 / 40.0 * s - b * log99;
}

SyntheticDataset gen_dataset(const DataGenConfig& config, unsigned threads) {
    if (config.n == 0) throw ConfigError("gen_dataset: n must be at least 1");
    if (!std::isfinite(config.b) || !(config.b > 0.0))
        throw ConfigError("gen_dataset: b must be positive");

    SyntheticDataset data;
    data.x = gen_covariates(config.n, config.ranges, config.seed, threads);
    data.p_true.resize(config.n);
    data.y.resize(config.n);
    detail::parallel_for(block_count(config.n), threads, [&](std::size_t block) {
        Engine eng = make_stream(config.seed, stream::outcomes, block);
        const std::size_t end = std::min(config.n, (block + 1) * kRowBlock);
        for (std::size_t i = block * kRowBlock; i < end; ++i) {
            const double p = logistic(true_logit(data.x.row(i), config.b));
            data.p_true[i] = p;
            data.y[i] = uniform01(eng) < p ? 1 : 0;
        }
    });
    return data;
}

void write_dataset_csv(std::ostream& out, const SyntheticDataset& data) {
    for (std::size_t j = 1; j <= kNumCovariates; ++j) out << 'x' << j << ',';
    out << "p_true,y\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.x.row(i)) out << csv::format_real(v) << ',';
        out << csv::format_real(data.p_true[i]) << ',' << (data.y[i] ? '1' : '0') << '\n';
    }
}

} // namespace recal
