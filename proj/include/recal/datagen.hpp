#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace recal {

inline constexpr std::size_t kNumCovariates = 10;

struct Range {
    double min;
    double max;
};

// Per-covariate uniform support. Defaults to the simulation-study ranges.
class CovariateRanges {
public:
    CovariateRanges();
    explicit CovariateRanges(const std::array<Range, kNumCovariates>& ranges);

    const Range& operator[](std::size_t j) const { return ranges_[j]; }
    const std::array<Range, kNumCovariates>& ranges() const { return ranges_; }

    // Throws ConfigError unless min < max (and both finite) for every covariate.
    void validate() const;

private:
    std::array<Range, kNumCovariates> ranges_;
};

struct DataGenConfig {
    double b = 1.1;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    CovariateRanges ranges;
};

// Row-major n x 10 covariate matrix.
class CovariateMatrix {
public:
    CovariateMatrix() = default;
    explicit CovariateMatrix(std::size_t rows) : data_(rows * kNumCovariates) {}

    std::size_t rows() const { return data_.size() / kNumCovariates; }
    std::span<double, kNumCovariates> row(std::size_t i) {
        return std::span<double, kNumCovariates>(data_.data() + i * kNumCovariates, kNumCovariates);
    }
    std::span<const double, kNumCovariates> row(std::size_t i) const {
        return std::span<const double, kNumCovariates>(data_.data() + i * kNumCovariates,
                                                       kNumCovariates);
    }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * kNumCovariates + j]; }

    bool operator==(const CovariateMatrix&) const = default;

private:
    std::vector<double> data_;
};

struct SyntheticDataset {
    CovariateMatrix x;
    std::vector<double> p_true;
    std::vector<std::uint8_t> y;

    std::size_t size() const { return y.size(); }
    bool operator==(const SyntheticDataset&) const = default;
};

// Rows are produced in fixed-size blocks, each with its own derived stream,
// so output is identical for any thread count.
inline constexpr std::size_t kRowBlock = 1 << 16;

CovariateMatrix gen_covariates(std::size_t n, const CovariateRanges& ranges, std::uint64_t seed,
                               unsigned threads = 1);

// log-odds of success:
//   (log 99 / 40) * (sum x_i + x1x3 + x2x5 + x4x9 + x6x7 + x8x10 + x1x2x3x4 + x1x2x9x10) - b log 99
double true_logit(std::span<const double, kNumCovariates> x, double b);

SyntheticDataset gen_dataset(const DataGenConfig& config, unsigned threads = 1);

// CSV with header x1,...,x10,p_true,y; reals in shortest round-trip form.
void write_dataset_csv(std::ostream& out, const SyntheticDataset& data);

} // namespace recal
