#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "recal/calibrators.hpp"
#include "recal/metrics.hpp"

namespace recal {

// Base-model outputs aligned with outcomes and, for simulated data, the true probabilities.
struct PredictionSet {
    std::vector<double> gamma_hat;
    std::vector<std::uint8_t> y;
    std::optional<std::vector<double>> p_true;

    std::size_t size() const { return y.size(); }
};

// Reads a CSV with a header naming at least `gamma_hat` and `y` (any order,
// extra columns ignored) and optionally `p_true`. Throws IngestError naming the
// offending line.
PredictionSet ingest_predictions(const std::filesystem::path& csv_path);
PredictionSet ingest_predictions(std::istream& in);

struct CalibrateFileOptions {
    Method method = Method::PlattLogit;
    std::optional<double> pi0; // required for Analytical
    CalibratorOptions calibrator;
};

struct CalibrateFileResult {
    Calibrator calibrator;
    MetricsReport report;
};

// Fits the method on the whole file, then writes every input line with a
// trailing `p_hat` column.
CalibrateFileResult calibrate_file(const std::filesystem::path& input_csv,
                                   const std::filesystem::path& output_csv,
                                   const CalibrateFileOptions& opts);

void print_report(std::ostream& out, const MetricsReport& report);

} // namespace recal
