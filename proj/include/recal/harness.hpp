#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "recal/base_models.hpp"
#include "recal/calibrators.hpp"
#include "recal/metrics.hpp"
#include "recal/predictions.hpp"

namespace recal {

struct ExperimentCell {
    double b = 1.1;
    double pi0 = 0.125;
    BaseModelSpec base_model;
    Method method = Method::PlattLogit;
    std::size_t n_calibration = 100000;
    std::size_t n_test = 100000;
    std::uint64_t seed = 1;
};

struct CellResult {
    ExperimentCell cell;
    std::optional<MetricsReport> metrics; // empty when the cell failed
    std::string error;
    double wall_ms = 0.0;

    bool ok() const { return metrics.has_value(); }
};

// Role of a simulated dataset inside a cell; each role has its own streams.
enum class DataRole { Calibration, Test };

// Full-population sample for one role: outcomes and true probabilities from
// the generator, gamma = P(Y=1 | x, kept) under retention rate pi0, and the
// base model's estimate gamma_hat of gamma.
PredictionSet simulate_predictions(const ExperimentCell& cell, DataRole role);

// Fits on the calibration sample, then generates the test sample and scores
// the sealed calibrator on it. Throws on configuration or fit errors.
CellResult run_cell(const ExperimentCell& cell, const CalibratorOptions& opts = {});

struct GridConfig {
    std::vector<ExperimentCell> cells;
    CalibratorOptions calibrator; // from the optional "options" block
};

// Parses a grid document. Throws ConfigError carrying the line and column of a
// syntax error, or the JSON path of a schema violation.
GridConfig parse_grid_config(const std::string& text);
GridConfig load_grid_config(const std::filesystem::path& path);

struct GridOptions {
    unsigned workers = 1;
};

// Runs every cell; failures become rows with an error message. Results come
// back in config order regardless of worker count.
std::vector<CellResult> run_grid(const GridConfig& config, const GridOptions& opts = {});

struct CsvStyle {
    bool paper_style = false; // rmse, mae x 1e4 and brier x 1e3
    bool timing = false;      // fill wall_ms (makes output run-dependent)
};

// Header: b,pi0,base_model,method,n_cal,n_test,seed,rmse,mae,brier,nls,wall_ms,error
void write_results_csv(std::ostream& out, const std::vector<CellResult>& results,
                       const CsvStyle& style = {});

std::string base_model_label(const BaseModelSpec& spec);

} // namespace recal
