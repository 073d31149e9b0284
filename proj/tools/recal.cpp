// recal: calibration experiments after undersampling.
//
//   recal grid <config.json> [--out results.csv] [--workers N] [--paper-style] [--timing]
//   recal calibrate <in.csv> --method <m> [--pi0 x] --out <out.csv> [--model-out cal.json]
//   recal gen --b <x> --n <n> --seed <s> --out <csv>

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "recal/datagen.hpp"
#include "recal/error.hpp"
#include "recal/harness.hpp"
#include "recal/predictions.hpp"

namespace {

int run_grid_cmd(const std::string& config_path, const std::string& out_path, unsigned workers,
                 bool paper_style, bool timing) {
    const recal::GridConfig cfg = recal::load_grid_config(config_path);
    recal::GridOptions opts;
    opts.workers = workers;
    const auto results = recal::run_grid(cfg, opts);

    const recal::CsvStyle style{paper_style, timing};
    if (out_path.empty() || out_path == "-") {
        recal::write_results_csv(std::cout, results, style);
    } else {
        std::ofstream out(out_path);
        if (!out) throw recal::ConfigError("cannot write '" + out_path + "'");
        recal::write_results_csv(out, results, style);
    }
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (!r.ok()) {
            ++failed;
            std::cerr << "cell " << recal::to_string(r.cell.method) << " b=" << r.cell.b
                      << " pi0=" << r.cell.pi0 << " failed: " << r.error << '\n';
        }
    }
    return failed == 0 ? 0 : 1;
}

int run_calibrate_cmd(const std::string& in_path, const std::string& method, std::optional<double> pi0,
                      const std::string& out_path, const std::string& model_out) {
    recal::CalibrateFileOptions opts;
    opts.method = recal::parse_method(method);
    opts.pi0 = pi0;
    const auto result = recal::calibrate_file(in_path, out_path, opts);
    recal::print_report(std::cout, result.report);
    if (!model_out.empty()) {
        std::ofstream out(model_out);
        if (!out) throw recal::ConfigError("cannot write '" + model_out + "'");
        out << recal::to_json(result.calibrator).dump(2) << '\n';
    }
    return 0;
}

int run_gen_cmd(double b, std::size_t n, std::uint64_t seed, const std::string& out_path) {
    recal::DataGenConfig cfg;
    cfg.b = b;
    cfg.n = n;
    cfg.seed = seed;
    const auto data = recal::gen_dataset(cfg);
    if (out_path.empty() || out_path == "-") {
        recal::write_dataset_csv(std::cout, data);
    } else {
        std::ofstream out(out_path);
        if (!out) throw recal::ConfigError("cannot write '" + out_path + "'");
        recal::write_dataset_csv(out, data);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probability calibration after undersampling"};
    app.require_subcommand(1);

    std::string config_path, grid_out;
    unsigned workers = 1;
    bool paper_style = false, timing = false;
    auto* grid = app.add_subcommand("grid", "Run an experiment grid and write one CSV row per cell");
    grid->add_option("config", config_path, "Grid configuration (JSON)")->required()->check(CLI::ExistingFile);
    grid->add_option("--out", grid_out, "Output CSV (default: stdout)");
    grid->add_option("--workers", workers, "Cells run concurrently")->check(CLI::Range(1u, 1024u));
    grid->add_flag("--paper-style", paper_style, "Scale rmse/mae by 1e4 and brier by 1e3");
    grid->add_flag("--timing", timing, "Fill the wall_ms column (output is no longer reproducible)");

    std::string in_path, method, cal_out, model_out;
    std::optional<double> pi0;
    auto* calibrate = app.add_subcommand("calibrate", "Calibrate externally produced predictions");
    calibrate->add_option("input", in_path, "CSV with gamma_hat, y and optional p_true")
        ->required()
        ->check(CLI::ExistingFile);
    calibrate->add_option("--method", method, "analytical|platt|platt_logit|gam|gam_logit|isotonic")
        ->required();
    calibrate->add_option("--pi0", pi0, "Negative retention rate (analytical)");
    calibrate->add_option("--out", cal_out, "Output CSV (input rows plus p_hat)")->required();
    calibrate->add_option("--model-out", model_out, "Write the fitted calibrator as JSON");

    double b = 1.1;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    gen->add_option("--b", b, "Rate-shift parameter")->required();
    gen->add_option("--n", n, "Number of rows")->required();
    gen->add_option("--seed", seed, "Seed")->required();
    gen->add_option("--out", gen_out, "Output CSV (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*grid) return run_grid_cmd(config_path, grid_out, workers, paper_style, timing);
        if (*calibrate) return run_calibrate_cmd(in_path, method, pi0, cal_out, model_out);
        if (*gen) return run_gen_cmd(b, n, seed, gen_out);
    } catch (const recal::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const recal::IngestError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const recal::FitError& e) {
        std::cerr << "fit error: " << e.what() << '\n';
        if (!e.diagnostics().empty()) std::cerr << e.diagnostics();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
