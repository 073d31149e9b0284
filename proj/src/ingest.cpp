#include "recal/predictions.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "recal/csv.hpp"
#include "recal/error.hpp"

namespace recal {

namespace {

struct Columns {
    std::size_t gamma_hat = SIZE_MAX;
    std::size_t y = SIZE_MAX;
    std::size_t p_true = SIZE_MAX;
    std::size_t count = 0;
};

Columns parse_header(std::string_view header) {
    Columns c;
    const auto fields = csv::split(header);
    c.count = fields.size();
    for (std::size_t j = 0; j < fields.size(); ++j) {
        std::string_view f = fields[j];
        while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
        while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
        if (f == "gamma_hat") c.gamma_hat = j;
        else if (f == "y") c.y = j;
        else if (f == "p_true") c.p_true = j;
    }
    if (c.gamma_hat == SIZE_MAX) throw IngestError("missing column 'gamma_hat' in header", 1);
    if (c.y == SIZE_MAX) throw IngestError("missing column 'y' in header", 1);
    return c;
}

// Reads all lines, keeping the raw text so calibrate_file can echo it.
PredictionSet ingest_lines(std::istream& in, std::vector<std::string>* raw) {
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty file: header expected", 1);
    if (raw) raw->push_back(std::string(csv::chomp(line)));
    const Columns cols = parse_header(csv::chomp(line));

    PredictionSet set;
    if (cols.p_true != SIZE_MAX) set.p_true.emplace();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = csv::chomp(line);
        if (text.empty()) continue;
        const auto fields = csv::split(text);
        auto fail = [&](const std::string& msg) -> IngestError {
            return IngestError("row " + std::to_string(lineno) + ": " + msg, lineno);
        };
        if (fields.size() != cols.count)
            throw fail("expected " + std::to_string(cols.count) + " fields, found " +
                       std::to_string(fields.size()));

        const auto g = csv::parse_real(fields[cols.gamma_hat]);
        if (!g) throw fail("gamma_hat is not a number");
        if (!(*g >= 0.0 && *g <= 1.0)) throw fail("gamma_hat outside [0, 1]");

        const auto yv = csv::parse_real(fields[cols.y]);
        if (!yv || !(*yv == 0.0 || *yv == 1.0)) throw fail("y must be 0 or 1");

        if (set.p_true) {
            const auto p = csv::parse_real(fields[cols.p_true]);
            if (!p) throw fail("p_true is not a number");
            if (!(*p >= 0.0 && *p <= 1.0)) throw fail("p_true outside [0, 1]");
            set.p_true->push_back(*p);
        }
        set.gamma_hat.push_back(*g);
        set.y.push_back(*yv == 1.0 ? 1 : 0);
        if (raw) raw->push_back(std::string(text));
    }
    if (set.size() == 0) throw IngestError("no data rows", lineno);
    return set;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path.string() + "'", 0);
    return in;
}

} // namespace

PredictionSet ingest_predictions(std::istream& in) { return ingest_lines(in, nullptr); }

PredictionSet ingest_predictions(const std::filesystem::path& csv_path) {
    auto in = open_input(csv_path);
    return ingest_lines(in, nullptr);
}

CalibrateFileResult calibrate_file(const std::filesystem::path& input_csv,
                                   const std::filesystem::path& output_csv,
                                   const CalibrateFileOptions& opts) {
    std::vector<std::string> raw;
    PredictionSet set;
    {
        auto in = open_input(input_csv);
        set = ingest_lines(in, &raw);
    }
    if (opts.method == Method::Analytical && !opts.pi0)
        throw ConfigError("analytical calibration requires pi0");

    Calibrator cal = fit_calibrator(opts.method, set.gamma_hat, set.y, opts.pi0.value_or(1.0),
                                    opts.calibrator);
    const std::vector<double> p_hat = cal.calibrate(set.gamma_hat);
    MetricsReport report =
        evaluate(p_hat, set.y, set.p_true ? std::span<const double>(*set.p_true) : std::span<const double>{});

    std::ofstream out(output_csv);
    if (!out) throw ConfigError("cannot write '" + output_csv.string() + "'");
    out << raw.front() << ",p_hat\n";
    for (std::size_t i = 0; i < p_hat.size(); ++i)
        out << raw[i + 1] << ',' << csv::format_real(p_hat[i]) << '\n';
    if (!out) throw ConfigError("write failed for '" + output_csv.string() + "'");

    return {std::move(cal), report};
}

void print_report(std::ostream& out, const MetricsReport& r) {
    out << "n      " << r.n << '\n';
    if (r.rmse) out << "rmse   " << csv::format_real(*r.rmse) << '\n';
    if (r.mae) out << "mae    " << csv::format_real(*r.mae) << '\n';
    out << "brier  " << csv::format_real(r.brier) << '\n';
    out << "nls    " << csv::format_real(r.nls) << '\n';
}

} // namespace recal
