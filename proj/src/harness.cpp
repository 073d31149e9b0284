#include "recal/harness.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "recal/csv.hpp"
#include "recal/datagen.hpp"
#include "recal/error.hpp"
#include "recal/rng.hpp"
#include "recal/sampler.hpp"

namespace recal {

using nlohmann::json;

namespace {
std::string_view role_name(DataRole role) {
    return role == DataRole::Calibration ? "calibration" : "test";
}
} // namespace

PredictionSet simulate_predictions(const ExperimentCell& cell, DataRole role) {
    validate_pi0(cell.pi0);
    const std::size_t n = role == DataRole::Calibration ? cell.n_calibration : cell.n_test;
    DataGenConfig gen;
    gen.b = cell.b;
    gen.n = n;
    gen.seed = derive_seed(cell.seed, role_name(role));
    SyntheticDataset data = gen_dataset(gen);

    std::vector<double> gamma(n);
    for (std::size_t i = 0; i < n; ++i) gamma[i] = undersampled_posterior(data.p_true[i], cell.pi0);

    BaseModelSpec model = cell.base_model;
    model.seed = derive_seed(cell.seed, stream::noise, cell.base_model.seed);
    const std::uint64_t noise_index = role == DataRole::Calibration ? 0 : 1;

    PredictionSet set;
    set.gamma_hat = apply_base_model(model, gamma, noise_index);
    set.y = std::move(data.y);
    set.p_true = std::move(data.p_true);
    return set;
}

CellResult run_cell(const ExperimentCell& cell, const CalibratorOptions& opts) {
    if (cell.n_calibration == 0 || cell.n_test == 0)
        throw ConfigError("cell sizes must be at least 1");
    const auto start = std::chrono::steady_clock::now();

    std::optional<Calibrator> cal;
    {
        const PredictionSet calib = simulate_predictions(cell, DataRole::Calibration);
        cal.emplace(fit_calibrator(cell.method, calib.gamma_hat, calib.y, cell.pi0, opts));
    }
    // Test data only comes into existence after the calibrator is fixed.
    const PredictionSet test = simulate_predictions(cell, DataRole::Test);
    const std::vector<double> p_hat = cal->calibrate(test.gamma_hat);

    CellResult result;
    result.cell = cell;
    result.metrics = evaluate(p_hat, test.y, *test.p_true);
    result.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---- grid configuration ----------------------------------------------------

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw ConfigError("config " + path + ": " + msg);
}

double get_real(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        schema_error(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
}

template <class Fn>
auto wrap(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind("config ", 0) == 0) throw;
        schema_error(path, what);
    }
}

BaseModelSpec parse_base_model(const json& j, const std::string& path) {
    BaseModelSpec spec;
    if (j.is_string()) {
        spec.kind = wrap(path, [&] { return parse_base_model_kind(j.get<std::string>()); });
        return spec;
    }
    if (!j.is_object()) schema_error(path, "expected a base-model name or object");
    spec.kind = wrap(path, [&] { return parse_base_model_kind(get_string(j.at("kind"), path + ".kind")); });
    if (j.contains("sigma")) spec.sigma = get_real(j["sigma"], path + ".sigma");
    if (j.contains("seed")) spec.seed = get_count(j["seed"], path + ".seed");
    if (!(spec.sigma >= 0.0)) schema_error(path + ".sigma", "must be non-negative");
    return spec;
}

struct Setting {
    double b;
    double pi0;
};

Setting parse_setting(const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto& p = wrap(path, [&]() -> const Preset& { return find_preset(j.get<std::string>()); });
        return {p.b, p.pi0};
    }
    if (!j.is_object()) schema_error(path, "expected a preset name or {b, pi0}");
    if (j.contains("preset")) return parse_setting(j["preset"], path + ".preset");
    if (!j.contains("b") || !j.contains("pi0")) schema_error(path, "requires 'b' and 'pi0'");
    return {get_real(j["b"], path + ".b"), get_real(j["pi0"], path + ".pi0")};
}

void validate_cell(const ExperimentCell& c, const std::string& path) {
    if (!(c.b > 0.0)) schema_error(path + ".b", "must be positive");
    if (!(c.pi0 > 0.0 && c.pi0 <= 1.0)) schema_error(path + ".pi0", "must lie in (0, 1]");
    if (c.n_calibration == 0) schema_error(path + ".n_cal", "must be at least 1");
    if (c.n_test == 0) schema_error(path + ".n_test", "must be at least 1");
}

template <class T, class Fn>
std::vector<T> parse_list(const json& j, const std::string& path, Fn&& one) {
    std::vector<T> out;
    if (!j.is_array()) {
        out.push_back(one(j, path));
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(one(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

ExperimentCell parse_cell(const json& j, const std::string& path, const ExperimentCell& defaults) {
    if (!j.is_object()) schema_error(path, "expected an object");
    ExperimentCell c = defaults;
    if (j.contains("preset") || j.contains("setting")) {
        const Setting s = parse_setting(j.contains("preset") ? j["preset"] : j["setting"], path + ".preset");
        c.b = s.b;
        c.pi0 = s.pi0;
    }
    if (j.contains("b")) c.b = get_real(j["b"], path + ".b");
    if (j.contains("pi0")) c.pi0 = get_real(j["pi0"], path + ".pi0");
    if (j.contains("base_model")) c.base_model = parse_base_model(j["base_model"], path + ".base_model");
    if (!j.contains("method")) schema_error(path, "requires 'method'");
    c.method = wrap(path + ".method", [&] { return parse_method(get_string(j["method"], path + ".method")); });
    if (j.contains("n_cal")) c.n_calibration = get_count(j["n_cal"], path + ".n_cal");
    if (j.contains("n_test")) c.n_test = get_count(j["n_test"], path + ".n_test");
    if (j.contains("seed")) c.seed = get_count(j["seed"], path + ".seed");
    validate_cell(c, path);
    return c;
}

void expand_grid(const json& g, const ExperimentCell& defaults, std::vector<ExperimentCell>& out) {
    const std::string path = "grid";
    if (!g.is_object()) schema_error(path, "expected an object");

    std::vector<Setting> settings;
    if (g.contains("settings")) {
        settings = parse_list<Setting>(g["settings"], path + ".settings", parse_setting);
    } else {
        settings.push_back({defaults.b, defaults.pi0});
    }

    std::vector<BaseModelSpec> models{defaults.base_model};
    if (g.contains("base_models"))
        models = parse_list<BaseModelSpec>(g["base_models"], path + ".base_models", parse_base_model);

    std::vector<Method> methods(std::begin(kAllMethods), std::end(kAllMethods));
    if (g.contains("methods"))
        methods = parse_list<Method>(g["methods"], path + ".methods", [](const json& j, const std::string& p) {
            return wrap(p, [&] { return parse_method(get_string(j, p)); });
        });

    std::vector<std::uint64_t> sizes{defaults.n_calibration};
    if (g.contains("n_cal")) sizes = parse_list<std::uint64_t>(g["n_cal"], path + ".n_cal", get_count);

    std::size_t n_test = defaults.n_test;
    if (g.contains("n_test")) n_test = get_count(g["n_test"], path + ".n_test");

    std::vector<std::uint64_t> seeds{defaults.seed};
    if (g.contains("seeds")) seeds = parse_list<std::uint64_t>(g["seeds"], path + ".seeds", get_count);

    // Table layout: base model, then calibration size, then setting, then method.
    for (const auto& model : models)
        for (auto n_cal : sizes)
            for (const auto& s : settings)
                for (Method m : methods)
                    for (auto seed : seeds) {
                        ExperimentCell c;
                        c.b = s.b;
                        c.pi0 = s.pi0;
                        c.base_model = model;
                        c.method = m;
                        c.n_calibration = n_cal;
                        c.n_test = n_test;
                        c.seed = seed;
                        validate_cell(c, path);
                        out.push_back(c);
                    }
}

void parse_options(const json& j, CalibratorOptions& opts) {
    if (!j.is_object()) schema_error("options", "expected an object");
    for (const auto& [key, value] : j.items()) {
        const std::string path = "options." + key;
        if (key == "clamp_epsilon") {
            opts.clamp_epsilon = get_real(value, path);
            if (!(opts.clamp_epsilon > 0.0 && opts.clamp_epsilon < 0.01))
                schema_error(path, "must lie in (0, 0.01)");
        } else if (key == "gam_criterion") {
            const std::string v = get_string(value, path);
            if (v == "gcv") opts.gam.criterion = SmoothingCriterion::Gcv;
            else if (v == "ubre") opts.gam.criterion = SmoothingCriterion::Ubre;
            else schema_error(path, "expected 'gcv' or 'ubre'");
        } else if (key == "gam_knots") {
            const std::string v = get_string(value, path);
            if (v == "quantile") opts.gam.knots = KnotPlacement::Quantile;
            else if (v == "uniform") opts.gam.knots = KnotPlacement::Uniform;
            else schema_error(path, "expected 'quantile' or 'uniform'");
        } else if (key == "gam_interior_knots") {
            opts.gam.interior_knots = get_count(value, path);
        } else {
            schema_error(path, "unknown option");
        }
    }
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

GridConfig parse_grid_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("config line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + e.what());
    }
    if (!doc.is_object()) schema_error("(root)", "expected an object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "version" && key != "defaults" && key != "cells" && key != "grid" && key != "options")
            schema_error(key, "unknown key");
    }
    if (doc.contains("version") && get_count(doc["version"], "version") != 1)
        schema_error("version", "unsupported version");

    ExperimentCell defaults;
    if (doc.contains("defaults")) {
        const json& d = doc["defaults"];
        if (!d.is_object()) schema_error("defaults", "expected an object");
        json tmp = d;
        if (!tmp.contains("method")) tmp["method"] = std::string(to_string(defaults.method));
        defaults = parse_cell(tmp, "defaults", defaults);
    }

    GridConfig cfg;
    if (doc.contains("options")) parse_options(doc["options"], cfg.calibrator);
    if (doc.contains("cells")) {
        const json& cells = doc["cells"];
        if (!cells.is_array()) schema_error("cells", "expected an array");
        for (std::size_t i = 0; i < cells.size(); ++i)
            cfg.cells.push_back(parse_cell(cells[i], "cells[" + std::to_string(i) + "]", defaults));
    }
    if (doc.contains("grid")) expand_grid(doc["grid"], defaults, cfg.cells);
    return cfg;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_grid_config(ss.str());
}

std::vector<CellResult> run_grid(const GridConfig& config, const GridOptions& opts) {
    std::vector<CellResult> results(config.cells.size());
    detail::parallel_for(config.cells.size(), opts.workers, [&](std::size_t k) {
        const ExperimentCell& cell = config.cells[k];
        try {
            results[k] = run_cell(cell, config.calibrator);
        } catch (const std::exception& e) {
            results[k].cell = cell;
            results[k].error = e.what();
        }
    });
    return results;
}

std::string base_model_label(const BaseModelSpec& spec) {
    std::string label(to_string(spec.kind));
    if (spec.kind == BaseModelKind::NoisyLogOdds && spec.sigma != 0.2)
        label += ":sigma=" + csv::format_real(spec.sigma);
    return label;
}

namespace {
std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = c == ',' ? ';' : ' ';
    return s;
}
} // namespace

void write_results_csv(std::ostream& out, const std::vector<CellResult>& results, const CsvStyle& style) {
    out << "b,pi0,base_model,method,n_cal,n_test,seed,rmse,mae,brier,nls,wall_ms,error\n";
    const double err_scale = style.paper_style ? 1e4 : 1.0;
    const double brier_scale = style.paper_style ? 1e3 : 1.0;
    for (const auto& r : results) {
        const auto& c = r.cell;
        out << csv::format_real(c.b) << ',' << csv::format_real(c.pi0) << ','
            << base_model_label(c.base_model) << ',' << to_string(c.method) << ',' << c.n_calibration
            << ',' << c.n_test << ',' << c.seed << ',';
        if (r.metrics) {
            const auto& m = *r.metrics;
            if (m.rmse) out << csv::format_real(*m.rmse * err_scale);
            out << ',';
            if (m.mae) out << csv::format_real(*m.mae * err_scale);
            out << ',' << csv::format_real(m.brier * brier_scale) << ',' << csv::format_real(m.nls);
        } else {
            out << ",,,";
        }
        out << ',';
        if (style.timing) out << csv::format_real(r.wall_ms);
        out << ',' << sanitize(r.error) << '\n';
    }
}

} // namespace recal
