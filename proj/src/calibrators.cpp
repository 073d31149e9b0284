#include "recal/calibrators.hpp"

#include <algorithm>
#include <cmath>

#include "recal/error.hpp"
#include "recal/mathfn.hpp"
#include "recal/spline.hpp"

namespace recal {

using nlohmann::json;

std::string_view to_string(Method m) {
    switch (m) {
    case Method::Analytical: return "analytical";
    case Method::Platt: return "platt";
    case Method::PlattLogit: return "platt_logit";
    case Method::Gam: return "gam";
    case Method::GamLogit: return "gam_logit";
    case Method::Isotonic: return "isotonic";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (name == to_string(m)) return m;
    throw ConfigError("unknown calibration method '" + std::string(name) + "'");
}

bool uses_logit_transform(Method m) { return m == Method::PlattLogit || m == Method::GamLogit; }

double analytical_calibrate(double gamma_hat, double pi0) {
    if (!(pi0 > 0.0 && pi0 <= 1.0)) throw DomainError("analytical_calibrate: pi0 must lie in (0, 1]");
    if (!(gamma_hat >= 0.0 && gamma_hat <= 1.0))
        throw DomainError("analytical_calibrate: gamma_hat must lie in [0, 1]");
    return gamma_hat * pi0 / (1.0 - gamma_hat + gamma_hat * pi0);
}

double logit_clamped(double gamma_hat, double epsilon) {
    const double g = std::clamp(gamma_hat, epsilon, 1.0 - epsilon);
    return std::log(g / (1.0 - g));
}

namespace {

bool params_match(Method m, const Calibrator::Params& p) {
    switch (m) {
    case Method::Analytical: return std::holds_alternative<AnalyticalParams>(p);
    case Method::Platt:
    case Method::PlattLogit: return std::holds_alternative<LogisticFit>(p);
    case Method::Gam:
    case Method::GamLogit: return std::holds_alternative<GamFit>(p);
    case Method::Isotonic: return std::holds_alternative<IsotonicFit>(p);
    }
    return false;
}

void validate_params(const Calibrator::Params& p) {
    if (const auto* a = std::get_if<AnalyticalParams>(&p)) {
        if (!(a->pi0 > 0.0 && a->pi0 <= 1.0)) throw DomainError("calibrator: pi0 must lie in (0, 1]");
    } else if (const auto* l = std::get_if<LogisticFit>(&p)) {
        if (!std::isfinite(l->beta0) || !std::isfinite(l->beta1))
            throw ConfigError("calibrator: logistic coefficients must be finite");
    } else if (const auto* g = std::get_if<GamFit>(&p)) {
        if (g->spline_coefficients.size() != g->knots.size() + 2)
            throw ConfigError("calibrator: GAM coefficient count must be knot count + 2");
        CubicBSpline check(g->knots);
    } else if (const auto* iso = std::get_if<IsotonicFit>(&p)) {
        if (iso->values.empty() || iso->values.size() != iso->breakpoints.size())
            throw ConfigError("calibrator: isotonic breakpoints and values must be non-empty and aligned");
    }
}

} // namespace

Calibrator::Calibrator(Method method, Params params, double clamp_epsilon)
    : method_(method), params_(std::move(params)), clamp_epsilon_(clamp_epsilon) {
    if (!(clamp_epsilon_ > 0.0 && clamp_epsilon_ < 0.01))
        throw ConfigError("calibrator: clamp_epsilon must lie in (0, 0.01)");
    if (!params_match(method_, params_))
        throw ConfigError("calibrator: parameters do not match method " + std::string(to_string(method_)));
    validate_params(params_);
}

double Calibrator::transform(double gamma_hat) const {
    return uses_logit_transform(method_) ? logit_clamped(gamma_hat, clamp_epsilon_) : gamma_hat;
}

double Calibrator::calibrate(double gamma_hat) const {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AnalyticalParams>) {
                return analytical_calibrate(gamma_hat, p.pi0);
            } else if constexpr (std::is_same_v<T, LogisticFit>) {
                return p.predict(transform(gamma_hat));
            } else if constexpr (std::is_same_v<T, GamFit>) {
                return p.predict(transform(gamma_hat));
            } else {
                return pav_predict(p, gamma_hat);
            }
        },
        params_);
}

std::vector<double> Calibrator::calibrate(std::span<const double> gamma_hat) const {
    std::vector<double> out(gamma_hat.size());
    if (const auto* g = std::get_if<GamFit>(&params_)) {
        // Build the basis once for the whole batch.
        const CubicBSpline basis(g->knots);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = logistic(basis.value(g->spline_coefficients, transform(gamma_hat[i])));
        return out;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = calibrate(gamma_hat[i]);
    return out;
}

Calibrator fit_calibrator(Method method, std::span<const double> gamma_hat,
                          std::span<const std::uint8_t> y, double pi0, const CalibratorOptions& opts) {
    if (method == Method::Analytical) {
        if (!(pi0 > 0.0 && pi0 <= 1.0)) throw DomainError("analytical calibration: pi0 must lie in (0, 1]");
        return Calibrator(method, AnalyticalParams{pi0}, opts.clamp_epsilon);
    }
    for (double g : gamma_hat)
        if (!(g >= 0.0 && g <= 1.0)) throw DomainError("fit_calibrator: gamma_hat must lie in [0, 1]");

    std::vector<double> z(gamma_hat.begin(), gamma_hat.end());
    if (uses_logit_transform(method))
        for (double& v : z) v = logit_clamped(v, opts.clamp_epsilon);

    switch (method) {
    case Method::Platt:
    case Method::PlattLogit:
        return Calibrator(method, fit_logistic_irls(z, y, opts.logistic), opts.clamp_epsilon);
    case Method::Gam:
    case Method::GamLogit:
        return Calibrator(method, fit_penalized_gam(z, y, opts.gam), opts.clamp_epsilon);
    case Method::Isotonic:
        return Calibrator(method, fit_pav(z, y), opts.clamp_epsilon);
    case Method::Analytical:
        break;
    }
    throw ConfigError("fit_calibrator: unsupported method");
}

json to_json(const Calibrator& cal) {
    json params = std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AnalyticalParams>) {
                return {{"pi0", p.pi0}};
            } else if constexpr (std::is_same_v<T, LogisticFit>) {
                return {{"beta0", p.beta0},
                        {"beta1", p.beta1},
                        {"converged", p.converged},
                        {"iterations", p.iterations},
                        {"final_deviance", p.final_deviance}};
            } else if constexpr (std::is_same_v<T, GamFit>) {
                return {{"knots", p.knots},
                        {"spline_coefficients", p.spline_coefficients},
                        {"lambda", p.lambda},
                        {"basis_order", p.basis_order},
                        {"converged", p.converged},
                        {"iterations", p.iterations},
                        {"deviance", p.deviance},
                        {"edf", p.edf},
                        {"score", p.score}};
            } else {
                return {{"breakpoints", p.breakpoints}, {"values", p.values}};
            }
        },
        cal.params());
    return {{"method", std::string(to_string(cal.method()))},
            {"params", std::move(params)},
            {"clamp_epsilon", cal.clamp_epsilon()},
            {"version", kCalibratorFormatVersion}};
}

Calibrator calibrator_from_json(const json& doc) {
    try {
        const int version = doc.at("version").get<int>();
        if (version != kCalibratorFormatVersion)
            throw ConfigError("calibrator document: unsupported version " + std::to_string(version));
        const Method method = parse_method(doc.at("method").get<std::string>());
        const double eps = doc.at("clamp_epsilon").get<double>();
        const json& p = doc.at("params");
        switch (method) {
        case Method::Analytical:
            return Calibrator(method, AnalyticalParams{p.at("pi0").get<double>()}, eps);
        case Method::Platt:
        case Method::PlattLogit: {
            LogisticFit f;
            f.beta0 = p.at("beta0").get<double>();
            f.beta1 = p.at("beta1").get<double>();
            f.converged = p.value("converged", true);
            f.iterations = p.value("iterations", 0);
            f.final_deviance = p.value("final_deviance", 0.0);
            return Calibrator(method, std::move(f), eps);
        }
        case Method::Gam:
        case Method::GamLogit: {
            GamFit f;
            f.knots = p.at("knots").get<std::vector<double>>();
            f.spline_coefficients = p.at("spline_coefficients").get<std::vector<double>>();
            f.lambda = p.at("lambda").get<double>();
            f.basis_order = p.value("basis_order", 4);
            if (f.basis_order != 4) throw ConfigError("calibrator document: only cubic splines are supported");
            f.converged = p.value("converged", true);
            f.iterations = p.value("iterations", 0);
            f.deviance = p.value("deviance", 0.0);
            f.edf = p.value("edf", 0.0);
            f.score = p.value("score", 0.0);
            return Calibrator(method, std::move(f), eps);
        }
        case Method::Isotonic: {
            IsotonicFit f;
            f.breakpoints = p.at("breakpoints").get<std::vector<double>>();
            f.values = p.at("values").get<std::vector<double>>();
            return Calibrator(method, std::move(f), eps);
        }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("calibrator document: ") + e.what());
    }
    throw ConfigError("calibrator document: unsupported method");
}

} // namespace recal
