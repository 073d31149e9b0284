#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "recal/gam.hpp"
#include "recal/isotonic.hpp"
#include "recal/logistic.hpp"

namespace recal {

enum class Method { Analytical, Platt, PlattLogit, Gam, GamLogit, Isotonic };

inline constexpr Method kAllMethods[] = {Method::Platt,    Method::PlattLogit, Method::Gam,
                                         Method::GamLogit, Method::Analytical, Method::Isotonic};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

// True for the methods that feed logit_clamped(gamma_hat) to their fitter.
bool uses_logit_transform(Method m);

inline constexpr double kDefaultClampEpsilon = 1e-6;

// gamma_hat pi0 / (1 - gamma_hat + gamma_hat pi0): undoes the prior shift of
// keeping each negative with probability pi0.
double analytical_calibrate(double gamma_hat, double pi0);

// logit of gamma_hat after clamping it into [eps, 1 - eps].
double logit_clamped(double gamma_hat, double epsilon);

struct AnalyticalParams {
    double pi0 = 1.0;
};

struct CalibratorOptions {
    double clamp_epsilon = kDefaultClampEpsilon;
    LogisticOptions logistic;
    GamOptions gam;
};

// A fitted calibration map gamma_hat -> p_hat. Immutable once built.
class Calibrator {
public:
    using Params = std::variant<AnalyticalParams, LogisticFit, GamFit, IsotonicFit>;

    Calibrator(Method method, Params params, double clamp_epsilon = kDefaultClampEpsilon);

    Method method() const { return method_; }
    const Params& params() const { return params_; }
    double clamp_epsilon() const { return clamp_epsilon_; }

    double calibrate(double gamma_hat) const;
    std::vector<double> calibrate(std::span<const double> gamma_hat) const;

private:
    double transform(double gamma_hat) const;

    Method method_;
    Params params_;
    double clamp_epsilon_;
};

// Analytical stores pi0 and ignores the data; the others fit on (gamma_hat, y).
Calibrator fit_calibrator(Method method, std::span<const double> gamma_hat,
                          std::span<const std::uint8_t> y, double pi0,
                          const CalibratorOptions& opts = {});

inline double calibrate(const Calibrator& cal, double gamma_hat) { return cal.calibrate(gamma_hat); }

// {method, params, clamp_epsilon, version}; reals are written in shortest
// round-trip form so a reloaded calibrator predicts bit-identically.
inline constexpr int kCalibratorFormatVersion = 1;
nlohmann::json to_json(const Calibrator& cal);
Calibrator calibrator_from_json(const nlohmann::json& doc);

} // namespace recal
