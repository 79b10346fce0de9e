#pragma once

#include <stdexcept>
#include <string>

namespace pseudolin {

/// Base class of all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A coefficient field evaluated to NaN or +-inf: malformed system or domain violation.
struct NonFiniteCoefficient : Error {
    NonFiniteCoefficient(const std::string& label_, double t_, double u_, double v_);
    std::string label;
    double t, u, v;
};

/// Corpus lookup with a name that is not registered.
struct UnknownEntry : Error {
    explicit UnknownEntry(const std::string& name_);
    std::string name;
};

/// Parameter override outside the entry's admissible domain, or an unknown parameter name.
struct InvalidParam : Error {
    InvalidParam(const std::string& name_, double value_, const std::string& why);
    std::string name;
    double value;
};

/// Closed-form bound curve requested for a parameter case it does not cover.
struct UnsupportedParameterCase : Error {
    using Error::Error;
};

/// Dense evaluation outside the trajectory's domain.
struct OutOfRange : Error {
    explicit OutOfRange(double t_);
    double t;
};

/// Cumulative quadrature error estimate exceeded the caller's cap.
struct GridTooCoarse : Error {
    GridTooCoarse(double error_est_, double cap_);
    double error_est, cap;
};

/// Riccati trace initial value disagrees with the trajectory's component ratio.
struct InitMismatch : Error {
    InitMismatch(double init_, double ratio_);
    double init, ratio;
};

/// Comparison-condition gamma outside [y2(t0), eta1(t0)].
struct GammaOutOfRange : Error {
    GammaOutOfRange(double gamma_, double lo_, double hi_);
    double gamma, lo, hi;
};

/// Positivity-and-containment certification requires a homogeneous system.
struct NotHomogeneous : Error {
    using Error::Error;
};

/// Config file or expression text could not be parsed.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace pseudolin
