#pragma once

// Parametric baseline hazards and the generic time scale.

#include <span>
#include <variant>
#include <vector>

namespace frailty {

struct ExponentialRate {
    double rate = 1.0;
    bool operator==(const ExponentialRate&) const = default;
};

/// Cumulative hazard (t / scale)^shape.
struct Weibull {
    double shape = 1.0;
    double scale = 1.0;
    bool operator==(const Weibull&) const = default;
};

/// rates[i] applies on [breakpoints[i-1], breakpoints[i]) with implicit
/// breakpoints 0 and +inf at the ends.
struct PiecewiseConstant {
    std::vector<double> breakpoints;
    std::vector<double> rates;
    bool operator==(const PiecewiseConstant&) const = default;
};

using BaselineHazard = std::variant<ExponentialRate, Weibull, PiecewiseConstant>;

void validate(const BaselineHazard& hazard);

/// Integrated hazard over [0, t].
double cumulative(const BaselineHazard& hazard, double t);

/// The t >= 0 with cumulative(hazard, t) == u.
double inverse_cumulative(const BaselineHazard& hazard, double u);

/// Sum over targets of cumulative(hazards[j], t[j]).
double generic_time(std::span<const BaselineHazard> hazards, std::span<const double> t);

}  // namespace frailty
