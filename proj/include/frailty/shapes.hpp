#pragma once

// Relative frailty variance (RFV) and cross-ratio function (CRF = 1 + RFV)
// as functions of the generic time Lambda.

#include <string_view>
#include <vector>

#include "frailty/family.hpp"

namespace frailty {

enum class TailBehavior { IncreasingToInfinity, DecreasingToZero, Constant, Bounded };
enum class StationaryKind { Min, Max, Saddle };

std::string_view to_string(TailBehavior tail) noexcept;
std::string_view to_string(StationaryKind kind) noexcept;

struct StationaryPoint {
    double lambda = 0.0;
    StationaryKind kind = StationaryKind::Min;
};

struct ShapeCurve {
    FrailtyFamily family;
    std::vector<double> grid;
    std::vector<double> rfv;
    std::vector<double> crf;
    /// Set where the transform left the double range; rfv is +inf there.
    std::vector<bool> overflow;
    std::vector<StationaryPoint> stationary_points;
    TailBehavior tail = TailBehavior::Constant;
};

/// L'' L / L'^2 - 1 with the difference of products taken in one rounding.
/// NumericalOverflow when L'^2 is zero or not finite.
double rfv_from_triple(const LaplaceTriple& t);

/// L''(L) L(L) / L'(L)^2 - 1 from the Laplace triple.
double rfv_at(const FrailtyFamily& family, double lambda);

/// 1 + rfv_at.
double crf_at(const FrailtyFamily& family, double lambda);

/// Closed-form RFV for each family, evaluated without the Laplace transform.
double rfv_closed_at(const FrailtyFamily& family, double lambda);

/// dRFV/dLambda, analytic for every family.
double rfv_derivative(const FrailtyFamily& family, double lambda);

/// Second derivative used to classify stationary points.
double rfv_second_derivative(const FrailtyFamily& family, double lambda);

/// Roots of RFV' in [0, lambda_max], sorted, each classified by curvature.
std::vector<StationaryPoint> stationary_points(const FrailtyFamily& family, double lambda_max);

/// Long-run behaviour implied by the smallest support point.
TailBehavior classify_tail(const FrailtyFamily& family);

ShapeCurve curve(const FrailtyFamily& family, const std::vector<double>& grid);

/// Analytic location of the single stationary point of a shifted model,
/// i.e. c* (may be <= 0 or -inf when no interior stationary point exists).
double shifted_stationary_point(const Shifted& family);

namespace zmp {

/// b = (phi - 1) / (1 - phi exp(-eta)).
double b(const ZeroModifiedPoisson& family);

/// r(Lambda) = x^2 exp(1/x) / ((1 + x)^2 - x) with x = RFV_P(Lambda) = e^Lambda / eta.
double r(double eta, double lambda);

/// RFV'' at a stationary point: (x - 1) / ((1 + x)^2 - x).
double curvature_at_stationary(double eta, double lambda);

}  // namespace zmp

}  // namespace frailty
