#include "frailty/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "frailty/error.hpp"

namespace frailty {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::size_t kScanIntervals = 4096;
constexpr double kRootTolerance = 1e-10;
constexpr double kSaddleCurvature = 1e-8;

// a*b - c*d with one rounding (Kahan).
double diff_of_products(double a, double b, double c, double d) {
    const double cd = c * d;
    const double err = std::fma(-c, d, cd);
    const double dop = std::fma(a, b, -cd);
    return dop + err;
}

void require_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        std::ostringstream os;
        os << "generic time must be finite and >= 0, got " << lambda;
        fail(ErrorKind::ParameterOutOfRange, os.str());
    }
}

double checked(double value, const FrailtyFamily& family, double lambda) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << family_name(family) << ": RFV not representable at Lambda = " << lambda;
        fail(ErrorKind::NumericalOverflow, os.str());
    }
    return value;
}

// 1 - exp(-y) * poly(y) for poly = 1 + y (degree 1) or 1 + y + y^2 (degree 2),
// accurate for small y where both terms are close to one.
double one_minus_exp_poly(double y, int degree) {
    if (y > 0.5) {
        const double poly = degree == 1 ? 1.0 + y : 1.0 + y + y * y;
        return 1.0 - std::exp(-y) * poly;
    }
    // Coefficient of y^k in exp(-y) * poly is (-1)^k (k - 1) / k! or (-1)^k (k - 1)^2 / k!.
    double term = y;  // y^k / k! at k = 1
    double sum = 0.0;
    for (int k = 2; k < 40; ++k) {
        term *= y / k;
        const double weight = degree == 1 ? (k - 1) : double(k - 1) * (k - 1);
        const double t = (k % 2 == 0 ? -1.0 : 1.0) * weight * term;
        sum += t;
        if (std::abs(t) < 1e-18 * std::abs(sum)) break;
    }
    return degree == 1 ? -sum : sum;
}

double zmp_one_plus_b(const ZeroModifiedPoisson& z) {
    return z.phi * -std::expm1(-z.eta) / (1.0 - z.phi * std::exp(-z.eta));
}

// Shifted-family closed forms share a scaled c(Lambda): everything is divided
// through by exp(Lambda) so that large Lambda cannot overflow.
struct ShiftedParts {
    double numerator;  // RFV * c~^2
    double c;          // scaled c(Lambda)
    double slope;      // d log RFV / d Lambda
};

ShiftedParts shifted_parts(const Shifted& s, double lambda) {
    const double em = std::exp(-lambda);
    const double p = s.p;
    return std::visit(overloaded{
                          [&](const NegBin& nb) {
                              const double q = 1.0 - nb.pi;
                              const double num = nb.nu * q * em;
                              const double c = num + p * (1.0 - q * em);
                              return ShiftedParts{num, c, 1.0 - 2.0 * p / c};
                          },
                          [&](const Binomial& b) {
                              const double q = 1.0 - b.pi;
                              const double c = b.pi * em * (p + b.n) + p * q;
                              return ShiftedParts{q * b.pi * b.n * em, c,
                                                  -1.0 + 2.0 * b.pi * em * (b.n + p) / c};
                          },
                          [&](const Poisson& ps) {
                              const double c = ps.eta * em + p;
                              return ShiftedParts{ps.eta * em, c, -1.0 + 2.0 * ps.eta * em / c};
                          },
                      },
                      s.inner);
}

struct KPointSums {
    double num = 0.0;        // sum over pairs of (z_m - z_m')^2 w_m w_m'
    double first = 0.0;      // sum z w
    double num_slope = 0.0;  // d num / d lambda
    double first_slope = 0.0;
};

// Weights are recentred on z_(1), so dw_m / dLambda = -(z_m - z_(1)) w_m.
KPointSums kpoint_sums(const KPoint& k, double lambda) {
    const std::size_t n = k.support.size();
    const double z1 = k.support.front();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = k.probs[i] * std::exp(-(k.support[i] - z1) * lambda);
    KPointSums s;
    for (std::size_t m = 0; m < n; ++m) {
        const double zm = k.support[m];
        s.first += zm * w[m];
        s.first_slope -= zm * (zm - z1) * w[m];
        for (std::size_t mp = 0; mp < m; ++mp) {
            const double d = zm - k.support[mp];
            const double term = d * d * w[m] * w[mp];
            s.num += term;
            s.num_slope -= term * (zm + k.support[mp] - 2.0 * z1);
        }
    }
    return s;
}

// Double-sum form with the "-1" folded in, free of cancellation.
double kpoint_rfv_closed(const KPoint& k, double lambda) {
    const KPointSums s = kpoint_sums(k, lambda);
    return s.num / (s.first * s.first);
}

double kpoint_rfv_derivative(const KPoint& k, double lambda) {
    const KPointSums s = kpoint_sums(k, lambda);
    const double f2 = s.first * s.first;
    return (s.num_slope - 2.0 * s.num * s.first_slope / s.first) / f2;
}

double central_difference(const FrailtyFamily& family, double lambda, double h,
                          double (*f)(const FrailtyFamily&, double)) {
    if (lambda >= h) return (f(family, lambda + h) - f(family, lambda - h)) / (2.0 * h);
    // One-sided second-order stencil at the boundary.
    return (-3.0 * f(family, lambda) + 4.0 * f(family, lambda + h) - f(family, lambda + 2.0 * h)) /
           (2.0 * h);
}

bool constant_rfv(const FrailtyFamily& family) {
    if (std::holds_alternative<GammaFrailty>(family)) return true;
    if (const auto* a = std::get_if<Addams>(&family)) return a->alpha == 0.0;
    return false;
}

double bisect_root(const FrailtyFamily& family, double lo, double hi, double f_lo) {
    for (int it = 0; it < 200 && hi - lo > kRootTolerance * 0.1; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = rfv_derivative(family, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if (hi - lo > kRootTolerance) fail(ErrorKind::RootSolverFailed, "bisection did not converge");
    return 0.5 * (lo + hi);
}

// Golden-section minimisation of |RFV'| on [lo, hi].
double minimise_abs_derivative(const FrailtyFamily& family, double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = std::abs(rfv_derivative(family, c)), fd = std::abs(rfv_derivative(family, d));
    while (b - a > kRootTolerance * 0.1) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = std::abs(rfv_derivative(family, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = std::abs(rfv_derivative(family, d));
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(TailBehavior tail) noexcept {
    switch (tail) {
        case TailBehavior::IncreasingToInfinity: return "IncreasingToInfinity";
        case TailBehavior::DecreasingToZero: return "DecreasingToZero";
        case TailBehavior::Constant: return "Constant";
        case TailBehavior::Bounded: return "Bounded";
    }
    return "Unknown";
}

std::string_view to_string(StationaryKind kind) noexcept {
    switch (kind) {
        case StationaryKind::Min: return "min";
        case StationaryKind::Max: return "max";
        case StationaryKind::Saddle: return "saddle";
    }
    return "unknown";
}

double rfv_from_triple(const LaplaceTriple& t) {
    const double l1sq = t.l1 * t.l1;
    if (!(l1sq > 0.0) || !std::isfinite(l1sq))
        fail(ErrorKind::NumericalOverflow, "L'^2 is not representable");
    const double value = diff_of_products(t.l2, t.l0, t.l1, t.l1) / l1sq;
    if (!std::isfinite(value)) fail(ErrorKind::NumericalOverflow, "RFV is not representable");
    return value;
}

double rfv_at(const FrailtyFamily& family, double lambda) {
    require_lambda(lambda);
    try {
        return rfv_from_triple(laplace(family, lambda));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericalOverflow) throw;
        std::ostringstream os;
        os << family_name(family) << " at Lambda = " << lambda << ": " << e.what();
        fail(ErrorKind::NumericalOverflow, os.str());
    }
}

double crf_at(const FrailtyFamily& family, double lambda) { return 1.0 + rfv_at(family, lambda); }

double rfv_closed_at(const FrailtyFamily& family, double lambda) {
    require_lambda(lambda);
    const double value = std::visit(
        overloaded{
            [&](const NegBin& nb) { return std::exp(lambda) / ((1.0 - nb.pi) * nb.nu); },
            [&](const NegBinPositive& nb) { return (1.0 - nb.pi) * std::exp(-lambda) / nb.nu; },
            [&](const Binomial& b) { return (1.0 - b.pi) * std::exp(lambda) / (b.n * b.pi); },
            [&](const Poisson& p) { return std::exp(lambda) / p.eta; },
            [&](const Shifted& s) {
                const auto parts = shifted_parts(s, lambda);
                return parts.numerator / (parts.c * parts.c);
            },
            [&](const ZeroModifiedPoisson& z) {
                // x [(1 + b) - b (1 - e^{-1/x} (1 + 1/x))] with x = RFV_P.
                const double x = std::exp(lambda) / z.eta;
                return x * (zmp_one_plus_b(z) - zmp::b(z) * one_minus_exp_poly(1.0 / x, 1));
            },
            [&](const Addams& a) { return a.gamma * std::exp(a.alpha * lambda); },
            [&](const KPoint& k) { return kpoint_rfv_closed(k, lambda); },
            [&](const GammaFrailty& g) { return g.variance / (g.mean * g.mean); },
        },
        family);
    return checked(value, family, lambda);
}

double rfv_derivative(const FrailtyFamily& family, double lambda) {
    require_lambda(lambda);
    return std::visit(
        overloaded{
            [&](const NegBin&) { return rfv_closed_at(family, lambda); },
            [&](const NegBinPositive&) { return -rfv_closed_at(family, lambda); },
            [&](const Binomial&) { return rfv_closed_at(family, lambda); },
            [&](const Poisson&) { return rfv_closed_at(family, lambda); },
            [&](const Shifted& s) {
                const auto parts = shifted_parts(s, lambda);
                return parts.numerator / (parts.c * parts.c) * parts.slope;
            },
            [&](const ZeroModifiedPoisson& z) {
                // RFV_P (1 + b / r) with 1 / r = 1 - k(1/x), so that the
                // cancellation in 1 + b / r for b near -1 happens analytically.
                const double x = std::exp(lambda) / z.eta;
                return x * (zmp_one_plus_b(z) - zmp::b(z) * one_minus_exp_poly(1.0 / x, 2));
            },
            [&](const Addams& a) { return a.alpha * a.gamma * std::exp(a.alpha * lambda); },
            [&](const KPoint& k) { return kpoint_rfv_derivative(k, lambda); },
            [&](const GammaFrailty&) { return 0.0; },
        },
        family);
}

double rfv_second_derivative(const FrailtyFamily& family, double lambda) {
    const double h = std::max(1e-5, 1e-5 * lambda);
    return central_difference(family, lambda, h, &rfv_derivative);
}

std::vector<StationaryPoint> stationary_points(const FrailtyFamily& family, double lambda_max) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
        fail(ErrorKind::ParameterOutOfRange, "stationary_points: lambda_max must be > 0");
    validate(family);
    std::vector<StationaryPoint> out;
    if (constant_rfv(family)) return out;

    const auto* zmp_family = std::get_if<ZeroModifiedPoisson>(&family);
    auto classify = [&](double root, bool rising) {
        const double curvature = zmp_family ? zmp::curvature_at_stationary(zmp_family->eta, root)
                                            : rfv_second_derivative(family, root);
        if (std::abs(curvature) < kSaddleCurvature) return StationaryKind::Saddle;
        return rising ? StationaryKind::Min : StationaryKind::Max;
    };

    const double step = lambda_max / kScanIntervals;
    std::vector<double> grid;
    std::vector<double> slope;
    grid.reserve(kScanIntervals + 1);
    slope.reserve(kScanIntervals + 1);
    for (std::size_t i = 0; i <= kScanIntervals; ++i) {
        const double x = i == kScanIntervals ? lambda_max : step * static_cast<double>(i);
        double d = 0.0;
        try {
            d = rfv_derivative(family, x);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NumericalOverflow) throw;
            break;  // scan stops where the transform leaves the double range
        }
        if (!std::isfinite(d)) break;
        grid.push_back(x);
        slope.push_back(d);
    }

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = slope[i], b = slope[i + 1];
        if (a == 0.0 && i > 0) {
            const double prev = slope[i - 1];
            if (prev != 0.0 && b != 0.0 && (prev < 0.0) != (b < 0.0))
                out.push_back({grid[i], classify(grid[i], b > 0.0)});
            continue;
        }
        if (a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0)) {
            const double root = bisect_root(family, grid[i], grid[i + 1], a);
            out.push_back({root, classify(root, b > 0.0)});
            continue;
        }
        // A root that touches zero without a sign change (saddle).
        if (i > 0 && a != 0.0 && (slope[i - 1] < 0.0) == (a < 0.0) && (b < 0.0) == (a < 0.0) &&
            std::abs(a) <= std::abs(slope[i - 1]) && std::abs(a) <= std::abs(b)) {
            const double scale = std::abs(rfv_at(family, grid[i]));
            if (std::abs(a) > 1e-3 * scale) continue;
            const double x = minimise_abs_derivative(family, grid[i - 1], grid[i + 1]);
            if (std::abs(rfv_derivative(family, x)) < 1e-9 * scale)
                out.push_back({x, StationaryKind::Saddle});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const StationaryPoint& l, const StationaryPoint& r) { return l.lambda < r.lambda; });

    if (const auto* s = std::get_if<Shifted>(&family)) {
        const double c_star = shifted_stationary_point(*s);
        const bool expected = s->p > 0.0 && c_star > 0.0 && c_star < lambda_max;
        if (expected != (out.size() == 1) || out.size() > 1) {
            std::ostringstream os;
            os.precision(17);
            os << "shifted family: expected " << (expected ? 1 : 0) << " stationary point (c* = " << c_star
               << "), found " << out.size();
            fail(ErrorKind::RootSolverFailed, os.str());
        }
    }
    return out;
}

TailBehavior classify_tail(const FrailtyFamily& family) {
    using enum TailBehavior;
    return std::visit(overloaded{
                          [](const NegBin&) { return IncreasingToInfinity; },
                          [](const NegBinPositive&) { return DecreasingToZero; },
                          [](const Binomial&) { return IncreasingToInfinity; },
                          [](const Poisson&) { return IncreasingToInfinity; },
                          [](const Shifted& s) { return s.p > 0.0 ? DecreasingToZero : IncreasingToInfinity; },
                          [](const ZeroModifiedPoisson& z) {
                              return z.phi > 0.0 ? IncreasingToInfinity : DecreasingToZero;
                          },
                          [](const Addams& a) {
                              if (a.alpha > 0.0) return IncreasingToInfinity;
                              return a.alpha < 0.0 ? DecreasingToZero : Constant;
                          },
                          [](const KPoint& k) {
                              return k.support.front() == 0.0 ? IncreasingToInfinity : DecreasingToZero;
                          },
                          [](const GammaFrailty&) { return Constant; },
                      },
                      family);
}

ShapeCurve curve(const FrailtyFamily& family, const std::vector<double>& grid) {
    validate(family);
    if (grid.empty()) fail(ErrorKind::ParameterOutOfRange, "curve: grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]))
            fail(ErrorKind::ParameterOutOfRange, "curve: grid values must be finite and >= 0");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            fail(ErrorKind::ParameterOutOfRange, "curve: grid must be strictly increasing");
    }
    ShapeCurve c;
    c.family = family;
    c.grid = grid;
    c.rfv.reserve(grid.size());
    for (double x : grid) {
        bool overflow = false;
        double value = std::numeric_limits<double>::infinity();
        try {
            value = rfv_at(family, x);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NumericalOverflow) throw;
            overflow = true;
        }
        c.rfv.push_back(value);
        c.crf.push_back(value + 1.0);
        c.overflow.push_back(overflow);
    }
    if (grid.back() > 0.0) c.stationary_points = stationary_points(family, grid.back());
    c.tail = classify_tail(family);
    return c;
}

double shifted_stationary_point(const Shifted& s) {
    const double p = s.p;
    const double ninf = -std::numeric_limits<double>::infinity();
    if (p <= 0.0) return ninf;
    return std::visit(overloaded{
                          [p, ninf](const NegBin& nb) {
                              const double q = 1.0 - nb.pi;
                              return nb.nu > p ? std::log(q * (nb.nu - p) / p) : ninf;
                          },
                          [p](const Binomial& b) {
                              return -std::log(p * (1.0 - b.pi) / (b.pi * (p + b.n)));
                          },
                          [p](const Poisson& ps) { return std::log(ps.eta / p); },
                      },
                      s.inner);
}

namespace zmp {

double b(const ZeroModifiedPoisson& family) {
    return (family.phi - 1.0) / (1.0 - family.phi * std::exp(-family.eta));
}

double r(double eta, double lambda) {
    const double x = std::exp(lambda) / eta;
    return x * x * std::exp(1.0 / x) / ((1.0 + x) * (1.0 + x) - x);
}

double curvature_at_stationary(double eta, double lambda) {
    const double x = std::exp(lambda) / eta;
    return (x - 1.0) / ((1.0 + x) * (1.0 + x) - x);
}

}  // namespace zmp

}  // namespace frailty
