#include "frailty/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frailty/error.hpp"

namespace frailty {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_time(double t, const char* what) {
    if (!(t >= 0.0)) fail(ErrorKind::ParameterOutOfRange, std::string(what) + " must be >= 0");
}

}  // namespace

void validate(const BaselineHazard& hazard) {
    std::visit(overloaded{
                   [](const ExponentialRate& e) {
                       if (!(e.rate > 0.0 && std::isfinite(e.rate)))
                           fail(ErrorKind::ParameterOutOfRange, "exponential: rate must be > 0");
                   },
                   [](const Weibull& w) {
                       if (!(w.shape > 0.0 && std::isfinite(w.shape)))
                           fail(ErrorKind::ParameterOutOfRange, "weibull: shape must be > 0");
                       if (!(w.scale > 0.0 && std::isfinite(w.scale)))
                           fail(ErrorKind::ParameterOutOfRange, "weibull: scale must be > 0");
                   },
                   [](const PiecewiseConstant& p) {
                       if (p.rates.size() != p.breakpoints.size() + 1)
                           fail(ErrorKind::ParameterOutOfRange,
                                "piecewise: need exactly one more rate than breakpoints");
                       for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
                           const double lo = i == 0 ? 0.0 : p.breakpoints[i - 1];
                           if (!(p.breakpoints[i] > lo && std::isfinite(p.breakpoints[i])))
                               fail(ErrorKind::ParameterOutOfRange,
                                    "piecewise: breakpoints must be positive and strictly increasing");
                       }
                       for (double r : p.rates)
                           if (!(r > 0.0 && std::isfinite(r)))
                               fail(ErrorKind::ParameterOutOfRange, "piecewise: rates must be > 0");
                   },
               },
               hazard);
}

double cumulative(const BaselineHazard& hazard, double t) {
    require_time(t, "t");
    return std::visit(overloaded{
                          [t](const ExponentialRate& e) { return e.rate * t; },
                          [t](const Weibull& w) { return std::pow(t / w.scale, w.shape); },
                          [t](const PiecewiseConstant& p) {
                              double acc = 0.0;
                              double lo = 0.0;
                              for (std::size_t i = 0; i < p.rates.size(); ++i) {
                                  const double hi = i < p.breakpoints.size() ? p.breakpoints[i] : t;
                                  if (t <= hi) return acc + p.rates[i] * (t - lo);
                                  acc += p.rates[i] * (hi - lo);
                                  lo = hi;
                              }
                              return acc;
                          },
                      },
                      hazard);
}

double inverse_cumulative(const BaselineHazard& hazard, double u) {
    require_time(u, "u");
    return std::visit(overloaded{
                          [u](const ExponentialRate& e) { return u / e.rate; },
                          [u](const Weibull& w) { return w.scale * std::pow(u, 1.0 / w.shape); },
                          [u](const PiecewiseConstant& p) {
                              double acc = 0.0;
                              double lo = 0.0;
                              for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
                                  const double area = p.rates[i] * (p.breakpoints[i] - lo);
                                  if (u <= acc + area) return lo + (u - acc) / p.rates[i];
                                  acc += area;
                                  lo = p.breakpoints[i];
                              }
                              return lo + (u - acc) / p.rates.back();
                          },
                      },
                      hazard);
}

double generic_time(std::span<const BaselineHazard> hazards, std::span<const double> t) {
    if (hazards.size() != t.size())
        fail(ErrorKind::LengthMismatch, "generic_time: " + std::to_string(hazards.size()) +
                                            " hazards but " + std::to_string(t.size()) + " times");
    double total = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) total += cumulative(hazards[j], t[j]);
    return total;
}

}  // namespace frailty
