#include "frailty/addams.hpp"

#include <cmath>

namespace frailty::addams {

LaplaceTriple laplace(const Addams& family, double s, ode::Stats* stats) {
    const double alpha = family.alpha;
    const double gamma = family.gamma;
    auto rhs = [alpha, gamma](double x, const ode::State<2>& y) {
        const double u = y[1];
        return ode::State<2>{-u, -gamma * std::exp(alpha * x) * u * u};
    };
    const auto sol = ode::integrate<2>(rhs, 0.0, ode::State<2>{0.0, 1.0}, s, kTolerance);
    if (stats) *stats = sol.stats;

    const double l0 = std::exp(sol.y[0]);
    const double u = sol.y[1];
    LaplaceTriple t;
    t.l0 = l0;
    t.l1 = -u * l0;
    t.l2 = l0 * u * u * (1.0 + gamma * std::exp(alpha * s));
    return t;
}

}  // namespace frailty::addams
