#pragma once

#include "frailty/family.hpp"
#include "frailty/ode.hpp"

namespace frailty::addams {

/// Relative error target for each integration step.
inline constexpr ode::Tolerance kTolerance{1e-12, 1e-14};

/// Laplace triple of the unit-mean Addams distribution, obtained by solving
/// L'' L / L'^2 = 1 + gamma * exp(alpha * s), L(0) = 1, L'(0) = -1.
///
/// The ODE is integrated in the variables (log L, u = -L'/L), for which it
/// reads (log L)' = -u, u' = -gamma * exp(alpha * s) * u^2.
LaplaceTriple laplace(const Addams& family, double s, ode::Stats* stats = nullptr);

}  // namespace frailty::addams
