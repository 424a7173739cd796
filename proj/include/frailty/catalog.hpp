#pragma once

// Reference parameter sets used by the CLI defaults and the verification
// suite.

#include <string>
#include <vector>

#include "frailty/family.hpp"

namespace frailty::catalog {

struct Named {
    std::string name;
    FrailtyFamily family;
};

/// The eight-point supports and probability vectors of the k-point figure.
std::vector<double> omega(int index);
std::vector<double> probabilities(int index);

/// The four figure curves: (omega1, pr1), (omega2, pr1), (omega3, pr2), (omega4, pr2).
std::vector<Named> kpoint_figure();

/// One or more members of every family with a pmf, chosen so that the
/// smallest support point is well separated from the next one.
std::vector<Named> pmf_families();

/// pmf_families plus Addams (increasing, decreasing, constant) and gamma.
std::vector<Named> all_families();

/// Default parameters for the qualitative shape curves.
std::vector<Named> shape_defaults();

}  // namespace frailty::catalog
