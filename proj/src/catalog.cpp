#include "frailty/catalog.hpp"

#include "frailty/error.hpp"

namespace frailty::catalog {

std::vector<double> omega(int index) {
    const std::vector<double> first{0.99, 2.02, 2.22, 2.41, 2.51, 2.52, 3.96, 10.44};
    const std::vector<double> third{0.35, 0.41, 0.49, 0.60, 1.09, 1.39, 3.75, 5.63};
    std::vector<double> out;
    switch (index) {
        case 1: return first;
        case 2:
            out = first;
            for (double& z : out) z /= 4.0;
            out.front() = 0.0;
            return out;
        case 3: return third;
        case 4:
            out = third;
            out.front() = 0.0;
            return out;
        default: fail(ErrorKind::ParameterOutOfRange, "omega index must be 1..4");
    }
}

std::vector<double> probabilities(int index) {
    switch (index) {
        case 1: return {0.03, 0.22, 0.01, 0.03, 0.18, 0.03, 0.16, 0.34};
        case 2: return {0.04, 0.14, 0.25, 0.21, 0.17, 0.08, 0.07, 0.04};
        default: fail(ErrorKind::ParameterOutOfRange, "probability index must be 1 or 2");
    }
}

std::vector<Named> kpoint_figure() {
    return {
        {"omega1_pr1", KPoint{omega(1), probabilities(1)}},
        {"omega2_pr1", KPoint{omega(2), probabilities(1)}},
        {"omega3_pr2", KPoint{omega(3), probabilities(2)}},
        {"omega4_pr2", KPoint{omega(4), probabilities(2)}},
    };
}

std::vector<Named> pmf_families() {
    return {
        {"negbin", NegBin{0.5, 2.0}},
        {"negbin_real_nu", NegBin{0.3, 1.7}},
        {"negbin_positive", NegBinPositive{0.4, 2}},
        {"binomial", Binomial{0.3, 5}},
        {"poisson", Poisson{2.0}},
        {"shifted_poisson", Shifted{Poisson{2.0}, 1.0}},
        {"shifted_negbin", Shifted{NegBin{0.4, 3.0}, 0.5}},
        {"shifted_binomial", Shifted{Binomial{0.4, 4}, 0.5}},
        {"zmp_deflated", ZeroModifiedPoisson{3.0, 0.05}},
        {"zmp_truncated", ZeroModifiedPoisson{1.0, 0.0}},
        {"zmp_inflated", ZeroModifiedPoisson{0.5, 1.5}},
        {"kpoint_two", KPoint{{0.0, 1.0}, {0.5, 0.5}}},
        {"kpoint_omega1_pr1", KPoint{omega(1), probabilities(1)}},
        {"kpoint_omega2_pr1", KPoint{omega(2), probabilities(1)}},
    };
}

std::vector<Named> all_families() {
    auto out = pmf_families();
    out.push_back({"addams_increasing", Addams{0.3, 0.5}});
    out.push_back({"addams_decreasing", Addams{-0.3, 0.5}});
    out.push_back({"addams_constant", Addams{0.0, 0.5}});
    out.push_back({"gamma", GammaFrailty{1.0, 0.5}});
    return out;
}

std::vector<Named> shape_defaults() {
    return {
        {"addams_increasing", Addams{0.3, 0.5}},
        {"addams_constant", Addams{0.0, 0.5}},
        {"addams_decreasing", Addams{-0.2, 0.5}},
        {"negbin", NegBin{0.5, 2.0}},
        {"negbin_positive", NegBinPositive{0.5, 2}},
        {"binomial", Binomial{0.5, 4}},
        {"shifted_binomial", Shifted{Binomial{0.5, 4}, 0.5}},
        {"poisson", Poisson{2.0}},
        {"shifted_poisson", Shifted{Poisson{2.0}, 1.0}},
        {"zmp_truncated", ZeroModifiedPoisson{1.0, 0.0}},
        {"zmp_deflated", ZeroModifiedPoisson{3.0, 0.05}},
        {"zmp_inflated", ZeroModifiedPoisson{0.5, 1.5}},
    };
}

}  // namespace frailty::catalog
