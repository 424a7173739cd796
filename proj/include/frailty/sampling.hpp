#pragma once

#include <vector>

#include "frailty/family.hpp"
#include "frailty/rng.hpp"

namespace frailty {

/// -log(1 - U).
double sample_exponential(CounterRng& rng);

double sample_standard_normal(CounterRng& rng);

/// Marsaglia-Tsang; shape < 1 via the U^(1/shape) boost.
double sample_gamma(double shape, double scale, CounterRng& rng);

/// Inversion for small means, PTRS transformed rejection otherwise.
double sample_poisson(double mean, CounterRng& rng);

/// Draws frailties by inverting a tabulated cdf (families with a pmf) or
/// directly (gamma, and Addams with alpha = 0). Unsupported otherwise.
class FrailtySampler {
public:
    explicit FrailtySampler(const FrailtyFamily& family);

    double operator()(CounterRng& rng) const;

private:
    std::vector<double> z_;
    std::vector<double> cdf_;
    double gamma_shape_ = 0.0;
    double gamma_scale_ = 0.0;
};

}  // namespace frailty
