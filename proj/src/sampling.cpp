#include "frailty/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frailty/error.hpp"

namespace frailty {

namespace {

// Tabulated supports are cut where the neglected mass is far below what a
// million draws could detect.
constexpr double kSamplerTailMass = 1e-16;

}  // namespace

double sample_exponential(CounterRng& rng) { return -std::log1p(-rng.uniform()); }

double sample_standard_normal(CounterRng& rng) {
    const double u1 = 1.0 - rng.uniform();  // (0, 1]
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(double shape, double scale, CounterRng& rng) {
    if (shape < 1.0) {
        const double boost = std::pow(1.0 - rng.uniform(), 1.0 / shape);
        return sample_gamma(shape + 1.0, scale, rng) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double sample_poisson(double mean, CounterRng& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        fail(ErrorKind::ParameterOutOfRange, "poisson sampler: mean must be finite and >= 0");
    if (mean == 0.0) return 0.0;
    if (mean < 30.0) {
        const double u = rng.uniform();
        double p = std::exp(-mean);
        double cdf = p;
        double k = 0.0;
        while (u >= cdf && p > 0.0) {
            k += 1.0;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }
    // Hormann (1993), PTRS.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return k;
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * log_mean - std::lgamma(k + 1.0))
            return k;
    }
}

FrailtySampler::FrailtySampler(const FrailtyFamily& family) {
    validate(family);
    if (const auto* g = std::get_if<GammaFrailty>(&family)) {
        gamma_shape_ = g->mean * g->mean / g->variance;
        gamma_scale_ = g->variance / g->mean;
        return;
    }
    if (const auto* a = std::get_if<Addams>(&family); a && a->alpha == 0.0) {
        gamma_shape_ = 1.0 / a->gamma;
        gamma_scale_ = a->gamma;
        return;
    }
    if (!has_pmf(family))
        fail(ErrorKind::Unsupported, family_name(family) + ": no sampler without a probability mass function");
    const DiscreteSupport support = enumerate_support(family, kSamplerTailMass);
    z_ = support.z;
    cdf_.resize(support.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        acc += support.mass[i];
        cdf_[i] = acc;
    }
}

double FrailtySampler::operator()(CounterRng& rng) const {
    if (gamma_shape_ > 0.0) return sample_gamma(gamma_shape_, gamma_scale_, rng);
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t index = std::min<std::size_t>(it - cdf_.begin(), z_.size() - 1);
    return z_[index];
}

}  // namespace frailty
