#pragma once

// Discrete (and reference continuous) frailty distributions: parameter
// checks, pmf, moments and the Laplace transform with two derivatives.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace frailty {

/// Number of failures before the nu-th success; support {0, 1, ...}.
struct NegBin {
    double pi = 0.5;  // success probability
    double nu = 1.0;
    bool operator==(const NegBin&) const = default;
};

/// Number of trials until the nu-th success; support {nu, nu + 1, ...}.
struct NegBinPositive {
    double pi = 0.5;
    int nu = 1;
    bool operator==(const NegBinPositive&) const = default;
};

struct Binomial {
    double pi = 0.5;
    int n = 1;
    bool operator==(const Binomial&) const = default;
};

struct Poisson {
    double eta = 1.0;
    bool operator==(const Poisson&) const = default;
};

/// The families whose support may be translated by a shift.
using ShiftableFamily = std::variant<NegBin, Binomial, Poisson>;

/// Z = Z_* + p; removes the atom at zero whenever p > 0.
struct Shifted {
    ShiftableFamily inner = Poisson{};
    double p = 0.0;
    bool operator==(const Shifted&) const = default;
};

/// Poisson reference with the mass at zero rescaled to phi * exp(-eta).
/// phi = 0 is the zero-truncated Poisson, phi = 1 the plain Poisson.
struct ZeroModifiedPoisson {
    double eta = 1.0;
    double phi = 1.0;
    bool operator==(const ZeroModifiedPoisson&) const = default;
};

/// Family defined through its relative frailty variance gamma * exp(alpha * L),
/// normalised to unit mean.
struct Addams {
    double alpha = 0.0;
    double gamma = 1.0;
    bool operator==(const Addams&) const = default;
};

/// Finite support z_(1) < ... < z_(k) with matching probabilities.
struct KPoint {
    std::vector<double> support;
    std::vector<double> probs;
    bool operator==(const KPoint&) const = default;
};

/// Gamma distribution parameterised by its mean and variance.
struct GammaFrailty {
    double mean = 1.0;
    double variance = 1.0;
    bool operator==(const GammaFrailty&) const = default;
};

using FrailtyFamily = std::variant<NegBin, NegBinPositive, Binomial, Poisson, Shifted,
                                   ZeroModifiedPoisson, Addams, KPoint, GammaFrailty>;

/// Values of L(s), L'(s) and L''(s).
struct LaplaceTriple {
    double l0 = 1.0;
    double l1 = 0.0;
    double l2 = 0.0;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// A (possibly truncated) enumeration of a discrete support with its masses.
/// `tail_mass` bounds the probability beyond the last listed point.
struct DiscreteSupport {
    std::vector<double> z;
    std::vector<double> mass;
    double tail_mass = 0.0;
    bool truncated = false;

    std::size_t size() const noexcept { return z.size(); }
};

/// Default truncation: smallest K whose neglected tail is below this.
inline constexpr double kDefaultTailMass = 1e-14;

/// Short identifier used in serialised output ("negbin", "poisson", ...).
std::string family_name(const FrailtyFamily& family);

/// Throws Error(ParameterOutOfRange | DegenerateDistribution) if any
/// parameter is outside its admissible range.
void validate(const FrailtyFamily& family);

/// Exact transform at s >= 0. Addams is integrated numerically.
/// Throws NumericalOverflow rather than returning non-finite values.
LaplaceTriple laplace(const FrailtyFamily& family, double s);

/// g(z); zero off the support. Unsupported for Addams and GammaFrailty.
double pmf(const FrailtyFamily& family, double z);

Moments moments(const FrailtyFamily& family);

/// True for the families with a probability mass function.
bool has_pmf(const FrailtyFamily& family) noexcept;

/// True when the support is finite (Binomial, shifted Binomial, KPoint).
bool has_finite_support(const FrailtyFamily& family) noexcept;

/// Smallest support point z_(1). Defined for every family with a pmf and for
/// Addams; Unsupported for GammaFrailty.
double smallest_support_point(const FrailtyFamily& family);

/// Support points in ascending order with their masses. Infinite supports
/// stop at the first index whose remaining tail mass is below `tail_mass`.
DiscreteSupport enumerate_support(const FrailtyFamily& family,
                                  double tail_mass = kDefaultTailMass);

}  // namespace frailty
