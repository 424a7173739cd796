#pragma once

// Conditional frailty distribution among survivors, computed by brute-force
// enumeration of the support. Serves as the reference for everything derived
// from the Laplace transform.

#include <span>
#include <vector>

#include "frailty/family.hpp"

namespace frailty::oracle {

struct SurvivorPmf {
    std::vector<double> support;
    std::vector<double> probs;
    double lambda = 0.0;
    /// Upper bound on the normalised mass beyond the last listed point.
    double tail_mass_bound = 0.0;
};

/// Largest accepted tail_mass_bound.
inline constexpr double kMaxTailMass = 1e-12;

/// Reweights `prior` by exp(-z * lambda) * weight(z) and normalises. Weights
/// are recentred on the smallest support point so that large lambda cannot
/// underflow. `weights`, when non-empty, must match prior.size().
SurvivorPmf condition_on_survival(const DiscreteSupport& prior, double lambda,
                                  std::span<const double> weights = {});

/// Survivor pmf of a family with a pmf. Truncation is tightened until the
/// conditioned tail bound is below kMaxTailMass.
SurvivorPmf survivor_pmf(const FrailtyFamily& family, double lambda);

double moment(const SurvivorPmf& pmf, int q);

/// Var / mean^2 of a survivor pmf; DegenerateConditional if the mean is 0.
double relative_variance(const SurvivorPmf& pmf);

/// E(Z^q | survival to lambda), q in {1, 2}.
double survivor_moment(const FrailtyFamily& family, double lambda, int q);

double rfv(const FrailtyFamily& family, double lambda);

}  // namespace frailty::oracle
