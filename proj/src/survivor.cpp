#include "frailty/survivor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frailty/error.hpp"

namespace frailty::oracle {

namespace {

// Spacing to the first omitted support point of a truncated lattice.
constexpr double kLatticeStep = 1.0;

}  // namespace

SurvivorPmf condition_on_survival(const DiscreteSupport& prior, double lambda,
                                  std::span<const double> weights) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        fail(ErrorKind::ParameterOutOfRange, "survivor pmf: lambda must be finite and >= 0");
    if (prior.size() == 0) fail(ErrorKind::DegenerateDistribution, "survivor pmf: empty support");
    if (!weights.empty() && weights.size() != prior.size())
        fail(ErrorKind::LengthMismatch, "survivor pmf: weights do not match the support");

    SurvivorPmf out;
    out.lambda = lambda;
    out.support = prior.z;
    out.probs.resize(prior.size());
    const double z1 = prior.z.front();
    double total = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        double w = prior.mass[i] * std::exp(-(prior.z[i] - z1) * lambda);
        if (!weights.empty()) w *= weights[i];
        out.probs[i] = w;
        total += w;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        fail(ErrorKind::DegenerateConditional, "survivor pmf: no mass survives");
    for (double& p : out.probs) p /= total;

    if (prior.truncated && prior.tail_mass > 0.0) {
        const double next = prior.z.back() + kLatticeStep;
        double scale = 1.0;
        if (!weights.empty()) {
            // Conservative: the omitted weights are bounded by the largest listed one.
            scale = 0.0;
            for (double w : weights) scale = std::max(scale, w);
        }
        out.tail_mass_bound = prior.tail_mass * std::exp(-(next - z1) * lambda) * scale / total;
    }
    return out;
}

SurvivorPmf survivor_pmf(const FrailtyFamily& family, double lambda) {
    validate(family);
    if (!has_pmf(family))
        fail(ErrorKind::Unsupported, family_name(family) + ": survivor pmf needs a probability mass function");
    double tol = kDefaultTailMass;
    for (;;) {
        SurvivorPmf out = condition_on_survival(enumerate_support(family, tol), lambda);
        if (out.tail_mass_bound < kMaxTailMass) return out;
        if (tol < 1e-280) {
            std::ostringstream os;
            os << family_name(family) << ": survivor tail bound " << out.tail_mass_bound
               << " could not be brought below " << kMaxTailMass;
            fail(ErrorKind::NumericalOverflow, os.str());
        }
        tol *= 1e-4;
    }
}

double moment(const SurvivorPmf& pmf, int q) {
    if (q != 1 && q != 2) fail(ErrorKind::ParameterOutOfRange, "survivor moment: q must be 1 or 2");
    double sum = 0.0;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) {
        const double z = pmf.support[i];
        sum += (q == 1 ? z : z * z) * pmf.probs[i];
    }
    return sum;
}

double relative_variance(const SurvivorPmf& pmf) {
    const double mean = moment(pmf, 1);
    if (!(mean > 0.0))
        fail(ErrorKind::DegenerateConditional, "survivor pmf: conditional mean is zero");
    double var = 0.0;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) {
        const double d = pmf.support[i] - mean;
        var += d * d * pmf.probs[i];
    }
    return var / (mean * mean);
}

double survivor_moment(const FrailtyFamily& family, double lambda, int q) {
    return moment(survivor_pmf(family, lambda), q);
}

double rfv(const FrailtyFamily& family, double lambda) {
    return relative_variance(survivor_pmf(family, lambda));
}

}  // namespace frailty::oracle
