#include <doctest.h>

#include <cmath>

#include "frailty/error.hpp"
#include "frailty/survivor.hpp"
#include "oracles.hpp"

using namespace frailty;
namespace to = testing_oracle;

namespace {

double pmf_ratio_check(const FrailtyFamily& f, double z0, double z1, double s) {
    return pmf(f, z1) / pmf(f, z0) * std::exp(-s * (z1 - z0));
}

}  // namespace

TEST_CASE("survivor pmf examples") {
    const KPoint two{{0.0, 1.0}, {0.5, 0.5}};
    const auto at0 = oracle::survivor_pmf(two, 0.0);
    CHECK(at0.probs[0] == doctest::Approx(0.5));
    CHECK(at0.probs[1] == doctest::Approx(0.5));
    const auto atln2 = oracle::survivor_pmf(two, std::log(2.0));
    CHECK(atln2.probs[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(atln2.probs[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(oracle::survivor_moment(two, std::log(2.0), 1) == doctest::Approx(1.0 / 3));
    CHECK(oracle::rfv(two, std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-14));

    const auto p50 = oracle::survivor_pmf(Poisson{2.0}, 50.0);
    CHECK(p50.support[0] == 0.0);
    CHECK(p50.probs[0] > 1 - 1e-10);

    CHECK(oracle::survivor_moment(NegBinPositive{0.4, 2}, 60.0, 1) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(oracle::rfv(Poisson{2.0}, 1.0) == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-10));
    CHECK(oracle::rfv(Shifted{Poisson{2.0}, 1.0}, 0.0) == doctest::Approx(2.0 / 9).epsilon(1e-12));
}

TEST_CASE("families without a pmf are rejected") {
    CHECK_THROWS_AS(oracle::survivor_pmf(GammaFrailty{1.0, 0.5}, 1.0), Error);
    CHECK_THROWS_AS(oracle::survivor_pmf(Addams{0.3, 0.5}, 1.0), Error);
}

TEST_CASE("property: survivor pmf is a normalised reweighting of the prior") {
    to::FamilyGen gen(31);
    for (int i = 0; i < 200; ++i) {
        const auto f = gen.pmf_family();
        const double s = gen.uniform(0.0, 30.0);
        const auto pmf = oracle::survivor_pmf(f, s);
        double total = 0;
        for (double p : pmf.probs) total += p;
        INFO(family_name(f), " s=", s);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pmf.tail_mass_bound <= oracle::kMaxTailMass);
        // ratios of survivor masses equal ratios of prior masses times exp(-s dz)
        if (pmf.probs.size() >= 2 && pmf.probs[1] > 1e-200) {
            const double ratio = pmf.probs[1] / pmf.probs[0];
            const double want = pmf_ratio_check(f, pmf.support[0], pmf.support[1], s);
            CHECK(ratio == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("property: survivor mean decreases towards the smallest support point") {
    to::FamilyGen gen(32);
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.pmf_family();
        double prev = oracle::survivor_moment(f, 0.0, 1);
        CHECK(prev == doctest::Approx(moments(f).mean).epsilon(1e-11));
        for (double s = 1.0; s <= 20.0; s += 1.0) {
            const double m = oracle::survivor_moment(f, s, 1);
            CHECK(m <= prev * (1 + 1e-12));
            CHECK(m >= smallest_support_point(f) - 1e-12);
            prev = m;
        }
    }
}
