#include <doctest.h>

#include <cmath>

#include "frailty/error.hpp"
#include "frailty/family.hpp"
#include "oracles.hpp"

using namespace frailty;
namespace to = testing_oracle;

namespace {

ErrorKind kind_of(const FrailtyFamily& f) {
    try {
        validate(f);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("validate accepted an invalid family");
    return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate(Poisson{2.0}));
    CHECK(kind_of(ZeroModifiedPoisson{1.0, std::exp(1.0) + 0.1}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(KPoint{{1.0, 1.0}, {0.5, 0.5}}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(Poisson{0.0}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(NegBin{1.0, 2.0}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(Binomial{0.5, 0}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(Shifted{Poisson{1.0}, -0.5}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(KPoint{{0.0, 1.0}, {0.5, 0.6}}) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of(KPoint{{2.0}, {1.0}}) == ErrorKind::DegenerateDistribution);
}

TEST_CASE("laplace examples") {
    const auto p = laplace(Poisson{2.0}, 0.0);
    CHECK(p.l0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.l1 == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(p.l2 == doctest::Approx(6.0).epsilon(1e-15));

    CHECK(laplace(Binomial{0.5, 2}, std::log(2.0)).l0 == doctest::Approx(0.5625).epsilon(1e-14));

    const double expected = std::exp(std::exp(-1.0) - 1.0) * std::exp(-1.0);
    const auto direct = to::laplace_by_sum(Shifted{Poisson{1.0}, 1.0}, 1.0);
    CHECK(laplace(Shifted{Poisson{1.0}, 1.0}, 1.0).l0 == doctest::Approx(expected).epsilon(1e-14));
    CHECK(double(direct.l0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("pmf and moments examples") {
    CHECK(pmf(ZeroModifiedPoisson{1.0, 0.0}, 0.0) == 0.0);
    CHECK(pmf(KPoint{{0.99, 2.02}, {0.3, 0.7}}, 2.02) == 0.7);
    CHECK(pmf(Shifted{Poisson{1.0}, 0.5}, 1.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    const auto m = moments(Poisson{2.0});
    CHECK(m.mean == doctest::Approx(2.0));
    CHECK(m.variance == doctest::Approx(2.0));
    const auto s = moments(Shifted{Binomial{0.5, 2}, 1.0});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.variance == doctest::Approx(0.5));
    const auto k = moments(KPoint{{0.0, 1.0}, {0.5, 0.5}});
    CHECK(k.mean == doctest::Approx(0.5));
    CHECK(k.variance == doctest::Approx(0.25));
}

TEST_CASE("unsupported operations") {
    CHECK_THROWS_AS(pmf(GammaFrailty{1.0, 0.5}, 1.0), Error);
    CHECK_THROWS_AS(smallest_support_point(GammaFrailty{1.0, 0.5}), Error);
    CHECK(!has_pmf(Addams{0.3, 0.5}));
    CHECK(has_finite_support(Shifted{Binomial{0.3, 4}, 0.5}));
    CHECK(!has_finite_support(Poisson{1.0}));
}

TEST_CASE("smallest support points") {
    CHECK(smallest_support_point(Poisson{2.0}) == 0.0);
    CHECK(smallest_support_point(NegBinPositive{0.4, 3}) == 3.0);
    CHECK(smallest_support_point(Shifted{NegBin{0.4, 3.0}, 0.7}) == 0.7);
    CHECK(smallest_support_point(ZeroModifiedPoisson{2.0, 0.0}) == 1.0);
    CHECK(smallest_support_point(ZeroModifiedPoisson{2.0, 0.3}) == 0.0);
    CHECK(smallest_support_point(KPoint{{0.35, 0.41}, {0.5, 0.5}}) == 0.35);
}

TEST_CASE("property: laplace triple matches truncated pmf sums") {
    to::FamilyGen gen(11);
    for (int i = 0; i < 300; ++i) {
        const auto f = gen.pmf_family();
        const double s = gen.uniform(0.0, 6.0);
        const auto got = laplace(f, s);
        const auto want = to::laplace_by_sum(f, s);
        INFO(family_name(f), " s=", s);
        CHECK(got.l0 == doctest::Approx(double(want.l0)).epsilon(1e-11));
        CHECK(got.l1 == doctest::Approx(double(want.l1)).epsilon(1e-11));
        CHECK(got.l2 == doctest::Approx(double(want.l2)).epsilon(1e-11));
    }
}

TEST_CASE("property: pmf sums to one and matches the reference masses") {
    to::FamilyGen gen(12);
    for (int i = 0; i < 200; ++i) {
        const auto f = gen.pmf_family();
        const auto support = enumerate_support(f);
        double total = 0;
        for (double m : support.mass) total += m;
        INFO(family_name(f));
        CHECK(total + support.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
        const auto ref = to::atoms(f);
        for (std::size_t k = 0; k < std::min<std::size_t>(ref.z.size(), 20); ++k)
            CHECK(pmf(f, ref.z[k]) == doctest::Approx(double(ref.p[k])).epsilon(1e-12));
    }
}

TEST_CASE("property: moments agree with the transform at zero") {
    to::FamilyGen gen(13);
    for (int i = 0; i < 200; ++i) {
        const auto f = gen.pmf_family();
        const auto t = to::laplace_by_sum(f, 0.0);
        const auto m = moments(f);
        INFO(family_name(f));
        CHECK(m.mean == doctest::Approx(double(-t.l1)).epsilon(1e-11));
        CHECK(m.variance == doctest::Approx(double(t.l2 - t.l1 * t.l1)).epsilon(1e-10));
    }
}

TEST_CASE("addams transform solves its defining ODE") {
    for (const auto& [alpha, gamma] : {std::pair{0.3, 0.5}, {-0.3, 0.5}, {1.0, 0.5}, {-0.6, 0.5}, {0.5, 0.7}}) {
        for (double s = 0.0; s <= 8.0; s += 0.5) {
            const auto got = laplace(Addams{alpha, gamma}, s);
            const auto want = to::addams_closed(alpha, gamma, s);
            INFO("alpha=", alpha, " gamma=", gamma, " s=", s);
            CHECK(got.l0 == doctest::Approx(double(want.l0)).epsilon(1e-9));
            CHECK(got.l1 == doctest::Approx(double(want.l1)).epsilon(1e-9));
            CHECK(got.l2 == doctest::Approx(double(want.l2)).epsilon(1e-9));
        }
    }
}

TEST_CASE("addams with alpha zero is the unit-mean gamma") {
    for (double s = 0.0; s <= 10.0; s += 0.5) {
        const double l0 = std::pow(1.0 + 0.5 * s, -1.0 / 0.5);
        CHECK(laplace(Addams{0.0, 0.5}, s).l0 == doctest::Approx(l0).epsilon(1e-10));
        CHECK(laplace(GammaFrailty{1.0, 0.5}, s).l0 == doctest::Approx(l0).epsilon(1e-14));
    }
}
