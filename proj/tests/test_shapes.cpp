#include <doctest.h>

#include <cmath>
#include <numbers>

#include "frailty/catalog.hpp"
#include "frailty/error.hpp"
#include "frailty/shapes.hpp"
#include "oracles.hpp"

using namespace frailty;
namespace to = testing_oracle;

TEST_CASE("rfv examples") {
    CHECK(rfv_at(Poisson{2.0}, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rfv_at(Poisson{2.0}, 1.0) == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-13));
    CHECK(rfv_at(KPoint{{0.0, 1.0}, {0.5, 0.5}}, std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(crf_at(KPoint{{0.0, 1.0}, {0.5, 0.5}}, std::log(2.0)) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(rfv_closed_at(NegBin{0.5, 2.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rfv_closed_at(Addams{0.3, 0.5}, 2.0) == doctest::Approx(0.5 * std::exp(0.6)).epsilon(1e-15));
    CHECK(rfv_closed_at(Shifted{Poisson{2.0}, 1.0}, std::log(2.0)) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("rfv derivative examples") {
    CHECK(std::abs(rfv_derivative(Shifted{Poisson{2.0}, 1.0}, std::log(2.0))) < 1e-14);
    CHECK(rfv_derivative(Addams{0.0, 0.7}, 1.3) == 0.0);
    CHECK(rfv_derivative(ZeroModifiedPoisson{1.0, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("closed forms agree with independent pmf sums") {
    for (const auto& [name, f] : catalog::pmf_families()) {
        for (double s = 0.0; s <= 10.0; s += 0.25) {
            INFO(name, " s=", s);
            CHECK(rfv_closed_at(f, s) == doctest::Approx(to::rfv_by_sum(f, s)).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: closed form, transform ratio and sums agree") {
    to::FamilyGen gen(21);
    for (int i = 0; i < 400; ++i) {
        const auto f = gen.pmf_family();
        const double s = gen.uniform(0.0, 10.0);
        INFO(family_name(f), " s=", s);
        const double ref = to::rfv_by_sum(f, s);
        CHECK(rfv_at(f, s) == doctest::Approx(ref).epsilon(1e-8));
        CHECK(rfv_closed_at(f, s) == doctest::Approx(ref).epsilon(1e-9));
        CHECK(rfv_at(f, s) >= 0.0);
    }
}

TEST_CASE("property: analytic derivative matches differenced closed form") {
    to::FamilyGen gen(22);
    for (int i = 0; i < 300; ++i) {
        const auto f = gen.pmf_family();
        const double s = gen.uniform(0.01, 8.0);
        const double h = 1e-4;
        const double fd = (rfv_closed_at(f, s + h) - rfv_closed_at(f, s - h)) / (2 * h);
        INFO(family_name(f), " s=", s);
        CHECK(rfv_derivative(f, s) == doctest::Approx(fd).epsilon(1e-5).scale(rfv_closed_at(f, s)));
    }
}

TEST_CASE("stationary point examples") {
    const auto sp = stationary_points(Shifted{Poisson{2.0}, 1.0}, 10.0);
    REQUIRE(sp.size() == 1);
    CHECK(sp[0].lambda == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(sp[0].kind == StationaryKind::Max);

    CHECK(stationary_points(ZeroModifiedPoisson{0.5, 1.5}, 20.0).empty());

    const auto zmp = stationary_points(ZeroModifiedPoisson{3.0, 0.05}, 20.0);
    REQUIRE(zmp.size() == 2);
    CHECK(zmp[0].kind == StationaryKind::Max);
    CHECK(zmp[1].kind == StationaryKind::Min);
    const auto scan = to::turning_points([](double x) { return rfv_closed_at(ZeroModifiedPoisson{3.0, 0.05}, x); }, 20.0, 1e-3);
    REQUIRE(scan.size() == 2);
    CHECK(std::abs(scan[0].first - zmp[0].lambda) < 2e-3);
    CHECK(std::abs(scan[1].first - zmp[1].lambda) < 2e-3);

    CHECK(stationary_points(Addams{0.0, 0.5}, 10.0).empty());
}

TEST_CASE("shifted stationary points match the turning point of the curve") {
    for (const Shifted f : {Shifted{NegBin{0.4, 3.0}, 0.5}, Shifted{Binomial{0.4, 4}, 0.5}, Shifted{Poisson{5.0}, 0.3}}) {
        const double c = shifted_stationary_point(f);
        const auto scan = to::turning_points([&](double x) { return rfv_closed_at(f, x); }, 10.0, 1e-3);
        REQUIRE(scan.size() == 1);
        CHECK(scan[0].second == -1);
        CHECK(std::abs(scan[0].first - c) < 2e-3);
    }
    // Poisson(eta) + p peaks at ln(eta / p); no interior point when eta <= p.
    CHECK(shifted_stationary_point(Shifted{Poisson{2.0}, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(stationary_points(Shifted{Poisson{0.5}, 1.0}, 10.0).empty());
}

TEST_CASE("zero-modified helper functions") {
    for (double eta : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(zmp::r(eta, 0.0) == doctest::Approx(std::exp(eta) / (eta * eta + eta + 1)).epsilon(1e-12));
        CHECK(zmp::r(eta, std::log(eta)) == doctest::Approx(std::numbers::e / 3).epsilon(1e-12));
    }
    CHECK(zmp::b(ZeroModifiedPoisson{2.0, 1.0}) == 0.0);
    CHECK(zmp::curvature_at_stationary(3.0, std::log(3.0)) == doctest::Approx(0.0));
    // phi chosen so that r's minimum e/3 equals -1/b gives a saddle at ln eta.
    const double eta = 3.0;
    const double phi = (1 - std::numbers::e / 3) / (1 - std::numbers::e / 3 * std::exp(-eta));
    CHECK(std::abs(rfv_derivative(ZeroModifiedPoisson{eta, phi}, std::log(eta))) < 1e-10);
}

TEST_CASE("property: stationary points are roots with a consistent sign pattern") {
    to::FamilyGen gen(23);
    for (int i = 0; i < 120; ++i) {
        const auto f = gen.pmf_family();
        const auto points = stationary_points(f, 12.0);
        INFO(family_name(f));
        for (const auto& p : points) {
            const double scale = std::max(1e-300, rfv_closed_at(f, p.lambda));
            CHECK(std::abs(rfv_derivative(f, p.lambda)) / scale < 1e-6);
        }
        const auto scan = to::turning_points([&](double x) { return rfv_closed_at(f, x); }, 12.0, 2e-3);
        std::size_t strict = 0;
        for (const auto& p : points) strict += p.kind != StationaryKind::Saddle;
        CHECK(strict >= scan.size());
    }
}

TEST_CASE("tail classification") {
    CHECK(classify_tail(Binomial{0.3, 5}) == TailBehavior::IncreasingToInfinity);
    CHECK(classify_tail(NegBinPositive{0.4, 1}) == TailBehavior::DecreasingToZero);
    CHECK(classify_tail(GammaFrailty{1.0, 0.5}) == TailBehavior::Constant);
    CHECK(classify_tail(Addams{0.3, 0.5}) == TailBehavior::IncreasingToInfinity);
    CHECK(classify_tail(Addams{-0.3, 0.5}) == TailBehavior::DecreasingToZero);
}

TEST_CASE("addams tails are realised numerically") {
    const Addams up{0.5, 0.7}, down{-0.6, 0.5};
    CHECK(rfv_at(up, 20.0) / rfv_at(up, 0.0) > 1e4);
    CHECK(rfv_at(down, 40.0) < 1e-8);
    for (double s = 0.0; s <= 10.0; s += 0.5) CHECK(rfv_derivative(Addams{-0.2, 0.5}, s) < 0);
}

TEST_CASE("curve") {
    const auto c = curve(Poisson{2.0}, {0.0, 1.0, 2.0});
    CHECK(c.rfv[0] == doctest::Approx(0.5));
    CHECK(c.rfv[1] == doctest::Approx(std::exp(1.0) / 2));
    CHECK(c.rfv[2] == doctest::Approx(std::exp(2.0) / 2));
    CHECK(c.crf[2] == doctest::Approx(1 + std::exp(2.0) / 2));
    CHECK(c.tail == TailBehavior::IncreasingToInfinity);

    const auto fig = catalog::kpoint_figure();
    CHECK(curve(fig[1].family, {0, 1, 2, 3, 4, 5, 6}).tail == TailBehavior::IncreasingToInfinity);

    const auto flat = curve(Addams{0.0, 0.5}, {0.0, 2.5, 5.0});
    for (double v : flat.rfv) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));

    const auto dec = curve(Addams{-0.2, 0.5}, {0.0, 1.0, 2.0, 3.0, 4.0});
    for (std::size_t i = 1; i < dec.rfv.size(); ++i) CHECK(dec.rfv[i] < dec.rfv[i - 1]);

    CHECK_THROWS_AS(curve(Poisson{2.0}, {1.0, 0.5}), Error);
}

TEST_CASE("curve flags overflow instead of failing") {
    const auto c = curve(Poisson{2.0}, {0.0, 800.0});
    REQUIRE(c.overflow.size() == 2);
    CHECK(!c.overflow[0]);
    CHECK(c.overflow[1]);
    CHECK(std::isinf(c.rfv[1]));
}
