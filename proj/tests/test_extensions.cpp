#include <doctest.h>

#include <cmath>
#include <vector>

#include "frailty/error.hpp"
#include "frailty/extensions.hpp"
#include "frailty/shapes.hpp"
#include "frailty/survivor.hpp"

using namespace frailty;

namespace {

std::vector<BaselineHazard> unit_rates(std::size_t j) { return std::vector<BaselineHazard>(j, ExponentialRate{1.0}); }

}  // namespace

TEST_CASE("correlated model d(t)") {
    const CorrelatedPoissonModel m{{1.0, 2.0}, GammaFrailty{1.0, 0.5}, unit_rates(2)};
    const std::vector<double> zero{0.0, 0.0}, ln2{std::log(2.0), std::log(2.0)}, far{60.0, 60.0};
    CHECK(d_of_t(m, zero) == 0.0);
    CHECK(d_of_t(m, ln2) == doctest::Approx(1.5));
    CHECK(d_of_t(m, far) == doctest::Approx(3.0));
}

TEST_CASE("correlated crf reuses the latent rfv at d") {
    const CorrelatedPoissonModel m{{1.0, 2.0}, Poisson{2.0}, unit_rates(2)};
    CHECK(correlated_crf_at_d(m, 1.0) == doctest::Approx(1 + std::exp(1.0) / 2).epsilon(1e-12));
    const std::vector<double> far{80.0, 80.0};
    CHECK(correlated_crf(m, far) == doctest::Approx(1 + std::exp(3.0) / 2).epsilon(1e-10));
}

TEST_CASE("correlated crf is invariant to relabelling targets") {
    const std::vector<BaselineHazard> hs{ExponentialRate{1.0}, Weibull{2.0, 1.5}, ExponentialRate{0.3}};
    const std::vector<BaselineHazard> swapped{hs[2], hs[0], hs[1]};
    const CorrelatedPoissonModel a{{1.0, 2.0, 0.5}, Poisson{1.2}, hs};
    const CorrelatedPoissonModel b{{0.5, 1.0, 2.0}, Poisson{1.2}, swapped};
    for (double s = 0.0; s <= 3.0; s += 0.5) {
        const std::vector<double> t{s, 2 * s, s / 3}, tb{s / 3, s, 2 * s};
        CHECK(correlated_crf(a, t) == doctest::Approx(correlated_crf(b, tb)).epsilon(1e-14));
    }
}

TEST_CASE("correlated crf approaches its limit monotonically for poisson W") {
    const CorrelatedPoissonModel m{{1.0, 2.0}, Poisson{1.5}, unit_rates(2)};
    double prev = 0;
    for (double s = 0.0; s <= 30.0; s += 0.25) {
        const std::vector<double> t{s, s};
        const double v = correlated_crf(m, t);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev == doctest::Approx(correlated_crf_at_d(m, 3.0)).epsilon(1e-9));
}

TEST_CASE("frailty correlation") {
    // equal etas, unit-mean W with variance v: v eta / (v eta + 1)
    const double v = 0.5, eta = 2.0;
    const CorrelatedPoissonModel m{{eta, eta}, GammaFrailty{1.0, v}, unit_rates(2)};
    CHECK(frailty_correlation(m, 0, 1) == doctest::Approx(v * eta / (v * eta + 1)).epsilon(1e-14));
    const auto mc = sample_frailty_correlation(m, 0, 1, 200000, 77);
    CHECK(std::abs(mc.estimate - frailty_correlation(m, 0, 1)) < 3.5 * mc.std_error);
}

TEST_CASE("piecewise model with a single segment is the time-invariant oracle") {
    const PiecewiseFrailtyModel m{{}, {Poisson{2.0}}, Coupling::Independent, unit_rates(1), {}};
    for (double t : {0.0, 0.5, 1.0, 3.0, 10.0}) {
        const std::vector<double> at{t};
        CHECK(piecewise_rfv(m, at) == doctest::Approx(oracle::rfv(Poisson{2.0}, t)).epsilon(1e-12));
    }
    const std::vector<double> one{1.0};
    CHECK(piecewise_rfv(m, one) == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-10));
}

TEST_CASE("piecewise independent coupling runs the final segment on its own clock") {
    const PiecewiseFrailtyModel m{{1.5}, {NegBin{0.4, 2.0}, Poisson{2.0}}, Coupling::Independent, unit_rates(2), {}};
    const std::vector<double> t{2.0, 3.0};
    // time spent in the final segment: (2 - 1.5) + (3 - 1.5) = 2
    CHECK(piecewise_rfv(m, t) == doctest::Approx(oracle::rfv(Poisson{2.0}, 2.0)).epsilon(1e-12));
    const auto seg = segment_generic_times(m, t);
    REQUIRE(seg.size() == 2);
    CHECK(seg[0] == doctest::Approx(3.0));
    CHECK(seg[1] == doctest::Approx(2.0));
    const std::vector<double> early{1.0, 3.0};
    CHECK_THROWS_AS(piecewise_rfv(m, early), Error);
}

TEST_CASE("piecewise identical coupling is a single frailty on the full clock") {
    const PiecewiseFrailtyModel m{{1.0}, {Poisson{2.0}, Poisson{2.0}}, Coupling::Identical, unit_rates(1), {}};
    const std::vector<double> t{2.5};
    CHECK(piecewise_rfv(m, t) == doctest::Approx(oracle::rfv(Poisson{2.0}, 2.5)).epsilon(1e-12));
    const PiecewiseFrailtyModel bad{{1.0}, {Poisson{2.0}, Poisson{3.0}}, Coupling::Identical, unit_rates(1), {}};
    CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("piecewise table coupling weights the final support by earlier survival") {
    // Z_2 on {0, 1}; given Z_2 = 0 the first segment had Z_1 = 2, otherwise Z_1 = 0.
    const ConditionalTable table{{{2.0}, {0.0}}, {{1.0, 0.0}, {0.0, 1.0}}};
    const PiecewiseFrailtyModel m{{1.0}, {Poisson{1.0}, KPoint{{0.0, 1.0}, {0.5, 0.5}}}, Coupling::Table, unit_rates(1), table};
    const std::vector<double> t{1.0 + std::log(2.0)};
    // weights: z=0 -> 0.5 e^{-2}, z=1 -> 0.5 e^{-ln 2}
    const double w0 = 0.5 * std::exp(-2.0), w1 = 0.5 * 0.5;
    const double mean = w1 / (w0 + w1);
    const auto pmf = piecewise_survivor_pmf(m, t);
    CHECK(pmf.probs[1] == doctest::Approx(mean).epsilon(1e-13));
    CHECK(piecewise_rfv(m, t) == doctest::Approx((mean - mean * mean) / (mean * mean)).epsilon(1e-12));
}

TEST_CASE("piecewise tails follow the final segment") {
    const PiecewiseFrailtyModel a{{1.0}, {NegBinPositive{0.5, 2}, Poisson{2.0}}, Coupling::Independent, unit_rates(1), {}};
    const PiecewiseFrailtyModel b{{1.0}, {Poisson{2.0}, NegBinPositive{0.5, 2}}, Coupling::Independent, unit_rates(1), {}};
    CHECK(piecewise_tail(a) == TailBehavior::IncreasingToInfinity);
    CHECK(piecewise_tail(b) == TailBehavior::DecreasingToZero);
    const PiecewiseFrailtyModel k{{1.0}, {Poisson{2.0}, KPoint{{0.0, 1.0}, {0.5, 0.5}}}, Coupling::Independent, unit_rates(1), {}};
    const std::vector<double> late{40.0};
    CHECK(piecewise_survivor_pmf(k, late).probs[0] > 1 - 1e-12);
}

TEST_CASE("time-varying shift") {
    const TimeVaryingShift half{Poisson{4.0}, {ShiftKind::ExpHalf, 4.0}};
    CHECK(timevarying_shift_rfv(half, 0.0) == doctest::Approx(0.25 * 0.25).epsilon(1e-14));
    CHECK(std::abs(timevarying_shift_rfv(half, 30.0) - 0.25) < 1e-6);

    const TimeVaryingShift floor{Poisson{4.0}, {ShiftKind::ConstantFloor, 0.5}};
    CHECK(timevarying_shift_rfv(floor, 40.0) < 1e-8);

    const TimeVaryingShift sine{Poisson{4.0}, {ShiftKind::ExpHalfSine, 4.0}};
    double lo = 1e300, hi = 0;
    for (double s = 5.0; s <= 40.0; s += 0.05) {
        const double v = timevarying_shift_rfv(sine, s);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo > 0.05 / 4.0);
    CHECK(lo > 0.0);
    CHECK(hi <= 0.25);

    // ExpFull: p = eta e^{-L} matches -L_*'/L_*, halving the ratio for good.
    const TimeVaryingShift full{Poisson{4.0}, {ShiftKind::ExpFull, 4.0}};
    for (double s : {0.0, 1.0, 10.0})
        CHECK(timevarying_shift_rfv(full, s) == doctest::Approx(std::exp(s) / 16.0).epsilon(1e-13));
    CHECK_THROWS_AS(validate(TimeVaryingShift{Poisson{2.0}, {ShiftKind::ConstantFloor, 0.0}}), Error);
}
