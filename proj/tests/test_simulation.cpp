#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "frailty/error.hpp"
#include "frailty/rng.hpp"
#include "frailty/sampling.hpp"
#include "frailty/shapes.hpp"
#include "frailty/simulation.hpp"

using namespace frailty;

namespace {

std::vector<BaselineHazard> exp_hazards(std::size_t j) { return std::vector<BaselineHazard>(j, ExponentialRate{1.0}); }

void set_threads(const char* n) { ::setenv("FRAILTY_SHAPES_THREADS", n, 1); }

}  // namespace

TEST_CASE("counter rng is a pure function of seed, stream and position") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    CounterRng u(1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK(u.below(5) < 5);
    }
}

TEST_CASE("simulation is identical for any thread count") {
    const SimConfig cfg{Poisson{2.0}, exp_hazards(2), 20000, 99, {}};
    set_threads("1");
    const auto one = simulate(cfg);
    set_threads("4");
    const auto four = simulate(cfg);
    ::unsetenv("FRAILTY_SHAPES_THREADS");
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].z == four[i].z);
        CHECK(one[i].times == four[i].times);
    }
    // A prefix of a larger run is the smaller run.
    SimConfig bigger = cfg;
    bigger.n_clusters = 30000;
    const auto big = simulate(bigger);
    CHECK(big[12345].z == one[12345].z);
    CHECK(big[12345].times == one[12345].times);
}

TEST_CASE("cured clusters never fail and cure fraction matches the atom at zero") {
    const SimConfig cfg{Poisson{2.0}, exp_hazards(1), 200000, 5, {}};
    const auto samples = simulate(cfg);
    for (const auto& s : samples)
        if (s.z == 0.0) CHECK(s.times[0].is_cured());
    const double p0 = std::exp(-2.0);
    const double se = std::sqrt(p0 * (1 - p0) / samples.size());
    CHECK(std::abs(cure_fraction(samples) - p0) < 4 * se);

    const SimConfig positive{NegBinPositive{0.5, 2}, exp_hazards(1), 10000, 5, {}};
    CHECK(cure_fraction(simulate(positive)) == 0.0);
}

TEST_CASE("censoring marks clusters whose events fall after the censoring time") {
    const SimConfig cfg{Poisson{1.0}, exp_hazards(2), 5000, 8, 0.5};
    for (const auto& s : simulate(cfg)) {
        bool late = false;
        for (const auto& t : s.times) late = late || t.after(0.5);
        CHECK(s.censored() == late);
    }
}

TEST_CASE("frailty sampler reproduces family moments") {
    const std::vector<FrailtyFamily> families{Poisson{3.0},          Poisson{60.0},         NegBin{0.3, 1.7},
                                              Binomial{0.3, 5},      Shifted{Poisson{2.0}, 1.0},
                                              GammaFrailty{1.0, 0.5}, GammaFrailty{2.0, 8.0}, Addams{0.0, 0.5},
                                              ZeroModifiedPoisson{3.0, 0.05}};
    for (const auto& f : families) {
        FrailtySampler sample(f);
        CounterRng rng(3, 0);
        const int n = 200000;
        double s1 = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const double z = sample(rng);
            s1 += z;
            s2 += z * z;
        }
        const auto m = moments(f);
        const double mean = s1 / n, var = s2 / n - mean * mean;
        INFO(family_name(f));
        CHECK(std::abs(mean - m.mean) < 5 * std::sqrt(m.variance / n));
        CHECK(var == doctest::Approx(m.variance).epsilon(0.05));
    }
    CHECK_THROWS_AS(FrailtySampler(Addams{0.3, 0.5}), Error);
}

TEST_CASE("empirical rfv without selection and after selection") {
    const SimConfig cfg{Poisson{2.0}, exp_hazards(1), 200000, 17, {}};
    const auto samples = simulate(cfg);
    for (double t : {0.0, 1.0}) {
        const std::vector<double> at{t};
        const auto est = empirical_rfv(samples, cfg.hazards, at, 1);
        CHECK(std::abs(est.estimate - rfv_at(cfg.family, t)) < 3.5 * est.std_error);
    }
    const std::vector<double> far{30.0};
    CHECK_THROWS_AS(empirical_rfv(samples, cfg.hazards, far, 1), Error);
}

TEST_CASE("empirical rfv trends to zero when the smallest support point is positive") {
    const SimConfig cfg{NegBinPositive{0.5, 2}, exp_hazards(1), 200000, 18, {}};
    const auto samples = simulate(cfg);
    const std::vector<double> early{0.0}, late{2.0};
    CHECK(empirical_rfv(samples, cfg.hazards, late, 2).estimate < 0.3 * empirical_rfv(samples, cfg.hazards, early, 2).estimate);
}

TEST_CASE("empirical crf is close to one without heterogeneity") {
    const SimConfig cfg{KPoint{{1.0, 1.0 + 1e-9}, {0.5, 0.5}}, exp_hazards(2), 200000, 19, {}};
    const auto samples = simulate(cfg);
    const std::vector<double> t{0.3, 0.3};
    const auto est = empirical_crf(samples, cfg.hazards, t, 0, 1, 0.05);
    CHECK(std::abs(est.estimate - 1.0) < 3.5 * est.std_error);
    CHECK_THROWS_AS(empirical_crf(samples, cfg.hazards, t, 0, 0, 0.05), Error);
    CHECK_THROWS_AS(empirical_crf(samples, cfg.hazards, t, 0, 1, 0.0), Error);
}

TEST_CASE("empirical survival is calibrated against the transform") {
    // Standardised errors over independent seeds should look standard normal.
    const std::vector<BaselineHazard> hs(2, ExponentialRate{1.0});
    const std::vector<double> t{0.4, 0.7};
    const double want = laplace(Binomial{0.3, 5}, 1.1).l0;
    const int runs = 25;
    double sum = 0, sum_sq = 0;
    for (int seed = 0; seed < runs; ++seed) {
        const SimConfig cfg{Binomial{0.3, 5}, hs, 20000, std::uint64_t(1000 + seed), {}};
        const auto s = empirical_survival(simulate(cfg), t);
        const double z = (s.estimate - want) / s.std_error;
        sum += z;
        sum_sq += z * z;
    }
    CHECK(std::abs(sum / runs) < 3.0 / std::sqrt(double(runs)));
    CHECK(sum_sq / runs < 2.0);
}
