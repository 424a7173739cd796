#include "frailty/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frailty/error.hpp"
#include "frailty/parallel.hpp"
#include "frailty/rng.hpp"
#include "frailty/sampling.hpp"

namespace frailty {

namespace {

constexpr std::size_t kCorrelationBatches = 100;

void require_length(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        std::ostringstream os;
        os << what << ": expected " << expected << " time points, got " << got;
        fail(ErrorKind::LengthMismatch, os.str());
    }
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

void validate(const CorrelatedPoissonModel& model) {
    if (model.etas.size() < 2) fail(ErrorKind::ParameterOutOfRange, "correlated model: need at least two targets");
    for (double eta : model.etas)
        if (!(eta > 0.0) || !std::isfinite(eta))
            fail(ErrorKind::ParameterOutOfRange, "correlated model: every eta must be > 0");
    if (model.hazards.size() != model.etas.size())
        fail(ErrorKind::LengthMismatch, "correlated model: one baseline hazard per eta is required");
    for (const auto& h : model.hazards) validate(h);
    validate(model.w_dist);
}

double d_of_t(const CorrelatedPoissonModel& model, std::span<const double> t) {
    validate(model);
    require_length(model.etas.size(), t.size(), "d(t)");
    double d = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
        d += model.etas[j] * -std::expm1(-cumulative(model.hazards[j], t[j]));
    return d;
}

double correlated_crf_at_d(const CorrelatedPoissonModel& model, double d) {
    validate(model);
    if (!(d >= 0.0)) fail(ErrorKind::ParameterOutOfRange, "correlated crf: d must be >= 0");
    return 1.0 + rfv_from_triple(laplace(model.w_dist, d));
}

double correlated_crf(const CorrelatedPoissonModel& model, std::span<const double> t) {
    return correlated_crf_at_d(model, d_of_t(model, t));
}

double frailty_correlation(const CorrelatedPoissonModel& model, std::size_t j, std::size_t j_prime) {
    validate(model);
    if (j >= model.etas.size() || j_prime >= model.etas.size() || j == j_prime)
        fail(ErrorKind::ParameterOutOfRange, "frailty correlation: j and j_prime must be distinct valid targets");
    const Moments w = moments(model.w_dist);
    const double a = model.etas[j], b = model.etas[j_prime];
    return w.variance * std::sqrt(a * b) /
           std::sqrt((w.variance * a + w.mean) * (w.variance * b + w.mean));
}

CorrelationEstimate sample_frailty_correlation(const CorrelatedPoissonModel& model, std::size_t j,
                                               std::size_t j_prime, std::size_t n, std::uint64_t seed) {
    validate(model);
    if (j >= model.etas.size() || j_prime >= model.etas.size() || j == j_prime)
        fail(ErrorKind::ParameterOutOfRange, "frailty correlation: j and j_prime must be distinct valid targets");
    if (n < 2 * kCorrelationBatches)
        fail(ErrorKind::TooFewAtRisk, "frailty correlation: need at least 200 clusters");
    const FrailtySampler sampler(model.w_dist);
    std::vector<double> x(n), y(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterRng rng(seed, i);
            const double w = sampler(rng);
            x[i] = sample_poisson(model.etas[j] * w, rng);
            y[i] = sample_poisson(model.etas[j_prime] * w, rng);
        }
    });
    CorrelationEstimate out;
    out.estimate = pearson(x, y);
    const std::size_t size = n / kCorrelationBatches;
    double mean = 0.0, ss = 0.0;
    std::vector<double> r(kCorrelationBatches);
    for (std::size_t b = 0; b < kCorrelationBatches; ++b) {
        r[b] = pearson(std::span(x).subspan(b * size, size), std::span(y).subspan(b * size, size));
        mean += r[b];
    }
    mean /= kCorrelationBatches;
    for (double v : r) ss += (v - mean) * (v - mean);
    out.std_error = std::sqrt(ss / (kCorrelationBatches - 1.0) / kCorrelationBatches);
    return out;
}

void validate(const PiecewiseFrailtyModel& model) {
    const std::size_t q = model.segment_families.size();
    if (q < 1) fail(ErrorKind::ParameterOutOfRange, "piecewise model: at least one segment is required");
    if (model.cutpoints.size() + 1 != q)
        fail(ErrorKind::ParameterOutOfRange, "piecewise model: need one cutpoint fewer than segments");
    for (std::size_t i = 0; i < model.cutpoints.size(); ++i) {
        const double lo = i == 0 ? 0.0 : model.cutpoints[i - 1];
        if (!(model.cutpoints[i] > lo) || !std::isfinite(model.cutpoints[i]))
            fail(ErrorKind::ParameterOutOfRange, "piecewise model: cutpoints must be positive and increasing");
    }
    for (const auto& f : model.segment_families) validate(f);
    if (model.hazards.empty()) fail(ErrorKind::ParameterOutOfRange, "piecewise model: no baseline hazards");
    for (const auto& h : model.hazards) validate(h);

    const FrailtyFamily& last = model.segment_families.back();
    switch (model.coupling) {
        case Coupling::Independent:
            if (!has_pmf(last))
                fail(ErrorKind::Unsupported, "piecewise model: final segment family needs a pmf");
            break;
        case Coupling::Identical:
            for (const auto& f : model.segment_families)
                if (!(f == last))
                    fail(ErrorKind::ParameterOutOfRange,
                         "piecewise model: identical coupling needs the same family on every segment");
            if (!has_pmf(last))
                fail(ErrorKind::Unsupported, "piecewise model: final segment family needs a pmf");
            break;
        case Coupling::Table: {
            if (!model.table) fail(ErrorKind::ParameterOutOfRange, "piecewise model: table coupling without a table");
            if (!has_finite_support(last))
                fail(ErrorKind::Unsupported, "piecewise model: table coupling needs a finite final support");
            const auto& table = *model.table;
            const std::size_t k = enumerate_support(last).size();
            if (table.probs.size() != k)
                fail(ErrorKind::LengthMismatch, "piecewise model: one table row per final support point");
            for (const auto& h : table.histories)
                if (h.size() != q - 1)
                    fail(ErrorKind::LengthMismatch, "piecewise model: each history lists every earlier segment");
            for (const auto& row : table.probs) {
                if (row.size() != table.histories.size())
                    fail(ErrorKind::LengthMismatch, "piecewise model: table row length differs from histories");
                double sum = 0.0;
                for (double p : row) {
                    if (!(p >= 0.0)) fail(ErrorKind::ParameterOutOfRange, "piecewise model: negative table entry");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-12)
                    fail(ErrorKind::ParameterOutOfRange, "piecewise model: table rows must sum to 1");
            }
            break;
        }
    }
}

std::vector<double> segment_generic_times(const PiecewiseFrailtyModel& model, std::span<const double> t) {
    validate(model);
    require_length(model.hazards.size(), t.size(), "piecewise model");
    const std::size_t q = model.segment_families.size();
    std::vector<double> out(q, 0.0);
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (!(t[j] >= 0.0)) fail(ErrorKind::ParameterOutOfRange, "piecewise model: times must be >= 0");
        for (std::size_t s = 0; s < q; ++s) {
            const double lo = s == 0 ? 0.0 : model.cutpoints[s - 1];
            const double hi = s + 1 < q ? model.cutpoints[s] : t[j];
            out[s] += cumulative(model.hazards[j], std::min(t[j], hi)) -
                      cumulative(model.hazards[j], std::min(t[j], lo));
        }
    }
    return out;
}

oracle::SurvivorPmf piecewise_survivor_pmf(const PiecewiseFrailtyModel& model, std::span<const double> t) {
    validate(model);
    require_length(model.hazards.size(), t.size(), "piecewise model");
    if (!model.cutpoints.empty())
        for (double x : t)
            if (x < model.cutpoints.back())
                fail(ErrorKind::TimeBeforeFinalSegment, "piecewise model: every time must be in the final segment");
    const std::vector<double> lambdas = segment_generic_times(model, t);
    const FrailtyFamily& last = model.segment_families.back();
    switch (model.coupling) {
        case Coupling::Independent:
            return oracle::survivor_pmf(last, lambdas.back());
        case Coupling::Identical: {
            double total = 0.0;
            for (double l : lambdas) total += l;
            return oracle::survivor_pmf(last, total);
        }
        case Coupling::Table: {
            const auto& table = *model.table;
            const DiscreteSupport prior = enumerate_support(last);
            std::vector<double> c(prior.size(), 0.0);
            for (std::size_t k = 0; k < prior.size(); ++k)
                for (std::size_t h = 0; h < table.histories.size(); ++h) {
                    double exponent = 0.0;
                    for (std::size_t s = 0; s + 1 < lambdas.size(); ++s)
                        exponent += table.histories[h][s] * lambdas[s];
                    c[k] += table.probs[k][h] * std::exp(-exponent);
                }
            return oracle::condition_on_survival(prior, lambdas.back(), c);
        }
    }
    fail(ErrorKind::Unsupported, "piecewise model: unknown coupling");
}

double piecewise_rfv(const PiecewiseFrailtyModel& model, std::span<const double> t) {
    return oracle::relative_variance(piecewise_survivor_pmf(model, t));
}

TailBehavior piecewise_tail(const PiecewiseFrailtyModel& model) {
    validate(model);
    return classify_tail(model.segment_families.back());
}

double ShiftFunction::operator()(double lambda) const {
    switch (kind) {
        case ShiftKind::ExpHalf: return value * std::exp(-lambda / 2.0);
        case ShiftKind::ExpHalfSine: return value * std::exp(-lambda / 2.0) * (std::sin(lambda) + 2.0);
        case ShiftKind::ExpFull: return value * std::exp(-lambda);
        case ShiftKind::ConstantFloor: return value;
    }
    return value;
}

void validate(const TimeVaryingShift& model) {
    validate(model.inner);
    if (!(model.shift.value > 0.0) || !std::isfinite(model.shift.value))
        fail(ErrorKind::ParameterOutOfRange, "time-varying shift: parameter must be > 0");
}

double timevarying_shift_rfv(const TimeVaryingShift& model, double lambda) {
    validate(model);
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        fail(ErrorKind::ParameterOutOfRange, "time-varying shift: lambda must be finite and >= 0");
    const LaplaceTriple t = laplace(model.inner, lambda);
    const double denominator = t.l1 - model.shift(lambda) * t.l0;
    if (!(denominator != 0.0) || !std::isfinite(denominator)) {
        std::ostringstream os;
        os << "time-varying shift: L' - p L vanishes at Lambda = " << lambda;
        fail(ErrorKind::DivisionNearZero, os.str());
    }
    const double ratio = t.l1 / denominator;
    return rfv_from_triple(t) * ratio * ratio;
}

}  // namespace frailty
