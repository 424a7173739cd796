#include "frailty/simulation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "frailty/error.hpp"
#include "frailty/parallel.hpp"
#include "frailty/rng.hpp"
#include "frailty/sampling.hpp"

namespace frailty {

namespace {

constexpr int kMaxHalvings = 8;

void require_times(std::span<const ClusterSample> samples, std::span<const double> t) {
    for (double x : t)
        if (!(x >= 0.0)) fail(ErrorKind::ParameterOutOfRange, "time points must be >= 0");
    if (!samples.empty() && samples.front().times.size() != t.size())
        fail(ErrorKind::LengthMismatch, "time vector length differs from the number of targets");
}

bool survives(const ClusterSample& s, std::span<const double> t) {
    for (std::size_t j = 0; j < t.size(); ++j)
        if (!s.times[j].after(t[j])) return false;
    return true;
}

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
};

double relative_variance(double n, double mean, double centred_sum_sq) {
    if (!(mean > 0.0)) fail(ErrorKind::DegenerateConditional, "empirical rfv: mean frailty of survivors is zero");
    return centred_sum_sq / (n - 1.0) / (mean * mean);
}

}  // namespace

EventTime EventTime::at(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::ParameterOutOfRange, "event time must be finite and >= 0");
    EventTime e;
    e.finite_ = true;
    e.time_ = t;
    return e;
}

double EventTime::value() const {
    if (!finite_) fail(ErrorKind::Unsupported, "event time is infinite (cured)");
    return time_;
}

bool ClusterSample::censored() const noexcept {
    if (!censored_at) return false;
    for (const auto& e : times)
        if (e.after(*censored_at)) return true;
    return false;
}

std::vector<ClusterSample> simulate(const SimConfig& cfg) {
    if (cfg.n_clusters < 1) fail(ErrorKind::ParameterOutOfRange, "n_clusters must be >= 1");
    if (cfg.hazards.empty()) fail(ErrorKind::ParameterOutOfRange, "at least one baseline hazard is required");
    for (const auto& h : cfg.hazards) validate(h);
    if (cfg.censor_time && !(*cfg.censor_time > 0.0))
        fail(ErrorKind::ParameterOutOfRange, "censor_time must be > 0");
    const FrailtySampler sampler(cfg.family);

    std::vector<ClusterSample> out(cfg.n_clusters);
    parallel_for(cfg.n_clusters, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterRng rng(cfg.seed, i);
            ClusterSample& s = out[i];
            s.z = sampler(rng);
            s.times.reserve(cfg.hazards.size());
            for (const auto& h : cfg.hazards) {
                const double e = sample_exponential(rng);
                s.times.push_back(s.z > 0.0 ? EventTime::at(inverse_cumulative(h, e / s.z)) : EventTime::cured());
            }
            s.censored_at = cfg.censor_time;
        }
    });
    return out;
}

RfvEstimate empirical_rfv(std::span<const ClusterSample> samples,
                          std::span<const BaselineHazard> hazards, std::span<const double> t,
                          std::uint64_t bootstrap_seed, int resamples) {
    if (hazards.size() != t.size()) fail(ErrorKind::LengthMismatch, "hazards and time vector differ in length");
    require_times(samples, t);
    std::vector<double> z;
    for (const auto& s : samples)
        if (survives(s, t)) z.push_back(s.z);
    if (z.size() < kMinAtRisk) {
        std::ostringstream os;
        os << "empirical rfv: " << z.size() << " clusters at risk, need " << kMinAtRisk;
        fail(ErrorKind::TooFewAtRisk, os.str());
    }
    const double n = static_cast<double>(z.size());
    double mean_z = 0.0;
    for (double v : z) mean_z += v;
    mean_z /= n;
    double ss_z = 0.0;
    for (double v : z) ss_z += (v - mean_z) * (v - mean_z);

    RfvEstimate out;
    out.n_at_risk = z.size();
    out.estimate = relative_variance(n, mean_z, ss_z);
    if (resamples < 2) return out;

    // Each resample draws from its own stream; sums are shifted by the
    // full-sample mean so the one-pass variance stays accurate.
    std::vector<double> boot(static_cast<std::size_t>(resamples));
    const double shift = mean_z;
    parallel_for(boot.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            CounterRng rng(bootstrap_seed, b);
            Accumulator acc;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double v = z[rng.below(z.size())] - shift;
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            const double mean_shifted = acc.sum / n;
            const double ss = acc.sum_sq - n * mean_shifted * mean_shifted;
            boot[b] = relative_variance(n, mean_shifted + shift, ss);
        }
    });
    double mean = 0.0;
    for (double v : boot) mean += v;
    mean /= boot.size();
    double ss = 0.0;
    for (double v : boot) ss += (v - mean) * (v - mean);
    out.std_error = std::sqrt(ss / (boot.size() - 1.0));
    return out;
}

CrfEstimate empirical_crf(std::span<const ClusterSample> samples,
                          std::span<const BaselineHazard> hazards, std::span<const double> t,
                          std::size_t j, std::size_t j_prime, double window) {
    if (hazards.size() != t.size()) fail(ErrorKind::LengthMismatch, "hazards and time vector differ in length");
    require_times(samples, t);
    if (t.size() < 2) fail(ErrorKind::ParameterOutOfRange, "empirical crf needs at least two targets");
    if (j >= t.size() || j_prime >= t.size() || j == j_prime)
        fail(ErrorKind::ParameterOutOfRange, "empirical crf: j and j_prime must be distinct valid targets");
    if (!(window > 0.0) || !std::isfinite(window))
        fail(ErrorKind::ParameterOutOfRange, "empirical crf: window must be > 0");

    auto window_end = [&](std::size_t k) {
        return inverse_cumulative(hazards[k], cumulative(hazards[k], t[k]) + window);
    };
    const double end_j = window_end(j);
    const double end_jp = window_end(j_prime);

    CrfEstimate out;
    out.window = window;
    for (const auto& s : samples) {
        bool others = true;
        for (std::size_t l = 0; l < t.size() && others; ++l)
            if (l != j && l != j_prime && !s.times[l].after(t[l])) others = false;
        if (!others || !s.times[j].after(t[j])) continue;
        const EventTime& co = s.times[j_prime];
        if (!co.after(t[j_prime])) continue;
        const bool event = !s.times[j].after(end_j);
        ++out.denominator_at_risk;
        out.denominator_events += event;
        if (!co.after(end_jp)) {
            ++out.numerator_at_risk;
            out.numerator_events += event;
        }
    }
    if (out.numerator_at_risk < kMinAtRisk || out.denominator_at_risk < kMinAtRisk) {
        std::ostringstream os;
        os << "empirical crf: " << out.numerator_at_risk << " / " << out.denominator_at_risk
           << " clusters at risk, need " << kMinAtRisk;
        fail(ErrorKind::TooFewAtRisk, os.str());
    }
    if (out.numerator_events == 0 || out.denominator_events == 0)
        fail(ErrorKind::EmptyWindow, "empirical crf: no events of the target inside the window");

    const double p1 = double(out.numerator_events) / out.numerator_at_risk;
    const double p2 = double(out.denominator_events) / out.denominator_at_risk;
    out.estimate = p1 / p2;
    const double v = (1.0 - p1) / (out.numerator_at_risk * p1) + (1.0 - p2) / (out.denominator_at_risk * p2);
    out.std_error = out.estimate * std::sqrt(v);
    return out;
}

AdaptiveCrfEstimate empirical_crf_adaptive(std::span<const ClusterSample> samples,
                                           std::span<const BaselineHazard> hazards,
                                           std::span<const double> t, std::size_t j,
                                           std::size_t j_prime, double initial_window) {
    CrfEstimate current = empirical_crf(samples, hazards, t, j, j_prime, initial_window);
    double moved = std::numeric_limits<double>::infinity();
    for (int h = 0; h < kMaxHalvings; ++h) {
        CrfEstimate finer;
        try {
            finer = empirical_crf(samples, hazards, t, j, j_prime, current.window / 2.0);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TooFewAtRisk && e.kind() != ErrorKind::EmptyWindow) throw;
            break;
        }
        const double step = std::abs(finer.estimate - current.estimate);
        if (step < 0.5 * finer.std_error) return {current, 2.0 * step};
        current = finer;
        moved = step;
    }
    // Out of data before the estimate settled: report the last change.
    return {current, 2.0 * moved};
}

SurvivalEstimate empirical_survival(std::span<const ClusterSample> samples, std::span<const double> t) {
    require_times(samples, t);
    SurvivalEstimate out;
    out.n = samples.size();
    if (out.n == 0) fail(ErrorKind::TooFewAtRisk, "empirical survival: no samples");
    std::size_t alive = 0;
    for (const auto& s : samples) alive += survives(s, t);
    out.estimate = double(alive) / out.n;
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / out.n);
    return out;
}

double cure_fraction(std::span<const ClusterSample> samples) {
    if (samples.empty()) return 0.0;
    std::size_t cured = 0;
    for (const auto& s : samples) cured += s.z == 0.0;
    return double(cured) / samples.size();
}

}  // namespace frailty
