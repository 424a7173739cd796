#pragma once

// Monte Carlo simulation of clustered event times under a shared frailty and
// empirical estimators of the RFV, the CRF and population survival.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "frailty/family.hpp"
#include "frailty/hazard.hpp"

namespace frailty {

/// An event time that is either finite or never happens (cured cluster).
class EventTime {
public:
    static EventTime cured() noexcept { return EventTime(); }
    static EventTime at(double t);

    bool is_cured() const noexcept { return !finite_; }
    /// The finite time; Unsupported for a cured time.
    double value() const;
    /// True when the event has not happened by t (always true if cured).
    bool after(double t) const noexcept { return !finite_ || time_ > t; }

    bool operator==(const EventTime&) const = default;

private:
    EventTime() = default;
    bool finite_ = false;
    double time_ = 0.0;
};

struct ClusterSample {
    double z = 0.0;
    std::vector<EventTime> times;
    /// Administrative censoring time when the config sets one.
    std::optional<double> censored_at;

    /// True if some event is unobserved because of censoring.
    bool censored() const noexcept;
};

struct SimConfig {
    FrailtyFamily family;
    std::vector<BaselineHazard> hazards;
    std::size_t n_clusters = 1;
    std::uint64_t seed = 0;
    std::optional<double> censor_time;
};

/// Draws for cluster i use the random stream (seed, i) only.
std::vector<ClusterSample> simulate(const SimConfig& cfg);

struct RfvEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_at_risk = 0;
};

inline constexpr std::size_t kMinAtRisk = 30;
inline constexpr int kBootstrapResamples = 200;

/// Sample variance over squared sample mean of z among clusters with every
/// T_j > t_j; bootstrap standard error from `resamples` resamples.
RfvEstimate empirical_rfv(std::span<const ClusterSample> samples,
                          std::span<const BaselineHazard> hazards, std::span<const double> t,
                          std::uint64_t bootstrap_seed, int resamples = kBootstrapResamples);

struct CrfEstimate {
    double estimate = 0.0;
    /// Delta-method standard error of the ratio.
    double std_error = 0.0;
    double window = 0.0;
    std::size_t numerator_at_risk = 0;
    std::size_t numerator_events = 0;
    std::size_t denominator_at_risk = 0;
    std::size_t denominator_events = 0;
};

/// Windowed hazard ratio for target j given that target j_prime fails in
/// (t_j', t_j' + delta] versus survives past t_j'. `window` is measured on
/// the cumulative hazard scale of each target.
CrfEstimate empirical_crf(std::span<const ClusterSample> samples,
                          std::span<const BaselineHazard> hazards, std::span<const double> t,
                          std::size_t j, std::size_t j_prime, double window);

struct AdaptiveCrfEstimate {
    CrfEstimate estimate;
    /// 2 |est(w) - est(w / 2)| at the accepted window.
    double bias_bound = 0.0;
};

/// Starts at `initial_window` and halves until the estimate moves by less
/// than half a standard error.
AdaptiveCrfEstimate empirical_crf_adaptive(std::span<const ClusterSample> samples,
                                           std::span<const BaselineHazard> hazards,
                                           std::span<const double> t, std::size_t j,
                                           std::size_t j_prime, double initial_window = 0.05);

struct SurvivalEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Fraction of clusters with every T_j > t_j and its binomial standard error.
SurvivalEstimate empirical_survival(std::span<const ClusterSample> samples, std::span<const double> t);

/// Fraction of clusters with z = 0.
double cure_fraction(std::span<const ClusterSample> samples);

}  // namespace frailty
