#pragma once

// Departures from a single time-invariant shared frailty: a correlated
// Poisson frailty model, piecewise-constant frailty over time, and a
// time-varying shift of the support.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "frailty/family.hpp"
#include "frailty/hazard.hpp"
#include "frailty/shapes.hpp"
#include "frailty/survivor.hpp"

namespace frailty {

// ---- correlated Poisson frailties -------------------------------------

/// Z_j | W ~ Poisson(eta_j W), conditionally independent across targets.
struct CorrelatedPoissonModel {
    std::vector<double> etas;
    FrailtyFamily w_dist = GammaFrailty{};
    std::vector<BaselineHazard> hazards;
};

void validate(const CorrelatedPoissonModel& model);

/// d(t) = sum_j eta_j (1 - exp(-H_j(t_j))).
double d_of_t(const CorrelatedPoissonModel& model, std::span<const double> t);

/// L_W'' L_W / L_W'^2 at d; the same for every pair of targets.
double correlated_crf_at_d(const CorrelatedPoissonModel& model, double d);

double correlated_crf(const CorrelatedPoissonModel& model, std::span<const double> t);

/// Corr(Z_j, Z_j') implied by the model.
double frailty_correlation(const CorrelatedPoissonModel& model, std::size_t j, std::size_t j_prime);

struct CorrelationEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Sample correlation of (Z_j, Z_j') over n simulated clusters; standard
/// error from 100 batches of consecutive clusters.
CorrelationEstimate sample_frailty_correlation(const CorrelatedPoissonModel& model, std::size_t j,
                                               std::size_t j_prime, std::size_t n, std::uint64_t seed);

// ---- piecewise-constant frailty ----------------------------------------

enum class Coupling { Independent, Identical, Table };

/// P(Z_1, ..., Z_{Q-1} = histories[h] | Z_Q = z_k) = probs[k][h], where k
/// indexes the support of the final segment family.
struct ConditionalTable {
    std::vector<std::vector<double>> histories;
    std::vector<std::vector<double>> probs;
};

/// Z(t) = Z_q on [cutpoints[q-1], cutpoints[q]).
struct PiecewiseFrailtyModel {
    std::vector<double> cutpoints;
    std::vector<FrailtyFamily> segment_families;
    Coupling coupling = Coupling::Independent;
    std::vector<BaselineHazard> hazards;
    std::optional<ConditionalTable> table;
};

void validate(const PiecewiseFrailtyModel& model);

/// Generic time accumulated inside each segment, one entry per segment.
std::vector<double> segment_generic_times(const PiecewiseFrailtyModel& model, std::span<const double> t);

/// Survivor pmf of the final segment frailty; every t_j must be at or past
/// the last cutpoint (TimeBeforeFinalSegment otherwise).
oracle::SurvivorPmf piecewise_survivor_pmf(const PiecewiseFrailtyModel& model, std::span<const double> t);

double piecewise_rfv(const PiecewiseFrailtyModel& model, std::span<const double> t);

/// Long-run behaviour, decided by the final segment family.
TailBehavior piecewise_tail(const PiecewiseFrailtyModel& model);

// ---- time-varying shift -------------------------------------------------

enum class ShiftKind { ExpHalf, ExpHalfSine, ExpFull, ConstantFloor };

struct ShiftFunction {
    ShiftKind kind = ShiftKind::ExpHalf;
    /// eta for the exponential variants, eps for ConstantFloor.
    double value = 1.0;

    double operator()(double lambda) const;
};

/// Z(t) = Z_* + p(t).
struct TimeVaryingShift {
    FrailtyFamily inner = Poisson{};
    ShiftFunction shift;
};

void validate(const TimeVaryingShift& model);

/// RFV_*(L) [L_*'(L) / (L_*'(L) - p L_*(L))]^2; DivisionNearZero when the
/// denominator vanishes.
double timevarying_shift_rfv(const TimeVaryingShift& model, double lambda);

}  // namespace frailty
