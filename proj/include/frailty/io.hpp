#pragma once

// JSON construction of families, hazards and models, and the CSV / JSON
// output formats shared by the command-line tool and the Python bindings.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "frailty/extensions.hpp"
#include "frailty/family.hpp"
#include "frailty/hazard.hpp"
#include "frailty/shapes.hpp"
#include "frailty/simulation.hpp"
#include "frailty/survivor.hpp"

namespace frailty::io {

using Json = nlohmann::json;

/// {"family": "poisson", "params": {"eta": 2}}. Malformed documents raise
/// InvalidConfig; out-of-range parameters raise the validate() errors.
FrailtyFamily family_from_json(const Json& doc);
Json to_json(const FrailtyFamily& family);

/// {"hazard": "weibull", "params": {"shape": 2, "scale": 1}}.
BaselineHazard hazard_from_json(const Json& doc);
Json to_json(const BaselineHazard& hazard);
std::vector<BaselineHazard> hazards_from_json(const Json& doc);

struct Grid {
    double start = 0.0;
    double stop = 1.0;
    std::size_t points = 2;

    std::vector<double> values() const;
};

/// {"start": 0, "stop": 5, "points": 101}; points >= 2, stop > start >= 0.
Grid grid_from_json(const Json& doc);

SimConfig sim_config_from_json(const Json& doc);
CorrelatedPoissonModel correlated_from_json(const Json& doc);
PiecewiseFrailtyModel piecewise_from_json(const Json& doc);
TimeVaryingShift timevarying_from_json(const Json& doc);

std::string to_string(ShiftKind kind);
std::string to_string(Coupling coupling);

/// 17 significant digits, "." as decimal point; "inf", "-inf" or "nan".
std::string format_number(double value);

/// Header "lambda,rfv,crf".
void write_curve_csv(std::ostream& out, const ShapeCurve& curve);
/// Stationary points, tail class, overflow flags and the family.
Json curve_sidecar(const ShapeCurve& curve);

/// Header "z,prob".
void write_pmf_csv(std::ostream& out, const oracle::SurvivorPmf& pmf);

/// Header "cluster_id,z,t_1,...,t_J,censored". Cured times are "inf";
/// with a censoring time, times beyond it are written as the censoring time.
void write_samples_csv(std::ostream& out, std::span<const ClusterSample> samples);

}  // namespace frailty::io
