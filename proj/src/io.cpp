#include "frailty/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "frailty/error.hpp"

namespace frailty::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& message) { fail(ErrorKind::InvalidConfig, message); }

const Json& field(const Json& doc, const char* key, const std::string& where) {
    if (!doc.is_object()) invalid(where + ": expected a JSON object");
    const auto it = doc.find(key);
    if (it == doc.end()) invalid(where + ": missing field \"" + key + "\"");
    return *it;
}

double number(const Json& doc, const char* key, const std::string& where) {
    const Json& v = field(doc, key, where);
    if (!v.is_number()) invalid(where + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

int integer(const Json& doc, const char* key, const std::string& where) {
    const double v = number(doc, key, where);
    if (v != std::floor(v) || std::abs(v) > 1e9) invalid(where + ": field \"" + key + "\" must be an integer");
    return static_cast<int>(v);
}

std::vector<double> numbers(const Json& doc, const char* key, const std::string& where) {
    const Json& v = field(doc, key, where);
    if (!v.is_array()) invalid(where + ": field \"" + key + "\" must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) invalid(where + ": field \"" + key + "\" must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::string text(const Json& doc, const char* key, const std::string& where) {
    const Json& v = field(doc, key, where);
    if (!v.is_string()) invalid(where + ": field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

ShiftableFamily shiftable(const FrailtyFamily& f) {
    if (const auto* nb = std::get_if<NegBin>(&f)) return *nb;
    if (const auto* b = std::get_if<Binomial>(&f)) return *b;
    if (const auto* p = std::get_if<Poisson>(&f)) return *p;
    invalid("shifted: inner family must be negbin, binomial or poisson");
}

}  // namespace

FrailtyFamily family_from_json(const Json& doc) {
    const std::string name = text(doc, "family", "family");
    const Json empty = Json::object();
    const Json& params = doc.contains("params") ? doc.at("params") : empty;
    const std::string where = "family \"" + name + "\"";
    FrailtyFamily family;
    if (name == "negbin") {
        family = NegBin{number(params, "pi", where), number(params, "nu", where)};
    } else if (name == "negbin_positive") {
        family = NegBinPositive{number(params, "pi", where), integer(params, "nu", where)};
    } else if (name == "binomial") {
        family = Binomial{number(params, "pi", where), integer(params, "n", where)};
    } else if (name == "poisson") {
        family = Poisson{number(params, "eta", where)};
    } else if (name == "shifted") {
        family = Shifted{shiftable(family_from_json(field(params, "inner", where))), number(params, "p", where)};
    } else if (name == "zero_modified_poisson") {
        family = ZeroModifiedPoisson{number(params, "eta", where), number(params, "phi", where)};
    } else if (name == "addams") {
        family = Addams{number(params, "alpha", where), number(params, "gamma", where)};
    } else if (name == "kpoint") {
        family = KPoint{numbers(params, "support", where), numbers(params, "probs", where)};
    } else if (name == "gamma") {
        family = GammaFrailty{number(params, "mean", where), number(params, "variance", where)};
    } else {
        invalid("unknown family \"" + name + "\"");
    }
    validate(family);
    return family;
}

Json to_json(const FrailtyFamily& family) {
    return std::visit(
        overloaded{
            [](const NegBin& f) { return Json{{"family", "negbin"}, {"params", {{"pi", f.pi}, {"nu", f.nu}}}}; },
            [](const NegBinPositive& f) {
                return Json{{"family", "negbin_positive"}, {"params", {{"pi", f.pi}, {"nu", f.nu}}}};
            },
            [](const Binomial& f) { return Json{{"family", "binomial"}, {"params", {{"pi", f.pi}, {"n", f.n}}}}; },
            [](const Poisson& f) { return Json{{"family", "poisson"}, {"params", {{"eta", f.eta}}}}; },
            [](const Shifted& f) {
                const FrailtyFamily inner = std::visit([](const auto& x) -> FrailtyFamily { return x; }, f.inner);
                return Json{{"family", "shifted"}, {"params", {{"inner", to_json(inner)}, {"p", f.p}}}};
            },
            [](const ZeroModifiedPoisson& f) {
                return Json{{"family", "zero_modified_poisson"}, {"params", {{"eta", f.eta}, {"phi", f.phi}}}};
            },
            [](const Addams& f) {
                return Json{{"family", "addams"}, {"params", {{"alpha", f.alpha}, {"gamma", f.gamma}}}};
            },
            [](const KPoint& f) {
                return Json{{"family", "kpoint"}, {"params", {{"support", f.support}, {"probs", f.probs}}}};
            },
            [](const GammaFrailty& f) {
                return Json{{"family", "gamma"}, {"params", {{"mean", f.mean}, {"variance", f.variance}}}};
            },
        },
        family);
}

BaselineHazard hazard_from_json(const Json& doc) {
    const std::string name = text(doc, "hazard", "hazard");
    const Json empty = Json::object();
    const Json& params = doc.contains("params") ? doc.at("params") : empty;
    const std::string where = "hazard \"" + name + "\"";
    BaselineHazard hazard;
    if (name == "exponential") {
        hazard = ExponentialRate{number(params, "rate", where)};
    } else if (name == "weibull") {
        hazard = Weibull{number(params, "shape", where), number(params, "scale", where)};
    } else if (name == "piecewise") {
        hazard = PiecewiseConstant{numbers(params, "breakpoints", where), numbers(params, "rates", where)};
    } else {
        invalid("unknown hazard \"" + name + "\"");
    }
    validate(hazard);
    return hazard;
}

Json to_json(const BaselineHazard& hazard) {
    return std::visit(
        overloaded{
            [](const ExponentialRate& h) { return Json{{"hazard", "exponential"}, {"params", {{"rate", h.rate}}}}; },
            [](const Weibull& h) {
                return Json{{"hazard", "weibull"}, {"params", {{"shape", h.shape}, {"scale", h.scale}}}};
            },
            [](const PiecewiseConstant& h) {
                return Json{{"hazard", "piecewise"},
                            {"params", {{"breakpoints", h.breakpoints}, {"rates", h.rates}}}};
            },
        },
        hazard);
}

std::vector<BaselineHazard> hazards_from_json(const Json& doc) {
    if (!doc.is_array() || doc.empty()) invalid("hazards: expected a non-empty array");
    std::vector<BaselineHazard> out;
    for (const auto& h : doc) out.push_back(hazard_from_json(h));
    return out;
}

std::vector<double> Grid::values() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = i + 1 == points ? stop : start + (stop - start) * static_cast<double>(i) / (points - 1);
    return out;
}

Grid grid_from_json(const Json& doc) {
    Grid g;
    g.start = number(doc, "start", "grid");
    g.stop = number(doc, "stop", "grid");
    const int points = integer(doc, "points", "grid");
    if (points < 2) invalid("grid: points must be >= 2");
    if (!(g.start >= 0.0) || !(g.stop > g.start) || !std::isfinite(g.stop))
        invalid("grid: need stop > start >= 0");
    g.points = static_cast<std::size_t>(points);
    return g;
}

SimConfig sim_config_from_json(const Json& doc) {
    SimConfig cfg;
    cfg.family = family_from_json(field(doc, "family", "simulate"));
    cfg.hazards = hazards_from_json(field(doc, "hazards", "simulate"));
    const int n = integer(doc, "n_clusters", "simulate");
    if (n < 1) invalid("simulate: n_clusters must be >= 1");
    cfg.n_clusters = static_cast<std::size_t>(n);
    if (doc.contains("seed")) {
        const Json& s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            invalid("simulate: seed must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("censor_time") && !doc.at("censor_time").is_null()) {
        const double c = number(doc, "censor_time", "simulate");
        if (!(c > 0.0)) invalid("simulate: censor_time must be > 0");
        cfg.censor_time = c;
    }
    return cfg;
}

CorrelatedPoissonModel correlated_from_json(const Json& doc) {
    CorrelatedPoissonModel m;
    m.etas = numbers(doc, "etas", "correlated");
    m.w_dist = family_from_json(field(doc, "w", "correlated"));
    m.hazards = hazards_from_json(field(doc, "hazards", "correlated"));
    validate(m);
    return m;
}

PiecewiseFrailtyModel piecewise_from_json(const Json& doc) {
    PiecewiseFrailtyModel m;
    m.cutpoints = numbers(doc, "cutpoints", "piecewise");
    const Json& segments = field(doc, "segments", "piecewise");
    if (!segments.is_array()) invalid("piecewise: segments must be an array of families");
    for (const auto& s : segments) m.segment_families.push_back(family_from_json(s));
    const std::string coupling = doc.contains("coupling") ? text(doc, "coupling", "piecewise") : "independent";
    if (coupling == "independent") {
        m.coupling = Coupling::Independent;
    } else if (coupling == "identical") {
        m.coupling = Coupling::Identical;
    } else if (coupling == "table") {
        m.coupling = Coupling::Table;
        const Json& t = field(doc, "table", "piecewise");
        ConditionalTable table;
        const Json& histories = field(t, "histories", "piecewise table");
        const Json& probs = field(t, "probs", "piecewise table");
        if (!histories.is_array() || !probs.is_array()) invalid("piecewise table: histories and probs must be arrays");
        try {
            table.histories = histories.get<std::vector<std::vector<double>>>();
            table.probs = probs.get<std::vector<std::vector<double>>>();
        } catch (const nlohmann::json::exception&) {
            invalid("piecewise table: histories and probs must be arrays of number arrays");
        }
        m.table = std::move(table);
    } else {
        invalid("piecewise: unknown coupling \"" + coupling + "\"");
    }
    m.hazards = hazards_from_json(field(doc, "hazards", "piecewise"));
    validate(m);
    return m;
}

TimeVaryingShift timevarying_from_json(const Json& doc) {
    TimeVaryingShift m;
    m.inner = family_from_json(field(doc, "inner", "timevarying"));
    const Json& shift = field(doc, "shift", "timevarying");
    const std::string kind = text(shift, "kind", "timevarying shift");
    if (kind == "exp_half") {
        m.shift.kind = ShiftKind::ExpHalf;
    } else if (kind == "exp_half_sine") {
        m.shift.kind = ShiftKind::ExpHalfSine;
    } else if (kind == "exp_full") {
        m.shift.kind = ShiftKind::ExpFull;
    } else if (kind == "constant_floor") {
        m.shift.kind = ShiftKind::ConstantFloor;
    } else {
        invalid("timevarying: unknown shift kind \"" + kind + "\"");
    }
    m.shift.value = number(shift, "value", "timevarying shift");
    validate(m);
    return m;
}

std::string to_string(ShiftKind kind) {
    switch (kind) {
        case ShiftKind::ExpHalf: return "exp_half";
        case ShiftKind::ExpHalfSine: return "exp_half_sine";
        case ShiftKind::ExpFull: return "exp_full";
        case ShiftKind::ConstantFloor: return "constant_floor";
    }
    return "unknown";
}

std::string to_string(Coupling coupling) {
    switch (coupling) {
        case Coupling::Independent: return "independent";
        case Coupling::Identical: return "identical";
        case Coupling::Table: return "table";
    }
    return "unknown";
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const ShapeCurve& curve) {
    out << "lambda,rfv,crf\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << format_number(curve.grid[i]) << ',' << format_number(curve.rfv[i]) << ','
            << format_number(curve.crf[i]) << '\n';
}

Json curve_sidecar(const ShapeCurve& curve) {
    Json points = Json::array();
    for (const auto& p : curve.stationary_points)
        points.push_back({{"lambda", p.lambda}, {"kind", std::string(to_string(p.kind))}});
    Json overflow = Json::array();
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        if (curve.overflow[i]) overflow.push_back(curve.grid[i]);
    return Json{{"family", to_json(curve.family)},
                {"tail", std::string(to_string(curve.tail))},
                {"stationary_points", points},
                {"overflow_lambdas", overflow},
                {"grid", {{"start", curve.grid.front()}, {"stop", curve.grid.back()}, {"points", curve.grid.size()}}}};
}

void write_pmf_csv(std::ostream& out, const oracle::SurvivorPmf& pmf) {
    out << "z,prob\n";
    for (std::size_t i = 0; i < pmf.support.size(); ++i)
        out << format_number(pmf.support[i]) << ',' << format_number(pmf.probs[i]) << '\n';
}

void write_samples_csv(std::ostream& out, std::span<const ClusterSample> samples) {
    const std::size_t targets = samples.empty() ? 0 : samples.front().times.size();
    out << "cluster_id,z";
    for (std::size_t j = 1; j <= targets; ++j) out << ",t_" << j;
    out << ",censored\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ClusterSample& s = samples[i];
        out << i << ',' << format_number(s.z);
        for (const auto& e : s.times) {
            out << ',';
            if (s.censored_at && e.after(*s.censored_at))
                out << format_number(*s.censored_at);
            else
                out << (e.is_cured() ? std::string("inf") : format_number(e.value()));
        }
        out << ',' << (s.censored() ? 1 : 0) << '\n';
    }
}

}  // namespace frailty::io
