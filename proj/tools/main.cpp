// frailty_shapes: JSON-config driven front end to the library.
// Exit codes: 0 ok, 1 verification failure, 2 bad config or model error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frailty/catalog.hpp"
#include "frailty/error.hpp"
#include "frailty/extensions.hpp"
#include "frailty/io.hpp"
#include "frailty/shapes.hpp"
#include "frailty/simulation.hpp"
#include "frailty/survivor.hpp"
#include "frailty/verify.hpp"

namespace fs = std::filesystem;
using frailty::ErrorKind;
using frailty::fail;
using frailty::io::Json;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

Json load_config(const std::string& path) {
    if (path.empty()) return Json::object();
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidConfig, "cannot open config \"" + path + "\"");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidConfig, "config \"" + path + "\" is not valid JSON: " + e.what());
    }
}

Json require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) fail(ErrorKind::InvalidConfig, std::string("missing \"") + key + "\"");
    return doc.at(key);
}

// --out beats the config's output_path; empty means stdout.
std::string output_path(const Common& c, const Json& doc) {
    if (!c.out.empty()) return c.out;
    if (doc.contains("output_path")) return doc.at("output_path").get<std::string>();
    return {};
}

void open_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_file(const fs::path& path) {
    open_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidConfig, "cannot write \"" + path.string() + "\"");
    return out;
}

fs::path sidecar_path(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".sidecar.json");
    return p;
}

// Writes CSV text to path (or stdout) and the sidecar next to it.
void emit(const std::string& path, const std::string& csv, const std::optional<Json>& sidecar) {
    if (path.empty()) {
        std::cout << csv;
        if (sidecar) std::cerr << sidecar->dump(2) << '\n';
        return;
    }
    open_file(path) << csv;
    if (sidecar) open_file(sidecar_path(path)) << sidecar->dump(2) << '\n';
}

frailty::io::Grid grid_or(const Json& doc, frailty::io::Grid fallback) {
    return doc.contains("grid") ? frailty::io::grid_from_json(doc.at("grid")) : fallback;
}

std::string curve_csv(const frailty::ShapeCurve& c) {
    std::ostringstream os;
    frailty::io::write_curve_csv(os, c);
    return os.str();
}

int cmd_curve(const Common& c) {
    const Json doc = load_config(c.config);
    if (doc.contains("family")) {
        const auto family = frailty::io::family_from_json(doc.at("family"));
        const auto curve = frailty::curve(family, grid_or(doc, {0.0, 5.0, 101}).values());
        emit(output_path(c, doc), curve_csv(curve), frailty::io::curve_sidecar(curve));
        return 0;
    }
    // No family: one curve per documented default into a directory.
    const fs::path dir = c.out.empty() ? fs::path("curves") : fs::path(c.out);
    const auto grid = grid_or(doc, {0.0, 5.0, 101}).values();
    for (const auto& [name, family] : frailty::catalog::shape_defaults()) {
        const auto curve = frailty::curve(family, grid);
        emit((dir / (name + ".csv")).string(), curve_csv(curve), frailty::io::curve_sidecar(curve));
    }
    return 0;
}

int cmd_fig2(const Common& c) {
    const Json doc = load_config(c.config);
    const fs::path dir = c.out.empty() ? fs::path("fig2") : fs::path(c.out);
    const auto grid = grid_or(doc, {0.0, 20.0, 401}).values();
    for (const auto& [name, family] : frailty::catalog::kpoint_figure()) {
        const auto curve = frailty::curve(family, grid);
        emit((dir / (name + ".csv")).string(), curve_csv(curve), frailty::io::curve_sidecar(curve));
    }
    return 0;
}

int cmd_oracle(const Common& c) {
    const Json doc = load_config(c.config);
    const auto family = frailty::io::family_from_json(require(doc, "family"));
    const Json at = require(doc, "lambda");
    if (!at.is_number()) fail(ErrorKind::InvalidConfig, "\"lambda\" must be a number");
    const double lambda = at.get<double>();
    if (!(lambda >= 0.0)) fail(ErrorKind::InvalidConfig, "\"lambda\" must be >= 0");
    const auto pmf = frailty::oracle::survivor_pmf(family, lambda);
    std::ostringstream os;
    frailty::io::write_pmf_csv(os, pmf);
    emit(output_path(c, doc), os.str(), std::nullopt);
    return 0;
}

int cmd_simulate(const Common& c) {
    const Json doc = load_config(c.config);
    auto cfg = frailty::io::sim_config_from_json(doc);
    if (c.seed) cfg.seed = *c.seed;
    const auto samples = frailty::simulate(cfg);

    Json at_risk = Json::array();
    if (doc.contains("summary_times")) {
        for (const auto& row : doc.at("summary_times")) {
            const auto t = row.get<std::vector<double>>();
            if (t.size() != cfg.hazards.size())
                fail(ErrorKind::LengthMismatch, "each summary_times row needs one time per target");
            std::size_t count = 0;
            for (const auto& s : samples) {
                bool alive = true;
                for (std::size_t j = 0; j < t.size(); ++j)
                    alive = alive && s.times[j].after(t[j]) && !(cfg.censor_time && t[j] >= *cfg.censor_time);
                count += alive;
            }
            at_risk.push_back({{"t", t}, {"at_risk", count}});
        }
    }
    const Json summary{{"n_clusters", samples.size()},
                       {"seed", cfg.seed},
                       {"cure_fraction", frailty::cure_fraction(samples)},
                       {"at_risk", at_risk}};

    std::ostringstream os;
    frailty::io::write_samples_csv(os, samples);
    const std::string path = output_path(c, doc);
    if (path.empty()) {
        std::cout << os.str();
        std::cerr << summary.dump(2) << '\n';
    } else {
        open_file(path) << os.str();
        open_file(sidecar_path(path)) << summary.dump(2) << '\n';
    }
    return 0;
}

int cmd_correlated(const Common& c) {
    const Json doc = load_config(c.config);
    const auto model = frailty::io::correlated_from_json(require(doc, "model"));
    double total = 0.0;
    for (double eta : model.etas) total += eta;
    std::ostringstream os;
    os << "d,crf\n";
    for (double d : grid_or(doc, {0.0, total, 101}).values()) {
        if (d > total) fail(ErrorKind::InvalidConfig, "grid exceeds the sum of etas");
        os << frailty::io::format_number(d) << ',' << frailty::io::format_number(frailty::correlated_crf_at_d(model, d))
           << '\n';
    }
    const Json sidecar{{"crf_limit", frailty::correlated_crf_at_d(model, total)},
                       {"frailty_correlation", model.etas.size() >= 2 ? Json(frailty::frailty_correlation(model, 0, 1))
                                                                      : Json(nullptr)}};
    emit(output_path(c, doc), os.str(), sidecar);
    return 0;
}

int cmd_piecewise(const Common& c) {
    const Json doc = load_config(c.config);
    const auto model = frailty::io::piecewise_from_json(require(doc, "model"));
    const double last_cut = model.cutpoints.empty() ? 0.0 : model.cutpoints.back();
    std::ostringstream os;
    os << "t,rfv,crf\n";
    for (double t : grid_or(doc, {last_cut, last_cut + 5.0, 101}).values()) {
        const std::vector<double> times(model.hazards.size(), t);
        const double rfv = frailty::piecewise_rfv(model, times);
        os << frailty::io::format_number(t) << ',' << frailty::io::format_number(rfv) << ','
           << frailty::io::format_number(1.0 + rfv) << '\n';
    }
    const Json sidecar{{"coupling", frailty::io::to_string(model.coupling)},
                       {"tail", std::string(frailty::to_string(frailty::piecewise_tail(model)))}};
    emit(output_path(c, doc), os.str(), sidecar);
    return 0;
}

int cmd_timevarying(const Common& c) {
    const Json doc = load_config(c.config);
    const auto model = frailty::io::timevarying_from_json(require(doc, "model"));
    std::ostringstream os;
    os << "lambda,rfv,crf\n";
    for (double x : grid_or(doc, {0.0, 40.0, 401}).values()) {
        const double rfv = frailty::timevarying_shift_rfv(model, x);
        os << frailty::io::format_number(x) << ',' << frailty::io::format_number(rfv) << ','
           << frailty::io::format_number(1.0 + rfv) << '\n';
    }
    emit(output_path(c, doc), os.str(), std::nullopt);
    return 0;
}

int cmd_verify(const Common& c, const std::vector<std::string>& only, const std::string& fault) {
    const Json doc = load_config(c.config);
    frailty::verify::Options opt;
    if (doc.contains("only")) opt.only = doc.at("only").get<std::vector<std::string>>();
    if (doc.contains("seed")) opt.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("mc_clusters")) opt.mc_clusters = doc.at("mc_clusters").get<std::size_t>();
    if (doc.contains("fault")) opt.fault = frailty::verify::fault_from_string(doc.at("fault").get<std::string>());
    for (const auto& item : only) {
        std::stringstream ss(item);
        for (std::string id; std::getline(ss, id, ',');)
            if (!id.empty()) opt.only.push_back(id);
    }
    if (!fault.empty()) opt.fault = frailty::verify::fault_from_string(fault);
    if (c.seed) opt.seed = *c.seed;

    const auto results = frailty::verify::run(opt);
    for (const auto& r : results) std::cerr << frailty::verify::summary_line(r) << '\n';
    const Json report = frailty::verify::to_json(results);
    if (c.out.empty())
        std::cout << report.dump(2) << '\n';
    else
        open_file(c.out) << report.dump(2) << '\n';
    return report.at("passed").get<bool>() ? 0 : 1;
}

void report_error(std::string_view kind, const std::string& message) {
    std::cerr << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative frailty variance and cross-ratio shapes for discrete frailty models"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::string> only;
    std::string fault;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", common.config, "JSON config file");
        if (needs_config) opt->required();
        sub->add_option("--out", common.out, "output file or directory");
        sub->add_option("--seed", common.seed, "override the config seed");
    };

    auto* curve = app.add_subcommand("curve", "RFV/CRF curve of one family, or the default shape set");
    add_common(curve, false);
    auto* fig2 = app.add_subcommand("fig2", "the four k-point figure curves");
    add_common(fig2, false);
    auto* oracle = app.add_subcommand("oracle", "survivor pmf at a generic time");
    add_common(oracle, true);
    auto* simulate = app.add_subcommand("simulate", "simulate clustered event times");
    add_common(simulate, true);
    auto* correlated = app.add_subcommand("correlated", "CRF of the correlated Poisson model against d");
    add_common(correlated, true);
    auto* piecewise = app.add_subcommand("piecewise", "RFV of a piecewise-constant frailty against time");
    add_common(piecewise, true);
    auto* timevarying = app.add_subcommand("timevarying", "RFV of a time-varying shifted model");
    add_common(timevarying, true);
    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    add_common(verify, false);
    verify->add_option("--only", only, "criterion ids (repeatable or comma separated)");
    verify->add_option("--inject-fault", fault, "none or shifted_sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("InvalidConfig", e.what());
        return 2;
    }

    try {
        if (*curve) return cmd_curve(common);
        if (*fig2) return cmd_fig2(common);
        if (*oracle) return cmd_oracle(common);
        if (*simulate) return cmd_simulate(common);
        if (*correlated) return cmd_correlated(common);
        if (*piecewise) return cmd_piecewise(common);
        if (*timevarying) return cmd_timevarying(common);
        if (*verify) return cmd_verify(common, only, fault);
    } catch (const frailty::Error& e) {
        report_error(frailty::to_string(e.kind()), e.what());
        return 2;
    } catch (const Json::exception& e) {
        report_error("InvalidConfig", e.what());
        return 2;
    } catch (const fs::filesystem_error& e) {
        report_error("InvalidConfig", e.what());
        return 2;
    }
    return 2;
}
