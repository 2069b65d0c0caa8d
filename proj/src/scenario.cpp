#include "opg/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <set>

#include <json.hpp>

#include "opg/engine.hpp"
#include "opg/husimi.hpp"
#include "opg/io.hpp"
#include "opg/measures.hpp"
#include "opg/oracle.hpp"
#include "opg/phase_dist.hpp"
#include "opg/pump.hpp"

namespace opg::scenario {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

const std::set<std::string>& pump_kinds() {
    static const std::set<std::string> kinds = {
        "coherent", "thermal", "displaced_thermal", "phase_sensitive_noisy_coherent",
        "dephased_coherent", "phase_averaged_coherent", "kerr_coherent",
        "kerr_displaced_thermal"};
    return kinds;
}

PumpModel build_pump(const PumpDescriptor& d) {
    if (d.kind == "coherent") return PumpModel::coherent(d.alpha0, d.theta0);
    if (d.kind == "thermal") return PumpModel::thermal(d.nbar);
    if (d.kind == "displaced_thermal") {
        return PumpModel::displaced_thermal(d.alpha0, d.nbar, d.theta0);
    }
    if (d.kind == "phase_sensitive_noisy_coherent") {
        return PumpModel::phase_sensitive_noisy_coherent(d.alpha0, d.theta0, d.nbar1, d.nbar2,
                                                         d.phi);
    }
    if (d.kind == "dephased_coherent") {
        return PumpModel::dephased_coherent(d.alpha0, d.dtheta, d.theta0);
    }
    if (d.kind == "phase_averaged_coherent") return PumpModel::phase_averaged(d.alpha0);
    if (d.kind == "kerr_coherent") {
        return kerr_modulate(PumpModel::coherent(d.alpha0, d.theta0), d.kerr);
    }
    if (d.kind == "kerr_displaced_thermal") {
        return kerr_modulate(PumpModel::displaced_thermal(d.alpha0, d.nbar, d.theta0), d.kerr);
    }
    throw ConfigError("unknown pump kind: " + d.kind);
}

double column_value(const EntanglementReport& rep, const std::string& name) {
    if (name == "negativity") return rep.negativity;
    if (name == "linear_entropy") return rep.linear_entropy;
    if (name == "var2dX") return rep.quadrature_variance_2dX;
    if (name == "squeezing_db") return rep.squeezing_db;
    throw ConfigError("unknown output column: " + name);
}

struct SweepPoint {
    double value = 0.0;
    double gt = 0.0;
    PumpDescriptor pump;
};

std::vector<SweepPoint> expand_sweep(const Scenario& sc) {
    std::vector<SweepPoint> points;
    const int count =
        sc.sweep.step > 0.0
            ? static_cast<int>(std::floor((sc.sweep.to - sc.sweep.from) / sc.sweep.step + 1.5))
            : 1;
    for (int i = 0; i < count; ++i) {
        SweepPoint pt;
        pt.value = sc.sweep.from + i * sc.sweep.step;
        if (pt.value > sc.sweep.to + 1e-12) break;
        pt.gt = sc.gt;
        pt.pump = sc.pump;
        if (sc.sweep.variable == "gt") {
            pt.gt = pt.value;
        } else if (sc.sweep.variable == "gt_alpha0") {
            if (!(sc.pump.alpha0 > 0.0)) {
                throw ConfigError(sc.name + ": gt_alpha0 sweep needs |alpha0| > 0");
            }
            pt.gt = pt.value / sc.pump.alpha0;
        } else if (sc.sweep.variable == "kerr") {
            pt.pump.kerr = pt.value;
        } else if (sc.sweep.variable == "delta_theta") {
            pt.pump.dtheta = pt.value;
        } else if (sc.sweep.variable == "nbar") {
            pt.pump.nbar = pt.value;
        } else {
            throw ConfigError(sc.name + ": unknown sweep variable " + sc.sweep.variable);
        }
        points.push_back(pt);
    }
    if (points.empty()) throw ConfigError(sc.name + ": empty sweep");
    return points;
}

TwoModeState state_for_point(const Scenario& sc, const SweepPoint& pt,
                             const PumpModel* grid_pump,
                             const PhaseDistribution* cached_dist = nullptr) {
    OpgParams params;
    params.gt = pt.gt;
    params.fock_cutoff = sc.cutoff;
    QuadratureSpec spec;
    spec.abs_tol = spec.rel_tol = sc.tol;
    const PumpModel pump = grid_pump ? *grid_pump : build_pump(pt.pump);
    if (sc.engine == "perturbative") {
        return perturbative_state(pump, params);
    }
    if (sc.engine == "gpa") {
        if (sc.pump.route == "correction") {
            if (sc.pump.kind != "displaced_thermal") {
                throw ConfigError(sc.name + ": route 'correction' is for displaced_thermal");
            }
            return gpa_displaced_thermal_correction(pt.pump.alpha0, pt.pump.theta0,
                                                    pt.pump.nbar, params);
        }
        if (sc.pump.route == "phase_series" && sc.pump.kind == "kerr_displaced_thermal") {
            // figure-faithful approximate route: bypass the Schmidt gate
            const PhaseDistribution dist =
                cached_dist ? *cached_dist
                            : kerr_phase_displaced_thermal(pt.pump.alpha0, pt.pump.theta0,
                                                           pt.pump.nbar, pt.pump.kerr);
            return gpa_state_factorized(
                RadialAmplitude::gaussian_ring(pt.pump.alpha0, pt.pump.nbar), dist, params);
        }
        return gpa_state(pump, params, spec);
    }
    if (sc.engine == "oracle") {
        const auto trunc = oracle::auto_truncation(pump.radial_bound());
        return oracle::evolve_mixture(pump, params, trunc);
    }
    throw ConfigError(sc.name + ": unknown engine " + sc.engine);
}

husimi::GridSpec grid_spec_for(const Scenario& sc, const PumpModel& pump) {
    husimi::GridSpec gs;
    gs.n_radii = sc.grid.n;
    gs.n_angles = sc.grid.n;
    gs.r_max = sc.grid.r_max > 0.0 ? sc.grid.r_max : pump.radial_bound();
    return gs;
}

void run_sweep(const Scenario& sc, const std::filesystem::path& out_dir,
               ScenarioTiming& timing) {
    const auto points = expand_sweep(sc);

    // the raster and the phase series depend only on the pump, not on gt;
    // build them once per scenario
    std::unique_ptr<PumpModel> grid_pump;
    std::unique_ptr<PhaseDistribution> series;
    if (sc.pump.route == "husimi_grid") {
        const PumpModel pump = build_pump(sc.pump);
        const auto grid = husimi::cached_p_from_husimi(pump, grid_spec_for(sc, pump));
        grid_pump = std::make_unique<PumpModel>(PumpModel::gridded(*grid));
    } else if (sc.pump.route == "phase_series" && sc.pump.kind == "kerr_displaced_thermal" &&
               sc.sweep.variable != "kerr" && sc.sweep.variable != "nbar") {
        series = std::make_unique<PhaseDistribution>(kerr_phase_displaced_thermal(
            sc.pump.alpha0, sc.pump.theta0, sc.pump.nbar, sc.pump.kerr));
    }

    std::ofstream csv(out_dir / (sc.name + ".csv"), std::ios::binary);
    if (!csv) throw NumericalError(sc.name + ": cannot open output CSV");
    csv << "sweep_value";
    for (const auto& col : sc.outputs) csv << ',' << col;
    csv << '\n';
    for (const auto& pt : points) {
        const auto state = state_for_point(sc, pt, grid_pump.get(), series.get());
        auto rep = entanglement_report(state);
        if (sc.engine == "perturbative") {
            // report the second-order formulas, not the squared 3x3 block
            const auto c = perturbative_coefficients(build_pump(pt.pump));
            rep.negativity = negativity_perturbative(c, pt.gt);
            const double sl = 2.0 * pt.gt * pt.gt * (c.c11 - std::norm(c.c01));
            rep.linear_entropy = std::min(1.0, std::max(0.0, sl));
        }
        csv << io::format_double(pt.value);
        for (const auto& col : sc.outputs) csv << ',' << io::format_double(column_value(rep, col));
        csv << '\n';
    }

    // validity snapshot at the final sweep point
    try {
        OpgParams params;
        params.gt = points.back().gt;
        const auto rep = validity_report(build_pump(points.back().pump), params);
        timing.validity_all_ok = rep.pump_intensity_ok && rep.no_depletion_ok &&
                                 rep.small_gt_ok && rep.slow_propagator_ok;
        timing.exp_condition = rep.exp_condition;
    } catch (const std::exception&) {
        timing.validity_all_ok = false;
    }
}

void run_phase_curve(const Scenario& sc, const std::filesystem::path& out_dir) {
    const PumpModel pump = build_pump(sc.pump);
    const auto dist = phase_marginal(pump);
    io::write_phase_distribution_csv(dist, out_dir / (sc.name + ".csv"));
}

void run_p_grid(const Scenario& sc, const std::filesystem::path& out_dir) {
    const PumpModel pump = build_pump(sc.pump);
    const auto grid = husimi::p_from_husimi(pump, grid_spec_for(sc, pump));
    io::write_polar_grid_csv(grid, out_dir / (sc.name + ".csv"));
}

void run_schmidt(const Scenario& sc, const std::filesystem::path& out_dir) {
    const PumpModel pump = build_pump(sc.pump);
    const auto grid = husimi::p_from_husimi(pump, grid_spec_for(sc, pump));
    const auto dec = schmidt_decompose(grid);
    std::ofstream csv(out_dir / (sc.name + ".csv"), std::ios::binary);
    csv << "index,lambda,cumulative_weight\n";
    double total = 0.0;
    for (double w : dec.weights) total += w * w;
    double acc = 0.0;
    for (size_t r = 0; r < dec.weights.size(); ++r) {
        acc += dec.weights[r] * dec.weights[r];
        csv << r + 1 << ',' << io::format_double(dec.weights[r]) << ','
            << io::format_double(acc / total) << '\n';
    }
}

void run_oracle_compare(const Scenario& sc, const std::filesystem::path& out_dir) {
    std::ofstream csv(out_dir / (sc.name + ".csv"), std::ios::binary);
    csv << "gt,maxabs_corner_diff,negativity_oracle,negativity_gpa_closed,trace_distance_"
           "estimate\n";
    const double alpha = sc.pump.alpha0 > 0.0 ? sc.pump.alpha0 : 0.5;
    const PumpModel pump = PumpModel::coherent(alpha, 0.0);
    for (double gt : {0.01, 0.02, 0.05}) {
        OpgParams params;
        params.gt = gt;
        const auto exact =
            oracle::evolve_coherent(Complex{alpha, 0.0}, params, oracle::auto_truncation(alpha));
        const auto pert = perturbative_state(pump, params);
        double diff = 0.0;
        for (int n = 0; n <= 2; ++n) {
            for (int m = 0; m <= 2; ++m) {
                diff = std::max(diff, std::abs(exact.at(n, m) - pert.at(n, m)));
            }
        }
        const double n_exact = negativity(exact);
        const double n_closed = 0.5 * (std::exp(2.0 * gt * alpha) - 1.0);
        const auto rep = validity_report(pump, params);
        csv << io::format_double(gt) << ',' << io::format_double(diff) << ','
            << io::format_double(n_exact) << ',' << io::format_double(n_closed) << ','
            << io::format_double(rep.trace_distance_estimate) << '\n';
    }
}

json scenario_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["type"] = sc.type;
    j["engine"] = sc.engine;
    j["gt"] = sc.gt;
    j["tol"] = sc.tol;
    j["cutoff"] = sc.cutoff;
    json p;
    p["kind"] = sc.pump.kind;
    p["alpha0"] = sc.pump.alpha0;
    p["theta0"] = sc.pump.theta0;
    p["nbar"] = sc.pump.nbar;
    p["nbar1"] = sc.pump.nbar1;
    p["nbar2"] = sc.pump.nbar2;
    p["phi"] = sc.pump.phi;
    p["dtheta"] = sc.pump.dtheta;
    p["kerr"] = sc.pump.kerr;
    p["route"] = sc.pump.route;
    j["pump"] = p;
    json s;
    s["variable"] = sc.sweep.variable;
    s["from"] = sc.sweep.from;
    s["to"] = sc.sweep.to;
    s["step"] = sc.sweep.step;
    j["sweep"] = s;
    j["outputs"] = sc.outputs;
    json g;
    g["n"] = sc.grid.n;
    g["r_max"] = sc.grid.r_max;
    j["grid"] = g;
    return j;
}

Scenario sweep_scenario(const std::string& name, PumpDescriptor pump, const std::string& engine,
                        const std::string& var, double from, double to, double step,
                        std::vector<std::string> outputs) {
    Scenario sc;
    sc.name = name;
    sc.type = "sweep";
    sc.pump = std::move(pump);
    sc.engine = engine;
    sc.sweep = {var, from, to, step};
    sc.outputs = std::move(outputs);
    return sc;
}

PumpDescriptor kerr_dt(double alpha0, double nbar, double kerr, const std::string& route) {
    PumpDescriptor d;
    d.kind = "kerr_displaced_thermal";
    d.alpha0 = alpha0;
    d.nbar = nbar;
    d.kerr = kerr;
    d.route = route;
    return d;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig2",  "fig4",  "fig6",   "fig7",   "fig8",
            "fig9",  "fig10a", "fig10b", "fig11", "oracle-validate"};
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<Scenario> preset(const std::string& name) {
    const std::vector<double> kerrs = {0.0, 0.001, 0.003, 0.009};
    std::vector<Scenario> out;
    if (name == "fig2") {
        PumpDescriptor th;
        th.kind = "thermal";
        th.nbar = 1.0;
        out.push_back(sweep_scenario("fig2_thermal", th, "perturbative", "gt", 0.0, 1.0, 0.02,
                                     {"negativity", "linear_entropy"}));
        PumpDescriptor dt;
        dt.kind = "displaced_thermal";
        dt.alpha0 = 1.0;
        dt.nbar = 1.0;
        out.push_back(sweep_scenario("fig2_displaced_thermal", dt, "perturbative", "gt", 0.0,
                                     1.0, 0.02, {"negativity", "linear_entropy"}));
        return out;
    }
    if (name == "fig4") {
        const std::vector<double> widths = {0.0, 0.3, 0.6};
        const char* labels[] = {"a", "b", "c"};
        for (size_t i = 0; i < widths.size(); ++i) {
            PumpDescriptor d;
            if (widths[i] == 0.0) {
                d.kind = "coherent";
            } else {
                d.kind = "dephased_coherent";
                d.dtheta = widths[i];
            }
            d.alpha0 = 10.0;
            out.push_back(sweep_scenario(std::string("fig4_dephased_") + labels[i], d, "gpa",
                                         "gt_alpha0", 0.0, 1.0, 0.02,
                                         {"negativity", "linear_entropy"}));
        }
        return out;
    }
    if (name == "fig6" || name == "fig7" || name == "fig9") {
        const double alpha0 = name == "fig9" ? 19.0 : std::sqrt(399.0);
        const double nbar = name == "fig9" ? 39.0 : 1.0;
        for (size_t i = 0; i < kerrs.size(); ++i) {
            const std::string tag = std::to_string(i + 1);
            if (name == "fig7") {
                Scenario sc;
                sc.name = "fig7_schmidt_" + tag;
                sc.type = "schmidt";
                sc.pump = kerr_dt(alpha0, nbar, kerrs[i], "husimi_grid");
                sc.grid = {400, 25.0};
                out.push_back(sc);
                continue;
            }
            Scenario curve;
            curve.name = name + "_L_" + tag;
            curve.type = "phase_curve";
            curve.pump = kerr_dt(alpha0, nbar, kerrs[i], "phase_series");
            out.push_back(curve);
            if (name == "fig6") {
                Scenario grid;
                grid.name = "fig6_P_" + tag;
                grid.type = "p_grid";
                grid.pump = kerr_dt(alpha0, nbar, kerrs[i], "husimi_grid");
                grid.grid = {400, 25.0};
                out.push_back(grid);
            }
        }
        return out;
    }
    if (name == "fig8") {
        for (size_t i = 0; i < kerrs.size(); ++i) {
            PumpDescriptor d;
            d.kind = "kerr_coherent";
            d.alpha0 = 20.0;
            d.kerr = kerrs[i];
            d.route = "phase_series";
            out.push_back(sweep_scenario("fig8_kerr_coherent_" + std::to_string(i + 1), d,
                                         "gpa", "gt_alpha0", 0.05, 1.0, 0.05,
                                         {"negativity", "linear_entropy"}));
        }
        return out;
    }
    if (name == "fig10a" || name == "fig10b") {
        const std::string route = name == "fig10a" ? "husimi_grid" : "phase_series";
        for (size_t i = 0; i < kerrs.size(); ++i) {
            auto sc = sweep_scenario(name + "_" + std::to_string(i + 1),
                                     kerr_dt(19.0, 39.0, kerrs[i], route), "gpa", "gt_alpha0",
                                     0.05, 1.0, 0.05, {"negativity", "linear_entropy"});
            sc.grid = {400, 0.0};  // r_max from the pump's radial bound
            out.push_back(sc);
        }
        return out;
    }
    if (name == "fig11") {
        PumpDescriptor co;
        co.kind = "coherent";
        co.alpha0 = 20.0;
        co.theta0 = 0.5 * kPi;
        out.push_back(sweep_scenario("fig11_coherent", co, "gpa", "gt_alpha0", 0.0, 1.2, 0.01,
                                     {"var2dX", "squeezing_db"}));
        PumpDescriptor dt;
        dt.kind = "displaced_thermal";
        dt.alpha0 = 20.0;
        dt.nbar = 40.0;  // nbar/|alpha0|^2 = 0.1
        dt.theta0 = 0.5 * kPi;
        dt.route = "correction";
        out.push_back(sweep_scenario("fig11_displaced_thermal", dt, "gpa", "gt_alpha0", 0.0,
                                     1.2, 0.01, {"var2dX", "squeezing_db"}));
        PumpDescriptor de;
        de.kind = "dephased_coherent";
        de.alpha0 = 20.0;
        de.dtheta = 0.1;
        de.theta0 = 0.5 * kPi;
        out.push_back(sweep_scenario("fig11_dephased", de, "gpa", "gt_alpha0", 0.0, 1.2, 0.01,
                                     {"var2dX", "squeezing_db"}));
        return out;
    }
    if (name == "oracle-validate") {
        Scenario sc;
        sc.name = "oracle_validate";
        sc.type = "oracle_compare";
        sc.pump.kind = "coherent";
        sc.pump.alpha0 = 0.5;
        out.push_back(sc);
        return out;
    }
    throw ConfigError("unknown preset: " + name);
}

std::vector<Scenario> parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("scenarios") || !root["scenarios"].is_array()) {
        throw ConfigError("config must be an object with a 'scenarios' array");
    }
    std::vector<Scenario> out;
    std::set<std::string> seen;
    for (const auto& js : root["scenarios"]) {
        Scenario sc;
        if (!js.contains("name") || !js["name"].is_string()) {
            throw ConfigError("scenario missing 'name'");
        }
        sc.name = js["name"].get<std::string>();
        if (!seen.insert(sc.name).second) throw ConfigError("duplicate scenario " + sc.name);
        sc.type = js.value("type", "sweep");
        if (sc.type != "sweep" && sc.type != "phase_curve" && sc.type != "p_grid" &&
            sc.type != "schmidt" && sc.type != "oracle_compare") {
            throw ConfigError(sc.name + ": unknown type " + sc.type);
        }
        if (!js.contains("pump") || !js["pump"].is_object()) {
            throw ConfigError(sc.name + ": missing pump object");
        }
        const auto& jp = js["pump"];
        sc.pump.kind = jp.value("kind", "");
        if (!pump_kinds().count(sc.pump.kind)) {
            throw ConfigError(sc.name + ": unknown pump kind '" + sc.pump.kind + "'");
        }
        sc.pump.alpha0 = jp.value("alpha0", 0.0);
        sc.pump.theta0 = jp.value("theta0", 0.0);
        sc.pump.nbar = jp.value("nbar", 0.0);
        sc.pump.nbar1 = jp.value("nbar1", 0.0);
        sc.pump.nbar2 = jp.value("nbar2", 0.0);
        sc.pump.phi = jp.value("phi", 0.0);
        sc.pump.dtheta = jp.value("dtheta", 0.0);
        sc.pump.kerr = jp.value("kerr", 0.0);
        sc.pump.route = jp.value("route", "");
        sc.engine = js.value("engine", "gpa");
        if (sc.engine != "perturbative" && sc.engine != "gpa" && sc.engine != "oracle") {
            throw ConfigError(sc.name + ": unknown engine " + sc.engine);
        }
        if (sc.engine == "oracle" &&
            (sc.pump.kind == "kerr_coherent" || sc.pump.kind == "kerr_displaced_thermal")) {
            throw ConfigError(sc.name + ": the oracle engine rejects quasi-distribution pumps");
        }
        sc.gt = js.value("gt", 0.0);
        sc.tol = js.value("tol", 1e-9);
        sc.cutoff = js.value("cutoff", 1);
        if (!(sc.tol > 0.0)) throw ConfigError(sc.name + ": tol must be positive");
        if (sc.cutoff < 1) throw ConfigError(sc.name + ": cutoff must be >= 1");
        if (sc.type == "sweep") {
            if (!js.contains("sweep") || !js["sweep"].is_object()) {
                throw ConfigError(sc.name + ": sweep scenarios need a sweep object");
            }
            const auto& jsw = js["sweep"];
            sc.sweep.variable = jsw.value("variable", "");
            sc.sweep.from = jsw.value("from", 0.0);
            sc.sweep.to = jsw.value("to", 0.0);
            sc.sweep.step = jsw.value("step", 0.0);
            if (!(std::isfinite(sc.sweep.from) && std::isfinite(sc.sweep.to) &&
                  sc.sweep.step > 0.0 && sc.sweep.to >= sc.sweep.from)) {
                throw ConfigError(sc.name + ": sweep range must be finite and ordered");
            }
            if (!js.contains("outputs") || !js["outputs"].is_array() ||
                js["outputs"].empty()) {
                throw ConfigError(sc.name + ": sweep scenarios need a non-empty outputs list");
            }
            for (const auto& o : js["outputs"]) {
                const auto col = o.get<std::string>();
                if (col != "negativity" && col != "linear_entropy" && col != "var2dX" &&
                    col != "squeezing_db") {
                    throw ConfigError(sc.name + ": unknown output " + col);
                }
                sc.outputs.push_back(col);
            }
        }
        if (js.contains("grid")) {
            sc.grid.n = js["grid"].value("n", 400);
            sc.grid.r_max = js["grid"].value("r_max", 0.0);
            if (sc.grid.n < 2) throw ConfigError(sc.name + ": grid.n must be >= 2");
        }
        out.push_back(std::move(sc));
    }
    if (out.empty()) throw ConfigError("config contains no scenarios");
    return out;
}

std::string canonical_config(const std::vector<Scenario>& scenarios) {
    json arr = json::array();
    for (const auto& sc : scenarios) arr.push_back(scenario_json(sc));
    json root;
    root["scenarios"] = arr;
    return root.dump();
}

std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunOutcome run_scenarios(const std::vector<Scenario>& scenarios,
                         const std::filesystem::path& out_dir, bool parallel_scenarios) {
    std::filesystem::create_directories(out_dir);
    RunOutcome outcome;
    outcome.timings.resize(scenarios.size());

    auto run_one = [&](size_t i) {
        const auto& sc = scenarios[i];
        auto& timing = outcome.timings[i];
        timing.name = sc.name;
        const auto start = std::chrono::steady_clock::now();
        if (sc.type == "sweep") {
            run_sweep(sc, out_dir, timing);
        } else if (sc.type == "phase_curve") {
            run_phase_curve(sc, out_dir);
        } else if (sc.type == "p_grid") {
            run_p_grid(sc, out_dir);
        } else if (sc.type == "schmidt") {
            run_schmidt(sc, out_dir);
        } else if (sc.type == "oracle_compare") {
            run_oracle_compare(sc, out_dir);
        } else {
            throw ConfigError(sc.name + ": unknown scenario type");
        }
        timing.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    try {
        if (parallel_scenarios) {
            std::vector<std::future<void>> futs;
            futs.reserve(scenarios.size());
            for (size_t i = 0; i < scenarios.size(); ++i) {
                futs.push_back(std::async(std::launch::async, run_one, i));
            }
            for (auto& f : futs) f.get();
        } else {
            for (size_t i = 0; i < scenarios.size(); ++i) run_one(i);
        }
    } catch (const ConfigError& e) {
        outcome.exit_code = 2;
        outcome.detail = e.what();
        return outcome;
    } catch (const std::exception& e) {
        outcome.exit_code = 3;
        outcome.detail = e.what();
        return outcome;
    }

    const std::string canonical = canonical_config(scenarios);
    json manifest;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(canonical)));
    manifest["config_hash"] = std::string(hex);
    manifest["version"] = "0.1.0";
    json scens = json::array();
    for (const auto& t : outcome.timings) {
        json jt;
        jt["name"] = t.name;
        jt["seconds"] = t.seconds;
        jt["validity_all_ok"] = t.validity_all_ok;
        jt["exp_condition"] = t.exp_condition;
        scens.push_back(jt);
    }
    manifest["scenarios"] = scens;
    std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << '\n';
    return outcome;
}

}  // namespace opg::scenario
