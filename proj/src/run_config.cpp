#include "envforge/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "envforge/par.hpp"
#include "json.hpp"

namespace envforge {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double require_positive(double v, const std::string& name) {
    if (!(v > 0.0)) throw ConfigError(name + " must be positive");
    return v;
}

VProfile parse_damping(const json& j) {
    reject_unknown(j, {"profile", "delta", "p"}, "damping");
    const std::string p = j.value("profile", "none");
    if (p == "none") return VProfile::none();
    if (p == "constant") return VProfile::constant(j.at("delta").get<double>());
    if (p == "power")
        return VProfile::power_law(j.at("delta").get<double>(), j.at("p").get<double>());
    throw ConfigError("damping profile must be none|constant|power");
}

Poly1 parse_poly1(const json& j) {
    std::map<int, cplx> c;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 3) throw ConfigError("J rows are [power, re, im]");
        const int p = row[0].get<int>();
        if (p < 0 || p > 8) throw ConfigError("J monomial degree must be 0..8");
        c[p] += cplx{row[1].get<double>(), row[2].get<double>()};
    }
    return Poly1(c);
}

Poly2 parse_poly2(const json& j) {
    std::map<std::array<int, 2>, cplx> c;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 4) throw ConfigError("H rows are [p1, p2, re, im]");
        const int a = row[0].get<int>(), b = row[1].get<int>();
        if (a < 0 || b < 0 || a + b > 8) throw ConfigError("H monomial total degree must be <= 8");
        c[{a, b}] += cplx{row[2].get<double>(), row[3].get<double>()};
    }
    return Poly2(c);
}

Poly3 parse_poly3(const json& j) {
    std::map<std::array<int, 3>, cplx> c;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 5)
            throw ConfigError("T rows are [p1, p2, p3, re, im]");
        const int a = row[0].get<int>(), b = row[1].get<int>(), d = row[2].get<int>();
        if (a < 0 || b < 0 || d < 0 || a + b + d > 8)
            throw ConfigError("T monomial total degree must be <= 8");
        c[{a, b, d}] += cplx{row[3].get<double>(), row[4].get<double>()};
    }
    return Poly3(c);
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json cplx_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

json record_json(const HarmonicSolveRecord& r) {
    json j;
    j["n"] = r.n;
    j["label"] = r.label;
    j["residual"] = r.residual;
    if (r.is_matrix) {
        j["L"] = {cplx_json(r.L_mat[0]), cplx_json(r.L_mat[1]), cplx_json(r.L_mat[2]),
                  cplx_json(r.L_mat[3])};
        j["forcing"] = {cplx_json(r.forcing_vec[0]), cplx_json(r.forcing_vec[1])};
        j["solution"] = {cplx_json(r.solution_vec[0]), cplx_json(r.solution_vec[1])};
    } else {
        j["L"] = cplx_json(r.L);
        j["forcing"] = cplx_json(r.forcing);
        j["solution"] = cplx_json(r.solution);
    }
    return j;
}

}  // namespace

SystemSpec RunConfig::make_system() const {
    if (system_name == "toy5") return toy_system(damping);
    if (system_name == "deepwater") return deepwater_system(dim, damping);
    if (system_name == "user") {
        if (!user_spec) throw ConfigError("user system requested but no tables given");
        SystemSpec s = *user_spec;
        s.V = damping;
        return s;
    }
    throw ConfigError("unknown system '" + system_name + "'");
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j,
                   {"system", "dim", "damping", "carrier_k", "envelope", "initial", "direct",
                    "validate", "mi_scan", "output_dir", "seed"},
                   "top level");
    RunConfig cfg;
    if (j.contains("system")) {
        const auto& s = j["system"];
        if (s.is_string()) {
            cfg.system_name = s.get<std::string>();
        } else {
            reject_unknown(s, {"name", "J", "H", "T"}, "system");
            cfg.system_name = "user";
            auto T = s.contains("T") ? std::optional<Poly3>(parse_poly3(s["T"])) : std::nullopt;
            cfg.user_spec = user_system(s.value("name", "user"), parse_poly1(s.at("J")),
                                        parse_poly2(s.at("H")), T, VProfile::none());
        }
    }
    cfg.dim = j.value("dim", 1);
    if (j.contains("damping")) cfg.damping = parse_damping(j["damping"]);
    cfg.carrier_k = j.value("carrier_k", 0.5);
    if (j.contains("envelope")) {
        const auto& e = j["envelope"];
        reject_unknown(e, {"L_xi", "N", "dt", "tau_end", "scheme", "record_stride", "dealias"},
                       "envelope");
        cfg.envelope.lxi = require_positive(e.value("L_xi", cfg.envelope.lxi), "L_xi");
        cfg.envelope.n = e.value("N", cfg.envelope.n);
        cfg.envelope.dt = require_positive(e.value("dt", cfg.envelope.dt), "dt");
        cfg.envelope.tau_end = e.value("tau_end", cfg.envelope.tau_end);
        const std::string sc = e.value("scheme", "etdrk4");
        if (sc == "etdrk4") cfg.envelope.scheme = Scheme::EtdRk4;
        else if (sc == "splitstep") cfg.envelope.scheme = Scheme::SplitStep;
        else throw ConfigError("scheme must be etdrk4|splitstep");
        cfg.envelope.record_stride = e.value("record_stride", cfg.envelope.record_stride);
        cfg.envelope.dealias = e.value("dealias", true);
    }
    if (j.contains("initial")) {
        const auto& e = j["initial"];
        reject_unknown(e, {"type", "a", "q_mode", "delta", "with_B"}, "initial");
        if (e.value("type", "plane_wave") != "plane_wave")
            throw ConfigError("initial.type must be plane_wave");
        cfg.initial.a = e.value("a", cfg.initial.a);
        cfg.initial.q_mode = e.value("q_mode", 1);
        cfg.initial.delta = e.value("delta", 0.0);
        cfg.initial.with_B = e.value("with_B", false);
        if (cfg.initial.a < 0.0 || cfg.initial.delta < 0.0)
            throw ConfigError("initial amplitudes must be nonnegative");
    }
    if (j.contains("direct")) {
        const auto& e = j["direct"];
        reject_unknown(e, {"N", "dt", "t_end", "eps", "nonlinearity"}, "direct");
        cfg.direct.n = e.value("N", cfg.direct.n);
        cfg.direct.dt = require_positive(e.value("dt", cfg.direct.dt), "direct.dt");
        cfg.direct.t_end = e.value("t_end", cfg.direct.t_end);
        cfg.direct.eps = e.value("eps", cfg.direct.eps);
        cfg.direct.nonlinearity = e.value("nonlinearity", 1.0);
    }
    if (j.contains("validate")) {
        const auto& e = j["validate"];
        reject_unknown(e,
                       {"eps_list", "tau_end", "a", "delta", "q_mode", "N_env", "dt_env", "dt_dir",
                        "k"},
                       "validate");
        if (e.contains("eps_list")) cfg.validate.eps_list = e["eps_list"].get<std::vector<double>>();
        if (cfg.validate.eps_list.size() < 3)
            throw ConfigError("validate.eps_list needs at least 3 values");
        cfg.validate.tau_end = e.value("tau_end", 1.0);
        cfg.validate.a = e.value("a", 1.0);
        cfg.validate.delta = e.value("delta", 0.2);
        cfg.validate.q_mode = e.value("q_mode", 1);
        cfg.validate.n_env = e.value("N_env", cfg.validate.n_env);
        cfg.validate.dt_env = e.value("dt_env", cfg.validate.dt_env);
        cfg.validate.dt_dir = e.value("dt_dir", cfg.validate.dt_dir);
        cfg.validate.k = e.value("k", cfg.carrier_k);
    } else {
        cfg.validate.k = cfg.carrier_k;
    }
    if (j.contains("mi_scan")) {
        const auto& e = j["mi_scan"];
        reject_unknown(e, {"a_list", "q_list", "delta0", "tau_max", "dt", "N", "L_xi"}, "mi_scan");
        if (e.contains("a_list")) cfg.mi.a_list = e["a_list"].get<std::vector<double>>();
        if (e.contains("q_list")) cfg.mi.q_list = e["q_list"].get<std::vector<double>>();
        cfg.mi.delta0 = e.value("delta0", cfg.mi.delta0);
        cfg.mi.tau_max = e.value("tau_max", cfg.mi.tau_max);
        cfg.mi.dt = e.value("dt", cfg.mi.dt);
        cfg.mi.n = e.value("N", cfg.mi.n);
        cfg.mi.lxi = e.value("L_xi", 0.0);
    }
    cfg.output_dir = j.value("output_dir", "out");
    cfg.seed = j.value("seed", 0ul);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::string coeffs_document(const RunConfig& cfg) {
    SystemSpec spec = cfg.make_system();
    CarrierSetup c = carrier_setup(spec, cfg.carrier_k);
    NLSCoefficients nls = nls_coefficients(spec, c);
    HNLSCoefficients hnls = hnls_coefficients(spec, c, nls);

    json j;
    j["system"] = spec.name;
    j["damping_profile"] = spec.V.describe();
    if (spec.V.amplifies()) j["damping_warning"] = "Re(V) < 0 amplifies instead of damping";
    j["carrier"] = {{"k", c.k},
                    {"omega", c.omega},
                    {"group_velocity", c.cg},
                    {"dispersion_curvature", c.dispersion_curvature},
                    {"third_derivative", c.third_derivative}};
    j["nls"] = {{"dispersion_coeff", cplx_json(nls.dispersion_coeff)},
                {"nonlinear_coeff", cplx_json(nls.nonlinear_coeff)},
                {"damping", cplx_json(nls.damping)},
                {"phi0", cplx_json(nls.phi0)},
                {"has_mean_channel", nls.has_mean_channel},
                {"mean_coupling", cplx_json(nls.mean_coupling)},
                {"mean_response", cplx_json(nls.mean_response)}};
    j["hnls"] = {{"third_deriv_coeff", cplx_json(hnls.third_deriv_coeff)},
                 {"psi1", cplx_json(hnls.psi1)},
                 {"psi2", cplx_json(hnls.psi2)},
                 {"psi3", cplx_json(hnls.psi3)},
                 {"selfsteep_coeff", cplx_json(hnls.selfsteep_coeff)},
                 {"conj_steep_coeff", cplx_json(hnls.conj_steep_coeff)},
                 {"coupling_AB", cplx_json(hnls.coupling_AB)},
                 {"coupling_A2Bbar", cplx_json(hnls.coupling_A2Bbar)},
                 {"damping_derivative", cplx_json(hnls.damping_derivative)}};
    json recs = json::array();
    for (const auto& r : nls.audit) recs.push_back(record_json(r));
    for (const auto& r : hnls.audit) recs.push_back(record_json(r));
    j["harmonic_audit"] = recs;

    if (spec.state_kind == StateKind::Scalar && spec.name == "toy5") {
        auto audit = printed_form_audit(spec, c, nls, hnls);
        j["printed_form_audit"] = {
            {"phi0_engine_residual", audit.phi0_engine_residual},
            {"phi0_printed_residual", audit.phi0_printed_residual},
            {"nonlinear_coeff", {{"engine", cplx_json(audit.engine_nonlinear)},
                                 {"printed", cplx_json(audit.printed_nonlinear)}}},
            {"dispersion_coeff", {{"engine", cplx_json(audit.engine_dispersion)},
                                  {"printed", cplx_json(audit.printed_dispersion)}}},
            {"third_deriv_coeff", {{"engine", cplx_json(audit.engine_third)},
                                   {"printed", cplx_json(audit.printed_third)}}},
            {"conj_steep_coeff", {{"engine", cplx_json(audit.engine_conj_steep)},
                                  {"printed", cplx_json(audit.printed_conj_steep)}}},
            {"note", "printed closed forms retained for audit; the engine trusts the "
                     "residual-verified solves where the two disagree"}};
    }
    if (spec.state_kind == StateKind::SurfacePair)
        j["meanflow_constraint_coeff"] = meanflow_constraint(spec, c);
    return j.dump(2) + "\n";
}

std::string manifest_document(const RunConfig& cfg, const std::string& command,
                              double wall_seconds, const std::string& status,
                              double failure_time) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["status"] = status;
    j["wall_seconds"] = wall_seconds;
    if (status == "blowup") j["failure_time"] = failure_time;
    json echo;
    echo["system"] = cfg.system_name;
    echo["carrier_k"] = cfg.carrier_k;
    echo["damping"] = cfg.damping.describe();
    echo["envelope"] = {{"L_xi", cfg.envelope.lxi}, {"N", cfg.envelope.n},
                        {"dt", cfg.envelope.dt},   {"tau_end", cfg.envelope.tau_end},
                        {"record_stride", cfg.envelope.record_stride}};
    echo["initial"] = {{"a", cfg.initial.a},
                       {"q_mode", cfg.initial.q_mode},
                       {"delta", cfg.initial.delta},
                       {"with_B", cfg.initial.with_B}};
    echo["direct"] = {{"N", cfg.direct.n}, {"dt", cfg.direct.dt}, {"t_end", cfg.direct.t_end},
                      {"eps", cfg.direct.eps}};
    echo["seed"] = cfg.seed;
    j["config_echo"] = echo;
    j["config_hash"] = fnv1a_hex(echo.dump());
    return j.dump(2) + "\n";
}

std::string validation_document(const ValidationResult& v, const StudyConfig& cfg) {
    json j;
    j["k"] = cfg.k;
    j["a"] = cfg.a;
    j["tau_end"] = cfg.tau_end;
    j["p_nls"] = v.p_nls;
    j["p_hnls"] = v.p_hnls;
    j["order_separation"] = v.p_hnls - v.p_nls;
    j["fit_residual_nls"] = v.fit_residual_nls;
    j["fit_residual_hnls"] = v.fit_residual_hnls;
    j["errors_monotone"] = v.monotone_nls && v.monotone_hnls;
    json legs = json::array();
    for (const auto& l : v.legs)
        legs.push_back({{"eps", l.eps},
                        {"err_l2_nls", l.err_l2_nls},
                        {"err_linf_nls", l.err_linf_nls},
                        {"err_l2_hnls", l.err_l2_hnls},
                        {"err_linf_hnls", l.err_linf_hnls},
                        {"direct_seconds", l.direct_seconds}});
    j["legs"] = legs;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// MI scan
// ---------------------------------------------------------------------------

double mi_predicted_rate(double alpha, double beta_eff, double a, double q) {
    const double g2 = q * q * (2.0 * alpha * beta_eff * a * a - alpha * alpha * q * q);
    return g2 > 0.0 ? std::sqrt(g2) : 0.0;
}

MiPoint mi_measure(const SystemSpec& spec, const CarrierSetup& carrier, const MiScanConfig& cfg,
                   double a, double q) {
    MiPoint pt;
    pt.a = a;
    pt.q = q;
    const double lxi = cfg.lxi > 0.0 ? cfg.lxi : 2.0 * std::numbers::pi / q;
    Grid g = Grid::line(cfg.n, lxi);

    NLSCoefficients nls = nls_coefficients(spec, carrier);
    std::unique_ptr<EnvelopeModel> model =
        spec.state_kind == StateKind::Scalar
            ? make_scalar_model(spec, carrier, nls, nullptr, true)
            : make_water_model(spec, carrier, true);
    const double alpha = model->alpha();
    const double beta_eff = model->beta_sideband();
    pt.predicted = mi_predicted_rate(alpha, beta_eff, a, q);
    pt.inside_band = pt.predicted > 0.0;

    EnvelopeState s = init_plane_wave(g, a, q, cfg.delta0, false);
    SolverConfig sc;
    sc.dt = cfg.dt;
    sc.record_stride = 1;
    EnvelopeIntegrator integ(g, *model, sc);

    Fft fft(g);
    const long qidx = std::lround(q * lxi / (2.0 * std::numbers::pi));
    auto side_amp = [&]() {
        std::vector<cplx> ah;
        fft.forward(s.A, ah);
        const std::size_t i = static_cast<std::size_t>(qidx);
        return std::abs(ah[i]) / static_cast<double>(g.nx);
    };

    const double amp0 = side_amp();
    std::vector<double> ts, la;
    const long nsteps = std::lround(cfg.tau_max / cfg.dt);
    try {
        for (long i = 0; i < nsteps; ++i) {
            integ.step(s);
            const double amp = side_amp();
            // linear-growth window: clear of the transient, far from saturation
            if (amp > 5.0 * amp0 && amp < 0.02 * a) {
                ts.push_back(s.tau);
                la.push_back(std::log(amp));
            }
            if (amp >= 0.02 * a && ts.size() >= 8) break;
        }
    } catch (const BlowUp&) {
        pt.blew_up = true;
        return pt;
    }
    if (ts.size() < 8) {
        // no sustained growth: report the late-time trend (noise floor when stable)
        pt.measured = 0.0;
        return pt;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sx += ts[i];
        sy += la[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * la[i];
    }
    const double n = static_cast<double>(ts.size());
    pt.measured = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return pt;
}

std::vector<MiPoint> mi_scan(const SystemSpec& spec, double carrier_k, const MiScanConfig& cfg) {
    CarrierSetup carrier = carrier_setup(spec, carrier_k);
    std::vector<std::pair<double, double>> jobs;
    for (double a : cfg.a_list)
        for (double q : cfg.q_list) jobs.emplace_back(a, q);
    std::vector<MiPoint> out(jobs.size());
    par::for_each_run(static_cast<int>(jobs.size()), [&](int i) {
        try {
            out[i] = mi_measure(spec, carrier, cfg, jobs[i].first, jobs[i].second);
        } catch (const std::exception&) {
            out[i].a = jobs[i].first;
            out[i].q = jobs[i].second;
            out[i].blew_up = true;
        }
    });
    return out;
}

std::string mi_csv(const std::vector<MiPoint>& pts, double carrier_k) {
    std::string s = "k,a,q,measured_rate,predicted_rate,inside_band,blowup\n";
    char buf[256];
    for (const auto& p : pts) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", carrier_k, p.a,
                      p.q, p.measured, p.predicted, p.inside_band ? 1 : 0, p.blew_up ? 1 : 0);
        s += buf;
    }
    return s;
}

std::string diagnostics_csv(const std::vector<Diagnostics>& series) {
    std::string s = "tau,mass,momentum,max_abs_A,mass_B\n";
    char buf[256];
    for (const auto& d : series) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", d.tau, d.mass,
                      d.momentum, d.max_abs_a, d.mass_b);
        s += buf;
    }
    return s;
}

std::string validation_csv(const ValidationResult& v) {
    std::string s = "eps,err_l2_nls,err_linf_nls,err_l2_hnls,err_linf_hnls\n";
    char buf[256];
    for (const auto& l : v.legs) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", l.eps, l.err_l2_nls,
                      l.err_linf_nls, l.err_l2_hnls, l.err_linf_hnls);
        s += buf;
    }
    return s;
}

}  // namespace envforge
