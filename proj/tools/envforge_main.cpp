// envforge: spectral toolkit for damped wave-envelope equations.
// Subcommands: coeffs, simulate-envelope, simulate-direct, validate, mi-scan.
// Exit codes: 0 ok, 2 config error, 3 degenerate carrier / singular harmonic,
// 4 blow-up, 5 unreliable convergence fit.

#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "envforge/par.hpp"
#include "envforge/run_config.hpp"
#include "envforge/snapshots.hpp"

namespace fs = std::filesystem;
using namespace envforge;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void ensure_outdir(const RunConfig& cfg) { fs::create_directories(cfg.output_dir); }

int cmd_coeffs(const RunConfig& cfg) {
    std::cout << coeffs_document(cfg);
    return 0;
}

int cmd_simulate_envelope(const RunConfig& cfg) {
    ensure_outdir(cfg);
    Timer timer;
    SystemSpec spec = cfg.make_system();
    CarrierSetup carrier = carrier_setup(spec, cfg.carrier_k);
    NLSCoefficients nls = nls_coefficients(spec, carrier);
    HNLSCoefficients hnls = hnls_coefficients(spec, carrier, nls);
    std::unique_ptr<EnvelopeModel> model =
        spec.state_kind == StateKind::Scalar
            ? make_scalar_model(spec, carrier, nls, cfg.initial.with_B ? &hnls : nullptr)
            : make_water_model(spec, carrier);
    if (spec.V.amplifies())
        std::cerr << "warning: damping profile has Re(V) < 0 and will amplify\n";

    Grid g = Grid::line(cfg.envelope.n, cfg.envelope.lxi);
    const double q = 2.0 * std::numbers::pi / cfg.envelope.lxi * cfg.initial.q_mode;
    EnvelopeState s = init_plane_wave(g, cfg.initial.a, q, cfg.initial.delta, cfg.initial.with_B);

    SolverConfig sc;
    sc.dt = cfg.envelope.dt;
    sc.scheme = cfg.envelope.scheme;
    sc.dealias = cfg.envelope.dealias;
    sc.record_stride = cfg.envelope.record_stride;
    EnvelopeIntegrator integ(g, *model, sc);

    std::string status = "ok";
    double fail_tau = 0.0;
    std::vector<Diagnostics> series{integ.diagnostics(s)};
    try {
        auto more = integ.integrate(s, cfg.envelope.tau_end);
        series.insert(series.end(), more.begin(), more.end());
    } catch (const BlowUp& b) {
        status = "blowup";
        fail_tau = b.time_of_failure;
    }
    write_text_atomic(cfg.output_dir + "/diagnostics.csv", diagnostics_csv(series));
    write_envelope_snapshot(cfg.output_dir + "/final_A.envf", g, s.A, s.tau, 0);
    if (s.has_B) write_envelope_snapshot(cfg.output_dir + "/final_B.envf", g, s.B, s.tau, 1);
    write_text_atomic(cfg.output_dir + "/manifest.json",
                      manifest_document(cfg, "simulate-envelope", timer.seconds(), status, fail_tau));
    if (status == "blowup") {
        std::cerr << "blow-up at tau=" << fail_tau << "\n";
        return 4;
    }
    return 0;
}

int cmd_simulate_direct(const RunConfig& cfg) {
    ensure_outdir(cfg);
    Timer timer;
    SystemSpec spec = cfg.make_system();
    CarrierSetup carrier = carrier_setup(spec, cfg.carrier_k);
    NLSCoefficients nls = nls_coefficients(spec, carrier);

    const double eps = cfg.direct.eps;
    const double lx = cfg.envelope.lxi / eps;
    Grid env = Grid::line(cfg.envelope.n, cfg.envelope.lxi);
    Grid dir = Grid::line(cfg.direct.n, lx);
    const double q = 2.0 * std::numbers::pi / cfg.envelope.lxi * cfg.initial.q_mode;
    EnvelopeState s = init_plane_wave(env, cfg.initial.a, q, cfg.initial.delta, false);
    DirectField f = init_from_envelope(s.A, {}, env, dir, carrier, eps, nls);
    f.nonlinearity = cfg.direct.nonlinearity;

    std::string status = "ok";
    double fail_t = 0.0;
    DirectIntegrator integ(dir, spec, cfg.direct.dt);
    try {
        integ.run(f, cfg.direct.t_end);
    } catch (const BlowUp& b) {
        status = "blowup";
        fail_t = b.time_of_failure;
    }
    write_direct_snapshot(cfg.output_dir + "/final_u.dirf", f);
    write_text_atomic(cfg.output_dir + "/manifest.json",
                      manifest_document(cfg, "simulate-direct", timer.seconds(), status, fail_t));
    if (status == "blowup") {
        std::cerr << "blow-up at t=" << fail_t << "\n";
        return 4;
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    ensure_outdir(cfg);
    Timer timer;
    auto v = run_validation(cfg.validate);
    write_text_atomic(cfg.output_dir + "/validation.json", validation_document(v, cfg.validate));
    write_text_atomic(cfg.output_dir + "/validation.csv", validation_csv(v));
    write_text_atomic(cfg.output_dir + "/manifest.json",
                      manifest_document(cfg, "validate", timer.seconds(), "ok"));
    std::cout << validation_document(v, cfg.validate);
    double emax = 0.0;
    for (const auto& l : v.legs) emax = std::max({emax, l.err_l2_nls, l.err_l2_hnls});
    if (emax < 1e-10 || v.fit_residual_nls > 0.2 || v.fit_residual_hnls > 0.2) {
        std::cerr << "unreliable fit (degenerate errors or residual > 0.2 in log space)\n";
        return 5;
    }
    return 0;
}

int cmd_mi_scan(const RunConfig& cfg) {
    ensure_outdir(cfg);
    Timer timer;
    SystemSpec spec = cfg.make_system();
    auto pts = mi_scan(spec, cfg.carrier_k, cfg.mi);
    write_text_atomic(cfg.output_dir + "/mi_scan.csv", mi_csv(pts, cfg.carrier_k));
    write_text_atomic(cfg.output_dir + "/manifest.json",
                      manifest_document(cfg, "mi-scan", timer.seconds(), "ok"));
    std::cout << mi_csv(pts, cfg.carrier_k);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"envforge: envelope equations for dispersive PDEs with weak dissipation"};
    app.require_subcommand(1);
    std::string config_path;

    auto add = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
        return sub;
    };
    CLI::App* sc_coeffs = add("coeffs", "print the envelope coefficient document");
    CLI::App* sc_env = add("simulate-envelope", "integrate the envelope equations");
    CLI::App* sc_dir = add("simulate-direct", "integrate the original PDE");
    CLI::App* sc_val = add("validate", "asymptotic convergence study against the direct solver");
    CLI::App* sc_mi = add("mi-scan", "sideband growth-rate sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (sc_coeffs->parsed()) return cmd_coeffs(cfg);
        if (sc_env->parsed()) return cmd_simulate_envelope(cfg);
        if (sc_dir->parsed()) return cmd_simulate_direct(cfg);
        if (sc_val->parsed()) return cmd_validate(cfg);
        if (sc_mi->parsed()) return cmd_mi_scan(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateCarrier& e) {
        std::cerr << "degenerate carrier: " << e.what() << "\n";
        return 3;
    } catch (const SingularHarmonic& e) {
        std::cerr << "singular harmonic: " << e.what() << "\n";
        return 3;
    } catch (const BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return 4;
    } catch (const FitUnreliable& e) {
        std::cerr << "unreliable fit: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
