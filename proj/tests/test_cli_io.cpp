#include <cmath>
#include <cstdio>
#include <numbers>

#include "doctest.h"
#include "envforge/run_config.hpp"
#include "envforge/snapshots.hpp"
#include "json.hpp"

using namespace envforge;

TEST_CASE("snapshot round trips") {
    Grid g = Grid::line(32, 5.0);
    std::vector<cplx> field(32);
    for (std::size_t i = 0; i < 32; ++i) field[i] = {0.1 * i, -0.05 * i};
    const std::string path = "/tmp/envforge_test_snap.envf";
    write_envelope_snapshot(path, g, field, 2.5, 1);
    auto s = read_envelope_snapshot(path);
    CHECK(s.version == 1);
    CHECK(s.field_tag == 1);
    CHECK(s.lxi == 5.0);
    CHECK(s.tau == 2.5);
    REQUIRE(s.field.size() == 32);
    for (std::size_t i = 0; i < 32; ++i) CHECK(s.field[i] == field[i]);
    std::remove(path.c_str());

    DirectField f;
    f.grid = Grid::line(16, 3.0);
    f.t = 7.0;
    f.eps = 0.05;
    f.u.resize(16);
    for (std::size_t i = 0; i < 16; ++i) f.u[i] = std::sin(0.3 * i);
    const std::string dpath = "/tmp/envforge_test_snap.dirf";
    write_direct_snapshot(dpath, f);
    auto d = read_direct_snapshot(dpath);
    CHECK(d.lx == 3.0);
    CHECK(d.t == 7.0);
    CHECK(d.eps == 0.05);
    for (std::size_t i = 0; i < 16; ++i) CHECK(d.u[i] == f.u[i]);
    std::remove(dpath.c_str());
}

TEST_CASE("config parsing") {
    SUBCASE("valid config") {
        RunConfig cfg = parse_config_text(R"({
            "system": "toy5",
            "carrier_k": 0.5,
            "damping": {"profile": "constant", "delta": 0.01},
            "envelope": {"L_xi": 6.283185307179586, "N": 128, "dt": 0.001, "tau_end": 2.0},
            "initial": {"a": 0.1, "q_mode": 1, "delta": 0.02},
            "output_dir": "/tmp/envforge_out"
        })");
        CHECK(cfg.system_name == "toy5");
        CHECK(cfg.envelope.n == 128);
        CHECK(cfg.damping.kind == VProfile::Kind::Constant);
        CHECK(cfg.make_system().name == "toy5");
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_config_text(R"({"carrier_k": 0.5, "carier_k": 0.4})"), ConfigError);
        CHECK_THROWS_AS(parse_config_text(R"({"envelope": {"NN": 4}})"), ConfigError);
    }
    SUBCASE("bad values are rejected") {
        CHECK_THROWS_AS(parse_config_text(R"({"envelope": {"dt": -0.1}})"), ConfigError);
        CHECK_THROWS_AS(parse_config_text(R"({"initial": {"a": -1.0}})"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
    }
    SUBCASE("validate block needs three epsilons") {
        CHECK_THROWS_AS(parse_config_text(R"({"validate": {"eps_list": [0.05]}})"), ConfigError);
    }
    SUBCASE("user system tables") {
        RunConfig cfg = parse_config_text(R"({
            "system": {"name": "cubicflux",
                       "J": [[5, 0.0, 1.0], [3, 0.0, -2.0]],
                       "H": [[3, 0, 0.0, 1.0], [2, 1, 0.0, 3.0], [1, 2, 0.0, 3.0], [0, 3, 0.0, 1.0]]},
            "carrier_k": 0.7
        })");
        SystemSpec s = cfg.make_system();
        CHECK(s.name == "cubicflux");
        CHECK(s.omega(0.7) == doctest::Approx(0.51793));
    }
}

TEST_CASE("coeffs document carries the audit") {
    RunConfig cfg = parse_config_text(R"({"system": "toy5", "carrier_k": 0.5})");
    auto doc = nlohmann::json::parse(coeffs_document(cfg));
    CHECK(doc["carrier"]["omega"].get<double>() == doctest::Approx(0.09375));
    CHECK(doc["nls"]["nonlinear_coeff"]["re"].get<double>() == doctest::Approx(1.0 / 6.0));
    CHECK(doc["printed_form_audit"]["nonlinear_coeff"]["printed"]["re"].get<double>() ==
          doctest::Approx(0.34375));
    CHECK(doc["printed_form_audit"]["phi0_printed_residual"].get<double>() > 1e-3);
    CHECK(doc["printed_form_audit"]["phi0_engine_residual"].get<double>() < 1e-12);
    bool all_residuals_small = true;
    for (const auto& r : doc["harmonic_audit"])
        if (r["residual"].get<double>() > 1e-12) all_residuals_small = false;
    CHECK(all_residuals_small);

    RunConfig wcfg = parse_config_text(R"({"system": "deepwater", "carrier_k": 1.0})");
    auto wdoc = nlohmann::json::parse(coeffs_document(wcfg));
    CHECK(wdoc["nls"]["dispersion_coeff"]["re"].get<double>() == doctest::Approx(-0.125));
    CHECK(wdoc["meanflow_constraint_coeff"].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("manifest is deterministic and complete") {
    RunConfig cfg = parse_config_text(R"({"system": "toy5", "carrier_k": 0.5, "seed": 42})");
    auto m1 = nlohmann::json::parse(manifest_document(cfg, "simulate-envelope", 1.0, "ok"));
    auto m2 = nlohmann::json::parse(manifest_document(cfg, "simulate-envelope", 2.0, "ok"));
    CHECK(m1["config_hash"] == m2["config_hash"]);
    CHECK(m1["version"] == kVersion);
    CHECK(m1["config_echo"]["seed"] == 42);
}

// ---------------------------------------------------------------------------
// MI oracle: brute-force 3-mode truncation of the solver's own equation,
// integrated with plain RK4 and compared against the closed-form rate.
// ---------------------------------------------------------------------------

namespace {

// Galerkin truncation to modes {0, +q, -q} of
//   A_tau = i [ alpha A_xixi + beta |A|^2 A + g (P0|A|^2) A ]
struct ThreeMode {
    double alpha, beta, g, q;

    void rhs(const std::array<cplx, 3>& c, std::array<cplx, 3>& out) const {
        // c = (c0, c+, c-); |A|^2 A and P0|A|^2 A projected on the three modes
        const cplx I{0.0, 1.0};
        const cplx c0 = c[0], cp = c[1], cm = c[2];
        // cubic convolution terms keeping only wavenumbers {0, +-q}
        const cplx n0 = (std::norm(c0) + 2.0 * std::norm(cp) + 2.0 * std::norm(cm)) * c0 +
                        2.0 * cp * cm * std::conj(c0);
        const cplx np = (2.0 * std::norm(c0) + std::norm(cp) + 2.0 * std::norm(cm)) * cp +
                        c0 * c0 * std::conj(cm);
        const cplx nm = (2.0 * std::norm(c0) + 2.0 * std::norm(cp) + std::norm(cm)) * cm +
                        c0 * c0 * std::conj(cp);
        // mean-channel: P0|A|^2 has modes at +-q only:
        //   (|A|^2)_{+q} = c0 conj(cm) + cp conj(c0), (|A|^2)_{-q} = conj of that
        const cplx m_p = c0 * std::conj(cm) + cp * std::conj(c0);
        const cplx m_m = c0 * std::conj(cp) + cm * std::conj(c0);
        // (P0|A|^2 * A) projected: mode 0: m_p c_- + m_- c_+ ... keep {0,+-q}
        const cplx g0 = m_p * cm + m_m * cp;
        const cplx gp = m_p * c0;
        const cplx gm = m_m * c0;
        out[0] = I * (beta * n0 + g * g0);
        out[1] = I * (-alpha * q * q * cp + beta * np + g * gp);
        out[2] = I * (-alpha * q * q * cm + beta * nm + g * gm);
    }

    void step(std::array<cplx, 3>& c, double h) const {
        std::array<cplx, 3> k1, k2, k3, k4, t;
        rhs(c, k1);
        for (int i = 0; i < 3; ++i) t[i] = c[i] + 0.5 * h * k1[i];
        rhs(t, k2);
        for (int i = 0; i < 3; ++i) t[i] = c[i] + 0.5 * h * k2[i];
        rhs(t, k3);
        for (int i = 0; i < 3; ++i) t[i] = c[i] + h * k3[i];
        rhs(t, k4);
        for (int i = 0; i < 3; ++i) c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
};

}  // namespace

TEST_CASE("MI band and growth rate against the 3-mode truncation") {
    // deep-water numbers at |k| = 1: alpha = -1/8, beta = -1 (no mean channel)
    const double alpha = -0.125, beta = -1.0, a = 0.2;

    SUBCASE("inside the band the truncation grows at the predicted rate") {
        const double q = 0.4;  // band edge is |q| = a sqrt(2 beta/alpha) = 0.8
        const double gamma = mi_predicted_rate(alpha, beta, a, q);
        CHECK(gamma > 0.0);
        ThreeMode tm{alpha, beta, 0.0, q};
        std::array<cplx, 3> c = {cplx{a, 0.0}, cplx{1e-7, 0.0}, cplx{1e-7, 0.0}};
        const double h = 0.01;
        double t0 = 0.0, amp0 = 0.0;
        double t1 = 0.0, amp1 = 0.0;
        for (double t = 0.0; t < 400.0; t += h) {
            tm.step(c, h);
            const double amp = std::abs(c[1]);
            if (amp > 1e-6 && amp0 == 0.0) {
                amp0 = amp;
                t0 = t;
            }
            if (amp > 1e-4) {
                amp1 = amp;
                t1 = t;
                break;
            }
        }
        REQUIRE(amp1 > 0.0);
        const double measured = std::log(amp1 / amp0) / (t1 - t0);
        CHECK(std::abs(measured - gamma) / gamma < 0.05);
    }
    SUBCASE("outside the band nothing grows") {
        const double q = 1.2;
        CHECK(mi_predicted_rate(alpha, beta, a, q) == 0.0);
        ThreeMode tm{alpha, beta, 0.0, q};
        std::array<cplx, 3> c = {cplx{a, 0.0}, cplx{1e-7, 0.0}, cplx{1e-7, 0.0}};
        for (int i = 0; i < 20000; ++i) tm.step(c, 0.01);
        CHECK(std::abs(c[1]) < 1e-5);
    }
    SUBCASE("toy carrier k = 1/2 is sideband-stable once the mean channel acts") {
        // beta_eff = beta + gA mu2 = 1/6 - 3/8 * 8/7 = -11/42 with alpha = 1/4
        const double al = 0.25, be = 1.0 / 6.0, g = -0.375, mu2 = 8.0 / 7.0;
        CHECK(mi_predicted_rate(al, be + g * mu2, 0.5, 0.3) == 0.0);
        ThreeMode tm{al, be, g * mu2, 0.3};
        std::array<cplx, 3> c = {cplx{0.5, 0.0}, cplx{1e-7, 0.0}, cplx{1e-7, 0.0}};
        for (int i = 0; i < 40000; ++i) tm.step(c, 0.01);
        CHECK(std::abs(c[1]) < 1e-5);
    }
}

TEST_CASE("mi_measure matches the prediction on the water system") {
    SystemSpec spec = deepwater_system();
    CarrierSetup c = carrier_setup(spec, 1.0);
    MiScanConfig cfg;
    cfg.n = 128;
    cfg.dt = 0.05;
    cfg.tau_max = 600.0;
    cfg.delta0 = 1e-6;
    auto pt = mi_measure(spec, c, cfg, 0.2, 0.4);
    CHECK(pt.inside_band);
    CHECK(pt.predicted == doctest::Approx(mi_predicted_rate(-0.125, -1.0, 0.2, 0.4)));
    CHECK(std::abs(pt.measured - pt.predicted) / pt.predicted < 0.05);
}

TEST_CASE("mi csv format and determinism") {
    std::vector<MiPoint> pts(2);
    pts[0] = {0.1, 0.2, 0.003, 0.0031, true, false};
    pts[1] = {0.1, 0.9, 0.0, 0.0, false, false};
    const std::string a = mi_csv(pts, 1.0), b = mi_csv(pts, 1.0);
    CHECK(a == b);
    CHECK(a.find("k,a,q,measured_rate,predicted_rate,inside_band,blowup") == 0);
    std::vector<MiPoint> empty;
    CHECK(mi_csv(empty, 1.0) == "k,a,q,measured_rate,predicted_rate,inside_band,blowup\n");
}
