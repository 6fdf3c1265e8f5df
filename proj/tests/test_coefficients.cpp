#include <cmath>
#include <random>

#include "doctest.h"
#include "envforge/coefficients.hpp"

using namespace envforge;

namespace {
const cplx I{0.0, 1.0};

// Independent closed forms for the toy system, obtained by symbolic two-timing
// of u_t = J u - H(u,u) with omega = k^3 - k^5 and frozen here as rationals.
// These never touch the engine's solve path.
namespace oracle {
double omega(double k) { return k * k * k - std::pow(k, 5); }
double cg(double k) { return 3 * k * k - 5 * std::pow(k, 4); }
cplx L2(double k) { return 6.0 * I * k * k * k * (1.0 - 5.0 * k * k); }
cplx L3(double k) { return -24.0 * I * k * k * k * (10.0 * k * k - 1.0); }
cplx phi0(double k) { return (1 - 2 * k * k) / (6 * k * k * (5 * k * k - 1)); }
cplx psi1(double k) {
    const double num = 10 * std::pow(k, 4) - 10 * k * k + 1;
    return -I * num / (3 * std::pow(k, 3) * std::pow(5 * k * k - 1, 2));
}
cplx psi2(double k) { return 2.0 * phi0(k); }
cplx psi3(double k) { return (2 * k * k - 1) / (48 * std::pow(k, 4) * (10 * k * k - 1)); }
double alpha(double k) { return k * (3 - 10 * k * k); }
double beta(double k) { return (1 - 2 * k * k) / (6 * k); }
double gA(double k) { return k * (k * k - 1); }
double mu2(double k) { return (2 * k * k - 1) / (k * k * (5 * k * k - 3)); }
double third(double k) { return 1.0 - 10.0 * k * k; }  // omega'''/6
// tau-form steepening values, converted to the iB normalization in the checks
double s1_tau(double k) { return -(8 * k * k - 1) / (3 * (5 * k * k - 1)); }
double s2_tau(double k) {
    return -(2 * k * k - 1) * (3 * k * k - 1) / (6 * k * k * (5 * k * k - 1));
}
double cM1_tau(double k) { return 3 * k * k - 1; }
double cM2_tau(double k) { return k * k - 1; }
}  // namespace oracle

bool close(cplx a, cplx b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}
}  // namespace

TEST_CASE("harmonic solve at the spec's pinned point") {
    SystemSpec s = toy_system();
    CarrierSetup c = carrier_setup(s, 0.5);
    // L2 = -2 i omega + (operator part) = -0.1875 i at k = 1/2
    CHECK(close(harmonic_multiplier(s, c, 2), cplx{0.0, -0.1875}, 1e-14));
    auto rec = harmonic_solve(s, c, 2, -s.Hsym(0.5, 0.5), "phi0");
    CHECK(close(rec.forcing, cplx{0.0, -0.25}, 1e-14));
    CHECK(close(rec.solution, cplx{4.0 / 3.0, 0.0}, 1e-14));
    CHECK(rec.residual < 1e-14);
}

TEST_CASE("harmonic solve edge cases") {
    SystemSpec s = toy_system();
    CarrierSetup c = carrier_setup(s, 0.5);
    CHECK_THROWS_AS(harmonic_solve(s, c, 1, cplx{1.0, 0.0}), ResonantHarmonic);
    auto zero = harmonic_solve(s, c, 0, cplx{0.0, 0.0});
    CHECK(zero.solution == cplx{0.0, 0.0});
    CHECK(zero.residual == 0.0);
    // L0 = 0 for the toy: nonzero forcing at the zero harmonic is singular
    CHECK_THROWS_AS(harmonic_solve(s, c, 0, cplx{1.0, 0.0}), SingularHarmonic);
}

TEST_CASE("toy NLS coefficients at k = 1/2") {
    SystemSpec s = toy_system(VProfile::constant(0.01));
    CarrierSetup c = carrier_setup(s, 0.5);
    NLSCoefficients n = nls_coefficients(s, c);
    CHECK(close(n.phi0, cplx{4.0 / 3.0, 0.0}, 1e-14));
    CHECK(close(n.dispersion_coeff, cplx{0.25, 0.0}, 1e-14));
    CHECK(close(n.nonlinear_coeff, cplx{1.0 / 6.0, 0.0}, 1e-14));
    CHECK(close(n.damping, cplx{0.01, 0.0}, 1e-14));
    CHECK(n.has_mean_channel);
    CHECK(close(n.mean_coupling, cplx{-0.375, 0.0}, 1e-14));
    CHECK(close(n.mean_response, cplx{8.0 / 7.0, 0.0}, 1e-14));
    for (const auto& r : n.audit) CHECK(r.residual < 1e-12);
}

TEST_CASE("toy closed-form regression over random carriers") {
    SystemSpec s = toy_system();
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> d(0.2, 0.9);
    int done = 0;
    while (done < 20) {
        const double k = d(rng);
        // skip the second/third-harmonic resonances the engine legitimately rejects
        if (std::abs(5 * k * k - 1) < 2e-2 || std::abs(10 * k * k - 1) < 2e-2) continue;
        CarrierSetup c = carrier_setup(s, k);
        NLSCoefficients n = nls_coefficients(s, c);
        HNLSCoefficients h = hnls_coefficients(s, c, n);
        CHECK(close(n.phi0, oracle::phi0(k), 1e-11));
        CHECK(close(n.dispersion_coeff, oracle::alpha(k) / 1.0 * cplx{0.5, 0.0} * 2.0, 1e-11));
        CHECK(close(n.nonlinear_coeff, oracle::beta(k), 1e-11));
        CHECK(close(n.mean_coupling, oracle::gA(k), 1e-11));
        CHECK(close(n.mean_response, oracle::mu2(k), 1e-11));
        CHECK(close(h.psi1, oracle::psi1(k), 1e-11));
        CHECK(close(h.psi2, oracle::psi2(k), 1e-11));
        CHECK(close(h.psi3, oracle::psi3(k), 1e-11));
        CHECK(close(h.third_deriv_coeff, oracle::third(k), 1e-11));
        CHECK(close(h.coupling_AB, 2.0 * oracle::beta(k), 1e-11));
        CHECK(close(h.coupling_A2Bbar, oracle::beta(k), 1e-11));
        CHECK(close(h.selfsteep_coeff, -I * oracle::s1_tau(k), 1e-11));
        CHECK(close(h.conj_steep_coeff, -I * oracle::s2_tau(k), 1e-11));
        CHECK(close(h.mean_gradA_coeff, -I * oracle::cM1_tau(k), 1e-11));
        CHECK(close(h.mean_gradm_coeff, -I * oracle::cM2_tau(k), 1e-11));
        // phi0 satisfies its defining solve exactly, independent of any formula
        CHECK(std::abs(oracle::L2(k) * n.phi0 + s.Hsym(k, k)) < 1e-13);
        for (const auto& r : h.audit) CHECK(r.residual < 1e-12);
        ++done;
    }
}

TEST_CASE("user polynomial system with a cubic term reproduces its derivation") {
    // u_t = J u - H(u,u) - T(u,u,u) with J = i(k^5 - 2k^3), H = i(k1+k2)^3,
    // T = (1/2) i (k1+k2+k3)^3; oracle values frozen from the same symbolic
    // two-timing run that produced the toy forms.
    Poly1 J({{5, I}, {3, -2.0 * I}});
    Poly2 H({{{3, 0}, I}, {{2, 1}, 3.0 * I}, {{1, 2}, 3.0 * I}, {{0, 3}, I}});
    Poly3 T({{{3, 0, 0}, 0.5 * I}, {{0, 3, 0}, 0.5 * I}, {{0, 0, 3}, 0.5 * I},
             {{2, 1, 0}, 1.5 * I}, {{2, 0, 1}, 1.5 * I}, {{1, 2, 0}, 1.5 * I},
             {{0, 2, 1}, 1.5 * I}, {{1, 0, 2}, 1.5 * I}, {{0, 1, 2}, 1.5 * I},
             {{1, 1, 1}, 3.0 * I}});
    SystemSpec s = user_system("cubicflux", J, H, T, VProfile::none());
    CarrierSetup c = carrier_setup(s, 0.7);
    CHECK(c.omega == doctest::Approx(0.51793).epsilon(1e-12));
    CHECK(c.cg == doctest::Approx(1.7395).epsilon(1e-12));
    NLSCoefficients n = nls_coefficients(s, c);
    HNLSCoefficients h = hnls_coefficients(s, c, n);
    CHECK(close(n.phi0, cplx{80.0 / 27.0, 0.0}, 1e-12));
    CHECK(close(n.nonlinear_coeff, cplx{-2.5470925925925926, 0.0}, 1e-11));
    CHECK(close(n.dispersion_coeff, cplx{0.77, 0.0}, 1e-12));
    CHECK(close(n.mean_coupling, cplx{-0.686, 0.0}, 1e-12));
    CHECK(std::abs(n.mean_response) < 1e-13);  // sigma0 vanishes for derivative-form H
    CHECK(!n.has_mean_channel);
    CHECK(close(h.psi1, 46.090534979423865 * I, 1e-11));
    CHECK(close(h.psi2, cplx{160.0 / 27.0, 0.0}, 1e-11));
    CHECK(close(h.psi3, cplx{2.492816091954023, 0.0}, 1e-11));
    CHECK(close(h.selfsteep_coeff, -I * 9.785884773662552, 1e-11));
    CHECK(close(h.conj_steep_coeff, -I * (-10.91611111111111), 1e-11));
    CHECK(close(h.coupling_AB, cplx{-5.094185185185185, 0.0}, 1e-11));  // 2 beta
    CHECK(close(h.third_deriv_coeff, cplx{-2.9, 0.0}, 1e-12));
    CHECK(close(h.mean_gradA_coeff, -I * (-2.94), 1e-12));
    CHECK(close(h.mean_gradm_coeff, -I * (-2.94), 1e-12));
}

TEST_CASE("printed-form audit quantifies the published discrepancies") {
    SystemSpec s = toy_system();
    CarrierSetup c = carrier_setup(s, 0.5);
    NLSCoefficients n = nls_coefficients(s, c);
    HNLSCoefficients h = hnls_coefficients(s, c, n);
    PrintedFormAudit a = printed_form_audit(s, c, n, h);
    // the engine's phi0 satisfies L2 phi0 = -H(k,k) to machine precision;
    // the printed phi0 misses by a sizable residual
    CHECK(a.phi0_engine_residual < 1e-12);
    CHECK(a.phi0_printed_residual > 1e-3);
    CHECK(a.phi0_printed_residual == doctest::Approx(0.196428571428).epsilon(1e-9));
    // printed closed forms evaluate exactly as published
    CHECK(printed_toy::hnls_conj_steep(0.5) == doctest::Approx(3.0));
    CHECK(printed_toy::hnls_grad_conj(0.5) == doctest::Approx(-0.25));
    CHECK(printed_toy::hnls_third(0.5) == doctest::Approx(6.0));
    CHECK(printed_toy::nls_nonlinear(0.5) == doctest::Approx(0.34375));
    CHECK(printed_toy::nls_dispersion(0.5) == doctest::Approx(-2.0));
    CHECK(std::abs(a.printed_nonlinear - cplx{0.34375, 0.0}) < 1e-14);
}

TEST_CASE("water coefficients at |k| = 1") {
    SystemSpec s = deepwater_system();
    CarrierSetup c = carrier_setup(s, 1.0);
    NLSCoefficients n = nls_coefficients(s, c);
    CHECK(close(n.dispersion_coeff, cplx{-0.125, 0.0}, 1e-14));
    CHECK(close(n.nonlinear_coeff, cplx{-1.0, 0.0}, 1e-14));
    CHECK(std::abs(std::abs(n.nonlinear_coeff) - 1.0) < 1e-14);
    CHECK(close(n.phi0, I, 1e-14));  // i |k|^2 / omega
    for (const auto& r : n.audit) CHECK(r.residual < 1e-12);
    HNLSCoefficients h = hnls_coefficients(s, c, n);
    for (const auto& r : h.audit) CHECK(r.residual < 1e-12);
    CHECK(meanflow_constraint(s, c) == doctest::Approx(-1.0));
    CarrierSetup c4 = carrier_setup(s, 4.0);
    CHECK(meanflow_constraint(s, c4) == doctest::Approx(-128.0));
    SystemSpec toy = toy_system();
    CarrierSetup ct = carrier_setup(toy, 0.5);
    CHECK_THROWS_AS(meanflow_constraint(toy, ct), UnsupportedSystem);
}

TEST_CASE("water harmonic records solve the matrix problem") {
    SystemSpec s = deepwater_system();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.3, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double k = d(rng);
        CarrierSetup c = carrier_setup(s, k);
        // eigen-pair residual: L1 (A v) = 0 with v = [i w, 1]
        auto L1 = harmonic_matrix(c, 1);
        const cplx v0 = I * c.omega, v1 = 1.0;
        const cplx r0 = L1[0] * v0 + L1[1] * v1;
        const cplx r1 = L1[2] * v0 + L1[3] * v1;
        CHECK(std::hypot(std::abs(r0), std::abs(r1)) < 1e-12);
        auto rec = harmonic_solve(s, c, 2, std::array<cplx, 2>{cplx{0.0, 0.0}, cplx{k * k, 0.0}});
        CHECK(rec.residual < 1e-12);
        // the second-harmonic solution is (i k^2 / w) v
        const cplx f = I * k * k / c.omega;
        CHECK(close(rec.solution_vec[0], f * I * c.omega, 1e-11));
        CHECK(close(rec.solution_vec[1], f, 1e-11));
    }
}
