#include <cmath>
#include <numbers>

#include "doctest.h"
#include "envforge/direct_solver.hpp"

using namespace envforge;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;

DirectField make_field(const Grid& g, double nonlinearity = 1.0) {
    DirectField f;
    f.grid = g;
    f.u.assign(g.size(), 0.0);
    f.nonlinearity = nonlinearity;
    return f;
}
}  // namespace

TEST_CASE("linear single mode translates at the phase speed") {
    SystemSpec spec = toy_system();
    const double k = 0.5;
    const double omega = spec.omega(k);   // k^3 - k^5 = 0.09375
    Grid g = Grid::line(256, 8.0 * kTwoPi);  // 4 carrier wavelengths of 4 pi
    DirectField f = make_field(g, 0.0);
    for (std::size_t i = 0; i < g.nx; ++i) f.u[i] = 0.02 * std::cos(k * g.x[i]);
    DirectIntegrator integ(g, spec, 1e-2);
    integ.run(f, 10.0);
    // phase speed omega/k = 0.1875, rightwards
    double err = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i)
        err = std::max(err, std::abs(f.u[i] - 0.02 * std::cos(k * g.x[i] - omega * 10.0)));
    CHECK(err < 1e-8 * 10.0);
    CHECK(omega / k == doctest::Approx(0.1875));
}

TEST_CASE("zero field is a fixed point") {
    SystemSpec spec = toy_system();
    Grid g = Grid::line(64, kTwoPi * 4.0);
    DirectField f = make_field(g);
    DirectIntegrator integ(g, spec, 1e-2);
    integ.run(f, 5.0);
    for (double v : f.u) CHECK(v == 0.0);
}

TEST_CASE("linear modes evolve independently") {
    SystemSpec spec = toy_system();
    Grid g = Grid::line(256, 8.0 * kTwoPi);
    DirectField f = make_field(g, 0.0);
    for (std::size_t i = 0; i < g.nx; ++i)
        f.u[i] = 0.1 * std::cos(0.5 * g.x[i]) + 0.05 * std::sin(0.75 * g.x[i]);
    DirectIntegrator integ(g, spec, 1e-2);
    integ.run(f, 20.0);
    Grid gg = g;
    Fft fft(gg);
    std::vector<cplx> uh(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) uh[i] = f.u[i];
    fft.forward(uh);
    double cross = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double m = std::abs(g.kx[i]);
        const bool seeded = std::abs(m - 0.5) < 1e-9 || std::abs(m - 0.75) < 1e-9;
        if (!seeded) cross = std::max(cross, std::abs(uh[i]) / static_cast<double>(g.nx));
    }
    CHECK(cross < 1e-12);
}

TEST_CASE("integral of u is exactly conserved by the scheme") {
    SystemSpec spec = toy_system();
    Grid g = Grid::line(512, 8.0 * kTwoPi);
    DirectField f = make_field(g);
    for (std::size_t i = 0; i < g.nx; ++i)
        f.u[i] = 0.05 * std::cos(0.5 * g.x[i]) + 0.01 * std::cos(0.25 * g.x[i] + 0.3);
    const double m0 = integrate(g, f.u);
    DirectIntegrator integ(g, spec, 1e-2);
    integ.run(f, 50.0);
    CHECK(std::abs(integrate(g, f.u) - m0) < 1e-10);
}

TEST_CASE("wave packet travels at the group velocity (sign resolver)") {
    // A narrow Gaussian envelope on carrier k = 0.5 must translate at
    // d(omega)/dk = 3k^2 - 5k^4 = 0.4375 within 1%.
    SystemSpec spec = toy_system();
    const double k = 0.5, cg_expected = 0.4375;
    const double L = 64.0 * kTwoPi;   // room for the packet to move
    Grid g = Grid::line(4096, L);
    DirectField f = make_field(g, 0.0);
    const double x0 = L / 4.0, width = 40.0;  // wide enough that packet spread stays below 1%
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double dx = g.x[i] - x0;
        f.u[i] = 0.01 * std::exp(-dx * dx / (2.0 * width * width)) * std::cos(k * g.x[i]);
    }
    auto centroid = [&]() {
        // energy centroid of the envelope
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double e = f.u[i] * f.u[i];
            num += g.x[i] * e;
            den += e;
        }
        return num / den;
    };
    const double c0 = centroid();
    const double T = 120.0;
    DirectIntegrator integ(g, spec, 2e-2);
    integ.run(f, T);
    const double measured = (centroid() - c0) / T;
    CHECK(std::abs(measured - cg_expected) / cg_expected < 0.01);
}

TEST_CASE("dt-halving self convergence is fourth order") {
    SystemSpec spec = toy_system();
    Grid g = Grid::line(256, 8.0 * kTwoPi);
    auto run = [&](double dt) {
        DirectField f = make_field(g);
        for (std::size_t i = 0; i < g.nx; ++i)
            f.u[i] = 0.08 * std::cos(0.5 * g.x[i]) * (1.0 + 0.3 * std::cos(g.x[i] / 8.0));
        DirectIntegrator integ(g, spec, dt);
        integ.run(f, 16.0);
        return f;
    };
    auto f1 = run(0.05), f2 = run(0.025), f3 = run(0.0125);
    double d12 = 0.0, d23 = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        d12 = std::max(d12, std::abs(f1.u[i] - f2.u[i]));
        d23 = std::max(d23, std::abs(f2.u[i] - f3.u[i]));
    }
    CHECK(std::log2(d12 / d23) > 3.8);
}

TEST_CASE("initialization from the envelope") {
    SystemSpec spec = toy_system();
    CarrierSetup c = carrier_setup(spec, 0.5);
    NLSCoefficients nls = nls_coefficients(spec, c);
    const double eps = 1.0 / 20.0;
    Grid env = Grid::line(64, kTwoPi);
    Grid dir = Grid::line(512, kTwoPi / eps);

    SUBCASE("zero envelopes give the zero field") {
        std::vector<cplx> A(env.size(), cplx{});
        DirectField f = init_from_envelope(A, {}, env, dir, c, eps, nls);
        for (double v : f.u) CHECK(v == 0.0);
    }
    SUBCASE("uniform envelope peaks near 2 eps a + 2 eps^2 |phi0| a^2") {
        const double a = 1.0;
        std::vector<cplx> A(env.size(), cplx{a, 0.0});
        DirectField f = init_from_envelope(A, {}, env, dir, c, eps, nls);
        double peak = 0.0;
        for (double v : f.u) peak = std::max(peak, v);
        const double expect = 2.0 * eps * a + 2.0 * eps * eps * std::abs(nls.phi0) * a * a;
        CHECK(std::abs(peak - expect) / expect < 2e-3);
    }
    SUBCASE("incommensurate grids are rejected with both lengths reported") {
        Grid bad = Grid::line(512, kTwoPi / eps * 1.07);
        std::vector<cplx> A(env.size(), cplx{1.0, 0.0});
        try {
            init_from_envelope(A, {}, env, bad, c, eps, nls);
            CHECK(false);
        } catch (const IncommensurateGrids& e) {
            CHECK(e.lx_direct == doctest::Approx(bad.lx));
            CHECK(e.lxi_envelope == doctest::Approx(env.lx));
        }
    }
}

TEST_CASE("blow-up detection in the direct solver") {
    SystemSpec spec = toy_system();
    Grid g = Grid::line(64, kTwoPi * 4.0);
    DirectField f = make_field(g);
    for (std::size_t i = 0; i < g.nx; ++i) f.u[i] = 3.0e6 * std::cos(0.5 * g.x[i]);
    DirectIntegrator integ(g, spec, 1e-2);
    CHECK_THROWS_AS(integ.step(f), BlowUp);
}
