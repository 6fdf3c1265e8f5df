// Kernel benchmark: serial reference vs OpenMP variants of the pointwise
// inner loops, plus one full ETDRK4 direct-solver step per grid size.

#include <chrono>
#include <functional>
#include <cstdio>
#include <random>
#include <vector>

#include "envforge/direct_solver.hpp"
#include "envforge/kernels.hpp"
#include "envforge/par.hpp"
#include "envforge/system_spec.hpp"

using namespace envforge;
using clk = std::chrono::steady_clock;

namespace {

double time_ms(int reps, const std::function<void()>& body) {
    body();  // warm up
    const auto t0 = clk::now();
    for (int i = 0; i < reps; ++i) body();
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count() / reps;
}

void fill_random(std::vector<cplx>& v, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& x : v) x = {d(rng), d(rng)};
}

}  // namespace

int main() {
    std::mt19937_64 rng(12345);
    std::printf("threads available: %d\n", par::max_threads());
    std::printf("%-22s %10s %12s %12s %8s\n", "kernel", "N", "serial(ms)", "omp(ms)", "speedup");

    for (std::size_t n : {1u << 12, 1u << 14, 1u << 16, 1u << 18, 1u << 20}) {
        std::vector<cplx> w(n), s(n), a(n), b(n), out(n);
        fill_random(w, rng);
        fill_random(s, rng);
        fill_random(a, rng);
        fill_random(b, rng);
        const int reps = n >= (1u << 18) ? 20 : 200;

        double t_ser = time_ms(reps, [&] { kernels::apply_symbol_serial(w.data(), s.data(), n); });
        double t_omp = time_ms(reps, [&] { kernels::apply_symbol_omp(w.data(), s.data(), n); });
        std::printf("%-22s %10zu %12.4f %12.4f %8.2f\n", "apply_symbol", n, t_ser, t_omp,
                    t_ser / t_omp);

        t_ser = time_ms(reps, [&] { kernels::hadamard_serial(out.data(), a.data(), b.data(), n); });
        t_omp = time_ms(reps, [&] { kernels::hadamard_omp(out.data(), a.data(), b.data(), n); });
        std::printf("%-22s %10zu %12.4f %12.4f %8.2f\n", "hadamard", n, t_ser, t_omp,
                    t_ser / t_omp);

        std::vector<double> ru(n), rux(n), ruxx(n), ruxxx(n), prod(n);
        for (std::size_t i = 0; i < n; ++i) {
            ru[i] = a[i].real();
            rux[i] = b[i].real();
            ruxx[i] = s[i].real();
            ruxxx[i] = w[i].real();
        }
        t_ser = time_ms(reps, [&] {
            kernels::kdv_products_serial(prod.data(), ru.data(), rux.data(), ruxx.data(),
                                         ruxxx.data(), n);
        });
        t_omp = time_ms(reps, [&] {
            kernels::kdv_products_omp(prod.data(), ru.data(), rux.data(), ruxx.data(),
                                      ruxxx.data(), n);
        });
        std::printf("%-22s %10zu %12.4f %12.4f %8.2f\n", "kdv_products", n, t_ser, t_omp,
                    t_ser / t_omp);
    }

    // end-to-end: one ETDRK4 step of the direct solver
    std::printf("\n%-22s %10s %12s\n", "direct ETDRK4 step", "N", "ms/step");
    SystemSpec spec = toy_system();
    for (std::size_t n : {1024u, 4096u, 16384u, 65536u}) {
        Grid g = Grid::line(n, 2.0 * 3.14159265358979323846 * 40.0);
        DirectIntegrator integ(g, spec, 0.01);
        DirectField f;
        f.grid = g;
        f.u.resize(n);
        for (std::size_t i = 0; i < n; ++i) f.u[i] = 0.05 * std::cos(0.5 * g.x[i]);
        const double ms = time_ms(50, [&] { integ.step(f); });
        std::printf("%-22s %10zu %12.4f\n", "", n, ms);
    }
    return 0;
}
