#ifndef ENVFORGE_KERNELS_HPP
#define ENVFORGE_KERNELS_HPP

// Pointwise grid kernels, the FFT-adjacent inner loops of both solvers.
// Each kernel has a serial reference implementation (`*_serial`) and an
// OpenMP variant (`*_omp`). The dispatching wrappers pick the OpenMP path
// for grids above a size threshold; tests pin serial vs parallel equality
// and the bench tool times the two against each other.

#include <complex>
#include <cstddef>
#include <vector>

#ifdef ENVFORGE_OPENMP
#include <omp.h>
#endif

namespace envforge::kernels {

using cplx = std::complex<double>;

// below this many points the fork/join overhead dominates
inline constexpr std::size_t kParallelCutoff = 8192;

inline bool use_parallel(std::size_t n) {
#ifdef ENVFORGE_OPENMP
    return n >= kParallelCutoff && !omp_in_parallel();
#else
    (void)n;
    return false;
#endif
}

// ---- w[i] *= s[i] (apply a Fourier symbol) ----
inline void apply_symbol_serial(cplx* w, const cplx* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] *= s[i];
}
inline void apply_symbol_omp(cplx* w, const cplx* s, std::size_t n) {
#ifdef ENVFORGE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) w[i] *= s[i];
}
inline void apply_symbol(cplx* w, const cplx* s, std::size_t n) {
    use_parallel(n) ? apply_symbol_omp(w, s, n) : apply_symbol_serial(w, s, n);
}

// ---- out[i] = a[i] * b[i] ----
inline void hadamard_serial(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
inline void hadamard_omp(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
#ifdef ENVFORGE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) out[i] = a[i] * b[i];
}
inline void hadamard(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    use_parallel(n) ? hadamard_omp(out, a, b, n) : hadamard_serial(out, a, b, n);
}

// ---- out[i] += c * a[i] ----
inline void axpy_serial(cplx* out, cplx c, const cplx* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += c * a[i];
}
inline void axpy_omp(cplx* out, cplx c, const cplx* a, std::size_t n) {
#ifdef ENVFORGE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) out[i] += c * a[i];
}
inline void axpy(cplx* out, cplx c, const cplx* a, std::size_t n) {
    use_parallel(n) ? axpy_omp(out, c, a, n) : axpy_serial(out, c, a, n);
}

// ---- ETDRK4 stage combination: s[i] = e2[i]*u[i] + q[i]*nl[i] ----
inline void etd_stage_serial(cplx* s, const cplx* e2, const cplx* u, const cplx* q,
                             const cplx* nl, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) s[i] = e2[i] * u[i] + q[i] * nl[i];
}
inline void etd_stage_omp(cplx* s, const cplx* e2, const cplx* u, const cplx* q,
                          const cplx* nl, std::size_t n) {
#ifdef ENVFORGE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        s[i] = e2[i] * u[i] + q[i] * nl[i];
}
inline void etd_stage(cplx* s, const cplx* e2, const cplx* u, const cplx* q,
                      const cplx* nl, std::size_t n) {
    use_parallel(n) ? etd_stage_omp(s, e2, u, q, nl, n) : etd_stage_serial(s, e2, u, q, nl, n);
}

// ---- ETDRK4 final update: u = e*u + na*f1 + 2(nb+nc)*f2 + nd*f3 ----
inline void etd_update_serial(cplx* u, const cplx* e, const cplx* f1, const cplx* f2,
                              const cplx* f3, const cplx* na, const cplx* nb,
                              const cplx* nc, const cplx* nd, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        u[i] = e[i] * u[i] + na[i] * f1[i] + 2.0 * (nb[i] + nc[i]) * f2[i] + nd[i] * f3[i];
}
inline void etd_update_omp(cplx* u, const cplx* e, const cplx* f1, const cplx* f2,
                           const cplx* f3, const cplx* na, const cplx* nb,
                           const cplx* nc, const cplx* nd, std::size_t n) {
#ifdef ENVFORGE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        u[i] = e[i] * u[i] + na[i] * f1[i] + 2.0 * (nb[i] + nc[i]) * f2[i] + nd[i] * f3[i];
}
inline void etd_update(cplx* u, const cplx* e, const cplx* f1, const cplx* f2, const cplx* f3,
                       const cplx* na, const cplx* nb, const cplx* nc, const cplx* nd,
                       std::size_t n) {
    use_parallel(n) ? etd_update_omp(u, e, f1, f2, f3, na, nb, nc, nd, n)
                    : etd_update_serial(u, e, f1, f2, f3, na, nb, nc, nd, n);
}

// ---- real cubic product stage of the direct solver: out = u*ux + u*uxxx + ux*uxx ----
inline void kdv_products_serial(double* out, const double* u, const double* ux,
                                const double* uxx, const double* uxxx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i] * ux[i] + u[i] * uxxx[i] + ux[i] * uxx[i];
}
inline void kdv_products_omp(double* out, const double* u, const double* ux,
                             const double* uxx, const double* uxxx, std::size_t n) {
#ifdef ENVFORGE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[i] = u[i] * ux[i] + u[i] * uxxx[i] + ux[i] * uxx[i];
}
inline void kdv_products(double* out, const double* u, const double* ux, const double* uxx,
                         const double* uxxx, std::size_t n) {
    use_parallel(n) ? kdv_products_omp(out, u, ux, uxx, uxxx, n)
                    : kdv_products_serial(out, u, ux, uxx, uxxx, n);
}

}  // namespace envforge::kernels

#endif
