#include "envforge/waterwave_ops.hpp"

#include <cmath>

#include "envforge/kernels.hpp"

namespace envforge {

namespace {
const cplx kI{0.0, 1.0};

// multiplier application in spectral space on a physical-space input
std::vector<cplx> absD(const Grid& g, const Fft& fft, const std::vector<cplx>& f) {
    std::vector<cplx> w;
    fft.forward(f, w);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= g.kabs(i) * g.dealias[i];
    fft.inverse(w);
    return w;
}

std::vector<cplx> grad_dir(const Grid& g, const Fft& fft, const std::vector<cplx>& f, int dir) {
    std::vector<cplx> w;
    fft.forward(f, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double kk = dir == 0 ? g.kx_at(i) : g.ky_at(i);
        w[i] *= kI * kk * g.dealias[i];
    }
    fft.inverse(w);
    return w;
}

std::vector<cplx> laplacian(const Grid& g, const Fft& fft, const std::vector<cplx>& f) {
    std::vector<cplx> w;
    fft.forward(f, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double ka = g.kabs(i);
        w[i] *= -ka * ka * g.dealias[i];
    }
    fft.inverse(w);
    return w;
}

std::vector<cplx> pointwise(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size());
    kernels::hadamard(out.data(), a.data(), b.data(), a.size());
    return out;
}

void check_grids(const Grid& g, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != g.size() || b.size() != g.size())
        throw GridMismatch("field size does not match the grid");
}
}  // namespace

std::vector<cplx> apply_dtn_term(int n, const Grid& g, const Fft& fft,
                                 const std::vector<cplx>& zeta, const std::vector<cplx>& psi) {
    check_grids(g, zeta, psi);
    switch (n) {
        case 0:
            return absD(g, fft, psi);
        case 1: {
            // -|D|(zeta |D| psi) - div(zeta grad psi)
            auto t1 = absD(g, fft, pointwise(zeta, absD(g, fft, psi)));
            std::vector<cplx> out(g.size());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = -t1[i];
            for (int d = 0; d < (g.is_1d() ? 1 : 2); ++d) {
                auto dv = grad_dir(g, fft, pointwise(zeta, grad_dir(g, fft, psi, d)), d);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] -= dv[i];
            }
            return out;
        }
        case 2: {
            // |D|(zeta |D|(zeta |D| psi)) + 1/2 lap(zeta^2 |D| psi) + 1/2 |D|(zeta^2 lap psi)
            auto inner = absD(g, fft, psi);
            auto t1 = absD(g, fft, pointwise(zeta, absD(g, fft, pointwise(zeta, inner))));
            auto z2 = pointwise(zeta, zeta);
            auto t2 = laplacian(g, fft, pointwise(z2, inner));
            auto t3 = absD(g, fft, pointwise(z2, laplacian(g, fft, psi)));
            std::vector<cplx> out(g.size());
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = t1[i] + 0.5 * t2[i] + 0.5 * t3[i];
            return out;
        }
        default:
            throw GridMismatch("DtN term index must be 0, 1 or 2");
    }
}

std::vector<cplx> hilbert_like(const Grid& g, const Fft& fft, const std::vector<cplx>& field,
                               int direction) {
    if (field.size() != g.size()) throw GridMismatch("hilbert_like: field size mismatch");
    std::vector<cplx> w;
    fft.forward(field, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double ka = g.kabs(i);
        if (ka == 0.0) {
            w[i] = 0.0;  // zero mode projected out
            continue;
        }
        const double kd = direction == 0 ? g.kx_at(i) : g.ky_at(i);
        w[i] *= kd / ka;
    }
    fft.inverse(w);
    return w;
}

MeanFlowSolve solve_meanflow(const Grid& g, const Fft& fft, const std::vector<cplx>& A,
                             const CarrierSetup& carrier, double coeff) {
    if (A.size() != g.size()) throw GridMismatch("solve_meanflow: field size mismatch");
    if (carrier.k == 0.0) throw DegenerateCarrier(0.0, "mean flow needs a nonzero carrier");
    std::vector<cplx> rhs(g.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = coeff * std::norm(A[i]);
    fft.forward(rhs);
    MeanFlowSolve out;
    out.psibar.assign(g.size(), 0.0);
    // invert k . grad = i k Kx (carrier along +x); K = 0 gauge, k.K = 0 nulled
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double kx = g.kx_at(i), ky = g.ky_at(i);
        if (kx == 0.0 && ky == 0.0) {
            rhs[i] = 0.0;  // P0 projection of |A|^2 plus zero-mean gauge
            continue;
        }
        const double kdotK = carrier.k * kx;
        if (kdotK == 0.0) {
            rhs[i] = 0.0;
            ++out.transverse_nulled;
            continue;
        }
        rhs[i] /= kI * kdotK;
    }
    fft.inverse(rhs);
    for (std::size_t i = 0; i < rhs.size(); ++i) out.psibar[i] = std::real(rhs[i]);
    return out;
}

WaterHnlsTerms water_hnls_terms(const SystemSpec& spec, const CarrierSetup& carrier) {
    if (spec.state_kind != StateKind::SurfacePair)
        throw UnsupportedSystem("water HNLS terms require the deep-water system");
    WaterHnlsTerms t;
    const double k = std::abs(carrier.k), w = carrier.omega;
    t.alpha = 0.5 * carrier.dispersion_curvature;
    t.coupling_AB = -kI * k * k / w;
    t.coupling_A2Bbar = -kI * k * k / w;
    t.steep_self = 2.0 * k * k * k / w;
    t.steep_conj = k * k * k / w;
    t.third = carrier.third_derivative / 6.0;
    t.nonlocal_grad = k * k * k / w;
    t.nonlocal_mean = k;
    t.damp_grad = spec.V.deriv(k);
    t.beta = -std::pow(k, 4) / w;
    t.v_carrier = spec.V(k);
    t.meanflow_coeff = -std::pow(k, 4) / w;
    return t;
}

void assemble_water_hnls_rhs(const Grid& g, const Fft& fft, const WaterHnlsTerms& t,
                             const std::vector<cplx>& A, const std::vector<cplx>& B,
                             const std::vector<double>& psibar, bool with_B,
                             std::vector<cplx>& NA_hat, std::vector<cplx>& NB_hat) {
    check_grids(g, A, with_B ? B : A);
    const std::size_t n = g.size();

    // A equation: i A_tau + alpha lap A + beta |A|^2 A + i V A = 0
    //   tau-form nonlinear RHS = i beta |A|^2 A
    std::vector<cplx> workA(n);
    for (std::size_t i = 0; i < n; ++i) workA[i] = kI * t.beta * std::norm(A[i]) * A[i];
    fft.forward(workA, NA_hat);
    for (std::size_t i = 0; i < n; ++i) NA_hat[i] *= g.dealias[i];

    if (!with_B) {
        NB_hat.assign(n, cplx{0.0, 0.0});
        return;
    }
    if (psibar.size() != n) throw GridMismatch("assemble_water_hnls_rhs: mean-flow grid mismatch");

    // gradients along the carrier direction (+x)
    auto Ax = grad_dir(g, fft, A, 0);
    auto lapA = laplacian(g, fft, A);
    auto gradlapA = grad_dir(g, fft, lapA, 0);

    std::vector<cplx> a2(n);
    for (std::size_t i = 0; i < n; ++i) a2[i] = std::norm(A[i]);
    auto a2x = grad_dir(g, fft, a2, 0);
    auto R_a2x = hilbert_like(g, fft, a2x, 0);

    std::vector<cplx> psic(n);
    for (std::size_t i = 0; i < n; ++i) psic[i] = psibar[i];
    auto Dxi_psi = grad_dir(g, fft, psic, 0);           // d/dxi
    for (auto& v : Dxi_psi) v *= -kI;                   // D_xi = -i d/dxi
    auto R_Dxi_psi = hilbert_like(g, fft, Dxi_psi, 0);

    // iB-form nonlinear terms, then tau-form RHS = i * (sum)
    std::vector<cplx> nb(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx Ai = A[i], Bi = B[i];
        cplx s = t.coupling_AB * std::norm(Ai) * Bi + t.coupling_A2Bbar * Ai * Ai * std::conj(Bi);
        s += t.steep_self * std::norm(Ai) * Ax[i] + t.steep_conj * Ai * Ai * std::conj(Ax[i]);
        s += -kI * t.third * gradlapA[i];
        s += t.nonlocal_grad * R_a2x[i];
        s += t.nonlocal_mean * Bi * R_Dxi_psi[i];
        s += t.damp_grad * Ax[i];
        nb[i] = kI * s;
    }
    fft.forward(nb, NB_hat);
    for (std::size_t i = 0; i < n; ++i) NB_hat[i] *= g.dealias[i];
}

}  // namespace envforge
