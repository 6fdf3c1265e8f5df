#ifndef ENVFORGE_WATERWAVE_OPS_HPP
#define ENVFORGE_WATERWAVE_OPS_HPP

#include <vector>

#include "envforge/coefficients.hpp"
#include "envforge/fft.hpp"
#include "envforge/grid.hpp"
#include "envforge/system_spec.hpp"

namespace envforge {

// Deep-water operator kit on periodic envelope grids. |D| and grad act as
// Fourier multipliers |K| and iK; products are pointwise with the 2/3 rule.
// All fields are flattened row-major (x fastest).

// G0 psi = |D| psi
// G1[zeta] psi = -|D|(zeta |D| psi) - div(zeta grad psi)
// G2[zeta] psi = |D|(zeta |D|(zeta |D| psi)) + 1/2 lap(zeta^2 |D| psi) + 1/2 |D|(zeta^2 lap psi)
std::vector<cplx> apply_dtn_term(int n, const Grid& g, const Fft& fft,
                                 const std::vector<cplx>& zeta, const std::vector<cplx>& psi);

// Componentwise K_dir/|K| multiplier (sign function in 1D); the K = 0 mode is
// projected out. direction is 0 (x) or 1 (y).
std::vector<cplx> hilbert_like(const Grid& g, const Fft& fft, const std::vector<cplx>& field,
                               int direction = 0);

struct MeanFlowSolve {
    std::vector<double> psibar;     // zero-mean gauge
    std::size_t transverse_nulled = 0;  // 2D modes with k.K == 0 set to zero
};

// Solve k . grad_xi psibar1 = coeff * P0|A|^2 spectrally; carrier along +x.
MeanFlowSolve solve_meanflow(const Grid& g, const Fft& fft, const std::vector<cplx>& A,
                             const CarrierSetup& carrier, double coeff);

// Fixed coefficient bundle of the boxed coupled system (iB_tau normalization).
struct WaterHnlsTerms {
    double alpha = 0.0;          // (1/2) d2w/dk2 (Schroedinger part of both equations)
    cplx coupling_AB{};          // -i |k|^2/w       |A|^2 B
    cplx coupling_A2Bbar{};      // -i |k|^2/w       A^2 conj(B)
    double steep_self = 0.0;     // 2|k|^3/w         |A|^2 (khat.grad)A
    double steep_conj = 0.0;     // |k|^3/w          A^2 (khat.grad)conj(A)
    double third = 0.0;          // (1/6) d3w/dk3    enters as -i*third*(khat.grad)lap A
    double nonlocal_grad = 0.0;  // |k|^3/w          R[(khat.grad)|A|^2]
    double nonlocal_mean = 0.0;  // |k|             B R[-i (khat.grad) psibar1]
    double damp_grad = 0.0;      // dV/dk            (khat.grad)A
    double beta = 0.0;           // -|k|^4/w         NLS cubic
    double v_carrier = 0.0;      // V(|k|)
    double meanflow_coeff = 0.0; // -|k|^4/w
};

WaterHnlsTerms water_hnls_terms(const SystemSpec& spec, const CarrierSetup& carrier);

// Nonlinear tau-form forcings of the coupled water system; psibar must be the
// current mean flow for this A. Outputs are spectral and dealiased.
void assemble_water_hnls_rhs(const Grid& g, const Fft& fft, const WaterHnlsTerms& t,
                             const std::vector<cplx>& A, const std::vector<cplx>& B,
                             const std::vector<double>& psibar, bool with_B,
                             std::vector<cplx>& NA_hat, std::vector<cplx>& NB_hat);

}  // namespace envforge

#endif
