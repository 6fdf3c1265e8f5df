#ifndef ENVFORGE_COEFFICIENTS_HPP
#define ENVFORGE_COEFFICIENTS_HPP

#include <array>
#include <string>
#include <vector>

#include "envforge/system_spec.hpp"

namespace envforge {

// ---------------------------------------------------------------------------
// Harmonic solves. The linearized operator at the n-th carrier harmonic is
//   scalar systems:  L_n = i (omega(n k) - n omega(k))
//   surface pair:    L_n = [[-i n w, -n|k|], [1, -i n w]]
// n = 1 is the resonant harmonic (L_1 = 0 / singular) and is rejected; the
// solvability condition there is the envelope equation itself.
// ---------------------------------------------------------------------------

struct HarmonicSolveRecord {
    int n = 0;
    bool is_matrix = false;
    std::string label;

    cplx L{};                          // scalar multiplier
    std::array<cplx, 4> L_mat{};       // row-major 2x2
    cplx forcing{}, solution{};
    std::array<cplx, 2> forcing_vec{}, solution_vec{};
    double residual = 0.0;             // |L sol - f| / max(1, |f|)
};

cplx harmonic_multiplier(const SystemSpec& spec, const CarrierSetup& carrier, int n);
std::array<cplx, 4> harmonic_matrix(const CarrierSetup& carrier, int n);

HarmonicSolveRecord harmonic_solve(const SystemSpec& spec, const CarrierSetup& carrier, int n,
                                   cplx forcing, const std::string& label = "");
HarmonicSolveRecord harmonic_solve(const SystemSpec& spec, const CarrierSetup& carrier, int n,
                                   const std::array<cplx, 2>& forcing,
                                   const std::string& label = "");

// ---------------------------------------------------------------------------
// Envelope coefficient sets, stored in the iA_tau normalization:
//   i A_tau + alpha A_xixi + beta |A|^2 A + gA m2 A + i V(k) A = 0
//   m2 = mu2 * P0|A|^2   (zero-mode-projected; the toy's wave-induced mean)
// The solver converts to d/dtau form once at load.
// ---------------------------------------------------------------------------

struct NLSCoefficients {
    double k = 0.0;
    cplx dispersion_coeff{};   // alpha = (1/2) d2w/dk2
    cplx nonlinear_coeff{};    // beta
    cplx damping{};            // V(k)
    cplx phi0{};               // second-harmonic amplitude (scalar; along-v factor for water)
    bool has_mean_channel = false;
    cplx mean_coupling{};      // gA
    cplx mean_response{};      // mu2
    std::vector<HarmonicSolveRecord> audit;
};

// Recipe for the order-eps mean correction m3 driven by the B stage:
//   transport * d(m3)/dxi = sigma0 * d/dxi(conj(A)B + A conj(B))
//                           - Re[h11 A'' Ab + 2 h12 A' Ab' + h22 A Ab'']
//                           + d(m2)/dtau + V(0) m2
//                           + t_mm |A|^2 m2 + t_quartic |A|^4
// with the zero mode gauged away.
struct MeanFlowRecipe {
    double transport = 0.0;    // cg - omega'(0)
    cplx sigma0{};             // real-valued in valid systems
    cplx h11{}, h12{}, h22{};  // second derivatives of Hsym at (k,-k)
    double v_zero = 0.0;       // V(0)
    cplx t_mm{};               // 6 Tsym(k,-k,0)
    double t_quartic = 0.0;    // 6 Re(Tsym(k,k,-2k) conj(phi0))
};

// B-equation coefficients (iB_tau normalization):
//   i B_tau + alpha B_xixi + coupling_AB |A|^2 B + coupling_A2Bbar A^2 conj(B)
//   - i third_deriv_coeff A_xixixi + selfsteep |A|^2 A_xi + conj_steep A^2 conj(A)_xi
//   + gA (m2 B + m3 A) + mean_gradA m2 A_xi + mean_gradm (m2)_xi A
//   + i V(k) B + damping_derivative A_xi = 0
struct HNLSCoefficients {
    double k = 0.0;
    cplx third_deriv_coeff{};   // (1/6) d3w/dk3 (real slot; enters with -i)
    cplx psi1{}, psi2{}, psi3{};
    cplx selfsteep_coeff{};
    cplx conj_steep_coeff{};
    cplx coupling_AB{};         // = 2 beta
    cplx coupling_A2Bbar{};     // = beta
    cplx damping_derivative{};  // dV/dk at the carrier
    cplx mean_B_coupling{};     // = gA
    cplx mean_m3_coupling{};    // = gA
    cplx mean_gradA_coeff{};
    cplx mean_gradm_coeff{};
    MeanFlowRecipe m3;
    std::vector<HarmonicSolveRecord> audit;
};

NLSCoefficients nls_coefficients(const SystemSpec& spec, const CarrierSetup& carrier);
HNLSCoefficients hnls_coefficients(const SystemSpec& spec, const CarrierSetup& carrier,
                                   const NLSCoefficients& nls);

// Right-side coefficient of the deep-water mean-flow constraint
//   k . grad_xi psibar1 = meanflow_constraint(carrier) * |A|^2
// UnsupportedSystem for scalar systems.
double meanflow_constraint(const SystemSpec& spec, const CarrierSetup& carrier);

// ---------------------------------------------------------------------------
// Printed-formula audit. The published closed forms for the toy system,
// evaluated verbatim for side-by-side comparison with the engine values.
// Several disagree with the residual-verified solves (documented); the audit
// quantifies each discrepancy instead of silently adopting either side.
// ---------------------------------------------------------------------------

namespace printed_toy {
double nls_nonlinear(double k);     // k (1 - 5 k^4)
double nls_dispersion(double k);    // k (20 k^2 - 9)
cplx phi0(double k);                // (1-2k^2) / (2k^2 (17k-5))
cplx psi1(double k);                // (2k^2-1) / (2k (17k-5))
cplx psi2(double k);                // (2k^2-3k-1) / (2k^3 (17k-5))
cplx psi3(double k);                // 2(1-6k^2) phi0 / (3k^2 (41k^2-5))
double hnls_conj_steep(double k);   // 1 + 4k
double hnls_grad_conj(double k);    // 1 - 4k + 3k^2
double hnls_third(double k);        // 6k (10k - 3)
}  // namespace printed_toy

struct PrintedFormAudit {
    double k = 0.0;
    // residual proof for the second-harmonic amplitude: |L2 x + H(k,k)|
    double phi0_engine_residual = 0.0;   // with the engine's phi0
    double phi0_printed_residual = 0.0;  // with the printed phi0
    // engine vs printed coefficient values
    cplx engine_nonlinear{}, printed_nonlinear{};
    cplx engine_dispersion{}, printed_dispersion{};
    cplx engine_third{}, printed_third{};
    cplx engine_conj_steep{}, printed_conj_steep{};
    cplx printed_grad_conj{};  // structure absent from the residual-verified B equation
};

PrintedFormAudit printed_form_audit(const SystemSpec& spec, const CarrierSetup& carrier,
                                    const NLSCoefficients& nls, const HNLSCoefficients& hnls);

}  // namespace envforge

#endif
