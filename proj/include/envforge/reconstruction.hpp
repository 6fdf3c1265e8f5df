#ifndef ENVFORGE_RECONSTRUCTION_HPP
#define ENVFORGE_RECONSTRUCTION_HPP

#include <string>
#include <vector>

#include "envforge/coefficients.hpp"
#include "envforge/direct_solver.hpp"
#include "envforge/envelope_solver.hpp"

namespace envforge {

// Rebuild the physical field from envelope data at fast time t:
//   u = eps [ (A + eps B) e^{i Omega} + eps phi0 A^2 e^{2 i Omega} + c.c. + eps m2 ]
// with Omega = k x - omega t and the envelopes sampled at xi = eps (x - cg t).
// Pass an empty B for NLS-only reconstruction.
std::vector<double> reconstruct(const std::vector<cplx>& A, const std::vector<cplx>& B,
                                const Grid& envelope_grid, const Grid& direct_grid,
                                const CarrierSetup& carrier, double eps,
                                const NLSCoefficients& coeffs, double t,
                                double group_velocity_override = 0.0);

enum class ReconstructionMode { NlsOnly, Hnls };

struct ConvergenceLeg {
    double eps = 0.0;
    double err_l2_nls = 0.0, err_linf_nls = 0.0;
    double err_l2_hnls = 0.0, err_linf_hnls = 0.0;
    double direct_seconds = 0.0;
};

struct ReconstructionReport {
    std::vector<double> eps_list;
    std::vector<double> err_l2, err_linf;   // for the requested mode
    double fitted_order = 0.0;
    double fit_residual = 0.0;              // rms deviation in log space
    ReconstructionMode mode = ReconstructionMode::NlsOnly;
};

struct StudyConfig {
    double k = 0.5;
    double a = 1.0;
    double delta = 0.2;     // modulation depth of the initial envelope
    int q_mode = 1;         // sideband harmonic of the envelope domain
    std::vector<double> eps_list = {1.0 / 20, 1.0 / 40, 1.0 / 80};
    double tau_end = 1.0;
    double lxi = 2.0 * 3.14159265358979323846;
    std::size_t n_env = 128;
    double dt_env = 2e-3;
    double dt_dir = 0.02;
    std::size_t min_points_per_wavelength = 16;
    VProfile damping = VProfile::none();
    bool prepared_B = false;  // reserved: project an initial B instead of B(.,0)=0
};

struct ValidationResult {
    std::vector<ConvergenceLeg> legs;
    double p_nls = 0.0, p_hnls = 0.0;
    double fit_residual_nls = 0.0, fit_residual_hnls = 0.0;
    bool monotone_nls = false, monotone_hnls = false;
};

// Both modes share the direct runs (the envelope A equation is identical in
// NLS-only and coupled modes; only the reconstruction differs).
ValidationResult run_validation(const StudyConfig& cfg);

// Spec surface: one mode at a time.
ReconstructionReport convergence_study(const StudyConfig& cfg, ReconstructionMode mode);

// least-squares slope of log(err) against log(eps); residual is the rms
// log-space deviation from the fitted line
void fit_order(const std::vector<double>& eps, const std::vector<double>& err, double& slope,
               double& residual);

}  // namespace envforge

#endif
