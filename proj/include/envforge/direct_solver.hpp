#ifndef ENVFORGE_DIRECT_SOLVER_HPP
#define ENVFORGE_DIRECT_SOLVER_HPP

#include <vector>

#include "envforge/coefficients.hpp"
#include "envforge/fft.hpp"
#include "envforge/grid.hpp"
#include "envforge/system_spec.hpp"

namespace envforge {

// Ground-truth pseudo-spectral integrator for the fifth-order toy PDE on a
// periodic domain. Fourier modes rotate as e^{-i omega(K) t} with
// omega(K) = K^3 - K^5 (right-moving carrier convention); the quadratic terms
// u u_x + u u_xxx + u_x u_xx enter through the slaved-amplitude sign that the
// second-harmonic solve fixes. Amplitude ordering is absorbed into the field,
// so `eps` is bookkeeping for the envelope correspondence, not a coefficient.
struct DirectField {
    Grid grid;
    std::vector<double> u;
    double t = 0.0;
    double eps = 0.0;
    double nonlinearity = 1.0;  // 0 disables the quadratic terms (linear runs)
};

class DirectIntegrator {
  public:
    DirectIntegrator(const Grid& grid, const SystemSpec& spec, double dt);

    void step(DirectField& f);
    void run(DirectField& f, double t_end);  // integral number of steps; adjusts the last one

    double dt() const { return dt_; }

  private:
    void nonlinear(const std::vector<cplx>& uhat, std::vector<cplx>& out) const;
    void build_tables(double dt);

    Grid grid_;
    Fft fft_;
    double dt_;
    std::vector<cplx> sym_;
    std::vector<cplx> E_, E2_, Q_, f1_, f2_, f3_;
    double nl_strength_ = 1.0;
    // per-integrator scratch (single owner per integration)
    mutable std::vector<cplx> w_, u_, ux_, uxx_, uxxx_;
    mutable std::vector<double> ru_, rux_, ruxx_, ruxxx_, prod_;
    mutable std::vector<cplx> uh_, na_, nb_, nc_, nd_, a_, b_, c_;
  public:
    void set_nonlinearity(double s) { nl_strength_ = s; }
};

// u = eps [ (A + eps B) e^{i k x} + eps phi0 A^2 e^{2 i k x} + c.c. + eps m2 ]
// sampled at t = 0 with xi = eps x. Envelope grids must be commensurate:
// L_x = L_xi / eps and the carrier a harmonic of the direct domain.
DirectField init_from_envelope(const std::vector<cplx>& A, const std::vector<cplx>& B,
                               const Grid& envelope_grid, const Grid& direct_grid,
                               const CarrierSetup& carrier, double eps,
                               const NLSCoefficients& coeffs);

// exact spectral resampling of a periodic envelope field onto `n_out` points
// with coordinate offset `shift` (used for the xi = eps(x - cg t) frame map)
std::vector<cplx> spectral_resample(const std::vector<cplx>& field, const Grid& from,
                                    std::size_t n_out, double shift);

}  // namespace envforge

#endif
