#ifndef ENVFORGE_ENVELOPE_SOLVER_HPP
#define ENVFORGE_ENVELOPE_SOLVER_HPP

#include <memory>
#include <vector>

#include "envforge/coefficients.hpp"
#include "envforge/fft.hpp"
#include "envforge/grid.hpp"
#include "envforge/system_spec.hpp"
#include "envforge/waterwave_ops.hpp"

namespace envforge {

enum class Scheme { EtdRk4, SplitStep };

struct SolverConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::EtdRk4;
    bool dealias = true;
    int record_stride = 100;
};

struct Diagnostics {
    double tau = 0.0;
    double mass = 0.0;       // integral |A|^2
    double momentum = 0.0;   // Im integral conj(A) A_xi
    double max_abs_a = 0.0;
    double mass_b = 0.0;
};

struct EnvelopeState {
    Grid grid;
    std::vector<cplx> A;
    std::vector<cplx> B;          // empty in NLS-only mode
    std::vector<double> meanflow; // psibar1 snapshot (water system)
    double tau = 0.0;
    bool has_B = false;
};

// A = a (1 + delta cos(q xi)), B = 0. q must be a domain harmonic.
EnvelopeState init_plane_wave(const Grid& grid, double a, double q, double delta, bool with_B);

// ---------------------------------------------------------------------------
// Envelope models: the compiled right-hand side the integrator consumes.
// Internally everything is kept in d/dtau form; the iA_tau-normalized
// coefficient sets are converted exactly once when a model is built.
// ---------------------------------------------------------------------------

class EnvelopeModel {
  public:
    virtual ~EnvelopeModel() = default;
    virtual bool is_water() const { return false; }
    virtual bool supports_B() const = 0;
    // linearized plane-wave data for the MI oracle: i A_tau + alpha A_xixi +
    // beta_eff |A|^2 A = 0 for sideband perturbations (beta_eff includes the
    // mean-channel coupling for q != 0 modes)
    virtual double alpha() const = 0;
    virtual double beta_background() const = 0;  // rotation of the uniform state
    virtual double beta_sideband() const = 0;    // effective cubic felt by sidebands
    virtual double v_carrier() const = 0;
    // tau-form linear spectral symbol
    virtual void linear_symbol(const Grid& g, std::vector<cplx>& sym) const;
    // tau-form nonlinear RHS (spectral in, spectral out, dealiased)
    virtual void nonlinear(const Grid& g, const Fft& fft, const std::vector<cplx>& Ahat,
                           const std::vector<cplx>& Bhat, bool with_B, std::vector<cplx>& NA,
                           std::vector<cplx>& NB) const = 0;
    // slaved mean-flow snapshot for diagnostics/state (water: psibar1)
    virtual void meanflow_snapshot(const Grid& g, const Fft& fft, const std::vector<cplx>& A,
                                   std::vector<double>& out) const;
};

std::unique_ptr<EnvelopeModel> make_scalar_model(const SystemSpec& spec, const CarrierSetup& c,
                                                 const NLSCoefficients& nls,
                                                 const HNLSCoefficients* hnls,
                                                 bool nonlinearity_on = true);

std::unique_ptr<EnvelopeModel> make_water_model(const SystemSpec& spec, const CarrierSetup& c,
                                                bool nonlinearity_on = true);

// ---------------------------------------------------------------------------
// Integrator. One owner per state; owns FFT plans and scratch.
// ---------------------------------------------------------------------------

class EnvelopeIntegrator {
  public:
    EnvelopeIntegrator(const Grid& grid, const EnvelopeModel& model, SolverConfig cfg);

    void step(EnvelopeState& s);  // advance by cfg.dt
    // repeated stepping with diagnostics every record_stride steps (and at the
    // end); throws BlowUp with the failing tau
    std::vector<Diagnostics> integrate(EnvelopeState& s, double tau_end);
    Diagnostics diagnostics(const EnvelopeState& s) const;

    const SolverConfig& config() const { return cfg_; }

  private:
    void step_etdrk4(EnvelopeState& s);
    void step_splitstep(EnvelopeState& s);
    void enforce_contracts(EnvelopeState& s) const;

    Grid grid_;
    const EnvelopeModel& model_;
    SolverConfig cfg_;
    Fft fft_;
    std::vector<cplx> sym_;
    // ETDRK4 tables for the full step
    std::vector<cplx> E_, E2_, Q_, f1_, f2_, f3_;
    // scratch
    mutable std::vector<cplx> Ah_, Bh_, na_, nb_, sa_, sb_, ta_, tb_, ua_, ub_, wa_, wb_;
};

// spec-surface wrappers
void step_nls(EnvelopeState& s, const EnvelopeModel& model, const SolverConfig& cfg);
void step_hnls(EnvelopeState& s, const EnvelopeModel& model, const SolverConfig& cfg);

// ETDRK4 phi-function tables via complex contour means (32+ point circle).
void etdrk4_tables(const std::vector<cplx>& symbol, double dt, std::vector<cplx>& E,
                   std::vector<cplx>& E2, std::vector<cplx>& Q, std::vector<cplx>& f1,
                   std::vector<cplx>& f2, std::vector<cplx>& f3);

}  // namespace envforge

#endif
