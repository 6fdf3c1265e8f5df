#include "envforge/envelope_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "envforge/kernels.hpp"

namespace envforge {

namespace {
const cplx kI{0.0, 1.0};
constexpr double kBlowUpThreshold = 1e6;  // fail-fast bound, not physics

void apply_mask(const Grid& g, std::vector<cplx>& what) {
    for (std::size_t i = 0; i < what.size(); ++i) what[i] *= g.dealias[i];
}
}  // namespace

EnvelopeState init_plane_wave(const Grid& grid, double a, double q, double delta, bool with_B) {
    if (a <= 0.0) throw ConfigError("plane-wave amplitude must be positive");
    if (delta < 0.0) throw ConfigError("perturbation amplitude must be nonnegative");
    const double dq = 2.0 * std::numbers::pi / grid.lx;
    const double ratio = q / dq;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::abs(ratio)))
        throw IncommensurateSideband("sideband q is not a harmonic of the domain (q/dq = " +
                                     std::to_string(ratio) + ")");
    EnvelopeState s;
    s.grid = grid;
    s.A.resize(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            s.A[grid.idx(i, j)] = a * (1.0 + delta * std::cos(q * grid.x[i]));
    s.has_B = with_B;
    if (with_B) s.B.assign(grid.size(), cplx{0.0, 0.0});
    return s;
}

void EnvelopeModel::linear_symbol(const Grid& g, std::vector<cplx>& sym) const {
    sym.resize(g.size());
    const double a = alpha(), v = v_carrier();
    for (std::size_t i = 0; i < sym.size(); ++i) {
        const double ka = g.kabs(i);
        sym[i] = -kI * a * ka * ka - v;
    }
}

void EnvelopeModel::meanflow_snapshot(const Grid&, const Fft&, const std::vector<cplx>&,
                                      std::vector<double>& out) const {
    out.clear();
}

// ---------------------------------------------------------------------------
// Scalar model (toy system and user polynomial systems)
// ---------------------------------------------------------------------------

namespace {

class ScalarModel final : public EnvelopeModel {
  public:
    ScalarModel(const SystemSpec& spec, const CarrierSetup& c, const NLSCoefficients& nls,
                const HNLSCoefficients* hnls, bool nonlinearity_on)
        : nl_on_(nonlinearity_on), has_hnls_(hnls != nullptr) {
        alpha_ = std::real(nls.dispersion_coeff);
        beta_ = nls.nonlinear_coeff;
        vk_ = std::real(nls.damping);
        gA_ = nls.mean_coupling;
        mu2_ = nls.has_mean_channel ? std::real(nls.mean_response) : 0.0;
        has_mean_ = nls.has_mean_channel;
        if (hnls) h_ = *hnls;
        (void)spec;
        (void)c;
    }

    bool supports_B() const override { return has_hnls_; }
    double alpha() const override { return alpha_; }
    double v_carrier() const override { return vk_; }
    double beta_background() const override { return nl_on_ ? std::real(beta_) : 0.0; }
    double beta_sideband() const override {
        if (!nl_on_) return 0.0;
        return std::real(beta_) + (has_mean_ ? std::real(gA_) * mu2_ : 0.0);
    }

    void nonlinear(const Grid& g, const Fft& fft, const std::vector<cplx>& Ahat,
                   const std::vector<cplx>& Bhat, bool with_B, std::vector<cplx>& NA,
                   std::vector<cplx>& NB) const override {
        const std::size_t n = g.size();
        NA.assign(n, cplx{});
        NB.assign(n, cplx{});
        if (!nl_on_) return;

        std::vector<cplx> A, Ax, Axx, Axxx, B;
        spectral_fields(g, fft, Ahat, A, Ax, Axx, Axxx, with_B);
        if (with_B) fft.inverse(Bhat, B);

        // m2 = mu2 * P0|A|^2 (real, zero-mean)
        std::vector<cplx> m2(n, cplx{});
        std::vector<cplx> m2x(n, cplx{});
        if (has_mean_) {
            std::vector<cplx> a2(n);
            for (std::size_t i = 0; i < n; ++i) a2[i] = std::norm(A[i]);
            fft.forward(a2);
            a2[0] = 0.0;
            for (std::size_t i = 0; i < n; ++i) a2[i] *= mu2_ * g.dealias[i];
            std::vector<cplx> m2h = a2;
            fft.inverse(a2, m2);
            for (std::size_t i = 0; i < n; ++i) m2h[i] *= kI * g.kx_at(i);
            fft.inverse(m2h, m2x);
        }

        // A_tau nonlinear part: i [ beta |A|^2 A + gA m2 A ]
        std::vector<cplx> na(n);
        for (std::size_t i = 0; i < n; ++i)
            na[i] = kI * (beta_ * std::norm(A[i]) * A[i] + gA_ * m2[i] * A[i]);
        fft.forward(na, NA);
        apply_mask(g, NA);

        if (!with_B || !has_hnls_) return;

        // m3 from its transport balance (zero-mean gauge)
        std::vector<cplx> m3(n, cplx{});
        if (has_mean_) compute_m3(g, fft, Ahat, A, Ax, Axx, B, m2, m3);

        std::vector<cplx> nb(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx Ai = A[i], Bi = B[i];
            cplx s = h_.coupling_AB * std::norm(Ai) * Bi +
                     h_.coupling_A2Bbar * Ai * Ai * std::conj(Bi);
            s += -kI * h_.third_deriv_coeff * Axxx[i];
            s += h_.selfsteep_coeff * std::norm(Ai) * Ax[i] +
                 h_.conj_steep_coeff * Ai * Ai * std::conj(Ax[i]);
            s += h_.mean_B_coupling * m2[i] * Bi + h_.mean_m3_coupling * m3[i] * Ai;
            s += h_.mean_gradA_coeff * m2[i] * Ax[i] + h_.mean_gradm_coeff * m2x[i] * Ai;
            s += h_.damping_derivative * Ax[i];
            nb[i] = kI * s;
        }
        fft.forward(nb, NB);
        apply_mask(g, NB);
    }

  private:
    void spectral_fields(const Grid& g, const Fft& fft, const std::vector<cplx>& Ahat,
                         std::vector<cplx>& A, std::vector<cplx>& Ax, std::vector<cplx>& Axx,
                         std::vector<cplx>& Axxx, bool need_high) const {
        const std::size_t n = g.size();
        fft.inverse(Ahat, A);
        std::vector<cplx> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = kI * g.kx_at(i) * Ahat[i];
        fft.inverse(w, Ax);
        if (!need_high) return;
        for (std::size_t i = 0; i < n; ++i) w[i] *= kI * g.kx_at(i);
        fft.inverse(w, Axx);
        for (std::size_t i = 0; i < n; ++i) w[i] *= kI * g.kx_at(i);
        fft.inverse(w, Axxx);
    }

    void compute_m3(const Grid& g, const Fft& fft, const std::vector<cplx>& Ahat,
                    const std::vector<cplx>& A, const std::vector<cplx>& Ax,
                    const std::vector<cplx>& Axx, const std::vector<cplx>& B,
                    const std::vector<cplx>& m2, std::vector<cplx>& m3) const {
        const std::size_t n = g.size();
        // A_tau on the grid (full RHS: exact linear part plus nonlinear terms)
        std::vector<cplx> atau(n);
        {
            std::vector<cplx> lin(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double ka = g.kabs(i);
                lin[i] = (-kI * alpha_ * ka * ka - vk_) * Ahat[i];
            }
            fft.inverse(lin, atau);
            for (std::size_t i = 0; i < n; ++i)
                atau[i] += kI * (beta_ * std::norm(A[i]) * A[i] + gA_ * m2[i] * A[i]);
        }
        // forcing F = sigma0 d/dxi(conj(A)B + A conj(B)) - Re[h11 A''Ab + 2h12 A'Ab' + h22 A Ab'']
        //            + m2_tau + V(0) m2 + t_mm |A|^2 m2 + t_quartic |A|^4
        std::vector<cplx> F(n);
        {
            std::vector<cplx> cross(n);
            for (std::size_t i = 0; i < n; ++i)
                cross[i] = std::conj(A[i]) * B[i] + A[i] * std::conj(B[i]);
            fft.forward(cross);
            for (std::size_t i = 0; i < n; ++i) cross[i] *= kI * g.kx_at(i) * g.dealias[i];
            fft.inverse(cross);
            const cplx h11 = h_.m3.h11, h12 = h_.m3.h12, h22 = h_.m3.h22;
            for (std::size_t i = 0; i < n; ++i) {
                const cplx X = h11 * Axx[i] * std::conj(A[i]) +
                               2.0 * h12 * Ax[i] * std::conj(Ax[i]) +
                               h22 * A[i] * std::conj(Axx[i]);
                const double m2tau = 2.0 * std::real(std::conj(A[i]) * atau[i]) * mu2_;
                F[i] = h_.m3.sigma0 * cross[i] - std::real(X) + m2tau + h_.m3.v_zero * m2[i] +
                       h_.m3.t_mm * std::norm(A[i]) * m2[i] +
                       h_.m3.t_quartic * std::norm(A[i]) * std::norm(A[i]);
            }
        }
        // m2_tau needs its own zero-mode projection (P0 of d|A|^2/dtau)
        fft.forward(F);
        F[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double kx = g.kx_at(i), ky = g.ky_at(i);
            if (kx == 0.0 && ky == 0.0) {
                F[i] = 0.0;
                continue;
            }
            // 1D transport inversion along xi
            if (kx == 0.0) {
                F[i] = 0.0;
                continue;
            }
            F[i] = F[i] / (kI * kx) / h_.m3.transport * g.dealias[i];
        }
        fft.inverse(F, m3);
    }

    bool nl_on_;
    bool has_hnls_;
    bool has_mean_ = false;
    double alpha_ = 0.0, vk_ = 0.0, mu2_ = 0.0;
    cplx beta_{}, gA_{};
    HNLSCoefficients h_{};
};

// ---------------------------------------------------------------------------
// Deep-water model
// ---------------------------------------------------------------------------

class WaterModel final : public EnvelopeModel {
  public:
    WaterModel(const SystemSpec& spec, const CarrierSetup& c, bool nonlinearity_on)
        : terms_(water_hnls_terms(spec, c)), carrier_(c), nl_on_(nonlinearity_on) {}

    bool is_water() const override { return true; }
    bool supports_B() const override { return true; }
    double alpha() const override { return terms_.alpha; }
    double v_carrier() const override { return terms_.v_carrier; }
    double beta_background() const override { return nl_on_ ? terms_.beta : 0.0; }
    double beta_sideband() const override { return nl_on_ ? terms_.beta : 0.0; }

    void nonlinear(const Grid& g, const Fft& fft, const std::vector<cplx>& Ahat,
                   const std::vector<cplx>& Bhat, bool with_B, std::vector<cplx>& NA,
                   std::vector<cplx>& NB) const override {
        const std::size_t n = g.size();
        if (!nl_on_) {
            NA.assign(n, cplx{});
            NB.assign(n, cplx{});
            return;
        }
        std::vector<cplx> A, B;
        fft.inverse(Ahat, A);
        if (with_B) fft.inverse(Bhat, B);
        else B.assign(n, cplx{});
        // the mean flow is slaved to A; refresh it at every stage
        auto mf = solve_meanflow(g, fft, A, carrier_, terms_.meanflow_coeff);
        assemble_water_hnls_rhs(g, fft, terms_, A, B, mf.psibar, with_B, NA, NB);
    }

    void meanflow_snapshot(const Grid& g, const Fft& fft, const std::vector<cplx>& A,
                           std::vector<double>& out) const override {
        out = solve_meanflow(g, fft, A, carrier_, terms_.meanflow_coeff).psibar;
    }

  private:
    WaterHnlsTerms terms_;
    CarrierSetup carrier_;
    bool nl_on_;
};

}  // namespace

std::unique_ptr<EnvelopeModel> make_scalar_model(const SystemSpec& spec, const CarrierSetup& c,
                                                 const NLSCoefficients& nls,
                                                 const HNLSCoefficients* hnls,
                                                 bool nonlinearity_on) {
    if (spec.state_kind != StateKind::Scalar)
        throw UnsupportedSystem("scalar model requires a scalar system");
    return std::make_unique<ScalarModel>(spec, c, nls, hnls, nonlinearity_on);
}

std::unique_ptr<EnvelopeModel> make_water_model(const SystemSpec& spec, const CarrierSetup& c,
                                                bool nonlinearity_on) {
    return std::make_unique<WaterModel>(spec, c, nonlinearity_on);
}

// ---------------------------------------------------------------------------
// ETDRK4 tables (complex contour means around each dt*L point)
// ---------------------------------------------------------------------------

void etdrk4_tables(const std::vector<cplx>& symbol, double dt, std::vector<cplx>& E,
                   std::vector<cplx>& E2, std::vector<cplx>& Q, std::vector<cplx>& f1,
                   std::vector<cplx>& f2, std::vector<cplx>& f3) {
    const std::size_t n = symbol.size();
    E.resize(n);
    E2.resize(n);
    Q.resize(n);
    f1.resize(n);
    f2.resize(n);
    f3.resize(n);
    constexpr int M = 64;
    std::vector<cplx> roots(M);
    for (int m = 0; m < M; ++m)
        roots[m] = std::exp(2.0 * std::numbers::pi * kI * (static_cast<double>(m) + 0.5) /
                            static_cast<double>(M));
    for (std::size_t i = 0; i < n; ++i) {
        const cplx z = dt * symbol[i];
        E[i] = std::exp(z);
        E2[i] = std::exp(0.5 * z);
        cplx q{}, a{}, b{}, c{};
        for (int m = 0; m < M; ++m) {
            const cplx zr = z + roots[m];
            q += (std::exp(0.5 * zr) - 1.0) / zr;
            const cplx ez = std::exp(zr), zr2 = zr * zr, zr3 = zr2 * zr;
            a += (-4.0 - zr + ez * (4.0 - 3.0 * zr + zr2)) / zr3;
            b += (2.0 + zr + ez * (-2.0 + zr)) / zr3;
            c += (-4.0 - 3.0 * zr - zr2 + ez * (4.0 - zr)) / zr3;
        }
        const double inv = 1.0 / M;
        Q[i] = dt * q * inv;
        f1[i] = dt * a * inv;
        f2[i] = dt * b * inv;
        f3[i] = dt * c * inv;
    }
}

// ---------------------------------------------------------------------------
// Integrator
// ---------------------------------------------------------------------------

EnvelopeIntegrator::EnvelopeIntegrator(const Grid& grid, const EnvelopeModel& model,
                                       SolverConfig cfg)
    : grid_(grid), model_(model), cfg_(cfg), fft_(grid) {
    if (cfg_.dt <= 0.0) throw ConfigError("dt must be positive");
    if (cfg_.record_stride < 1) throw ConfigError("record_stride must be >= 1");
    model_.linear_symbol(grid_, sym_);
    etdrk4_tables(sym_, cfg_.dt, E_, E2_, Q_, f1_, f2_, f3_);
}

Diagnostics EnvelopeIntegrator::diagnostics(const EnvelopeState& s) const {
    Diagnostics d;
    d.tau = s.tau;
    const std::size_t n = grid_.size();
    const double cell = grid_.is_1d()
                            ? grid_.lx / static_cast<double>(grid_.nx)
                            : (grid_.lx / grid_.nx) * (grid_.ly / grid_.ny);
    double mass = 0.0, maxa = 0.0, massb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mass += std::norm(s.A[i]);
        maxa = std::max(maxa, std::abs(s.A[i]));
    }
    d.mass = mass * cell;
    d.max_abs_a = maxa;
    if (s.has_B) {
        for (std::size_t i = 0; i < n; ++i) massb += std::norm(s.B[i]);
        d.mass_b = massb * cell;
    }
    // momentum via spectral derivative
    std::vector<cplx> ah, ax;
    fft_.forward(s.A, ah);
    ax.resize(n);
    for (std::size_t i = 0; i < n; ++i) ax[i] = kI * grid_.kx_at(i) * ah[i];
    fft_.inverse(ax);
    double mom = 0.0;
    for (std::size_t i = 0; i < n; ++i) mom += std::imag(std::conj(s.A[i]) * ax[i]);
    d.momentum = mom * cell;
    return d;
}

void EnvelopeIntegrator::enforce_contracts(EnvelopeState& s) const {
    // NaN-safe: any value that is not strictly below the threshold fails
    auto bad = [](const cplx& v) { return !(std::abs(v) < kBlowUpThreshold); };
    bool blown = false;
    for (const auto& v : s.A)
        if (bad(v)) blown = true;
    if (s.has_B)
        for (const auto& v : s.B)
            if (bad(v)) blown = true;
    if (blown)
        throw BlowUp(s.tau, "envelope amplitude exceeded the blow-up threshold at tau=" +
                                std::to_string(s.tau));
}

void EnvelopeIntegrator::step_etdrk4(EnvelopeState& s) {
    const std::size_t n = grid_.size();
    const bool wb = s.has_B;
    fft_.forward(s.A, Ah_);
    if (wb) fft_.forward(s.B, Bh_);
    else Bh_.assign(n, cplx{});
    if (cfg_.dealias) {
        apply_mask(grid_, Ah_);
        if (wb) apply_mask(grid_, Bh_);
    }

    auto nl = [&](const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<cplx>& oa,
                  std::vector<cplx>& ob) { model_.nonlinear(grid_, fft_, a, b, wb, oa, ob); };

    nl(Ah_, Bh_, na_, nb_);
    sa_.resize(n);
    sb_.resize(n);
    kernels::etd_stage(sa_.data(), E2_.data(), Ah_.data(), Q_.data(), na_.data(), n);
    if (wb) kernels::etd_stage(sb_.data(), E2_.data(), Bh_.data(), Q_.data(), nb_.data(), n);

    nl(sa_, sb_, ta_, tb_);
    ua_.resize(n);
    ub_.resize(n);
    kernels::etd_stage(ua_.data(), E2_.data(), Ah_.data(), Q_.data(), ta_.data(), n);
    if (wb) kernels::etd_stage(ub_.data(), E2_.data(), Bh_.data(), Q_.data(), tb_.data(), n);

    nl(ua_, ub_, wa_, wb_);
    // c-stage: E2*sa + Q*(2*wc - na)
    std::vector<cplx>& ca = sa_;  // reuse
    std::vector<cplx>& cb = sb_;
    for (std::size_t i = 0; i < n; ++i) ca[i] = E2_[i] * sa_[i] + Q_[i] * (2.0 * wa_[i] - na_[i]);
    if (wb)
        for (std::size_t i = 0; i < n; ++i)
            cb[i] = E2_[i] * sb_[i] + Q_[i] * (2.0 * wb_[i] - nb_[i]);

    std::vector<cplx> nd_a(n), nd_b(n);
    nl(ca, cb, nd_a, nd_b);

    kernels::etd_update(Ah_.data(), E_.data(), f1_.data(), f2_.data(), f3_.data(), na_.data(),
                        ta_.data(), wa_.data(), nd_a.data(), n);
    if (wb)
        kernels::etd_update(Bh_.data(), E_.data(), f1_.data(), f2_.data(), f3_.data(), nb_.data(),
                            tb_.data(), wb_.data(), nd_b.data(), n);

    if (cfg_.dealias) {
        apply_mask(grid_, Ah_);
        if (wb) apply_mask(grid_, Bh_);
    }
    fft_.inverse(Ah_, s.A);
    if (wb) fft_.inverse(Bh_, s.B);
    s.tau += cfg_.dt;
}

void EnvelopeIntegrator::step_splitstep(EnvelopeState& s) {
    if (s.has_B) throw ConfigError("split-step scheme is NLS-only");
    const std::size_t n = grid_.size();
    const double bb = model_.beta_background();
    const double bs = model_.beta_sideband();
    const double gm = bs - bb;  // mean-channel part acts through P0|A|^2

    auto half_nonlinear = [&](double h) {
        // phase rotation is exact: |A| and the mean field are invariant
        std::vector<cplx> m2(n, cplx{});
        if (gm != 0.0) {
            std::vector<cplx> a2(n);
            for (std::size_t i = 0; i < n; ++i) a2[i] = std::norm(s.A[i]);
            fft_.forward(a2);
            a2[0] = 0.0;
            fft_.inverse(a2, m2);
        }
        for (std::size_t i = 0; i < n; ++i)
            s.A[i] *= std::exp(kI * (bb * std::norm(s.A[i]) + gm * std::real(m2[i])) * h);
    };

    half_nonlinear(0.5 * cfg_.dt);
    fft_.forward(s.A, Ah_);
    for (std::size_t i = 0; i < n; ++i) Ah_[i] *= std::exp(cfg_.dt * sym_[i]);
    if (cfg_.dealias) apply_mask(grid_, Ah_);
    fft_.inverse(Ah_, s.A);
    half_nonlinear(0.5 * cfg_.dt);
    s.tau += cfg_.dt;
}

void EnvelopeIntegrator::step(EnvelopeState& s) {
    if (!s.grid.same_shape(grid_)) throw GridMismatch("state grid does not match the integrator");
    if (s.has_B && !model_.supports_B())
        throw ConfigError("model has no B equation; build it with HNLS coefficients");
    if (cfg_.scheme == Scheme::SplitStep) step_splitstep(s);
    else step_etdrk4(s);
    enforce_contracts(s);
}

std::vector<Diagnostics> EnvelopeIntegrator::integrate(EnvelopeState& s, double tau_end) {
    if (tau_end < s.tau) throw ConfigError("tau_end must be >= state.tau");
    std::vector<Diagnostics> series;
    if (tau_end == s.tau) return series;
    const double span = tau_end - s.tau;
    const long nfull = static_cast<long>(std::floor(span / cfg_.dt + 1e-9));
    for (long i = 0; i < nfull; ++i) {
        step(s);
        if ((i + 1) % cfg_.record_stride == 0 || i + 1 == nfull) {
            auto d = diagnostics(s);
            if (model_.is_water()) model_.meanflow_snapshot(grid_, fft_, s.A, s.meanflow);
            series.push_back(d);
        }
    }
    const double rem = tau_end - s.tau;
    if (rem > 1e-9 * std::max(1.0, tau_end)) {
        SolverConfig pcfg = cfg_;
        pcfg.dt = rem;
        EnvelopeIntegrator partial(grid_, model_, pcfg);
        partial.step(s);
        auto d = diagnostics(s);
        if (model_.is_water()) model_.meanflow_snapshot(grid_, fft_, s.A, s.meanflow);
        series.push_back(d);
    }
    return series;
}

void step_nls(EnvelopeState& s, const EnvelopeModel& model, const SolverConfig& cfg) {
    if (s.has_B) throw ConfigError("step_nls on a state with a B field");
    EnvelopeIntegrator integ(s.grid, model, cfg);
    integ.step(s);
}

void step_hnls(EnvelopeState& s, const EnvelopeModel& model, const SolverConfig& cfg) {
    if (!s.has_B) throw ConfigError("step_hnls needs a state with B present");
    EnvelopeIntegrator integ(s.grid, model, cfg);
    integ.step(s);
}

}  // namespace envforge
