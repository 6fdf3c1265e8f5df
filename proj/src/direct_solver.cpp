#include "envforge/direct_solver.hpp"

#include <cmath>
#include <numbers>

#include "envforge/envelope_solver.hpp"
#include "envforge/kernels.hpp"

namespace envforge {

namespace {
const cplx kI{0.0, 1.0};
constexpr double kBlowUpThreshold = 1e6;
}  // namespace

DirectIntegrator::DirectIntegrator(const Grid& grid, const SystemSpec& spec, double dt)
    : grid_(grid), fft_(grid), dt_(dt) {
    if (spec.state_kind != StateKind::Scalar)
        throw UnsupportedSystem("direct integration is implemented for scalar systems");
    if (dt <= 0.0) throw ConfigError("direct solver dt must be positive");
    sym_.resize(grid.size());
    for (std::size_t i = 0; i < sym_.size(); ++i) {
        const double K = grid.kx_at(i);
        sym_[i] = -kI * spec.omega(K);  // modes rotate as e^{-i omega(K) t}
    }
    build_tables(dt_);
}

void DirectIntegrator::build_tables(double dt) {
    etdrk4_tables(sym_, dt, E_, E2_, Q_, f1_, f2_, f3_);
}

void DirectIntegrator::nonlinear(const std::vector<cplx>& uhat, std::vector<cplx>& out) const {
    const std::size_t n = grid_.size();
    out.assign(n, cplx{});
    if (nl_strength_ == 0.0) return;
    w_.resize(n);
    fft_.inverse(uhat, u_);
    for (std::size_t i = 0; i < n; ++i) w_[i] = kI * grid_.kx_at(i) * uhat[i];
    fft_.inverse(w_, ux_);
    for (std::size_t i = 0; i < n; ++i) w_[i] *= kI * grid_.kx_at(i);
    fft_.inverse(w_, uxx_);
    for (std::size_t i = 0; i < n; ++i) w_[i] = kI * grid_.kx_at(i) * w_[i];
    fft_.inverse(w_, uxxx_);

    ru_.resize(n);
    rux_.resize(n);
    ruxx_.resize(n);
    ruxxx_.resize(n);
    prod_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ru_[i] = std::real(u_[i]);
        rux_[i] = std::real(ux_[i]);
        ruxx_[i] = std::real(uxx_[i]);
        ruxxx_[i] = std::real(uxxx_[i]);
    }
    kernels::kdv_products(prod_.data(), ru_.data(), rux_.data(), ruxx_.data(), ruxxx_.data(), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = -nl_strength_ * prod_[i];
    fft_.forward(out);
    for (std::size_t i = 0; i < n; ++i) out[i] *= grid_.dealias[i];
}

void DirectIntegrator::step(DirectField& f) {
    if (!f.grid.same_shape(grid_)) throw GridMismatch("direct field grid mismatch");
    const std::size_t n = grid_.size();
    nl_strength_ = f.nonlinearity;
    uh_.resize(n);
    for (std::size_t i = 0; i < n; ++i) uh_[i] = f.u[i];
    fft_.forward(uh_);
    for (std::size_t i = 0; i < n; ++i) uh_[i] *= grid_.dealias[i];

    std::vector<cplx>& uh = uh_;
    a_.resize(n);
    b_.resize(n);
    c_.resize(n);
    nonlinear(uh, na_);
    kernels::etd_stage(a_.data(), E2_.data(), uh.data(), Q_.data(), na_.data(), n);
    nonlinear(a_, nb_);
    kernels::etd_stage(b_.data(), E2_.data(), uh.data(), Q_.data(), nb_.data(), n);
    nonlinear(b_, nc_);
    for (std::size_t i = 0; i < n; ++i) c_[i] = E2_[i] * a_[i] + Q_[i] * (2.0 * nc_[i] - na_[i]);
    nonlinear(c_, nd_);
    kernels::etd_update(uh.data(), E_.data(), f1_.data(), f2_.data(), f3_.data(), na_.data(),
                        nb_.data(), nc_.data(), nd_.data(), n);

    fft_.inverse(uh);
    bool blown = false;
    for (std::size_t i = 0; i < n; ++i) {
        f.u[i] = std::real(uh[i]);
        if (!(std::abs(f.u[i]) < kBlowUpThreshold)) blown = true;  // NaN-safe
    }
    f.t += dt_;
    if (blown)
        throw BlowUp(f.t, "direct field exceeded the blow-up threshold at t=" + std::to_string(f.t));
}

void DirectIntegrator::run(DirectField& f, double t_end) {
    if (t_end < f.t) throw ConfigError("t_end must be >= field.t");
    const double span = t_end - f.t;
    if (span == 0.0) return;
    const long nfull = static_cast<long>(std::floor(span / dt_ + 1e-9));
    for (long i = 0; i < nfull; ++i) step(f);
    const double rem = t_end - f.t;
    if (rem > 1e-9 * std::max(1.0, t_end)) {
        const double keep = dt_;
        dt_ = rem;
        build_tables(dt_);
        step(f);
        dt_ = keep;
        build_tables(dt_);
    }
}

DirectField init_from_envelope(const std::vector<cplx>& A, const std::vector<cplx>& B,
                               const Grid& envelope_grid, const Grid& direct_grid,
                               const CarrierSetup& carrier, double eps,
                               const NLSCoefficients& coeffs) {
    if (!envelope_grid.is_1d() || !direct_grid.is_1d())
        throw GridMismatch("envelope/direct initialization is one-dimensional");
    if (A.size() != envelope_grid.size())
        throw GridMismatch("envelope field does not match its grid");
    const double lx_expected = envelope_grid.lx / eps;
    if (std::abs(direct_grid.lx - lx_expected) > 1e-9 * lx_expected)
        throw IncommensurateGrids(direct_grid.lx, envelope_grid.lx,
                                  "direct domain must satisfy L_x = L_xi / eps");
    const double waves = carrier.k * direct_grid.lx / (2.0 * std::numbers::pi);
    if (std::abs(waves - std::round(waves)) > 1e-8 * std::max(1.0, waves))
        throw IncommensurateGrids(direct_grid.lx, envelope_grid.lx,
                                  "carrier wavenumber is not a harmonic of the direct domain");
    if (direct_grid.nx % envelope_grid.nx != 0)
        throw IncommensurateGrids(direct_grid.lx, envelope_grid.lx,
                                  "direct grid size must be a multiple of the envelope grid size");

    const std::size_t n = direct_grid.nx;
    auto Ad = spectral_resample(A, envelope_grid, n, 0.0);
    std::vector<cplx> Bd(n, cplx{});
    if (!B.empty()) {
        if (B.size() != envelope_grid.size()) throw GridMismatch("B field size mismatch");
        Bd = spectral_resample(B, envelope_grid, n, 0.0);
    }

    // slaved mean on the direct grid: m2 = mu2 P0|A|^2
    std::vector<double> m2(n, 0.0);
    if (coeffs.has_mean_channel) {
        Grid dg = direct_grid;
        Fft fft(dg);
        std::vector<cplx> a2(n);
        for (std::size_t i = 0; i < n; ++i) a2[i] = std::norm(Ad[i]);
        fft.forward(a2);
        a2[0] = 0.0;
        fft.inverse(a2);
        const double mu2 = std::real(coeffs.mean_response);
        for (std::size_t i = 0; i < n; ++i) m2[i] = mu2 * std::real(a2[i]);
    }

    DirectField f;
    f.grid = direct_grid;
    f.eps = eps;
    f.t = 0.0;
    f.u.resize(n);
    const double k = carrier.k;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = direct_grid.x[i];
        const cplx e1 = std::exp(kI * k * x);
        const cplx e2 = e1 * e1;
        const cplx first = (Ad[i] + eps * Bd[i]) * e1;
        const cplx second = eps * coeffs.phi0 * Ad[i] * Ad[i] * e2;
        f.u[i] = eps * (2.0 * std::real(first) + 2.0 * std::real(second) + eps * m2[i]);
    }
    return f;
}

std::vector<cplx> spectral_resample(const std::vector<cplx>& field, const Grid& from,
                                    std::size_t n_out, double shift) {
    const std::size_t n_in = from.nx;
    Grid gin = from;
    Fft fft_in(gin);
    std::vector<cplx> fh;
    fft_in.forward(field, fh);
    for (auto& v : fh) v /= static_cast<double>(n_in);

    Grid gout = Grid::line(n_out, from.lx);
    Fft fft_out(gout);
    std::vector<cplx> oh(n_out, cplx{});
    for (std::size_t i = 0; i < n_in; ++i) {
        const long m = (i < (n_in + 1) / 2) ? static_cast<long>(i)
                                            : static_cast<long>(i) - static_cast<long>(n_in);
        const double K = 2.0 * std::numbers::pi * static_cast<double>(m) / from.lx;
        const std::size_t io = static_cast<std::size_t>(
            m >= 0 ? m : static_cast<long>(n_out) + m);
        oh[io] = fh[i] * std::exp(kI * K * shift);
    }
    for (auto& v : oh) v *= static_cast<double>(n_out);
    fft_out.inverse(oh);
    return oh;
}

}  // namespace envforge
