#include "envforge/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace envforge {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(const Grid& grid) : n_(grid.size()) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning deterministic and leaves caller data intact
    fftw_complex* buf = fftw_alloc_complex(n_);
    if (grid.is_1d()) {
        fwd_ = fftw_plan_dft_1d(static_cast<int>(grid.nx), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(grid.nx), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        // row-major x-fastest grid: FFTW wants (n0, n1) = (ny, nx)
        fwd_ = fftw_plan_dft_2d(static_cast<int>(grid.ny), static_cast<int>(grid.nx), buf, buf,
                                FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(static_cast<int>(grid.ny), static_cast<int>(grid.nx), buf, buf,
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_free(buf);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::run(void* plan, cplx* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan), reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void Fft::forward(std::vector<cplx>& field) const {
    if (field.size() != n_) throw std::invalid_argument("fft size mismatch");
    run(fwd_, field.data());
}

void Fft::inverse(std::vector<cplx>& field) const {
    if (field.size() != n_) throw std::invalid_argument("fft size mismatch");
    run(bwd_, field.data());
    const double s = 1.0 / static_cast<double>(n_);
    for (auto& v : field) v *= s;
}

void Fft::forward(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    out = in;
    forward(out);
}

void Fft::inverse(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    out = in;
    inverse(out);
}

}  // namespace envforge
