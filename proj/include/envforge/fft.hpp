#ifndef ENVFORGE_FFT_HPP
#define ENVFORGE_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "envforge/grid.hpp"

namespace envforge {

// Complex-to-complex FFT bound to one grid shape. Forward is unnormalized
// FFTW convention; inverse carries the 1/N. Each instance owns its plans and
// scratch, so distinct integrations can transform concurrently; only plan
// creation/destruction is serialized (FFTW planner is not thread-safe).
class Fft {
  public:
    explicit Fft(const Grid& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // in-place on caller storage
    void forward(std::vector<cplx>& field) const;
    void inverse(std::vector<cplx>& field) const;
    // out-of-place
    void forward(const std::vector<cplx>& in, std::vector<cplx>& out) const;
    void inverse(const std::vector<cplx>& in, std::vector<cplx>& out) const;

    std::size_t size() const { return n_; }

  private:
    void run(void* plan, cplx* data) const;
    std::size_t n_;
    void* fwd_ = nullptr;  // fftw_plan, kept opaque to avoid leaking fftw3.h
    void* bwd_ = nullptr;
};

}  // namespace envforge

#endif
