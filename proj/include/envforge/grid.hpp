#ifndef ENVFORGE_GRID_HPP
#define ENVFORGE_GRID_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace envforge {

using cplx = std::complex<double>;

// Periodic uniform grid, 1D (ny == 1) or 2D, row-major x-fastest.
// Wavenumbers follow FFT index order: 0, 1, ..., n/2-1, -n/2, ..., -1
// scaled by 2*pi/L. The dealias mask implements the 2/3 rule per axis.
struct Grid {
    std::size_t nx = 0, ny = 1;
    double lx = 0.0, ly = 0.0;

    std::vector<double> kx;   // size nx
    std::vector<double> ky;   // size ny
    std::vector<double> x;    // size nx
    std::vector<double> y;    // size ny
    std::vector<double> dealias;  // size nx*ny, 1.0 inside, 0.0 outside

    static Grid line(std::size_t n, double length);
    static Grid plane(std::size_t nx, std::size_t ny, double lx, double ly);

    std::size_t size() const { return nx * ny; }
    bool is_1d() const { return ny == 1; }
    std::size_t idx(std::size_t i, std::size_t j) const { return j * nx + i; }

    // |k| and k-vector at a flattened spectral index
    double kabs(std::size_t flat) const;
    double kx_at(std::size_t flat) const { return kx[flat % nx]; }
    double ky_at(std::size_t flat) const { return ky[flat / nx]; }

    bool same_shape(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

bool is_power_of_two(std::size_t n);

// trapezoid == exact spectral quadrature on periodic grids
double integrate(const Grid& g, const std::vector<double>& f);

}  // namespace envforge

#endif
