#include "envforge/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace envforge {

namespace {
std::vector<double> wavenumbers(std::size_t n, double length) {
    std::vector<double> k(n);
    const double dk = 2.0 * std::numbers::pi / length;
    for (std::size_t i = 0; i < n; ++i) {
        const long ii = (i <= n / 2 - (n % 2 == 0 ? 0 : 0) && i < (n + 1) / 2)
                            ? static_cast<long>(i)
                            : static_cast<long>(i) - static_cast<long>(n);
        k[i] = dk * static_cast<double>(ii);
    }
    return k;
}

std::vector<double> nodes(std::size_t n, double length) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = length * static_cast<double>(i) / static_cast<double>(n);
    return x;
}

long mode_index(std::size_t i, std::size_t n) {
    return (i < (n + 1) / 2) ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}
}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid Grid::line(std::size_t n, double length) {
    if (!is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two");
    if (length <= 0.0) throw std::invalid_argument("grid length must be positive");
    Grid g;
    g.nx = n;
    g.ny = 1;
    g.lx = length;
    g.ly = 0.0;
    g.kx = wavenumbers(n, length);
    g.ky = {0.0};
    g.x = nodes(n, length);
    g.y = {0.0};
    g.dealias.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(mode_index(i, n)) > static_cast<long>(n / 3)) g.dealias[i] = 0.0;
    return g;
}

Grid Grid::plane(std::size_t nx, std::size_t ny, double lx, double ly) {
    if (!is_power_of_two(nx) || !is_power_of_two(ny))
        throw std::invalid_argument("grid sizes must be powers of two");
    if (lx <= 0.0 || ly <= 0.0) throw std::invalid_argument("grid lengths must be positive");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.kx = wavenumbers(nx, lx);
    g.ky = wavenumbers(ny, ly);
    g.x = nodes(nx, lx);
    g.y = nodes(ny, ly);
    g.dealias.assign(nx * ny, 1.0);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            if (std::abs(mode_index(i, nx)) > static_cast<long>(nx / 3) ||
                std::abs(mode_index(j, ny)) > static_cast<long>(ny / 3))
                g.dealias[j * nx + i] = 0.0;
    return g;
}

double Grid::kabs(std::size_t flat) const {
    const double a = kx[flat % nx];
    const double b = ky[flat / nx];
    return is_1d() ? std::abs(a) : std::sqrt(a * a + b * b);
}

double integrate(const Grid& g, const std::vector<double>& f) {
    double s = 0.0;
    for (double v : f) s += v;
    const double cell = g.is_1d() ? g.lx / static_cast<double>(g.nx)
                                  : (g.lx / static_cast<double>(g.nx)) * (g.ly / static_cast<double>(g.ny));
    return s * cell;
}

}  // namespace envforge
