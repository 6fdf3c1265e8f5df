#ifndef ENVFORGE_ERRORS_HPP
#define ENVFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace envforge {

// Error taxonomy. Each failure mode the CLI maps to an exit code gets its
// own type so callers can discriminate without string matching.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateCarrier : std::runtime_error {
    double k;
    explicit DegenerateCarrier(double k_, const std::string& what)
        : std::runtime_error(what), k(k_) {}
};

struct ResonantHarmonic : std::runtime_error {
    explicit ResonantHarmonic(const std::string& what) : std::runtime_error(what) {}
};

struct SingularHarmonic : std::runtime_error {
    double k;
    int harmonic;
    SingularHarmonic(double k_, int n_, const std::string& what)
        : std::runtime_error(what), k(k_), harmonic(n_) {}
};

struct UnsupportedSystem : std::runtime_error {
    explicit UnsupportedSystem(const std::string& what) : std::runtime_error(what) {}
};

struct BlowUp : std::runtime_error {
    double time_of_failure;   // slow time tau (envelope) or fast time t (direct)
    BlowUp(double t, const std::string& what)
        : std::runtime_error(what), time_of_failure(t) {}
};

struct IncommensurateSideband : std::runtime_error {
    explicit IncommensurateSideband(const std::string& what) : std::runtime_error(what) {}
};

struct IncommensurateGrids : std::runtime_error {
    double lx_direct, lxi_envelope;
    IncommensurateGrids(double lx, double lxi, const std::string& what)
        : std::runtime_error(what), lx_direct(lx), lxi_envelope(lxi) {}
};

struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct FitUnreliable : std::runtime_error {
    double residual;
    FitUnreliable(double r, const std::string& what)
        : std::runtime_error(what), residual(r) {}
};

}  // namespace envforge

#endif
