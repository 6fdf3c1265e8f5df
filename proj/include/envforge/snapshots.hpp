#ifndef ENVFORGE_SNAPSHOTS_HPP
#define ENVFORGE_SNAPSHOTS_HPP

#include <string>
#include <vector>

#include "envforge/direct_solver.hpp"
#include "envforge/envelope_solver.hpp"

namespace envforge {

// Binary snapshot formats (little-endian):
//   ENVF: magic "ENVF" | u32 version | u32 field_tag (0 = A, 1 = B)
//         | u64 N | f64 L_xi | f64 tau | N x (f64 re, f64 im)
//   DIRF: magic "DIRF" | u32 version | u32 reserved
//         | u64 N | f64 L_x | f64 t | f64 eps | N x f64
// Writes are atomic (temp file + rename).

void write_envelope_snapshot(const std::string& path, const Grid& grid,
                             const std::vector<cplx>& field, double tau, int field_tag);
void write_direct_snapshot(const std::string& path, const DirectField& f);

struct EnvelopeSnapshot {
    std::uint32_t version = 0;
    std::uint32_t field_tag = 0;
    double lxi = 0.0, tau = 0.0;
    std::vector<cplx> field;
};
struct DirectSnapshot {
    std::uint32_t version = 0;
    double lx = 0.0, t = 0.0, eps = 0.0;
    std::vector<double> u;
};

EnvelopeSnapshot read_envelope_snapshot(const std::string& path);
DirectSnapshot read_direct_snapshot(const std::string& path);

// atomic text write (temp + rename)
void write_text_atomic(const std::string& path, const std::string& contents);

}  // namespace envforge

#endif
