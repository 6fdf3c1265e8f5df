#include "envforge/snapshots.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace envforge {

namespace {
void put_u32(std::ofstream& os, std::uint32_t v) { os.write(reinterpret_cast<char*>(&v), 4); }
void put_u64(std::ofstream& os, std::uint64_t v) { os.write(reinterpret_cast<char*>(&v), 8); }
void put_f64(std::ofstream& os, double v) { os.write(reinterpret_cast<char*>(&v), 8); }

std::uint32_t get_u32(std::ifstream& is) {
    std::uint32_t v;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint64_t get_u64(std::ifstream& is) {
    std::uint64_t v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
double get_f64(std::ifstream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

void rename_into_place(const std::string& tmp, const std::string& path) {
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("failed to move snapshot into place: " + path);
    }
}
}  // namespace

void write_envelope_snapshot(const std::string& path, const Grid& grid,
                             const std::vector<cplx>& field, double tau, int field_tag) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os.write("ENVF", 4);
        put_u32(os, 1u);
        put_u32(os, static_cast<std::uint32_t>(field_tag));
        put_u64(os, field.size());
        put_f64(os, grid.lx);
        put_f64(os, tau);
        for (const auto& v : field) {
            put_f64(os, v.real());
            put_f64(os, v.imag());
        }
    }
    rename_into_place(tmp, path);
}

void write_direct_snapshot(const std::string& path, const DirectField& f) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os.write("DIRF", 4);
        put_u32(os, 1u);
        put_u32(os, 0u);
        put_u64(os, f.u.size());
        put_f64(os, f.grid.lx);
        put_f64(os, f.t);
        put_f64(os, f.eps);
        for (double v : f.u) put_f64(os, v);
    }
    rename_into_place(tmp, path);
}

EnvelopeSnapshot read_envelope_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "ENVF", 4) != 0) throw std::runtime_error("bad ENVF magic in " + path);
    EnvelopeSnapshot s;
    s.version = get_u32(is);
    s.field_tag = get_u32(is);
    const std::uint64_t n = get_u64(is);
    s.lxi = get_f64(is);
    s.tau = get_f64(is);
    s.field.resize(n);
    for (auto& v : s.field) {
        const double re = get_f64(is), im = get_f64(is);
        v = {re, im};
    }
    if (!is) throw std::runtime_error("truncated ENVF snapshot " + path);
    return s;
}

DirectSnapshot read_direct_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "DIRF", 4) != 0) throw std::runtime_error("bad DIRF magic in " + path);
    DirectSnapshot s;
    s.version = get_u32(is);
    (void)get_u32(is);
    const std::uint64_t n = get_u64(is);
    s.lx = get_f64(is);
    s.t = get_f64(is);
    s.eps = get_f64(is);
    s.u.resize(n);
    for (auto& v : s.u) v = get_f64(is);
    if (!is) throw std::runtime_error("truncated DIRF snapshot " + path);
    return s;
}

void write_text_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os << contents;
    }
    rename_into_place(tmp, path);
}

}  // namespace envforge
