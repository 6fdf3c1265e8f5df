#ifndef ENVFORGE_RUN_CONFIG_HPP
#define ENVFORGE_RUN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "envforge/envelope_solver.hpp"
#include "envforge/reconstruction.hpp"
#include "envforge/system_spec.hpp"

namespace envforge {

inline constexpr const char* kVersion = "0.1.0";

struct EnvelopeRunConfig {
    double lxi = 2.0 * 3.14159265358979323846;
    std::size_t n = 256;
    double dt = 1e-3;
    double tau_end = 10.0;
    Scheme scheme = Scheme::EtdRk4;
    int record_stride = 100;
    bool dealias = true;
};

struct InitialCondition {
    double a = 0.1;
    int q_mode = 1;
    double delta = 0.0;
    bool with_B = false;
};

struct DirectRunConfig {
    std::size_t n = 1024;
    double dt = 0.02;
    double t_end = 100.0;
    double eps = 0.05;
    double nonlinearity = 1.0;
};

struct MiScanConfig {
    std::vector<double> a_list;
    std::vector<double> q_list;   // sideband wavenumbers (must be domain harmonics)
    double delta0 = 1e-5;
    double tau_max = 400.0;
    double dt = 0.02;
    std::size_t n = 256;
    double lxi = 0.0;  // 0 -> derived from the smallest q
};

struct RunConfig {
    std::string system_name = "toy5";   // "toy5" | "deepwater" | "user"
    int dim = 1;
    std::optional<SystemSpec> user_spec;
    VProfile damping = VProfile::none();
    double carrier_k = 0.5;
    EnvelopeRunConfig envelope;
    InitialCondition initial;
    DirectRunConfig direct;
    StudyConfig validate;
    MiScanConfig mi;
    std::string output_dir = "out";
    unsigned long seed = 0;

    SystemSpec make_system() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// canonical JSON documents the CLI emits
std::string coeffs_document(const RunConfig& cfg);
std::string manifest_document(const RunConfig& cfg, const std::string& command,
                              double wall_seconds, const std::string& status,
                              double failure_time = 0.0);
std::string validation_document(const ValidationResult& v, const StudyConfig& cfg);

// ---------------------------------------------------------------------------
// Modulational-instability scan
// ---------------------------------------------------------------------------

struct MiPoint {
    double a = 0.0, q = 0.0;
    double measured = 0.0;
    double predicted = 0.0;
    bool inside_band = false;
    bool blew_up = false;
};

// linearized growth rate of a sideband q on background a for
// i A_tau + alpha A_xixi + beta_eff |A|^2 A = 0
double mi_predicted_rate(double alpha, double beta_eff, double a, double q);

// measured exponential growth of mode q during its linear window
MiPoint mi_measure(const SystemSpec& spec, const CarrierSetup& carrier, const MiScanConfig& cfg,
                   double a, double q);

std::vector<MiPoint> mi_scan(const SystemSpec& spec, double carrier_k, const MiScanConfig& cfg);

std::string mi_csv(const std::vector<MiPoint>& pts, double carrier_k);
std::string diagnostics_csv(const std::vector<Diagnostics>& series);
std::string validation_csv(const ValidationResult& v);

}  // namespace envforge

#endif
