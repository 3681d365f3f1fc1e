#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbtransfer/gains.hpp"
#include "fbtransfer/params.hpp"
#include "fbtransfer/spectra.hpp"
#include "fbtransfer/wigner.hpp"

namespace fbtransfer {

enum class SweepAxis { cooperativity_ratio, gain_ratio, efficiency };

const char* axis_name(SweepAxis axis);
const char* axis_column(SweepAxis axis);  // CSV column header for the abscissa
SweepAxis axis_from_name(const std::string& name);

std::vector<double> log_grid(double lo, double hi, int n);

struct SweepSpec {
    SweepAxis axis = SweepAxis::gain_ratio;
    std::vector<double> grid;
    std::vector<StateSpec> states;
    int grid_n = 256;
    bool apply_gain_transform = true;
};

struct ReportRow {
    double sweep_value = 0.0;
    bool ok = false;
    std::string status;  // "ok" or the failure reason
    Gains gains;
    VarianceBreakdown variances;
    NoiseCovariance covariance;
    std::vector<double> fidelities;  // parallel to SweepSpec::states
    std::vector<double> min_w;
    std::uint64_t config_hash = 0;
};

struct SweepReport {
    SweepAxis axis = SweepAxis::gain_ratio;
    std::vector<std::string> state_names;
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
    std::string version;
};

// Resolves one grid point onto the base configuration: cooperativity sweeps
// move g_om at fixed (Gamma, kappa, Omega, T), gain sweeps pin G = value * C,
// efficiency sweeps set eta.
SystemConfig resolve_point(const SystemConfig& base, SweepAxis axis, double value);

// Row-per-grid-point evaluation; a failing row records its reason and the
// sweep continues. Rows are emitted in grid order regardless of scheduling.
SweepReport run_sweep(const SystemConfig& base, const SweepSpec& spec,
                      std::uint64_t seed, int n_threads = 1);

}  // namespace fbtransfer
