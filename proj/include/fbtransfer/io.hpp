#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fbtransfer/gains.hpp"
#include "fbtransfer/langevin.hpp"
#include "fbtransfer/params.hpp"
#include "fbtransfer/response.hpp"
#include "fbtransfer/spectra.hpp"
#include "fbtransfer/sweep.hpp"
#include "fbtransfer/wigner.hpp"

namespace fbtransfer {

std::string format_double(double v);  // %.12g
std::string csv_escape(const std::string& s);
std::string hash_hex(std::uint64_t h);

// Canonical serialization: fixed key order, so the FNV-1a hash of the dump
// identifies a configuration across runs and platforms.
nlohmann::ordered_json config_to_json(const SystemConfig& config);
SystemConfig config_from_json(const nlohmann::json& j);
std::uint64_t config_hash(const SystemConfig& config);

struct FileConfig {
    SystemConfig system;
    nlohmann::json sweep;   // null when the file has no sweep section
    nlohmann::json oracle;  // null when the file has no oracle section
};
FileConfig load_config_file(const std::string& path);

StateSpec state_from_json(const nlohmann::json& j);
SweepSpec sweep_spec_from_json(const nlohmann::json& j, SweepSpec defaults);
TrajectoryConfig trajectory_from_json(const nlohmann::json& j, TrajectoryConfig defaults);

struct OracleSpec {
    TrajectoryConfig trajectory;
    int segment_samples = 12800;
    int k_min = 0;
    int k_max = -1;
    bool write_traces = true;
};
OracleSpec oracle_spec_from_json(const nlohmann::json& j, OracleSpec defaults);

std::string sweep_csv(const SweepReport& report);
nlohmann::ordered_json sweep_to_json(const SweepReport& report);

std::string gains_csv(const Gains& numeric, const Gains& analytic);
nlohmann::ordered_json gains_to_json(const Gains& numeric, const Gains& analytic);

std::string variance_csv(const VarianceBreakdown& b, const NoiseCovariance& cov);
nlohmann::ordered_json variance_to_json(const VarianceBreakdown& b, const NoiseCovariance& cov);

std::string response_csv(const std::vector<ResponseEval>& rows);
std::string components_csv(const std::vector<SpectrumComponents>& rows);
std::string psd_csv(const PsdEstimate& psd);
nlohmann::ordered_json psd_to_json(const PsdEstimate& psd);
nlohmann::ordered_json variance_estimate_to_json(const VarianceEstimate& v);

void write_text_file(const std::string& path, const std::string& content);

// Raw little-endian float64 payload plus a self-describing JSON sidecar:
// <base>.f64 and <base>.json.
void write_grid_binary(const std::string& base_path, const PhaseSpaceGrid& grid,
                       const std::string& kind, std::uint64_t cfg_hash);
PhaseSpaceGrid read_grid_binary(const std::string& base_path);
void write_trace_binary(const std::string& base_path, const TraceRecord& trace,
                        std::uint64_t cfg_hash);

}  // namespace fbtransfer
