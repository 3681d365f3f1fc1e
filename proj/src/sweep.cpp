#include "fbtransfer/sweep.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/io.hpp"

namespace fbtransfer {

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::cooperativity_ratio: return "cooperativity_ratio";
        case SweepAxis::gain_ratio: return "gain_ratio";
        case SweepAxis::efficiency: return "efficiency";
    }
    return "unknown";
}

const char* axis_column(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::cooperativity_ratio: return "c_over_nth";
        case SweepAxis::gain_ratio: return "g_over_c";
        case SweepAxis::efficiency: return "eta";
    }
    return "value";
}

SweepAxis axis_from_name(const std::string& name) {
    if (name == "cooperativity_ratio") return SweepAxis::cooperativity_ratio;
    if (name == "gain_ratio") return SweepAxis::gain_ratio;
    if (name == "efficiency") return SweepAxis::efficiency;
    throw ConfigError("unknown sweep axis '" + name +
                      "'; expected cooperativity_ratio, gain_ratio, or efficiency");
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw ConfigError("log grid needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(static_cast<size_t>(n));
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    for (int i = 0; i < n; ++i) {
        out[static_cast<size_t>(i)] =
            std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / (n - 1));
    }
    return out;
}

namespace {

void check_spec(const SystemConfig& base, const SweepSpec& spec) {
    if (spec.grid.empty()) throw ConfigError("empty grid");
    for (size_t i = 0; i + 1 < spec.grid.size(); ++i) {
        if (!(spec.grid[i] < spec.grid[i + 1])) {
            throw ConfigError("sweep grid must be strictly increasing");
        }
    }
    for (double v : spec.grid) {
        switch (spec.axis) {
            case SweepAxis::cooperativity_ratio:
            case SweepAxis::gain_ratio:
                if (!(v > 0.0)) throw ConfigError("sweep values must be > 0");
                break;
            case SweepAxis::efficiency:
                if (!(v > 0.0 && v <= 1.0)) {
                    throw ConfigError("efficiency sweep values must lie in (0, 1]");
                }
                break;
        }
    }
    if (spec.axis == SweepAxis::cooperativity_ratio && !(derive(base).n_th > 0.0)) {
        throw ConfigError("cooperativity ratio sweep requires n_th > 0");
    }
    if (!spec.states.empty() && spec.grid_n < 64) {
        throw ConfigError("phase-space grids need at least 64 samples per axis");
    }
}

ReportRow evaluate_row(const SystemConfig& base, const SweepSpec& spec, double value) {
    ReportRow row;
    row.sweep_value = value;
    try {
        const SystemConfig config = resolve_point(base, spec.axis, value);
        row.config_hash = config_hash(config);
        const DerivedParams p = derive(config);
        row.gains = gains_numeric(p);
        row.variances = variance_numeric(p, row.gains);
        row.covariance = noise_covariance(row.variances);
        for (const auto& state : spec.states) {
            PhaseSpaceGrid geo = default_grid_for(state);
            geo.n_q = geo.n_p = spec.grid_n;
            const PhaseSpaceGrid target = wigner_state(state, geo);
            const PhaseSpaceGrid moved = transfer_wigner(state, row.covariance, row.gains,
                                                         geo, spec.apply_gain_transform);
            row.fidelities.push_back(fidelity(target, moved));
            row.min_w.push_back(min_wigner(moved).value);
        }
        row.ok = true;
        row.status = "ok";
    } catch (const std::exception& e) {
        row.ok = false;
        row.status = e.what();
        row.fidelities.assign(spec.states.size(), std::nan(""));
        row.min_w.assign(spec.states.size(), std::nan(""));
    }
    return row;
}

}  // namespace

SystemConfig resolve_point(const SystemConfig& base, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::cooperativity_ratio:
            return with_cooperativity_ratio(base, value);
        case SweepAxis::gain_ratio: {
            SystemConfig config = base;
            config.gain_policy = GainPolicy::fixed(value * derive(base).cooperativity);
            return config;
        }
        case SweepAxis::efficiency: {
            SystemConfig config = base;
            config.eta = value;
            return config;
        }
    }
    throw ConfigError("unknown sweep axis");
}

SweepReport run_sweep(const SystemConfig& base, const SweepSpec& spec,
                      std::uint64_t seed, int n_threads) {
    check_spec(base, spec);

    SweepReport report;
    report.axis = spec.axis;
    report.seed = seed;
    report.version = code_version;
    for (const auto& state : spec.states) report.state_names.push_back(state_name(state));
    report.rows.resize(spec.grid.size());

    const int n_rows = static_cast<int>(spec.grid.size());
    if (n_threads <= 1 || n_rows == 1) {
        for (int i = 0; i < n_rows; ++i) {
            report.rows[static_cast<size_t>(i)] =
                evaluate_row(base, spec, spec.grid[static_cast<size_t>(i)]);
        }
        return report;
    }

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_rows) return;
            report.rows[static_cast<size_t>(i)] =
                evaluate_row(base, spec, spec.grid[static_cast<size_t>(i)]);
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min(n_threads, n_rows);
    pool.reserve(static_cast<size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return report;
}

}  // namespace fbtransfer
