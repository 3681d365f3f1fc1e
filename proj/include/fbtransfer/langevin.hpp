#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbtransfer/params.hpp"
#include "fbtransfer/spectra.hpp"

namespace fbtransfer {

enum class Scheme { exact, heun, euler };

const char* scheme_name(Scheme s);

struct TrajectoryConfig {
    double dt = 0.0;
    double duration = 0.0;
    double burn_in = 0.0;
    int n_traj = 1;
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::exact;
    double initial_q = 0.0;
    double initial_p = 0.0;
    bool include_noise = true;
};

// Basic sanity: positive dt, duration > burn_in >= 0, n_traj >= 1, and the
// per-step phase cap dt <= 0.01/max(Omega, Gamma') for the low-order schemes.
void require_valid_steps(const TrajectoryConfig& config, const DerivedParams& p);

// Additionally requires the statistics window: duration - burn_in >= 100/Gamma_eff
// and burn_in >= 10/Gamma_eff. Used by the ensemble statistics entry points.
void require_statistics_window(const TrajectoryConfig& config, const DerivedParams& p);

struct TraceRecord {
    double dt = 0.0;
    double t_start = 0.0;  // time of the first retained sample
    std::vector<double> q;
    std::vector<double> p;

    double time_at(std::size_t i) const { return t_start + dt * static_cast<double>(i); }
};

// One trajectory of the feedback loop: oscillator quadratures (Q, P) plus the
// two internal filter coordinates, advanced with the per-scheme one-step map.
// Deterministic per (params, config.seed, traj_index).
TraceRecord simulate(const DerivedParams& p, const TrajectoryConfig& config,
                     int traj_index);

// All trajectories, index-deterministic regardless of thread count.
std::vector<TraceRecord> simulate_ensemble(const DerivedParams& p,
                                           const TrajectoryConfig& config,
                                           int n_threads = 1);

struct PsdEstimate {
    std::vector<double> omega;  // non-negative bin centers, spacing 2*pi/(L*dt)
    std::vector<double> s_qq;   // symmetrized two-sided density, Var = (1/2pi) Int S dw
    std::vector<double> se_qq;
    std::vector<double> s_pp;
    std::vector<double> se_pp;
    int segments_per_trace = 0;
    int n_traces = 0;
};

struct VarianceEstimate {
    double var_q = 0.0;
    double var_p = 0.0;
    double cov_qp = 0.0;
    double se_var_q = 0.0;
    double se_var_p = 0.0;
    double se_cov_qp = 0.0;
    int n_batches = 0;
};

// Streaming Welch averaging (periodic Hann, 50% overlap) so large ensembles
// never need all traces in memory at once. Bins outside [k_min, k_max] can be
// dropped at accumulation time; k_max < 0 keeps everything up to L/2.
class WelchAccumulator {
  public:
    WelchAccumulator(int segment_samples, double dt, int k_min = 0, int k_max = -1);

    void add_trace(const TraceRecord& trace);
    PsdEstimate estimate() const;  // StatisticsError unless >= 8 traces or >= 64 segments

    int segment_samples() const { return segment_samples_; }

  private:
    int segment_samples_;
    double dt_;
    int k_min_, k_max_;
    int n_traces_ = 0;
    int total_segments_ = 0;
    std::vector<double> sum_qq_, sum_sq_qq_;
    std::vector<double> sum_pp_, sum_sq_pp_;
};

class VarianceAccumulator {
  public:
    void add_trace(const TraceRecord& trace);
    VarianceEstimate estimate() const;  // StatisticsError if empty

  private:
    void add_batch(double vq, double vp, double cqp);
    int n_batches_ = 0;
    double s_vq_ = 0.0, s2_vq_ = 0.0;
    double s_vp_ = 0.0, s2_vp_ = 0.0;
    double s_c_ = 0.0, s2_c_ = 0.0;
    bool single_trace_split_ = false;
};

PsdEstimate estimate_psd(const std::vector<TraceRecord>& traces, int segment_samples);
VarianceEstimate sample_variance(const std::vector<TraceRecord>& traces);

struct EnsembleStats {
    PsdEstimate psd;
    VarianceEstimate variance;
};

// Runs the full ensemble through both accumulators one trajectory at a time.
EnsembleStats run_ensemble_stats(const DerivedParams& p, const TrajectoryConfig& config,
                                 int segment_samples, int k_min = 0, int k_max = -1,
                                 int n_threads = 1);

struct QpCovariance {
    double var_q = 0.0;
    double var_p = 0.0;
    double cov_qp = 0.0;
};

// Stationary covariance of the discrete one-step map (exactly, via the
// discrete-time Lyapunov equation), for deterministic dt studies.
QpCovariance stationary_covariance(const DerivedParams& p, double dt, Scheme scheme);

// Exact unit-step response of the feedback filter, sampled at dt, starting at rest.
std::vector<double> filter_step_response(const DerivedParams& p, double dt, int n);

// Mean of the Welch estimator for a process with true density s_of_omega:
// the density seen through the squared periodic-Hann spectral window.
std::vector<double> hann_expected_psd(const std::function<double(double)>& s_of_omega,
                                      const std::vector<double>& omega_bins,
                                      int segment_samples, double dt);

}  // namespace fbtransfer
