#include "fbtransfer/langevin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/fft.hpp"
#include "fbtransfer/response.hpp"

namespace fbtransfer {

namespace {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::mt19937_64 trajectory_rng(std::uint64_t seed, int traj_index) {
    const std::uint64_t stream =
        seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(traj_index) + 1);
    return std::mt19937_64(splitmix64(stream));
}

// State layout: (Q, P, y/s, ydot/(s Omega)) for a power-of-two scale s.
// The raw (y, ydot) realization spans ~1e14 between the measurement-drive
// diffusion and the quadrature variances, which wrecks both the matrix
// exponential and the Lyapunov algebra; dividing the filter pair by Omega
// and by s ~ its stationary spread keeps everything near unity. The
// recorded observables live in the untouched first two components.
double measurement_drive(const DerivedParams& p) {
    return p.gamma_f * p.gamma_f * (1.0 + p.measurement_rho()) /
           (8.0 * p.gamma_m * p.cooperativity);
}

double filter_scale(const DerivedParams& p) {
    if (p.feedback_gain == 0.0) return 1.0;
    const double spread = std::sqrt(measurement_drive(p) / (2.0 * p.gamma_f));
    if (!(spread > 1.0)) return 1.0;
    return std::exp2(std::round(std::log2(spread)));
}

Mat4 drift_matrix(const DerivedParams& p, double s) {
    const double g = p.feedback_gain;
    Mat4 a = Mat4::Zero();
    a(0, 0) = -0.5 * p.gamma_m;
    a(0, 1) = p.omega_m;
    a(1, 0) = -p.omega_m;
    a(1, 1) = -0.5 * p.gamma_m;
    a(1, 2) = -0.5 * p.gamma_m * g * s;
    a(2, 3) = p.omega_m;
    a(3, 0) = -p.gamma_f / s;
    a(3, 2) = -p.omega_m;
    a(3, 3) = -p.gamma_f;
    return a;
}

Mat4 diffusion_matrix(const DerivedParams& p, double s) {
    const double big_n = p.n_th + 0.5;
    Mat4 d = Mat4::Zero();
    d(0, 0) = p.gamma_m * big_n;
    d(1, 1) = p.gamma_m * big_n + 2.0 * p.gamma_m * p.cooperativity;
    if (p.feedback_gain != 0.0) {
        d(3, 3) = measurement_drive(p) / (s * s);
    }
    return d;
}

void check_filter_realization(const DerivedParams& p, double s) {
    const Mat4 a = drift_matrix(p, s);
    Eigen::Matrix2cd af;
    af << a(2, 2), a(2, 3), a(3, 2), a(3, 3);
    const Eigen::Vector2cd b(0.0, a(3, 0));
    for (double omega : {0.0, p.omega_m, -p.omega_m, 2.0 * p.omega_m, -2.0 * p.omega_m}) {
        const Eigen::Matrix2cd lhs =
            cplx(0.0, -omega) * Eigen::Matrix2cd::Identity() - af;
        const cplx h = s * (lhs.inverse() * b)(0);
        const cplx want = lorentzian_filter(omega, p);
        if (std::abs(h - want) > 1.0e-9 * std::abs(want)) {
            throw ContractError("filter realization response mismatch at omega = " +
                                std::to_string(omega));
        }
    }
}

struct Stepper {
    Mat4 propagator = Mat4::Zero();
    Mat4 noise_factor = Mat4::Zero();
    Mat4 step_covariance = Mat4::Zero();
};

Mat4 psd_factor(const Mat4& sigma) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (sigma + sigma.transpose()));
    const Vec4 lam = es.eigenvalues();
    const double floor_tol = -1.0e-9 * std::max(lam.cwiseAbs().maxCoeff(), 1.0e-300);
    Mat4 root = Mat4::Zero();
    for (int i = 0; i < 4; ++i) {
        if (lam(i) < floor_tol) {
            throw ContractError("per-step noise covariance is not positive semidefinite");
        }
        root.col(i) = es.eigenvectors().col(i) * std::sqrt(std::max(lam(i), 0.0));
    }
    return root;
}

Stepper make_stepper(const DerivedParams& p, double dt, Scheme scheme, bool with_noise) {
    const double scale = filter_scale(p);
    check_filter_realization(p, scale);
    const Mat4 a = drift_matrix(p, scale);
    const Mat4 d = with_noise ? diffusion_matrix(p, scale) : Mat4::Zero();

    Stepper s;
    switch (scheme) {
        case Scheme::exact: {
            Eigen::Matrix<double, 8, 8> block = Eigen::Matrix<double, 8, 8>::Zero();
            block.topLeftCorner<4, 4>() = -a * dt;
            block.topRightCorner<4, 4>() = d * dt;
            block.bottomRightCorner<4, 4>() = a.transpose() * dt;
            const Eigen::Matrix<double, 8, 8> e = block.exp();
            s.propagator = e.bottomRightCorner<4, 4>().transpose();
            s.step_covariance = s.propagator * e.topRightCorner<4, 4>();
            break;
        }
        case Scheme::heun: {
            s.propagator = Mat4::Identity() + a * dt + 0.5 * (a * a) * dt * dt;
            const Mat4 half = Mat4::Identity() + 0.5 * a * dt;
            s.step_covariance = half * d * half.transpose() * dt;
            break;
        }
        case Scheme::euler: {
            s.propagator = Mat4::Identity() + a * dt;
            s.step_covariance = d * dt;
            break;
        }
    }
    s.step_covariance = 0.5 * (s.step_covariance + s.step_covariance.transpose()).eval();
    s.noise_factor = with_noise ? psd_factor(s.step_covariance) : Mat4::Zero();
    return s;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::exact: return "exact";
        case Scheme::heun: return "heun";
        case Scheme::euler: return "euler";
    }
    return "unknown";
}

void require_valid_steps(const TrajectoryConfig& config, const DerivedParams& p) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        throw ConfigError("dt must be positive and finite");
    }
    if (!(config.duration > 0.0) || !std::isfinite(config.duration)) {
        throw ConfigError("duration must be positive and finite");
    }
    if (!(config.burn_in >= 0.0) || config.burn_in >= config.duration) {
        throw ConfigError("burn_in must satisfy 0 <= burn_in < duration");
    }
    if (config.n_traj < 1) {
        throw ConfigError("n_traj must be >= 1");
    }
    if (config.scheme != Scheme::exact) {
        const double cap = 0.01 / std::max(p.omega_m, p.gamma_f);
        if (config.dt > cap) {
            throw ConfigError("dt = " + std::to_string(config.dt) +
                              " exceeds the low-order-scheme cap 0.01/max(Omega, Gamma') = " +
                              std::to_string(cap));
        }
    }
}

void require_statistics_window(const TrajectoryConfig& config, const DerivedParams& p) {
    require_valid_steps(config, p);
    const double geff = p.gamma_eff();
    if (config.duration - config.burn_in < 100.0 / geff) {
        throw ConfigError("duration - burn_in must be >= 100/Gamma_eff = " +
                          std::to_string(100.0 / geff) + " s for stationary statistics");
    }
    if (config.burn_in < 10.0 / geff) {
        throw ConfigError("burn_in must be >= 10/Gamma_eff = " +
                          std::to_string(10.0 / geff) + " s");
    }
}

TraceRecord simulate(const DerivedParams& p, const TrajectoryConfig& config,
                     int traj_index) {
    require_valid_steps(config, p);
    const Stepper stepper = make_stepper(p, config.dt, config.scheme, config.include_noise);

    const auto n_total = static_cast<long long>(std::llround(config.duration / config.dt));
    const auto n_burn = static_cast<long long>(std::llround(config.burn_in / config.dt));
    const long long retained = n_total - n_burn;
    if (retained < 1) {
        throw ConfigError("no samples retained: duration - burn_in < dt");
    }

    auto rng = trajectory_rng(config.seed, traj_index);
    std::normal_distribution<double> normal(0.0, 1.0);

    TraceRecord trace;
    trace.dt = config.dt;
    trace.t_start = static_cast<double>(n_burn + 1) * config.dt;
    trace.q.reserve(static_cast<size_t>(retained));
    trace.p.reserve(static_cast<size_t>(retained));

    Vec4 x(config.initial_q, config.initial_p, 0.0, 0.0);
    Vec4 xi;
    for (long long step = 1; step <= n_total; ++step) {
        if (config.include_noise) {
            for (int i = 0; i < 4; ++i) xi(i) = normal(rng);
            x = stepper.propagator * x + stepper.noise_factor * xi;
        } else {
            x = stepper.propagator * x;
        }
        if (!(std::abs(x(0)) <= 1.0e6)) {
            throw StabilityError("integration unstable: |Q| exceeded 1e6 at t = " +
                                 std::to_string(static_cast<double>(step) * config.dt) +
                                 " s; reduce dt");
        }
        if (step > n_burn) {
            trace.q.push_back(x(0));
            trace.p.push_back(x(1));
        }
    }
    return trace;
}

std::vector<TraceRecord> simulate_ensemble(const DerivedParams& p,
                                           const TrajectoryConfig& config,
                                           int n_threads) {
    require_valid_steps(config, p);
    std::vector<TraceRecord> traces(static_cast<size_t>(config.n_traj));
    if (n_threads <= 1 || config.n_traj == 1) {
        for (int t = 0; t < config.n_traj; ++t) traces[static_cast<size_t>(t)] = simulate(p, config, t);
        return traces;
    }

    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= config.n_traj) return;
            try {
                traces[static_cast<size_t>(t)] = simulate(p, config, t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min(n_threads, config.n_traj);
    pool.reserve(static_cast<size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return traces;
}

WelchAccumulator::WelchAccumulator(int segment_samples, double dt, int k_min, int k_max)
    : segment_samples_(segment_samples), dt_(dt), k_min_(k_min), k_max_(k_max) {
    if (segment_samples_ < 16 || segment_samples_ % 2 != 0) {
        throw ConfigError("Welch segment length must be even and >= 16");
    }
    if (!(dt_ > 0.0)) throw ConfigError("Welch dt must be positive");
    const int k_top = segment_samples_ / 2;
    if (k_max_ < 0 || k_max_ > k_top) k_max_ = k_top;
    k_min_ = std::clamp(k_min_, 0, k_max_);
    const size_t n_bins = static_cast<size_t>(k_max_ - k_min_) + 1;
    sum_qq_.assign(n_bins, 0.0);
    sum_sq_qq_.assign(n_bins, 0.0);
    sum_pp_.assign(n_bins, 0.0);
    sum_sq_pp_.assign(n_bins, 0.0);
}

void WelchAccumulator::add_trace(const TraceRecord& trace) {
    const int len = segment_samples_;
    const auto n = static_cast<long long>(trace.q.size());
    if (trace.p.size() != trace.q.size()) {
        throw ContractError("trace quadrature series have different lengths");
    }
    if (std::abs(trace.dt - dt_) > 1.0e-12 * dt_) {
        throw ContractError("trace dt does not match the accumulator");
    }
    const long long hop = len / 2;
    const long long n_seg = n >= len ? 1 + (n - len) / hop : 0;
    if (n_seg < 1) {
        throw StatisticsError("trace shorter than one Welch segment");
    }

    std::vector<double> window(static_cast<size_t>(len));
    double w2 = 0.0;
    for (int i = 0; i < len; ++i) {
        window[static_cast<size_t>(i)] =
            0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / len));
        w2 += window[static_cast<size_t>(i)] * window[static_cast<size_t>(i)];
    }

    const size_t n_bins = sum_qq_.size();
    std::vector<double> mean_qq(n_bins, 0.0), mean_pp(n_bins, 0.0);
    std::vector<std::complex<double>> buf(static_cast<size_t>(len));
    for (long long seg = 0; seg < n_seg; ++seg) {
        const size_t off = static_cast<size_t>(seg * hop);
        for (int i = 0; i < len; ++i) {
            const size_t j = off + static_cast<size_t>(i);
            buf[static_cast<size_t>(i)] = window[static_cast<size_t>(i)] *
                                          std::complex<double>(trace.q[j], trace.p[j]);
        }
        dft_1d(buf, false);
        for (size_t b = 0; b < n_bins; ++b) {
            const int k = k_min_ + static_cast<int>(b);
            const std::complex<double> zk = buf[static_cast<size_t>(k)];
            const std::complex<double> zm = std::conj(buf[static_cast<size_t>((len - k) % len)]);
            const std::complex<double> fq = 0.5 * (zk + zm);
            const std::complex<double> fp = std::complex<double>(0.0, -0.5) * (zk - zm);
            mean_qq[b] += std::norm(fq);
            mean_pp[b] += std::norm(fp);
        }
    }
    const double scale = dt_ / (w2 * static_cast<double>(n_seg));
    for (size_t b = 0; b < n_bins; ++b) {
        const double mq = mean_qq[b] * scale;
        const double mp = mean_pp[b] * scale;
        sum_qq_[b] += mq;
        sum_sq_qq_[b] += mq * mq;
        sum_pp_[b] += mp;
        sum_sq_pp_[b] += mp * mp;
    }
    n_traces_ += 1;
    total_segments_ += static_cast<int>(n_seg);
}

PsdEstimate WelchAccumulator::estimate() const {
    if (n_traces_ < 8 && total_segments_ < 64) {
        throw StatisticsError("PSD estimate needs >= 8 trajectories or >= 64 Welch segments; got " +
                              std::to_string(n_traces_) + " trajectories, " +
                              std::to_string(total_segments_) + " segments");
    }
    PsdEstimate out;
    out.n_traces = n_traces_;
    out.segments_per_trace = total_segments_ / std::max(n_traces_, 1);
    const size_t n_bins = sum_qq_.size();
    out.omega.resize(n_bins);
    out.s_qq.resize(n_bins);
    out.se_qq.resize(n_bins);
    out.s_pp.resize(n_bins);
    out.se_pp.resize(n_bins);
    const double d_omega = two_pi / (static_cast<double>(segment_samples_) * dt_);
    const double nt = static_cast<double>(n_traces_);
    for (size_t b = 0; b < n_bins; ++b) {
        out.omega[b] = d_omega * static_cast<double>(k_min_ + static_cast<int>(b));
        const double mq = sum_qq_[b] / nt;
        const double mp = sum_pp_[b] / nt;
        out.s_qq[b] = mq;
        out.s_pp[b] = mp;
        if (n_traces_ >= 2) {
            const double var_q = std::max(0.0, (sum_sq_qq_[b] / nt - mq * mq)) * nt / (nt - 1.0);
            const double var_p = std::max(0.0, (sum_sq_pp_[b] / nt - mp * mp)) * nt / (nt - 1.0);
            out.se_qq[b] = std::sqrt(var_q / nt);
            out.se_pp[b] = std::sqrt(var_p / nt);
        } else {
            // Single long trace: chi-square spread of averaged periodograms,
            // inflated for the 50% segment overlap.
            const double eff = std::sqrt(static_cast<double>(total_segments_));
            out.se_qq[b] = 1.2 * mq / eff;
            out.se_pp[b] = 1.2 * mp / eff;
        }
    }
    return out;
}

void VarianceAccumulator::add_batch(double vq, double vp, double cqp) {
    n_batches_ += 1;
    s_vq_ += vq;
    s2_vq_ += vq * vq;
    s_vp_ += vp;
    s2_vp_ += vp * vp;
    s_c_ += cqp;
    s2_c_ += cqp * cqp;
}

void VarianceAccumulator::add_trace(const TraceRecord& trace) {
    const size_t n = trace.q.size();
    if (n < 2 || trace.p.size() != n) {
        throw StatisticsError("trace too short for variance estimation");
    }
    const int n_split = n >= 64 ? 8 : 1;
    const size_t batch_len = n / static_cast<size_t>(n_split);
    for (int b = 0; b < n_split; ++b) {
        const size_t off = static_cast<size_t>(b) * batch_len;
        const size_t len = (b == n_split - 1) ? n - off : batch_len;
        double mq = 0.0, mp = 0.0;
        for (size_t i = off; i < off + len; ++i) {
            mq += trace.q[i];
            mp += trace.p[i];
        }
        mq /= static_cast<double>(len);
        mp /= static_cast<double>(len);
        double vq = 0.0, vp = 0.0, c = 0.0;
        for (size_t i = off; i < off + len; ++i) {
            const double dq = trace.q[i] - mq;
            const double dp = trace.p[i] - mp;
            vq += dq * dq;
            vp += dp * dp;
            c += dq * dp;
        }
        const double denom = static_cast<double>(len) - 1.0;
        add_batch(vq / denom, vp / denom, c / denom);
    }
}

VarianceEstimate VarianceAccumulator::estimate() const {
    if (n_batches_ < 1) {
        throw StatisticsError("variance estimate requested before any trace was added");
    }
    VarianceEstimate out;
    out.n_batches = n_batches_;
    const double n = static_cast<double>(n_batches_);
    out.var_q = s_vq_ / n;
    out.var_p = s_vp_ / n;
    out.cov_qp = s_c_ / n;
    if (n_batches_ >= 2) {
        const double f = n / (n - 1.0);
        out.se_var_q = std::sqrt(std::max(0.0, (s2_vq_ / n - out.var_q * out.var_q) * f) / n);
        out.se_var_p = std::sqrt(std::max(0.0, (s2_vp_ / n - out.var_p * out.var_p) * f) / n);
        out.se_cov_qp = std::sqrt(std::max(0.0, (s2_c_ / n - out.cov_qp * out.cov_qp) * f) / n);
    }
    return out;
}

PsdEstimate estimate_psd(const std::vector<TraceRecord>& traces, int segment_samples) {
    if (traces.empty()) throw StatisticsError("no traces supplied");
    WelchAccumulator acc(segment_samples, traces.front().dt);
    for (const auto& t : traces) acc.add_trace(t);
    return acc.estimate();
}

VarianceEstimate sample_variance(const std::vector<TraceRecord>& traces) {
    if (traces.empty()) throw StatisticsError("no traces supplied");
    VarianceAccumulator acc;
    for (const auto& t : traces) acc.add_trace(t);
    return acc.estimate();
}

EnsembleStats run_ensemble_stats(const DerivedParams& p, const TrajectoryConfig& config,
                                 int segment_samples, int k_min, int k_max,
                                 int n_threads) {
    require_statistics_window(config, p);
    WelchAccumulator welch(segment_samples, config.dt, k_min, k_max);
    VarianceAccumulator var;
    const int chunk = std::max(1, n_threads);
    for (int base = 0; base < config.n_traj; base += chunk) {
        const int count = std::min(chunk, config.n_traj - base);
        std::vector<TraceRecord> traces;
        if (count == 1) {
            traces.push_back(simulate(p, config, base));
        } else {
            std::atomic<int> next{0};
            std::mutex err_mutex;
            std::exception_ptr first_error;
            traces.resize(static_cast<size_t>(count));
            auto worker = [&] {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= count) return;
                    try {
                        traces[static_cast<size_t>(t)] = simulate(p, config, base + t);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int i = 0; i < count; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            if (first_error) std::rethrow_exception(first_error);
        }
        for (auto& t : traces) {
            welch.add_trace(t);
            var.add_trace(t);
        }
    }
    EnsembleStats out;
    out.psd = welch.estimate();
    out.variance = var.estimate();
    return out;
}

QpCovariance stationary_covariance(const DerivedParams& p, double dt, Scheme scheme) {
    TrajectoryConfig probe;
    probe.dt = dt;
    probe.duration = 2.0 * dt;
    probe.scheme = scheme;
    require_valid_steps(probe, p);
    const Stepper s = make_stepper(p, dt, scheme, true);

    const Eigen::Vector4cd eigs = s.propagator.eigenvalues();
    double radius = 0.0;
    for (int i = 0; i < 4; ++i) radius = std::max(radius, std::abs(eigs(i)));
    if (radius >= 1.0) {
        throw StabilityError("one-step map spectral radius " + std::to_string(radius) +
                             " >= 1; no stationary state at this dt, reduce dt");
    }

    Eigen::Matrix<double, 16, 16> lhs = Eigen::Matrix<double, 16, 16>::Identity();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    lhs(4 * j + i, 4 * l + k) -= s.propagator(i, k) * s.propagator(j, l);
    Eigen::Matrix<double, 16, 1> rhs;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) rhs(4 * j + i) = s.step_covariance(i, j);
    const Eigen::Matrix<double, 16, 1> v = lhs.partialPivLu().solve(rhs);

    QpCovariance out;
    out.var_q = v(0);
    out.var_p = v(5);
    out.cov_qp = 0.5 * (v(1) + v(4));
    if (!std::isfinite(out.var_q) || !std::isfinite(out.var_p) || out.var_q <= 0.0) {
        throw StabilityError("stationary covariance solve failed; reduce dt");
    }
    return out;
}

std::vector<double> filter_step_response(const DerivedParams& p, double dt, int n) {
    if (!(dt > 0.0) || n < 1) throw ConfigError("step response needs dt > 0 and n >= 1");
    check_filter_realization(p, 1.0);
    Eigen::Matrix3d block = Eigen::Matrix3d::Zero();
    block(0, 1) = p.omega_m;
    block(1, 0) = -p.omega_m;
    block(1, 1) = -p.gamma_f;
    block(1, 2) = -p.gamma_f;
    const Eigen::Matrix3d e = (block * dt).exp();
    Eigen::Vector3d z(0.0, 0.0, 1.0);
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<size_t>(i)] = z(0);
        z = e * z;
    }
    return out;
}

std::vector<double> hann_expected_psd(const std::function<double(double)>& s_of_omega,
                                      const std::vector<double>& omega_bins,
                                      int segment_samples, double dt) {
    const double len = static_cast<double>(segment_samples);
    const double d_omega = two_pi / (len * dt);
    const double delta = d_omega;
    auto dirichlet = [&](double nu) -> std::complex<double> {
        const double s = std::sin(0.5 * nu * dt);
        double mag;
        if (std::abs(s) < 1.0e-300) {
            mag = len;
        } else {
            mag = std::sin(0.5 * nu * len * dt) / s;
        }
        const double phase = -0.5 * nu * (len - 1.0) * dt;
        return std::polar(mag, phase);
    };
    auto kernel = [&](double nu) {
        const std::complex<double> w = 0.5 * dirichlet(nu) - 0.25 * dirichlet(nu - delta) -
                                       0.25 * dirichlet(nu + delta);
        return std::norm(w);
    };

    const int half_bins = 30;
    const int per_bin = 16;
    const int n_pts = 2 * half_bins * per_bin + 1;
    const double step = d_omega / per_bin;

    std::vector<double> out(omega_bins.size());
    for (size_t b = 0; b < omega_bins.size(); ++b) {
        const double wk = omega_bins[b];
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n_pts; ++i) {
            const double nu = (static_cast<double>(i) - half_bins * per_bin) * step;
            const double k = kernel(nu);
            num += k * s_of_omega(wk - nu);
            den += k;
        }
        out[b] = num / den;
    }
    return out;
}

}  // namespace fbtransfer
