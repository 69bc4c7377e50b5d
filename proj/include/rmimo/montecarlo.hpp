// Seeded trial engine for ergodic-rate estimation, plus parameter sweeps
// and outer averaging over random user drops. Per-trial work samples the
// exact low-dimensional statistics of each scenario (the full-matrix
// path lives in instantaneous_sinr and is cross-checked by tests).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rmimo/analytic.hpp"
#include "rmimo/beamforming.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/estimation.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

enum class ScenarioKind { SingleUser, UplinkCell, DownlinkCell };
enum class Scheme { LosBased, FastFading };

struct Scenario {
    ScenarioKind kind = ScenarioKind::SingleUser;
    Scheme scheme = Scheme::LosBased;
    DetectorKind detector = DetectorKind::MRC;  // uplink only
    int M = 1;
    int N = 1;
    double d = 0.3;       // BS antenna spacing (wavelengths)
    double d_user = 0.3;  // user-side spacing
    std::vector<UserParams> users;  // size K (1 for single-user)
    ScalingPolicy scaling;
    std::optional<PilotConfig> pilot;          // required iff scheme == FastFading
    std::optional<CorrelationConfig> correlation;

    int K() const { return static_cast<int>(users.size()); }

    void validate() const {
        if (users.empty()) throw std::invalid_argument("Scenario: need at least one user");
        if (M < 1 || N < 1) throw std::invalid_argument("Scenario: antenna counts must be >= 1");
        if (kind == ScenarioKind::SingleUser && users.size() != 1)
            throw std::invalid_argument("Scenario: single-user scenario needs exactly one user");
        if (scheme == Scheme::FastFading && !pilot)
            throw std::invalid_argument("Scenario: FF-based scheme requires a pilot configuration");
        if (scheme == Scheme::LosBased && pilot && pilot->tau != 0)
            throw std::invalid_argument("Scenario: LOS-based scheme forbids pilots (tau = 0 implied)");
        if (scheme == Scheme::FastFading && kind == ScenarioKind::DownlinkCell)
            throw std::invalid_argument("Scenario: the FF baseline is not defined for the downlink");
        if (scheme == Scheme::FastFading && correlation && !correlation->trivial())
            throw std::invalid_argument(
                "Scenario: the FF baseline assumes spatially white scattering; "
                "combine it with correlation is not supported");
        if (pilot) pilot->validate();
        if (correlation) correlation->validate();
        for (const auto& u : users)
            if (u.beta <= 0.0 || u.kappa <= 0.0)
                throw std::invalid_argument("Scenario: user beta and kappa must be positive");
    }

    double node_power() const {
        return scaling.resolve_power(M, N, K());
    }
};

struct RateEstimate {
    double mean = 0.0;          // bits/s/Hz
    double ci_halfwidth = 0.0;  // 1.96 * sample_std / sqrt(trials)
    long trials = 0;
    std::uint64_t master_seed = 0;
};

// ---------------------------------------------------------------------
// Per-realization SINR from explicitly constructed channel matrices.
// One ChannelRealization per user; matrices are M x N.
// ---------------------------------------------------------------------
inline std::vector<double> instantaneous_sinr(
    const Scenario& sc, std::span<const ChannelRealization> realizations) {
    sc.validate();
    if (static_cast<int>(realizations.size()) != sc.K())
        throw std::invalid_argument("instantaneous_sinr: need one realization per user");
    const int K = sc.K();
    const double p = sc.node_power();
    std::vector<double> out(K);

    if (sc.kind == ScenarioKind::SingleUser) {
        const auto& u = sc.users[0];
        RicianLink link{sc.M, sc.N, u.beta, u.kappa, u.theta, u.phi, sc.d, sc.d_user};
        const BeamformerPair bf = los_beamformers(link);
        // gamma = p beta kbar M N / (p beta ktilde |wᴴ H-tilde b|^2 + 1),
        // with the scattered factor taken from the realization.
        const MatC htilde =
            realizations[0].scattered / std::sqrt(u.beta * u.ktilde());
        const std::complex<double> cross = bf.rx.dot(htilde * bf.tx);
        out[0] = p * u.beta * u.kbar() * double(sc.M) * double(sc.N) /
                 (p * u.beta * u.ktilde() * std::norm(cross) + 1.0);
        return out;
    }

    if (sc.kind == ScenarioKind::UplinkCell) {
        std::vector<VecC> tx(K);
        for (int k = 0; k < K; ++k) {
            RicianLink link{sc.M, sc.N, sc.users[k].beta, sc.users[k].kappa,
                            sc.users[k].theta, sc.users[k].phi, sc.d, sc.d_user};
            tx[k] = los_beamformers(link).tx;
        }
        const UplinkChannels ch = effective_uplink_channel(realizations, tx);
        std::vector<double> scatter(K);
        for (int k = 0; k < K; ++k)
            scatter[k] = sc.users[k].beta * sc.users[k].ktilde();
        const DetectorMatrix det =
            detector_matrix(ch.los, sc.detector, p, scatter);
        for (int k = 0; k < K; ++k) {
            const VecC lam = det.columns.col(k);
            const double sig = p * std::norm(lam.dot(ch.los.col(k)));
            double den = p * std::norm(lam.dot(ch.effective.col(k) - ch.los.col(k))) +
                         lam.squaredNorm();
            for (int i = 0; i < K; ++i)
                if (i != k) den += p * std::norm(lam.dot(ch.effective.col(i)));
            out[k] = sig / den;
        }
        return out;
    }

    // Downlink: per-user combiner output decomposed into LOS signal,
    // self-scattered leakage, inter-user interference, and unit noise.
    std::vector<SteeringVector> r(K);
    for (int k = 0; k < K; ++k)
        r[k] = steering_vector(sc.M, sc.d, sc.users[k].theta);
    for (int k = 0; k < K; ++k) {
        const auto& u = sc.users[k];
        const SteeringVector t = steering_vector(sc.N, sc.d_user, u.phi);
        const MatC h_k = realizations[k].total / std::sqrt(u.beta);  // H_k
        const MatC htilde =
            realizations[k].scattered / std::sqrt(u.beta * u.ktilde());
        const double nm = std::sqrt(double(sc.N) * double(sc.M));
        const double sig =
            p * u.beta * u.kbar() / double(K) * double(sc.N) * double(sc.M);
        const std::complex<double> self =
            (t.entries.adjoint() * htilde.transpose() * r[k].entries.conjugate())(0) / nm;
        double den = 1.0 + p * u.beta * u.ktilde() / double(K) * std::norm(self);
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            const std::complex<double> cross =
                (t.entries.adjoint() * h_k.transpose() * r[i].entries.conjugate())(0) / nm;
            den += p * u.beta / double(K) * std::norm(cross);
        }
        out[k] = sig / den;
    }
    return out;
}

// ---------------------------------------------------------------------
// Trial engine
// ---------------------------------------------------------------------
namespace detail {

// Deterministic pairwise reduction; result independent of worker count.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Precomputed per-configuration state shared by all trials.
struct UplinkPlan {
    MatC lambda;               // M x K detector columns
    MatC lam_gbar;             // K x K, (k,i) = lambda_kᴴ gbar_i
    std::vector<double> lam_norm_sq;
    std::vector<double> scatter_sd;   // sqrt(beta_i ktilde_i) * corr user factor
    MatC corr_sqrt_bs;         // empty if uncorrelated
    std::vector<double> dxi;   // FF: per-user error variance
    std::vector<double> gain;  // FF: per-user estimator gain
    double p_p = 0.0;
    MatC gbar;                 // M x K
};

inline UplinkPlan make_uplink_plan(const Scenario& sc) {
    const int K = sc.K();
    UplinkPlan plan;
    plan.gbar.resize(sc.M, K);
    for (int k = 0; k < K; ++k) {
        const auto& u = sc.users[k];
        plan.gbar.col(k) =
            std::sqrt(double(sc.N) * u.beta * u.kbar()) *
            steering_vector(sc.M, sc.d, u.theta).entries;
    }
    std::vector<double> scatter(K);
    for (int k = 0; k < K; ++k)
        scatter[k] = sc.users[k].beta * sc.users[k].ktilde();

    const double p = sc.node_power();
    if (sc.scheme == Scheme::LosBased) {
        plan.lambda = detector_matrix(plan.gbar, sc.detector, p, scatter).columns;
    } else {
        plan.lambda = plan.gbar;  // MRC on estimates; columns replaced per trial
        plan.p_p = double(sc.pilot->tau) * p;
        plan.dxi.resize(K);
        plan.gain.resize(K);
        for (int k = 0; k < K; ++k) {
            const double q = scatter[k];
            plan.dxi[k] = mmse_error_variance(plan.p_p, 1.0, q);
            plan.gain[k] = std::sqrt(plan.p_p) * q / (1.0 + plan.p_p * q);
        }
    }
    plan.lam_gbar.resize(K, K);
    plan.lam_norm_sq.resize(K);
    for (int k = 0; k < K; ++k) {
        plan.lam_norm_sq[k] = plan.lambda.col(k).squaredNorm();
        for (int i = 0; i < K; ++i)
            plan.lam_gbar(k, i) = plan.lambda.col(k).dot(plan.gbar.col(i));
    }
    plan.scatter_sd.resize(K);
    for (int k = 0; k < K; ++k) {
        double user_factor = 1.0;
        if (sc.correlation && !sc.correlation->trivial()) {
            const auto& u = sc.users[k];
            const VecC b = steering_vector(sc.N, sc.d_user, u.phi)
                               .entries.conjugate() / std::sqrt(double(sc.N));
            const MatC su = exponential_correlation(sc.N, sc.correlation->g_u);
            user_factor = std::sqrt(std::real((b.adjoint() * su * b)(0)));
        }
        plan.scatter_sd[k] = std::sqrt(scatter[k]) * user_factor;
    }
    if (sc.correlation && !sc.correlation->trivial())
        plan.corr_sqrt_bs =
            correlation_sqrt(exponential_correlation(sc.M, sc.correlation->g_b));
    return plan;
}

struct DownlinkPlan {
    MatC los_cross;            // K x K, (k,i) = t_kᴴ Hbar_kᵀ conj(r_i) / sqrt(NM)
    std::vector<double> scatter_sd;  // per-user std of the reduced scattered row
    MatC r_conj;               // M x K, conj(r_i) columns
    MatC corr_sqrt_bs;         // empty if uncorrelated
};

inline DownlinkPlan make_downlink_plan(const Scenario& sc) {
    const int K = sc.K();
    DownlinkPlan plan;
    plan.r_conj.resize(sc.M, K);
    for (int i = 0; i < K; ++i)
        plan.r_conj.col(i) =
            steering_vector(sc.M, sc.d, sc.users[i].theta).entries.conjugate();
    const double nm = std::sqrt(double(sc.N) * double(sc.M));
    plan.los_cross.resize(K, K);
    for (int k = 0; k < K; ++k) {
        // t_kᴴ (r_k t_kᵀ)ᵀ conj(r_i) = N r_kᵀ conj(r_i)
        const VecC rk = steering_vector(sc.M, sc.d, sc.users[k].theta).entries;
        for (int i = 0; i < K; ++i)
            plan.los_cross(k, i) =
                double(sc.N) * (rk.transpose() * plan.r_conj.col(i))(0) / nm;
    }
    plan.scatter_sd.resize(K);
    const bool corr = sc.correlation && !sc.correlation->trivial();
    for (int k = 0; k < K; ++k) {
        // v = H-tilde_corr conj(t_k) has covariance ||Sigma_u^{1/2} conj(t_k)||^2 Sigma_b.
        double c_sq = double(sc.N);
        if (corr) {
            const VecC t = steering_vector(sc.N, sc.d_user, sc.users[k].phi).entries;
            const MatC su = exponential_correlation(sc.N, sc.correlation->g_u);
            c_sq = std::real((t.transpose() * su * t.conjugate())(0, 0));
        }
        plan.scatter_sd[k] = std::sqrt(c_sq);
    }
    if (corr)
        plan.corr_sqrt_bs =
            correlation_sqrt(exponential_correlation(sc.M, sc.correlation->g_b));
    return plan;
}

inline void uplink_trial(const Scenario& sc, const UplinkPlan& plan, Rng& rng,
                         std::span<double> rates) {
    const int K = sc.K();
    const int M = sc.M;
    const double p = sc.node_power();
    // Scattered part of each effective column; per-entry variance
    // beta_i ktilde_i (times the user-side correlation quadratic form).
    MatC gt(M, K);
    for (int i = 0; i < K; ++i)
        for (int m = 0; m < M; ++m)
            gt(m, i) = plan.scatter_sd[i] * rng.complex_gaussian();
    if (plan.corr_sqrt_bs.size() > 0) gt = plan.corr_sqrt_bs * gt;

    const double overhead =
        sc.scheme == Scheme::FastFading ? sc.pilot->overhead() : 1.0;

    if (sc.scheme == Scheme::LosBased) {
        const MatC lam_gt = plan.lambda.adjoint() * gt;  // K x K
        for (int k = 0; k < K; ++k) {
            const double sig = p * std::norm(plan.lam_gbar(k, k));
            double den = p * std::norm(lam_gt(k, k)) + plan.lam_norm_sq[k];
            for (int i = 0; i < K; ++i)
                if (i != k) den += p * std::norm(plan.lam_gbar(k, i) + lam_gt(k, i));
            rates[k] = log2p1(sig / den);
        }
        return;
    }

    // FF baseline: orthogonal pilots (tau = K), per-user MMSE estimates,
    // MRC on the estimated columns.
    MatC ghat(M, K);
    for (int k = 0; k < K; ++k) {
        VecC noise(M);
        for (int m = 0; m < M; ++m) noise[m] = rng.complex_gaussian();
        ghat.col(k) = plan.gbar.col(k) +
                      plan.gain[k] * (std::sqrt(plan.p_p) * gt.col(k) + noise);
    }
    const MatC cross = ghat.adjoint() * (plan.gbar + gt);  // (k,i)
    for (int k = 0; k < K; ++k) {
        const double nsq = ghat.col(k).squaredNorm();
        const double sig = p * nsq * nsq;
        double den = p * nsq * plan.dxi[k] + nsq;
        for (int i = 0; i < K; ++i)
            if (i != k) den += p * std::norm(cross(k, i));
        rates[k] = overhead * log2p1(sig / den);
    }
}

inline void downlink_trial(const Scenario& sc, const DownlinkPlan& plan, Rng& rng,
                           std::span<double> rates) {
    const int K = sc.K();
    const int M = sc.M;
    const double p = sc.node_power();
    const double nm = std::sqrt(double(sc.N) * double(sc.M));
    MatC w(M, K);  // column k: reduced scattered vector v_k of user k
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            w(m, k) = plan.scatter_sd[k] * rng.complex_gaussian();
    if (plan.corr_sqrt_bs.size() > 0) w = plan.corr_sqrt_bs * w;
    const MatC scat_cross = (w.transpose() * plan.r_conj) / nm;  // (k,i)
    for (int k = 0; k < K; ++k) {
        const auto& u = sc.users[k];
        const double sig =
            p * u.beta * u.kbar() / double(K) * double(sc.N) * double(sc.M);
        double den = 1.0 + p * u.beta * u.ktilde() / double(K) *
                               std::norm(scat_cross(k, k));
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            const std::complex<double> cross =
                std::sqrt(u.kbar()) * plan.los_cross(k, i) +
                std::sqrt(u.ktilde()) * scat_cross(k, i);
            den += p * u.beta / double(K) * std::norm(cross);
        }
        rates[k] = log2p1(sig / den);
    }
}

inline void single_user_trial(const Scenario& sc, Rng& rng,
                              std::span<double> rates) {
    const auto& u = sc.users[0];
    const double p = sc.node_power();
    if (sc.scheme == Scheme::LosBased) {
        // wᴴ H-tilde b is CN(0,1) for unit-norm w and b.
        const std::complex<double> h = rng.complex_gaussian();
        const double g = p * u.beta * u.kbar() * double(sc.M) * double(sc.N) /
                         (p * u.beta * u.ktilde() * std::norm(h) + 1.0);
        rates[0] = log2p1(g);
        return;
    }
    const double q = u.beta * u.ktilde();
    const double p_p = double(sc.pilot->tau) * p;
    const double dxi = mmse_error_variance(p_p, 1.0, q);
    const double gain = std::sqrt(p_p) * q / (1.0 + p_p * q);
    const double gbar_head = std::sqrt(double(sc.M) * double(sc.N) * u.beta * u.kbar());
    // ||ghat||^2 with ghat = gbar + e, e iid CN(0, delta_g^2); rotate so
    // gbar lies along the first axis.
    double nsq = 0.0;
    for (int m = 0; m < sc.M; ++m) {
        std::complex<double> e =
            gain * (std::sqrt(p_p) * std::sqrt(q) * rng.complex_gaussian() +
                    rng.complex_gaussian());
        if (m == 0) e += gbar_head;
        nsq += std::norm(e);
    }
    const double g = p * nsq / (p * dxi + 1.0);
    rates[0] = sc.pilot->overhead() * log2p1(g);
}

}  // namespace detail

// Per-user ergodic-rate estimates over `trials` independently seeded
// realizations. Bit-reproducible for a given (scenario, trials, seed)
// regardless of `workers`.
inline std::vector<RateEstimate> estimate_rates(const Scenario& sc, long trials,
                                                std::uint64_t master_seed,
                                                int workers = 1) {
    sc.validate();
    if (trials < 1) throw std::invalid_argument("estimate_rates: trials must be >= 1");
    const int K = sc.K();
    std::vector<double> samples(static_cast<std::size_t>(trials) * K);

    std::optional<detail::UplinkPlan> up;
    std::optional<detail::DownlinkPlan> down;
    if (sc.kind == ScenarioKind::UplinkCell) up = detail::make_uplink_plan(sc);
    if (sc.kind == ScenarioKind::DownlinkCell) down = detail::make_downlink_plan(sc);

    auto run_block = [&](long lo, long hi) {
        std::vector<double> rates(K);
        for (long t = lo; t < hi; ++t) {
            Rng rng(master_seed, {0x7217a1ULL, static_cast<std::uint64_t>(t)});
            switch (sc.kind) {
                case ScenarioKind::SingleUser:
                    detail::single_user_trial(sc, rng, rates);
                    break;
                case ScenarioKind::UplinkCell:
                    detail::uplink_trial(sc, *up, rng, rates);
                    break;
                case ScenarioKind::DownlinkCell:
                    detail::downlink_trial(sc, *down, rng, rates);
                    break;
            }
            for (int k = 0; k < K; ++k)
                samples[static_cast<std::size_t>(t) * K + k] = rates[k];
        }
    };

    workers = std::max(1, workers);
    if (workers == 1 || trials < 2L * workers) {
        run_block(0, trials);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long lo = w * chunk, hi = std::min(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_block, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<RateEstimate> out(K);
    std::vector<double> col(trials), col_sq(trials);
    for (int k = 0; k < K; ++k) {
        for (long t = 0; t < trials; ++t) {
            col[t] = samples[static_cast<std::size_t>(t) * K + k];
            col_sq[t] = col[t] * col[t];
        }
        RateEstimate& e = out[k];
        e.trials = trials;
        e.master_seed = master_seed;
        e.mean = detail::pairwise_sum(col) / double(trials);
        const double var = std::max(
            0.0, detail::pairwise_sum(col_sq) / double(trials) - e.mean * e.mean);
        e.ci_halfwidth = 1.96 * std::sqrt(var / double(trials));
    }
    return out;
}

// Mean over users, CI combined as mean of per-user CIs in quadrature.
inline RateEstimate average_user_rate(std::span<const RateEstimate> per_user) {
    RateEstimate out;
    if (per_user.empty()) return out;
    double ci_sq = 0.0;
    for (const auto& e : per_user) {
        out.mean += e.mean;
        ci_sq += e.ci_halfwidth * e.ci_halfwidth;
    }
    const double k = double(per_user.size());
    out.mean /= k;
    out.ci_halfwidth = std::sqrt(ci_sq) / k;
    out.trials = per_user[0].trials;
    out.master_seed = per_user[0].master_seed;
    return out;
}

// ---------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------
enum class SweepAxis { M, N, K, Energy, Kappa, Power, Spacing, CorrBs, CorrUser, Alpha };

struct AlphaCoupling {
    double alpha = 1.0;  // K = round(iota * M^alpha)
    double iota = 1.0;
};

struct SweepSpec {
    Scenario base;
    SweepAxis axis = SweepAxis::M;
    std::vector<double> grid;
    long trials = 10000;
    std::optional<AlphaCoupling> coupling;  // M-axis only
    bool fixed_angles = false;  // recompute theta_k when K changes
};

struct SweepRow {
    double axis_value = 0.0;
    SinrReport analytic;
    RateEstimate mc;
};

namespace detail {

inline void resize_users(Scenario& sc, int K, bool fixed_angles) {
    if (K < 1) throw std::invalid_argument("sweep: K must be >= 1");
    if (static_cast<int>(sc.users.size()) > K) {
        sc.users.resize(K);  // keep the first K of a pre-drawn pool
    } else if (static_cast<int>(sc.users.size()) < K) {
        if (!fixed_angles)
            throw std::invalid_argument(
                "sweep: growing K requires the fixed-angle layout or a user pool "
                "of at least K entries");
        const UserParams proto = sc.users.front();
        sc.users.assign(K, proto);
    }
    if (fixed_angles) {
        const auto angles = fixed_arrival_angles(K);
        for (int k = 0; k < K; ++k) sc.users[k].theta = angles[k];
    }
}

// Largest K any grid point of the sweep will request.
inline int max_user_count(const SweepSpec& spec) {
    int max_k = spec.base.K();
    auto coupled_k = [&](double m, double alpha, double iota) {
        return std::max(1, static_cast<int>(std::lround(iota * std::pow(m, alpha))));
    };
    if (spec.axis == SweepAxis::K) {
        for (double v : spec.grid)
            max_k = std::max(max_k, static_cast<int>(std::lround(v)));
    } else if (spec.axis == SweepAxis::M && spec.coupling) {
        for (double v : spec.grid)
            max_k = std::max(max_k, coupled_k(v, spec.coupling->alpha,
                                              spec.coupling->iota));
    } else if (spec.axis == SweepAxis::Alpha && spec.coupling) {
        for (double v : spec.grid)
            max_k = std::max(max_k,
                             coupled_k(double(spec.base.M), v, spec.coupling->iota));
    }
    return max_k;
}

inline Scenario apply_axis(const SweepSpec& spec, double value) {
    Scenario sc = spec.base;
    switch (spec.axis) {
        case SweepAxis::M: sc.M = static_cast<int>(std::lround(value)); break;
        case SweepAxis::N: sc.N = static_cast<int>(std::lround(value)); break;
        case SweepAxis::K:
            resize_users(sc, static_cast<int>(std::lround(value)), spec.fixed_angles);
            break;
        case SweepAxis::Energy:
        case SweepAxis::Power: sc.scaling.value = value; break;
        case SweepAxis::Kappa:
            for (auto& u : sc.users) u.kappa = value;
            break;
        case SweepAxis::Spacing: sc.d = value; break;
        case SweepAxis::CorrBs:
            if (!sc.correlation) sc.correlation = CorrelationConfig{};
            sc.correlation->g_b = value;
            break;
        case SweepAxis::CorrUser:
            if (!sc.correlation) sc.correlation = CorrelationConfig{};
            sc.correlation->g_u = value;
            break;
        case SweepAxis::Alpha: {
            if (!spec.coupling) throw std::invalid_argument("sweep: alpha axis needs coupling");
            const int K = std::max(
                1, static_cast<int>(std::lround(spec.coupling->iota *
                                                std::pow(double(sc.M), value))));
            resize_users(sc, K, spec.fixed_angles);
            break;
        }
    }
    if (spec.axis == SweepAxis::M && spec.coupling) {
        if (spec.coupling->iota <= 0.0)
            throw std::invalid_argument("sweep: iota must be positive");
        const int K = std::max(
            1, static_cast<int>(std::lround(
                   spec.coupling->iota * std::pow(double(sc.M), spec.coupling->alpha))));
        resize_users(sc, K, spec.fixed_angles);
    }
    return sc;
}

// Definitional statistical SINR for an arbitrary detector: expectations
// of the scattered and noise terms are analytic, LOS terms exact.
inline double ul_detector_statistical_sinr(const Scenario& sc,
                                           const UplinkPlan& plan, int k,
                                           bool zero_scattering = false) {
    const double p = sc.node_power();
    const double sig = p * std::norm(plan.lam_gbar(k, k));
    double den = plan.lam_norm_sq[k];
    for (int i = 0; i < sc.K(); ++i) {
        if (!zero_scattering)
            den += p * plan.lam_norm_sq[k] * sc.users[i].beta * sc.users[i].ktilde();
        if (i != k) den += p * std::norm(plan.lam_gbar(k, i));
    }
    return sig / den;
}

inline SinrReport analytic_row(const Scenario& sc) {
    SinrReport rep;
    const double p = sc.node_power();
    const int K = sc.K();
    const double energy =
        sc.scaling.fixed_energy()
            ? sc.scaling.value
            : p * double(sc.M) * double(sc.N) /
                  (sc.kind == ScenarioKind::DownlinkCell ? double(K) : 1.0);
    double sinr = 0.0, lower = 0.0, upper = 0.0, limit = 0.0;
    std::optional<UplinkPlan> plan;
    if (sc.kind == ScenarioKind::UplinkCell && sc.detector != DetectorKind::MRC)
        plan = make_uplink_plan(sc);
    for (int k = 0; k < K; ++k) {
        const auto& u = sc.users[k];
        double g, gu;
        switch (sc.kind) {
            case ScenarioKind::SingleUser:
                g = su_statistical_sinr(p, u.beta, u.kappa, sc.M, sc.N);
                gu = p * u.beta * u.kbar() * double(sc.M) * double(sc.N);
                break;
            case ScenarioKind::UplinkCell:
                if (sc.detector == DetectorKind::MRC) {
                    g = ul_mrc_statistical_sinr(k, sc.users, p, sc.M, sc.N, sc.d);
                    // zero-scattering denominator keeps LOS interference
                    gu = p * double(sc.M) * double(sc.N) * u.beta * u.kbar();
                } else {
                    g = ul_detector_statistical_sinr(sc, *plan, k);
                    gu = ul_detector_statistical_sinr(sc, *plan, k, true);
                }
                break;
            case ScenarioKind::DownlinkCell:
                g = dl_statistical_sinr(k, sc.users, p, sc.M, sc.N, sc.d);
                gu = p * double(sc.M) * double(sc.N) / double(K) * u.beta * u.kbar();
                break;
            default: throw std::logic_error("analytic_row: bad kind");
        }
        sinr += g;
        lower += log2p1(g);
        upper += log2p1(gu);
        limit += log2p1(energy * u.beta * u.kbar());
    }
    rep.statistical_sinr = sinr / K;
    rep.rate_lower = lower / K;
    rep.rate_upper = upper / K;
    rep.limit_rate = limit / K;
    if (sc.scheme == Scheme::FastFading && sc.pilot) {
        rep.rate_lower *= sc.pilot->overhead();
        rep.rate_upper *= sc.pilot->overhead();
        rep.limit_rate *= sc.pilot->overhead();
    }
    return rep;
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                       std::uint64_t master_seed,
                                       int workers = 1) {
    if (spec.grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (spec.grid[i] <= spec.grid[i - 1])
            throw std::invalid_argument("run_sweep: grid must be strictly increasing");
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size());
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const Scenario sc = detail::apply_axis(spec, spec.grid[i]);
        sc.validate();
        SweepRow row;
        row.axis_value = spec.grid[i];
        row.analytic = detail::analytic_row(sc);
        const auto per_user = estimate_rates(
            sc, spec.trials, derive_seed(master_seed, {0x53eebULL, i}), workers);
        row.mc = average_user_rate(per_user);
        row.mc.master_seed = master_seed;
        rows.push_back(row);
    }
    return rows;
}

// Outer Monte Carlo over random user drops (large-scale fading and
// angles redrawn per drop); rows are averaged across drops and the CI is
// the spread of per-drop means.
inline std::vector<SweepRow> average_over_drops(int drop_count,
                                                const SweepSpec& spec,
                                                const CellGeometry& geometry,
                                                std::uint64_t master_seed,
                                                int workers = 1) {
    if (drop_count < 1) throw std::invalid_argument("average_over_drops: drop_count >= 1");
    std::vector<std::vector<SweepRow>> all;
    all.reserve(drop_count);
    const int max_k = detail::max_user_count(spec);
    for (int dcount = 0; dcount < drop_count; ++dcount) {
        SweepSpec per_drop = spec;
        Rng rng(master_seed, {0xd209ULL, static_cast<std::uint64_t>(dcount)});
        const UserDrop drop = draw_user_drop(max_k, geometry, rng);
        per_drop.base.users.resize(max_k);
        for (int k = 0; k < max_k; ++k) {
            UserParams& u = per_drop.base.users[k];
            u = spec.base.users[std::min<std::size_t>(k, spec.base.users.size() - 1)];
            u.beta = drop.beta[k];
            u.theta = drop.theta[k];
            u.phi = drop.phi[k];
        }
        if (spec.axis != SweepAxis::K && spec.axis != SweepAxis::Alpha &&
            !spec.coupling)
            per_drop.base.users.resize(spec.base.K());
        all.push_back(run_sweep(per_drop,
                                derive_seed(master_seed, {0xd210ULL,
                                            static_cast<std::uint64_t>(dcount)}),
                                workers));
    }
    std::vector<SweepRow> out = all[0];
    for (std::size_t r = 0; r < out.size(); ++r) {
        double mean = 0.0, mean_sq = 0.0;
        SinrReport acc{};
        for (int dcount = 0; dcount < drop_count; ++dcount) {
            const SweepRow& row = all[dcount][r];
            mean += row.mc.mean;
            mean_sq += row.mc.mean * row.mc.mean;
            acc.statistical_sinr += row.analytic.statistical_sinr;
            acc.rate_lower += row.analytic.rate_lower;
            acc.rate_upper += row.analytic.rate_upper;
            acc.limit_rate += row.analytic.limit_rate;
        }
        const double n = double(drop_count);
        out[r].mc.mean = mean / n;
        if (drop_count > 1) {
            const double var =
                std::max(0.0, mean_sq / n - (mean / n) * (mean / n));
            out[r].mc.ci_halfwidth = 1.96 * std::sqrt(var / n);
        }
        out[r].mc.master_seed = master_seed;
        out[r].analytic.statistical_sinr = acc.statistical_sinr / n;
        out[r].analytic.rate_lower = acc.rate_lower / n;
        out[r].analytic.rate_upper = acc.rate_upper / n;
        out[r].analytic.limit_rate = acc.limit_rate / n;
    }
    return out;
}

}  // namespace rmimo
