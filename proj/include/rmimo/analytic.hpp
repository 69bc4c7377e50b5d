// Closed-form statistical SINRs, rate bounds, asymptotic limits, and the
// favorable-propagation gap. Pure numeric functions; all quantities in
// linear units.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "rmimo/channel.hpp"

namespace rmimo {

inline double log2p1(double x) { return std::log2(1.0 + x); }

// One user's parameters as seen by the closed forms.
struct UserParams {
    double beta = 1.0;
    double kappa = 1.0;
    double theta = 0.0;  // arrival angle (rad)
    double phi = 0.0;    // departure angle (rad)
    double kbar() const { return kbar_of(kappa); }
    double ktilde() const { return ktilde_of(kappa); }
};

// Power policy across a sweep: constant per-node power, or constant
// energy E_u = M N p_u (uplink) / E_b = M N p_b / K (downlink).
struct ScalingPolicy {
    enum class Mode { FixedPower, FixedUplinkEnergy, FixedDownlinkEnergy };
    Mode mode = Mode::FixedPower;
    double value = 1.0;  // p (FixedPower) or E_u / E_b, linear

    double resolve_power(int M, int N, int K = 1) const {
        if (value <= 0.0) throw std::invalid_argument("ScalingPolicy: value must be positive");
        switch (mode) {
            case Mode::FixedPower: return value;
            case Mode::FixedUplinkEnergy: return value / (double(M) * double(N));
            case Mode::FixedDownlinkEnergy:
                return value * double(K) / (double(M) * double(N));
        }
        throw std::logic_error("ScalingPolicy: bad mode");
    }
    bool fixed_energy() const { return mode != Mode::FixedPower; }
};

struct SinrReport {
    double statistical_sinr = 0.0;  // gamma-bar
    double rate_lower = 0.0;        // log2(1 + gamma-bar)
    double rate_upper = 0.0;        // log2(1 + zero-scattering bound)
    double limit_rate = 0.0;        // log2(1 + fixed-energy limit)
};

// Proposition-1 form: N M p_u beta kbar / (1 + p_u beta ktilde).
inline double su_statistical_sinr(double p_u, double beta, double kappa,
                                  int M, int N) {
    if (p_u <= 0.0 || beta <= 0.0 || kappa <= 0.0 || M < 1 || N < 1)
        throw std::invalid_argument("su_statistical_sinr: inputs must be positive");
    return double(N) * double(M) * p_u * beta * kbar_of(kappa) /
           (1.0 + p_u * beta * ktilde_of(kappa));
}

inline SinrReport su_rate_bounds(double p_u, double beta, double kappa,
                                 int M, int N, const ScalingPolicy& scaling) {
    SinrReport rep;
    rep.statistical_sinr = su_statistical_sinr(p_u, beta, kappa, M, N);
    rep.rate_lower = log2p1(rep.statistical_sinr);
    rep.rate_upper = log2p1(p_u * beta * kbar_of(kappa) * double(M) * double(N));
    const double e_u = scaling.mode == ScalingPolicy::Mode::FixedPower
                           ? p_u * double(M) * double(N)
                           : scaling.value;
    rep.limit_rate = log2p1(e_u * beta * kbar_of(kappa));
    return rep;
}

struct RhoResult {
    std::complex<double> value;
    bool degenerate = false;  // angles coincide; continuous limit M returned
};

// Dirichlet-kernel inner product of two BS steering vectors:
// rho = (1 - e^{jM phi}) / (1 - e^{j phi}), phi = 2 pi d (sin th_i - sin th_k).
inline RhoResult rho_interference(double theta_i, double theta_k, double d, int M) {
    const double phase =
        2.0 * std::numbers::pi * d * (std::sin(theta_i) - std::sin(theta_k));
    const std::complex<double> den = 1.0 - std::polar(1.0, phase);
    if (std::abs(den) < 1e-12) return {std::complex<double>(double(M), 0.0), true};
    const std::complex<double> num = 1.0 - std::polar(1.0, double(M) * phase);
    return {num / den, false};
}

// Proposition-3 (MRC) multi-user uplink statistical SINR for user k.
inline double ul_mrc_statistical_sinr(int k, std::span<const UserParams> users,
                                      double p_u, int M, int N, double d) {
    const int K = static_cast<int>(users.size());
    if (k < 0 || k >= K) throw std::invalid_argument("ul_mrc_statistical_sinr: bad user index");
    const auto& u = users[k];
    double los_interference = 0.0;
    double scatter = 0.0;
    for (int i = 0; i < K; ++i) {
        scatter += users[i].ktilde() * users[i].beta;
        if (i == k) continue;
        const auto rho = rho_interference(users[i].theta, u.theta, d, M);
        los_interference += users[i].beta * users[i].kbar() * std::norm(rho.value);
    }
    const double num = p_u * double(M) * double(N) * u.beta * u.kbar();
    const double den =
        1.0 + p_u * double(N) / double(M) * los_interference + p_u * scatter;
    return num / den;
}

// Large-K approximation with ensemble means (beta-bar, kbar-bar,
// ktilde-bar) and the mean squared interference kernel |rho_k|^2.
inline double ul_large_k_approx(double beta_k, double kappa_k, double mean_beta,
                                double mean_kbar, double mean_ktilde,
                                double mean_rho_sq, int K, double p_u, int M,
                                int N) {
    if (K < 1) throw std::invalid_argument("ul_large_k_approx: K must be >= 1");
    const double num = p_u * double(M) * double(N) * beta_k * kbar_of(kappa_k);
    const double den = 1.0 +
                       p_u * double(N) / double(M) * double(K - 1) * mean_beta *
                           mean_kbar * mean_rho_sq +
                       p_u * double(K) * mean_ktilde * mean_beta;
    return num / den;
}

enum class UlLimitKind { Baseline, FixedLoad, GrowingLoad };
enum class DlLimitKind { Baseline, FixedLoad, GrowingLoad };

struct LimitParams {
    double energy = 1.0;       // E_u or E_b, linear
    double beta_k = 1.0;
    double kappa_k = 1.0;
    // FixedLoad / FixedLoad (N -> infinity at finite M):
    std::vector<UserParams> users;  // full user set, for c(K)
    int k = 0;
    int M = 1;
    double d = 0.3;
    // GrowingLoad / GrowingLoad (K ~ iota M^alpha):
    double alpha = 1.0;
    double iota = 1.0;
    int N = 1;
    double mean_beta = 1.0;    // ensemble means for the scattered load term
    double mean_ktilde = 0.5;
};

namespace detail {
inline double cross_kernel_sum(const LimitParams& p, bool weight_by_user_k) {
    double c = 0.0;
    for (int i = 0; i < static_cast<int>(p.users.size()); ++i) {
        if (i == p.k) continue;
        const auto rho =
            rho_interference(p.users[i].theta, p.users[p.k].theta, p.d, p.M);
        const double w = weight_by_user_k
                             ? p.beta_k * kbar_of(p.kappa_k)
                             : p.users[i].beta * p.users[i].kbar();
        c += w * std::norm(rho.value);
    }
    return c;
}
}  // namespace detail

inline double ul_limits(UlLimitKind kind, const LimitParams& p) {
    const double base = p.energy * p.beta_k * kbar_of(p.kappa_k);
    switch (kind) {
        case UlLimitKind::Baseline:
            return base;
        case UlLimitKind::FixedLoad:
            return base / (1.0 + p.energy * detail::cross_kernel_sum(p, false) /
                                     (double(p.M) * double(p.M)));
        case UlLimitKind::GrowingLoad: {
            if (p.alpha <= 0.0 || p.alpha > 1.0)
                throw std::invalid_argument("ul_limits: alpha must lie in (0,1]");
            if (p.alpha < 1.0) return base;
            return base / (1.0 + p.energy * p.iota * p.mean_ktilde * p.mean_beta /
                                     double(p.N));
        }
    }
    throw std::logic_error("ul_limits: bad kind");
}

inline double dl_limits(DlLimitKind kind, const LimitParams& p) {
    const double base = p.energy * p.beta_k * kbar_of(p.kappa_k);
    switch (kind) {
        case DlLimitKind::Baseline:
            return base;
        case DlLimitKind::FixedLoad:
            return base / (1.0 + p.energy * detail::cross_kernel_sum(p, true) /
                                     (double(p.M) * double(p.M)));
        case DlLimitKind::GrowingLoad: {
            if (p.alpha <= 0.0 || p.alpha > 1.0)
                throw std::invalid_argument("dl_limits: alpha must lie in (0,1]");
            if (p.alpha < 1.0) return base;
            return base / (1.0 + p.energy * p.iota * ktilde_of(p.kappa_k) *
                                     p.beta_k / double(p.N));
        }
    }
    throw std::logic_error("dl_limits: bad kind");
}

// Proposition-5 downlink statistical SINR for user k under the conjugate
// precoder with total BS power p_b split across K users.
inline double dl_statistical_sinr(int k, std::span<const UserParams> users,
                                  double p_b, int M, int N, double d) {
    const int K = static_cast<int>(users.size());
    if (k < 0 || k >= K) throw std::invalid_argument("dl_statistical_sinr: bad user index");
    const auto& u = users[k];
    double rho_sum = 0.0;
    for (int i = 0; i < K; ++i) {
        if (i == k) continue;
        rho_sum += std::norm(rho_interference(users[i].theta, u.theta, d, M).value);
    }
    const double num =
        p_b * double(M) * double(N) / double(K) * u.beta * u.kbar();
    const double den = 1.0 +
                       p_b * double(N) / (double(K) * double(M)) * u.beta *
                           u.kbar() * rho_sum +
                       p_b * u.ktilde() * u.beta;
    return num / den;
}

// Pilot-overhead-scaled limit rate ((T - tau)/T) log2(1 + limit_sinr).
inline double ff_limit_rate(double limit_sinr, int T, int tau) {
    if (tau < 0 || tau >= T) throw std::invalid_argument("ff_limit_rate: need 0 <= tau < T");
    return (double(T - tau) / double(T)) * log2p1(limit_sinr);
}

// max_{i != k} |rho_ki| / M — the off-diagonal residue of the normalized
// LOS Gram matrix; tends to 0 as the array grows (favorable propagation).
inline double favorable_propagation_gap(const MatC& los_channel,
                                        std::span<const double> beta_kbar) {
    const auto M = los_channel.rows();
    const auto K = los_channel.cols();
    if (static_cast<Eigen::Index>(beta_kbar.size()) != K)
        throw std::invalid_argument("favorable_propagation_gap: need beta*kbar per user");
    const double n_scale =
        K > 0 ? los_channel.col(0).squaredNorm() / (double(M) * beta_kbar[0]) : 1.0;
    double gap = 0.0;
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < K; ++j) {
            if (i == j) continue;
            const double entry =
                std::abs(los_channel.col(i).dot(los_channel.col(j))) /
                (double(M) * n_scale * std::sqrt(beta_kbar[i] * beta_kbar[j]));
            gap = std::max(gap, entry);
        }
    return gap;
}

}  // namespace rmimo
