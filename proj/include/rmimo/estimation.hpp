// Pilot transmission and MMSE estimation of the scattered component of
// the effective channel, plus the fast-fading receive-BF rate baseline.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "rmimo/analytic.hpp"
#include "rmimo/beamforming.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

struct PilotConfig {
    int T = 196;       // coherence interval, symbols (LTE-style default)
    int tau = 1;       // pilot symbols, 0 <= tau < T
    double overhead() const { return double(T - tau) / double(T); }
    void validate() const {
        if (T < 1 || tau < 0 || tau >= T)
            throw std::invalid_argument("PilotConfig: need 0 <= tau < T");
    }
};

// Canonical unit-norm pilot (1, 0, ..., 0)ᵀ; any unit-norm pilot is
// statistically equivalent.
inline VecC canonical_pilot(int tau) {
    if (tau < 1) throw std::invalid_argument("canonical_pilot: tau must be >= 1");
    VecC phi = VecC::Zero(tau);
    phi[0] = 1.0;
    return phi;
}

// Received pilot block Y_p = sqrt(p_p) g phiᵀ + Z_p, Z_p iid CN(0,1).
inline MatC pilot_observe(const VecC& g, const VecC& pilot, double p_p, Rng& rng) {
    if (pilot.size() < 1)
        throw std::invalid_argument("pilot_observe: tau must be >= 1 (use the LOS-only path for tau = 0)");
    if (p_p <= 0.0) throw std::invalid_argument("pilot_observe: pilot power must be positive");
    MatC y = std::sqrt(p_p) * g * pilot.transpose();
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, j) += rng.complex_gaussian();
    return y;
}

struct EstimationReport {
    VecC estimate;                  // g-hat = g-bar + scattered estimate
    VecC scattered_estimate;        // MMSE estimate of the scattered part
    double error_variance = 0.0;    // delta^2_xi = beta ktilde / (1 + p_p beta ktilde)
    double estimate_variance = 0.0; // delta^2_g = beta^2 ktilde^2 p_p / (1 + p_p beta ktilde)
};

inline double mmse_error_variance(double p_p, double beta, double ktilde) {
    const double q = beta * ktilde;
    return q / (1.0 + p_p * q);
}

inline double mmse_estimate_variance(double p_p, double beta, double ktilde) {
    const double q = beta * ktilde;
    return q * q * p_p / (1.0 + p_p * q);
}

inline EstimationReport mmse_estimate_scattered(const MatC& y_p, const VecC& gbar,
                                                const VecC& pilot, double p_p,
                                                double beta, double ktilde) {
    if (y_p.rows() != gbar.size() || y_p.cols() != pilot.size())
        throw std::invalid_argument("mmse_estimate_scattered: dimension mismatch");
    EstimationReport rep;
    const double q = beta * ktilde;
    const double gain = std::sqrt(p_p) * q / (1.0 + p_p * q);
    const MatC centered = y_p - std::sqrt(p_p) * gbar * pilot.transpose();
    rep.scattered_estimate = gain * (centered * pilot.conjugate());
    rep.estimate = gbar + rep.scattered_estimate;
    rep.error_variance = mmse_error_variance(p_p, beta, ktilde);
    rep.estimate_variance = mmse_estimate_variance(p_p, beta, ktilde);
    return rep;
}

// gamma-hat = p_u ||g-hat||^2 / (p_u delta^2_xi + 1).
inline double ff_receive_sinr(const VecC& estimate, double p_u,
                              double error_variance) {
    if (p_u <= 0.0 || error_variance < 0.0)
        throw std::invalid_argument("ff_receive_sinr: inputs must be non-negative");
    return p_u * estimate.squaredNorm() / (p_u * error_variance + 1.0);
}

struct FfRateEstimate {
    double mean = 0.0;          // bits/s/Hz, includes the (T - tau)/T factor
    double ci_halfwidth = 0.0;  // 95% normal approximation
    long trials = 0;
};

// Single-user FF-baseline ergodic rate ((T - tau)/T) E log2(1 + gamma-hat)
// by Monte Carlo. tau = 0 degenerates to the LOS-based scheme (the
// estimate is the specular component itself).
inline FfRateEstimate ff_rate(const RicianLink& link, double p_u,
                              const PilotConfig& pilot, long trials,
                              std::uint64_t master_seed) {
    link.validate();
    pilot.validate();
    if (trials < 1) throw std::invalid_argument("ff_rate: trials must be >= 1");
    const VecC gbar = std::sqrt(double(link.N) * link.beta * link.kbar()) *
                      link.rx_steering().entries;
    const double q = link.beta * link.ktilde();
    const double p_p = double(pilot.tau) * p_u;
    const double dxi = pilot.tau > 0 ? mmse_error_variance(p_p, link.beta, link.ktilde())
                                     : q;  // no pilots: prior variance
    const double gain = pilot.tau > 0 ? std::sqrt(p_p) * q / (1.0 + p_p * q) : 0.0;
    double sum = 0.0, sum_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
        Rng rng(master_seed, {0x0ffbaceULL, static_cast<std::uint64_t>(t)});
        VecC ghat = gbar;
        if (pilot.tau > 0) {
            // Orthogonal pilot reduces the block to one effective
            // observation sqrt(p_p) g-tilde + n per antenna.
            for (Eigen::Index i = 0; i < ghat.size(); ++i) {
                const std::complex<double> gt = std::sqrt(q) * rng.complex_gaussian();
                const std::complex<double> n = rng.complex_gaussian();
                ghat[i] += gain * (std::sqrt(p_p) * gt + n);
            }
        }
        const double rate =
            pilot.overhead() * log2p1(ff_receive_sinr(ghat, p_u, dxi));
        sum += rate;
        sum_sq += rate * rate;
    }
    FfRateEstimate est;
    est.trials = trials;
    est.mean = sum / double(trials);
    const double var =
        std::max(0.0, sum_sq / double(trials) - est.mean * est.mean);
    est.ci_halfwidth = 1.96 * std::sqrt(var / double(trials));
    return est;
}

}  // namespace rmimo
