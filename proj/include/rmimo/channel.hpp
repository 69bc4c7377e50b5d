// Rician channel construction: steering vectors, rank-1 LOS matrices,
// scattered-component sampling (optionally spatially correlated), and
// randomized user drops with large-scale fading.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rmimo/rng.hpp"

namespace rmimo {

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

inline double kbar_of(double kappa) { return kappa / (1.0 + kappa); }
inline double ktilde_of(double kappa) { return 1.0 / (1.0 + kappa); }

// Uniform-linear-array response. entry m = exp(j 2π m d sin(angle)).
struct SteeringVector {
    VecC entries;
    double spacing = 0.0;  // wavelengths
    double angle = 0.0;    // radians
    int count() const { return static_cast<int>(entries.size()); }
};

inline SteeringVector steering_vector(int count, double spacing, double angle) {
    if (count < 1) throw std::invalid_argument("steering_vector: count must be >= 1");
    SteeringVector v;
    v.spacing = spacing;
    v.angle = angle;
    v.entries.resize(count);
    const double step = 2.0 * std::numbers::pi * spacing * std::sin(angle);
    for (int m = 0; m < count; ++m)
        v.entries[m] = std::polar(1.0, step * static_cast<double>(m));
    v.entries[0] = {1.0, 0.0};
    return v;
}

// r tᵀ — plain outer product, no conjugation. Rank 1 by construction.
inline MatC los_matrix(const SteeringVector& r, const SteeringVector& t) {
    return r.entries * t.entries.transpose();
}

// One transmitter-receiver link. kappa is the linear Rician K-factor;
// the split kbar + ktilde = 1 holds identically.
struct RicianLink {
    int M = 1;            // receive antennas
    int N = 1;            // transmit antennas
    double beta = 1.0;    // large-scale gain, linear
    double kappa = 1.0;   // Rician K-factor, linear, > 0
    double theta = 0.0;   // arrival angle (rad)
    double phi = 0.0;     // departure angle (rad)
    double d_r = 0.3;     // receive spacing (wavelengths)
    double d_t = 0.3;     // transmit spacing (wavelengths)

    double kbar() const { return kbar_of(kappa); }
    double ktilde() const { return ktilde_of(kappa); }
    SteeringVector rx_steering() const { return steering_vector(M, d_r, theta); }
    SteeringVector tx_steering() const { return steering_vector(N, d_t, phi); }

    void validate() const {
        if (M < 1 || N < 1) throw std::invalid_argument("RicianLink: antenna counts must be >= 1");
        if (beta <= 0.0) throw std::invalid_argument("RicianLink: beta must be positive");
        if (kappa <= 0.0) throw std::invalid_argument("RicianLink: kappa must be positive");
        if (d_r <= 0.0 || d_t <= 0.0) throw std::invalid_argument("RicianLink: spacings must be positive");
    }
};

struct ChannelRealization {
    MatC los;        // sqrt(beta*kbar) r tᵀ
    MatC scattered;  // sqrt(beta*ktilde) scattered sample
    MatC total;      // los + scattered
};

// Exponential correlation pair (BS side g_b, user side g_u).
struct CorrelationConfig {
    double g_b = 0.0;
    double g_u = 0.0;
    void validate() const {
        if (g_b < 0.0 || g_b > 1.0 || g_u < 0.0 || g_u > 1.0)
            throw std::invalid_argument("CorrelationConfig: coefficients must lie in [0,1]");
    }
    bool trivial() const { return g_b == 0.0 && g_u == 0.0; }
};

// Entry (i,j) = g^|i-j|. Unit diagonal, hence trace == size.
inline MatC exponential_correlation(int size, double g) {
    if (g < 0.0 || g > 1.0) throw std::invalid_argument("exponential_correlation: g must lie in [0,1]");
    if (size < 1) throw std::invalid_argument("exponential_correlation: size must be >= 1");
    MatC s(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            s(i, j) = std::pow(g, std::abs(i - j));
    return s;
}

// Hermitian PSD square root via eigendecomposition. Eigenvalues in
// [-1e-8, 0) are clamped to zero; anything lower is rejected.
inline MatC correlation_sqrt(const MatC& sigma) {
    if (sigma.rows() != sigma.cols())
        throw std::invalid_argument("correlation_sqrt: matrix must be square");
    Eigen::SelfAdjointEigenSolver<MatC> es(sigma);
    if (es.info() != Eigen::Success)
        throw std::invalid_argument("correlation_sqrt: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -1e-8)
            throw std::invalid_argument("correlation_sqrt: matrix is not PSD");
        if (ev[i] < 0.0) ev[i] = 0.0;
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           es.eigenvectors().adjoint();
}

// i.i.d. CN(0,1) entries, column-major fill order (fixed so a given seed
// always yields the same matrix).
inline MatC sample_scattered(int rows, int cols, Rng& rng) {
    MatC h(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) h(i, j) = rng.complex_gaussian();
    return h;
}

inline ChannelRealization rician_channel(const RicianLink& link,
                                         const std::optional<CorrelationConfig>& corr,
                                         Rng& rng) {
    link.validate();
    ChannelRealization out;
    const SteeringVector r = link.rx_steering();
    const SteeringVector t = link.tx_steering();
    out.los = std::sqrt(link.beta * link.kbar()) * los_matrix(r, t);
    MatC h = sample_scattered(link.M, link.N, rng);
    if (corr && !corr->trivial()) {
        corr->validate();
        const MatC sb = correlation_sqrt(exponential_correlation(link.M, corr->g_b));
        const MatC su = correlation_sqrt(exponential_correlation(link.N, corr->g_u));
        h = sb * h * su;
    }
    out.scattered = std::sqrt(link.beta * link.ktilde()) * h;
    out.total = out.los + out.scattered;
    return out;
}

// Cell geometry for randomized user drops. Distance-uniform placement
// reproduces the reference mean large-scale gain; area-uniform is the
// literal uniform-over-annulus reading.
struct CellGeometry {
    enum class Placement { DistanceUniform, AreaUniform };
    double r_h = 100.0;    // meters
    double r_m = 1000.0;   // meters
    double exponent = 3.8; // path-loss exponent v
    double sigma_db = 8.0; // shadowing std in dB
    Placement placement = Placement::DistanceUniform;
};

struct UserDrop {
    std::vector<double> beta;    // z / (r/r_h)^v
    std::vector<double> theta;   // arrival angles, pairwise distinct
    std::vector<double> phi;     // departure angles
    std::vector<double> radius;  // meters
    std::vector<double> shadow;  // linear log-normal samples
};

// Deterministic angle layout used by the multi-user figures:
// theta_k = pi/2 + (2k-1)pi/(2K), whose sines are Chebyshev nodes.
inline std::vector<double> fixed_arrival_angles(int K) {
    std::vector<double> th(K);
    for (int k = 0; k < K; ++k)
        th[k] = std::numbers::pi / 2.0 +
                (2.0 * (k + 1) - 1.0) * std::numbers::pi / (2.0 * K);
    return th;
}

inline UserDrop draw_user_drop(int K, const CellGeometry& geo, Rng& rng) {
    if (K < 1) throw std::invalid_argument("draw_user_drop: K must be >= 1");
    UserDrop drop;
    drop.beta.resize(K);
    drop.theta.resize(K);
    drop.phi.resize(K);
    drop.radius.resize(K);
    drop.shadow.resize(K);
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    for (int k = 0; k < K; ++k) {
        double r;
        if (geo.placement == CellGeometry::Placement::DistanceUniform) {
            r = geo.r_h + (geo.r_m - geo.r_h) * rng.uniform();
        } else {
            const double a2 = geo.r_h * geo.r_h, b2 = geo.r_m * geo.r_m;
            r = std::sqrt(a2 + (b2 - a2) * rng.uniform());
        }
        const double z = std::pow(10.0, geo.sigma_db * rng.gaussian() / 10.0);
        drop.radius[k] = r;
        drop.shadow[k] = z;
        drop.beta[k] = z / std::pow(r / geo.r_h, geo.exponent);
        drop.phi[k] = -kHalfPi + std::numbers::pi * rng.uniform();
        // Resample on collision; the analytic formulas require distinct
        // arrival angles.
        for (;;) {
            const double th = -kHalfPi + std::numbers::pi * rng.uniform();
            bool clash = false;
            for (int i = 0; i < k; ++i)
                if (std::abs(th - drop.theta[i]) < 1e-6) { clash = true; break; }
            if (!clash) { drop.theta[k] = th; break; }
        }
    }
    return drop;
}

}  // namespace rmimo
