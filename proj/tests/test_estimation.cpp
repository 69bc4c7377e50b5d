#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rmimo/estimation.hpp"

using namespace rmimo;

TEST(Pilots, ConfigValidation) {
    EXPECT_NO_THROW((PilotConfig{196, 0}.validate()));
    EXPECT_NO_THROW((PilotConfig{196, 195}.validate()));
    EXPECT_THROW((PilotConfig{196, 196}.validate()), std::invalid_argument);
    EXPECT_THROW((PilotConfig{196, -1}.validate()), std::invalid_argument);
    EXPECT_THROW((PilotConfig{0, 0}.validate()), std::invalid_argument);
    EXPECT_NEAR((PilotConfig{196, 1}.overhead()), 195.0 / 196.0, 1e-15);
}

TEST(Pilots, CanonicalPilotIsUnitFirstBasisVector) {
    const VecC phi = canonical_pilot(4);
    ASSERT_EQ(phi.size(), 4);
    EXPECT_EQ(phi[0], std::complex<double>(1.0, 0.0));
    EXPECT_NEAR(phi.norm(), 1.0, 1e-15);
    EXPECT_THROW(canonical_pilot(0), std::invalid_argument);
}

TEST(Pilots, ObservationModel) {
    Rng rng(21);
    const VecC g = VecC::Ones(3) * 2.0;
    const VecC phi = canonical_pilot(2);
    const MatC y = pilot_observe(g, phi, 4.0, rng);
    ASSERT_EQ(y.rows(), 3);
    ASSERT_EQ(y.cols(), 2);
    // column 0 carries sqrt(p_p) g + noise; column 1 is pure noise
    MatC mean0 = MatC::Zero(3, 2);
    Rng rng2(22);
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean0 += pilot_observe(g, phi, 4.0, rng2);
    mean0 /= double(n);
    EXPECT_LT((mean0.col(0) - 2.0 * g).norm(), 0.05);
    EXPECT_LT(mean0.col(1).norm(), 0.05);
}

TEST(MmseVariances, SplitIdentity) {
    // error variance + estimate variance = prior scattered variance
    for (double p_p : {0.1, 1.0, 50.0}) {
        for (double beta : {0.1, 0.5}) {
            const double kt = 0.25;
            EXPECT_NEAR(mmse_error_variance(p_p, beta, kt) +
                            mmse_estimate_variance(p_p, beta, kt),
                        beta * kt, 1e-14);
        }
    }
}

TEST(MmseEstimate, SampleStatisticsMatchFormulas) {
    const int M = 4, tau = 2;
    const double beta = 0.6, kappa = 1.5, p_p = 3.0;
    const double ktilde = ktilde_of(kappa);
    const double q = beta * ktilde;
    RicianLink link{M, 1, beta, kappa, 0.5, 0.0, 0.3, 0.3};
    const VecC gbar =
        std::sqrt(link.beta * link.kbar()) * link.rx_steering().entries;
    const VecC phi = canonical_pilot(tau);
    Rng rng(33);
    double err_var = 0.0, est_var = 0.0;
    std::complex<double> corr = 0.0;
    const long n = 100000;
    for (long i = 0; i < n; ++i) {
        VecC gtilde(M);
        for (int m = 0; m < M; ++m)
            gtilde[m] = std::sqrt(q) * rng.complex_gaussian();
        const VecC g = gbar + gtilde;
        const MatC y = pilot_observe(g, phi, p_p, rng);
        const auto rep = mmse_estimate_scattered(y, gbar, phi, p_p, beta, ktilde);
        const VecC err = g - rep.estimate;
        err_var += err.squaredNorm() / M;
        est_var += rep.scattered_estimate.squaredNorm() / M;
        corr += rep.scattered_estimate.dot(err) / double(M);
        if (i == 0) {
            EXPECT_NEAR(rep.error_variance, mmse_error_variance(p_p, beta, ktilde), 1e-14);
            EXPECT_NEAR(rep.estimate_variance, mmse_estimate_variance(p_p, beta, ktilde), 1e-14);
        }
    }
    err_var /= n;
    est_var /= n;
    EXPECT_NEAR(err_var / mmse_error_variance(p_p, beta, ktilde), 1.0, 0.02);
    EXPECT_NEAR(est_var / mmse_estimate_variance(p_p, beta, ktilde), 1.0, 0.02);
    // estimate orthogonal to error
    EXPECT_LT(std::abs(corr) / (n * std::sqrt(err_var * est_var)), 0.02);
}

TEST(FfRate, NoPilotsDegeneratesToClosedForm) {
    RicianLink link{16, 4, 0.20479, std::pow(10.0, 0.5), 0.7, -0.2, 0.3, 0.3};
    const double p_u = 0.5;
    const auto est = ff_rate(link, p_u, {196, 0}, 100, 99);
    // with tau = 0 the estimate is the specular part: the rate is the
    // deterministic statistical lower bound, no spread
    const double q = link.beta * link.ktilde();
    const double expect =
        std::log2(1.0 + p_u * 16.0 * 4.0 * link.beta * link.kbar() / (p_u * q + 1.0));
    EXPECT_NEAR(est.mean, expect, 1e-12);
    EXPECT_NEAR(est.ci_halfwidth, 0.0, 1e-9);
}

TEST(FfRate, DeterministicAndWithinSandwich) {
    RicianLink link{64, 4, 0.20479, std::pow(10.0, 0.5), 0.7, -0.2, 0.3, 0.3};
    const double p_u = 100.0 / (64.0 * 4.0);
    const auto a = ff_rate(link, p_u, {196, 1}, 4000, 7);
    const auto b = ff_rate(link, p_u, {196, 1}, 4000, 7);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.ci_halfwidth, b.ci_halfwidth);
    // estimated-CSI rate stays below the perfect-alignment upper bound
    const double upper =
        (195.0 / 196.0) * std::log2(1.0 + p_u * 64.0 * 4.0 * link.beta * link.kbar());
    EXPECT_LT(a.mean, upper + 3.0 * a.ci_halfwidth);
    EXPECT_GT(a.mean, 0.0);
}
