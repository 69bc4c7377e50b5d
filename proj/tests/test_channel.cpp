#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rmimo/channel.hpp"

using namespace rmimo;

TEST(Steering, UnitModulusEntriesFirstEntryOne) {
    const auto v = steering_vector(8, 0.3, 0.7);
    EXPECT_EQ(v.count(), 8);
    EXPECT_EQ(v.entries[0], std::complex<double>(1.0, 0.0));
    for (int m = 0; m < 8; ++m) EXPECT_NEAR(std::abs(v.entries[m]), 1.0, 1e-14);
    const double step = 2.0 * std::numbers::pi * 0.3 * std::sin(0.7);
    EXPECT_NEAR(std::arg(v.entries[1]), step, 1e-12);
}

TEST(Steering, RejectsEmptyArray) {
    EXPECT_THROW(steering_vector(0, 0.3, 0.1), std::invalid_argument);
}

TEST(Steering, LosMatrixIsRankOneOuterProduct) {
    const auto r = steering_vector(4, 0.3, 0.5);
    const auto t = steering_vector(3, 0.3, -0.2);
    const MatC h = los_matrix(r, t);
    ASSERT_EQ(h.rows(), 4);
    ASSERT_EQ(h.cols(), 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(std::abs(h(i, j) - r.entries[i] * t.entries[j]), 0.0, 1e-14);
    Eigen::JacobiSVD<MatC> svd(h);
    EXPECT_NEAR(svd.singularValues()(0), std::sqrt(12.0), 1e-12);
    EXPECT_NEAR(svd.singularValues()(1), 0.0, 1e-12);
}

TEST(RicianSplit, FactorsSumToOne) {
    for (double kappa : {0.01, 1.0, 3.1623, 100.0}) {
        EXPECT_NEAR(kbar_of(kappa) + ktilde_of(kappa), 1.0, 1e-15);
        EXPECT_GT(kbar_of(kappa), 0.0);
        EXPECT_GT(ktilde_of(kappa), 0.0);
    }
    EXPECT_NEAR(kbar_of(1.0), 0.5, 1e-15);
}

TEST(RicianChannel, MeanAndPowerMatchModel) {
    RicianLink link{4, 2, 0.7, 2.0, 0.4, -0.3, 0.3, 0.3};
    Rng rng(101);
    MatC mean = MatC::Zero(4, 2);
    double power = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto ch = rician_channel(link, std::nullopt, rng);
        mean += ch.total;
        power += ch.scattered.squaredNorm();
    }
    mean /= double(n);
    const MatC expected_mean =
        std::sqrt(link.beta * link.kbar()) *
        los_matrix(link.rx_steering(), link.tx_steering());
    EXPECT_LT((mean - expected_mean).norm(), 0.05);
    // E||scattered||^2 = beta ktilde M N
    EXPECT_NEAR(power / n, link.beta * link.ktilde() * 8.0, 0.05);
}

TEST(RicianChannel, TotalIsLosPlusScattered) {
    RicianLink link{3, 2, 1.0, 1.0, 0.2, 0.1, 0.3, 0.3};
    Rng rng(3);
    const auto ch = rician_channel(link, std::nullopt, rng);
    EXPECT_NEAR((ch.total - ch.los - ch.scattered).norm(), 0.0, 1e-14);
}

TEST(Correlation, ExponentialToeplitzAndPsd) {
    const MatC s = exponential_correlation(6, 0.6);
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(std::abs(s(i, i) - 1.0), 0.0, 1e-14);
        for (int j = 0; j < 6; ++j)
            EXPECT_NEAR(std::abs(s(i, j) - std::pow(0.6, std::abs(i - j))), 0.0, 1e-14);
    }
    Eigen::SelfAdjointEigenSolver<MatC> eig(s);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Correlation, SqrtSquaresBack) {
    const MatC s = exponential_correlation(5, 0.8);
    const MatC h = correlation_sqrt(s);
    EXPECT_LT((h * h.adjoint() - s).norm(), 1e-10);
}

TEST(Correlation, CorrelatedSamplesHaveRequestedCovariance) {
    CorrelationConfig corr{0.7, 0.0};
    RicianLink link{3, 1, 1.0, 1.0, 0.3, 0.0, 0.3, 0.3};
    Rng rng(55);
    MatC cov = MatC::Zero(3, 3);
    const int n = 40000;
    const double scale = link.beta * link.ktilde();
    for (int i = 0; i < n; ++i) {
        const auto ch = rician_channel(link, corr, rng);
        cov += ch.scattered * ch.scattered.adjoint() / scale;
    }
    cov /= double(n);
    EXPECT_LT((cov - exponential_correlation(3, 0.7)).norm(), 0.05);
}

TEST(Correlation, ValidationRejectsOutOfRange) {
    EXPECT_THROW((CorrelationConfig{1.2, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((CorrelationConfig{-0.1, 0.0}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((CorrelationConfig{0.9, 0.5}.validate()));
    EXPECT_TRUE((CorrelationConfig{0.0, 0.0}.trivial()));
}

TEST(Angles, FixedLayoutFormula) {
    const auto th = fixed_arrival_angles(4);
    ASSERT_EQ(th.size(), 4u);
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(th[k],
                    std::numbers::pi / 2.0 +
                        (2.0 * (k + 1) - 1.0) * std::numbers::pi / 8.0,
                    1e-15);
    // sines are distinct, so the LOS columns are non-degenerate
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            EXPECT_GT(std::abs(std::sin(th[a]) - std::sin(th[b])), 1e-3);
}

TEST(UserDrop, MeanGainMatchesQuadratureOracle) {
    CellGeometry geo;
    Rng rng(2024);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; i += 50) {
        const auto drop = draw_user_drop(50, geo, rng);
        for (double b : drop.beta) sum += b;
    }
    const double sample_mean = sum / n;

    // Independent oracle: E[beta] = E[z] * E[(r/r_h)^-v] with z lognormal
    // (sigma dB) and r uniform on [r_h, r_m]; midpoint quadrature in r.
    const double sln = geo.sigma_db * std::log(10.0) / 10.0;
    const double ez = std::exp(sln * sln / 2.0);
    double er = 0.0;
    const int q = 200000;
    for (int i = 0; i < q; ++i) {
        const double r = geo.r_h + (geo.r_m - geo.r_h) * (i + 0.5) / q;
        er += std::pow(r / geo.r_h, -geo.exponent);
    }
    er /= q;
    EXPECT_NEAR(sample_mean / (ez * er), 1.0, 0.05);
    // reference operating point used throughout the experiments
    EXPECT_NEAR(ez * er / 0.20479, 1.0, 0.10);
}

TEST(UserDrop, AnglesDistinctAndInRange) {
    CellGeometry geo;
    Rng rng(9);
    const auto drop = draw_user_drop(30, geo, rng);
    for (int a = 0; a < 30; ++a) {
        EXPECT_GT(drop.beta[a], 0.0);
        EXPECT_GE(drop.radius[a], geo.r_h);
        EXPECT_LE(drop.radius[a], geo.r_m);
        for (int b = a + 1; b < 30; ++b)
            EXPECT_GT(std::abs(drop.theta[a] - drop.theta[b]), 1e-7);
    }
}
