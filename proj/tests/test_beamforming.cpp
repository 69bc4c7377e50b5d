#include <gtest/gtest.h>

#include <cmath>

#include "rmimo/beamforming.hpp"
#include "rmimo/channel.hpp"

using namespace rmimo;

TEST(Beamformers, LosAlignmentIsExact) {
    // rxᴴ (r tᵀ) tx = sqrt(M N): the identity the rate algebra rests on
    for (int m : {1, 4, 16}) {
        for (int n : {1, 3}) {
            RicianLink link{m, n, 1.0, 1.0, 0.7, -0.4, 0.3, 0.3};
            const auto bf = los_beamformers(link);
            EXPECT_NEAR(bf.tx.norm(), 1.0, 1e-13);
            EXPECT_NEAR(bf.rx.norm(), 1.0, 1e-13);
            const MatC h = los_matrix(link.rx_steering(), link.tx_steering());
            const std::complex<double> gain = bf.rx.dot(h * bf.tx);
            EXPECT_NEAR(gain.real(), std::sqrt(double(m * n)), 1e-11);
            EXPECT_NEAR(gain.imag(), 0.0, 1e-11);
        }
    }
}

TEST(Beamformers, EffectiveUplinkColumns) {
    Rng rng(31);
    std::vector<ChannelRealization> chans;
    std::vector<VecC> bfs;
    std::vector<RicianLink> links = {
        {5, 2, 0.8, 2.0, 0.3, 0.1, 0.3, 0.3},
        {5, 3, 1.4, 0.5, -0.6, 0.9, 0.3, 0.3},
    };
    for (const auto& link : links) {
        chans.push_back(rician_channel(link, std::nullopt, rng));
        bfs.push_back(los_beamformers(link).tx);
    }
    const auto up = effective_uplink_channel(chans, bfs);
    for (int k = 0; k < 2; ++k) {
        EXPECT_LT((up.effective.col(k) - chans[k].total * bfs[k]).norm(), 1e-13);
        // LOS column collapses to sqrt(N beta kbar) r_k
        const VecC expect = std::sqrt(double(links[k].N) * links[k].beta *
                                      links[k].kbar()) *
                            links[k].rx_steering().entries;
        EXPECT_LT((up.los.col(k) - expect).norm(), 1e-11);
    }
}

namespace {
MatC make_los(int M, const std::vector<double>& thetas) {
    MatC g(M, thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k)
        g.col(k) = steering_vector(M, 0.3, thetas[k]).entries;
    return g;
}
}  // namespace

TEST(Detectors, MrcIsTheLosChannelItself) {
    const MatC g = make_los(6, {0.2, 0.9, -0.5});
    const auto det = detector_matrix(g, DetectorKind::MRC, 1.0, {});
    EXPECT_LT((det.columns - g).norm(), 1e-15);
}

TEST(Detectors, ZfInvertsTheGram) {
    const MatC g = make_los(8, {0.2, 0.9, -0.5});
    const auto det = detector_matrix(g, DetectorKind::ZF, 1.0, {});
    const MatC prod = det.columns.adjoint() * g;
    EXPECT_LT((prod - MatC::Identity(3, 3)).norm(), 1e-9);
}

TEST(Detectors, MmseMatchesClosedForm) {
    const MatC g = make_los(8, {0.2, 0.9, -0.5});
    const std::vector<double> scatter = {0.3, 0.1, 0.2};
    const double p_u = 2.5;
    const auto det = detector_matrix(g, DetectorKind::MMSE, p_u, scatter);
    const double reg = 0.3 + 0.1 + 0.2 + 1.0 / p_u;
    const MatC expect =
        g * (g.adjoint() * g + reg * MatC::Identity(3, 3)).inverse();
    EXPECT_LT((det.columns - expect).norm(), 1e-11);
}

TEST(Detectors, ZfNamesCollidingUsers) {
    const MatC g = make_los(8, {0.4, 0.4 + 1e-9, 1.2});
    try {
        detector_matrix(g, DetectorKind::ZF, 1.0, {});
        FAIL() << "expected SingularDetectorError";
    } catch (const SingularDetectorError& e) {
        EXPECT_EQ(e.user_a, 0);
        EXPECT_EQ(e.user_b, 1);
    }
}

TEST(Detectors, ZfMmseRejectOverloadedCell) {
    const MatC g = make_los(2, {0.1, 0.5, 0.9});
    EXPECT_THROW(detector_matrix(g, DetectorKind::ZF, 1.0, {}),
                 std::invalid_argument);
}

TEST(Downlink, PrecodeCombineRecoversLosGain) {
    // LOS-only channel: user k sees sqrt(N M / K) kappa-weighted symbol
    const int M = 16, N = 4, K = 2;
    std::vector<SteeringVector> r = {steering_vector(M, 0.3, 0.3),
                                     steering_vector(M, 0.3, -0.8)};
    std::vector<std::complex<double>> s = {{1.0, 0.0}, {0.0, 0.0}};
    const VecC x = downlink_precode(s, r, M, K);
    // propagate through user 0's pure LOS channel Hᵀ = (r tᵀ)ᵀ = t rᵀ
    const SteeringVector t = steering_vector(N, 0.3, 0.25);
    const VecC y = t.entries * (r[0].entries.transpose() * x);
    const std::complex<double> v = downlink_combine(y, t);
    EXPECT_NEAR(v.real(), std::sqrt(double(N) * double(M) / double(K)), 1e-10);
    EXPECT_NEAR(v.imag(), 0.0, 1e-10);
}

TEST(Downlink, PrecodePowerIsNormalized) {
    // E||x||^2 = 1/K sum ||conj(r_k)||^2 / M = 1 for unit symbols
    const int M = 12, K = 3;
    std::vector<SteeringVector> r = {steering_vector(M, 0.3, 0.1),
                                     steering_vector(M, 0.3, 0.6),
                                     steering_vector(M, 0.3, -0.4)};
    Rng rng(77);
    double power = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        std::vector<std::complex<double>> s(K);
        for (auto& v : s) v = rng.complex_gaussian();
        power += downlink_precode(s, r, M, K).squaredNorm();
    }
    EXPECT_NEAR(power / n, 1.0, 0.03);
}
