// LOS-based transmit/receive beamformers, the conjugate downlink
// precoder, and the MRC/ZF/MMSE uplink detector matrices. Everything
// here depends only on the specular (LOS) channel knowledge.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rmimo/channel.hpp"

namespace rmimo {

struct BeamformerPair {
    VecC tx;  // length N, unit norm
    VecC rx;  // length M, unit norm
};

// tx = conj(t)/sqrt(N), rx = r/sqrt(M). The conjugation makes
// rxᴴ (r tᵀ) tx = sqrt(M N) hold exactly, which is the identity the
// statistical-SINR algebra rests on.
inline BeamformerPair los_beamformers(const RicianLink& link) {
    link.validate();
    BeamformerPair bf;
    bf.tx = link.tx_steering().entries.conjugate() / std::sqrt(double(link.N));
    bf.rx = link.rx_steering().entries / std::sqrt(double(link.M));
    return bf;
}

struct UplinkChannels {
    MatC effective;  // column k = G_k b_k
    MatC los;        // column k = sqrt(N beta_k kbar_k) r_k
};

inline UplinkChannels effective_uplink_channel(
    std::span<const ChannelRealization> channels,
    std::span<const VecC> beamformers) {
    if (channels.empty() || channels.size() != beamformers.size())
        throw std::invalid_argument("effective_uplink_channel: need one beamformer per channel");
    const auto M = channels[0].total.rows();
    const auto K = static_cast<Eigen::Index>(channels.size());
    UplinkChannels out;
    out.effective.resize(M, K);
    out.los.resize(M, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto& ch = channels[k];
        const auto& b = beamformers[k];
        if (ch.total.rows() != M || ch.total.cols() != b.size())
            throw std::invalid_argument("effective_uplink_channel: dimension mismatch");
        out.effective.col(k) = ch.total * b;
        out.los.col(k) = ch.los * b;
    }
    return out;
}

enum class DetectorKind { MRC, ZF, MMSE };

struct DetectorMatrix {
    MatC columns;  // M x K, column k = lambda_k
    DetectorKind kind = DetectorKind::MRC;
};

class SingularDetectorError : public std::runtime_error {
  public:
    SingularDetectorError(const std::string& what, int user_a, int user_b)
        : std::runtime_error(what), user_a(user_a), user_b(user_b) {}
    int user_a;
    int user_b;
};

namespace detail {
// Most collinear column pair of the LOS channel, for singularity
// diagnostics.
inline std::pair<int, int> most_collinear_pair(const MatC& gbar) {
    const int K = static_cast<int>(gbar.cols());
    double best = -1.0;
    std::pair<int, int> pair{0, std::min(1, K - 1)};
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            const double c = std::abs(gbar.col(i).dot(gbar.col(j))) /
                             (gbar.col(i).norm() * gbar.col(j).norm());
            if (c > best) { best = c; pair = {i, j}; }
        }
    return pair;
}
}  // namespace detail

// MRC: Gbar. ZF: Gbar (GbarᴴGbar)⁻¹.
// MMSE: Gbar (GbarᴴGbar + (Σ_k beta_k ktilde_k + 1/p_u) I)⁻¹.
inline DetectorMatrix detector_matrix(const MatC& los_channel, DetectorKind kind,
                                      double p_u,
                                      std::span<const double> scatter_terms) {
    const auto M = los_channel.rows();
    const auto K = los_channel.cols();
    if (K < 1) throw std::invalid_argument("detector_matrix: need at least one user");
    DetectorMatrix det;
    det.kind = kind;
    if (kind == DetectorKind::MRC) {
        det.columns = los_channel;
        return det;
    }
    if (K > M) throw std::invalid_argument("detector_matrix: ZF/MMSE require K <= M");
    const MatC gram = los_channel.adjoint() * los_channel;
    if (kind == DetectorKind::ZF) {
        Eigen::JacobiSVD<MatC> svd(gram);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e10) {
            auto [a, b] = detail::most_collinear_pair(los_channel);
            std::ostringstream msg;
            msg << "detector_matrix: ZF Gram matrix is numerically singular; "
                   "users " << a << " and " << b << " have near-identical arrival angles";
            throw SingularDetectorError(msg.str(), a, b);
        }
        det.columns = los_channel * gram.inverse();
        return det;
    }
    if (p_u <= 0.0) throw std::invalid_argument("detector_matrix: MMSE requires p_u > 0");
    if (static_cast<Eigen::Index>(scatter_terms.size()) != K)
        throw std::invalid_argument("detector_matrix: MMSE needs one beta*ktilde per user");
    double reg = 1.0 / p_u;
    for (double s : scatter_terms) reg += s;
    det.columns = los_channel *
                  (gram + reg * MatC::Identity(K, K)).inverse();
    return det;
}

// X = Σ_k conj(r_k) s_k / sqrt(K M).
inline VecC downlink_precode(std::span<const std::complex<double>> symbols,
                             std::span<const SteeringVector> bs_steering,
                             int M, int K) {
    if (K < 1 || static_cast<int>(symbols.size()) != K ||
        static_cast<int>(bs_steering.size()) != K)
        throw std::invalid_argument("downlink_precode: need K symbols and K steering vectors");
    VecC x = VecC::Zero(M);
    const double scale = 1.0 / std::sqrt(double(K) * double(M));
    for (int k = 0; k < K; ++k) {
        if (bs_steering[k].count() != M)
            throw std::invalid_argument("downlink_precode: steering length mismatch");
        x += bs_steering[k].entries.conjugate() * (symbols[k] * scale);
    }
    return x;
}

// v_k = t_kᴴ y / sqrt(N).
inline std::complex<double> downlink_combine(const VecC& received,
                                             const SteeringVector& t_k) {
    if (received.size() != t_k.count())
        throw std::invalid_argument("downlink_combine: length mismatch");
    return t_k.entries.dot(received) / std::sqrt(double(t_k.count()));
}

}  // namespace rmimo
