#pragma once

// Momentum-space initial states: minimum-uncertainty Gaussian packets and
// normalized two-packet superpositions alpha*(beta*|psi1> + |psi2>).

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "arrival/constants.hpp"
#include "arrival/quadrature.hpp"

namespace arrival {

struct GaussianPacket {
    double p_center = 0.0;  // average momentum, > 0
    double dp = 0.0;        // momentum spread
    double x0 = 0.0;        // centroid position

    GaussianPacket(double p_center_, double dp_, double x0_)
        : p_center(p_center_), dp(dp_), x0(x0_) {
        if (!(dp > 0.0)) throw std::invalid_argument("GaussianPacket: dp must be > 0");
        if (!(p_center > 0.0)) throw std::invalid_argument("GaussianPacket: p_center must be > 0");
    }

    double spatial_spread() const { return kAtomicUnits.hbar / (2.0 * dp); }
};

inline std::complex<double> gaussian_momentum_amplitude(const GaussianPacket& g, double p) {
    const double u = (p - g.p_center) / (2.0 * g.dp);
    const double mod = std::pow(2.0 * kPi * g.dp * g.dp, -0.25) * std::exp(-u * u);
    return std::polar(mod, -p * g.x0 / kAtomicUnits.hbar);
}

// Overlap <psi1|psi2> of two equal-width packets sharing a centroid. Real and
// positive; the x0 phases cancel exactly.
inline double gaussian_overlap(double p1, double p2, double dp) {
    if (!(dp > 0.0)) throw std::invalid_argument("gaussian_overlap: dp must be > 0");
    const double q = (p1 - p2) / dp;
    return std::exp(-q * q / 8.0);
}

inline double normalization_alpha(double beta, double overlap) {
    if (!(overlap >= 0.0) || !(overlap <= 1.0))
        throw std::invalid_argument("normalization_alpha: overlap outside [0,1]");
    const double norm2 = beta * beta + 2.0 * beta * overlap + 1.0;
    if (!(norm2 > 0.0))
        throw std::invalid_argument("normalization_alpha: degenerate norm, unphysical state");
    return 1.0 / std::sqrt(norm2);
}

struct SuperpositionState {
    double beta = 0.0;
    GaussianPacket packet1;  // average momentum p1
    GaussianPacket packet2;  // average momentum p2 >= p1
    double alpha = 0.0;      // cached normalization

    SuperpositionState(double beta_, GaussianPacket p1, GaussianPacket p2)
        : beta(beta_), packet1(p1), packet2(p2) {
        if (packet1.dp != packet2.dp)
            throw std::invalid_argument("SuperpositionState: packets must share dp");
        if (packet1.x0 != packet2.x0)
            throw std::invalid_argument("SuperpositionState: packets must share x0");
        if (!(packet2.p_center >= packet1.p_center))
            throw std::invalid_argument("SuperpositionState: requires p2 >= p1");
        alpha = normalization_alpha(
            beta, gaussian_overlap(packet1.p_center, packet2.p_center, packet1.dp));
    }
};

inline std::complex<double> superposition_amplitude(const SuperpositionState& s, double p) {
    return s.alpha * (s.beta * gaussian_momentum_amplitude(s.packet1, p) +
                      gaussian_momentum_amplitude(s.packet2, p));
}

using StateSpec = std::variant<GaussianPacket, SuperpositionState>;

inline std::complex<double> momentum_amplitude(const StateSpec& state, double p) {
    return std::visit(
        [p](const auto& s) -> std::complex<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianPacket>)
                return gaussian_momentum_amplitude(s, p);
            else
                return superposition_amplitude(s, p);
        },
        state);
}

inline std::vector<Support> momentum_supports(const StateSpec& state) {
    if (const auto* g = std::get_if<GaussianPacket>(&state))
        return {{g->p_center, g->dp}};
    const auto& s = std::get<SuperpositionState>(state);
    return {{s.packet1.p_center, s.packet1.dp}, {s.packet2.p_center, s.packet2.dp}};
}

inline double centroid_x0(const StateSpec& state) {
    if (const auto* g = std::get_if<GaussianPacket>(&state)) return g->x0;
    return std::get<SuperpositionState>(state).packet1.x0;
}

inline double momentum_spread(const StateSpec& state) {
    if (const auto* g = std::get_if<GaussianPacket>(&state)) return g->dp;
    return std::get<SuperpositionState>(state).packet1.dp;
}

// Weight of the p < 0 tail of a unit Gaussian momentum density.
inline double negative_momentum_weight(double p_center, double dp) {
    if (!(dp > 0.0)) throw std::invalid_argument("negative_momentum_weight: dp must be > 0");
    return 0.5 * std::erfc(p_center / (std::sqrt(2.0) * dp));
}

inline double negative_momentum_weight(const StateSpec& state) {
    if (const auto* g = std::get_if<GaussianPacket>(&state))
        return negative_momentum_weight(g->p_center, g->dp);
    const auto& s = std::get<SuperpositionState>(state);
    const double p1 = s.packet1.p_center;
    const double p2 = s.packet2.p_center;
    const double dp = s.packet1.dp;
    const double ov = gaussian_overlap(p1, p2, dp);
    const double a2 = s.alpha * s.alpha;
    // |psi|^2 = a^2 (b^2 G1 + G2 + 2 b ov Gm) with Gm centered at (p1+p2)/2
    return a2 * (s.beta * s.beta * negative_momentum_weight(p1, dp) +
                 negative_momentum_weight(p2, dp) +
                 2.0 * s.beta * ov * negative_momentum_weight(0.5 * (p1 + p2), dp));
}

inline constexpr double kNegativeWeightThreshold = 1e-6;

// Construction-time advisory check. The positive-momentum assumption is a
// physical requirement, not an interface contract, so violations warn rather
// than fail.
inline std::optional<std::string> state_warning(const StateSpec& state,
                                                double threshold = kNegativeWeightThreshold) {
    const double w = negative_momentum_weight(state);
    if (w > threshold) {
        return "state has negative-momentum weight " + std::to_string(w) +
               " above threshold " + std::to_string(threshold);
    }
    return std::nullopt;
}

}  // namespace arrival
