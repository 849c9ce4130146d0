#pragma once

// Closed forms and the second-order machinery for the free Gaussian packet:
// the exact current, the (delta, lambda) parameters of the Gaussian integral
// behind I[1], the Lambda coefficients of the (dp/p0)^2 expansion of <J+>,
// the parabola form of the relative difference, the validity window of that
// expansion, and the leading interference current of a macroscopic
// two-packet superposition.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "arrival/constants.hpp"
#include "arrival/states.hpp"

namespace arrival {

struct DeltaLambda {
    std::complex<double> delta;   // 1/(4 dp^2) + i t / (2 m hbar); Re > 0 always
    std::complex<double> lambda;  // (p0 + 2i dp^2 (X-x0)/hbar) / (1 + 2i dp^2 t / m hbar)
};

inline DeltaLambda delta_lambda(const GaussianPacket& g, double X, double t) {
    const double hbar = kAtomicUnits.hbar;
    const double m = kAtomicUnits.m;
    const double dp2 = g.dp * g.dp;
    DeltaLambda out;
    out.delta = {1.0 / (4.0 * dp2), t / (2.0 * m * hbar)};
    const std::complex<double> num(g.p_center, 2.0 * dp2 * (X - g.x0) / hbar);
    const std::complex<double> den(1.0, 2.0 * dp2 * t / (m * hbar));
    out.lambda = num / den;
    return out;
}

// Exact probability current of a freely spreading minimum Gaussian packet.
inline double closed_form_current(const GaussianPacket& g, double X, double t) {
    const double hbar = kAtomicUnits.hbar;
    const double m = kAtomicUnits.m;
    const double dp = g.dp;
    const double xr = X - g.x0;
    const double dp4 = dp * dp * dp * dp;
    const double spread = 1.0 + 4.0 * dp4 * t * t / (m * m * hbar * hbar);
    const double drift = xr - g.p_center * t / m;
    const double num = g.p_center + 4.0 * dp4 * xr * t / (m * hbar * hbar);
    return std::sqrt(2.0 / kPi) * dp / (m * hbar) * num / (spread * std::sqrt(spread)) *
           std::exp(-2.0 * dp * dp / (hbar * hbar) * drift * drift / spread);
}

struct ApproxCoefficients {
    double lambda0 = 0.0;  // dimensionless
    double lambda1 = 0.0;  // 1/time
    double lambda2 = 0.0;  // 1/time^2
};

inline ApproxCoefficients lambda_coefficients(const GaussianPacket& g, double X) {
    if (!(X > g.x0)) throw std::invalid_argument("lambda_coefficients: requires X > x0");
    const double hbar = kAtomicUnits.hbar;
    const double m = kAtomicUnits.m;
    const double r = g.dp / g.p_center;
    const double xr = X - g.x0;
    const double dp4 = g.dp * g.dp * g.dp * g.dp;
    ApproxCoefficients c;
    c.lambda0 = -0.5 * r * r + 2.0 * dp4 * xr * xr / (hbar * hbar * g.p_center * g.p_center);
    c.lambda1 = 4.0 * dp4 * xr / (m * g.p_center * hbar * hbar);
    c.lambda2 = 2.0 * dp4 / (m * m * hbar * hbar);
    return c;
}

struct ValidityWindow {
    double rho = 0.0;    // detector distance in units of the spatial spread
    double sigma = 0.0;  // min{2/rho, (2/rho)^2}
    double t_max = 0.0;  // window is [0, t_max]
};

inline ValidityWindow validity_window(const GaussianPacket& g, double X) {
    if (!(X > g.x0)) throw std::invalid_argument("validity_window: requires X > x0");
    ValidityWindow w;
    w.rho = (X - g.x0) / g.spatial_spread();
    w.sigma = std::min(2.0 / w.rho, (2.0 / w.rho) * (2.0 / w.rho));
    w.t_max = w.sigma * (X - g.x0) * kAtomicUnits.m / g.p_center;
    return w;
}

struct SecondOrderJplus {
    double value = 0.0;
    bool within_validity = true;  // false when t is outside [0, sigma t0]
};

// Second-order positive current: [1 + L0 - L1 t + L2 t^2] * closed current.
// Out-of-window times are still evaluated, only flagged.
inline SecondOrderJplus jplus_second_order(const GaussianPacket& g, double X, double t) {
    const ApproxCoefficients c = lambda_coefficients(g, X);
    const double bracket = 1.0 + c.lambda0 - c.lambda1 * t + c.lambda2 * t * t;
    const ValidityWindow w = validity_window(g, X);
    return {bracket * closed_form_current(g, X, t), t >= 0.0 && t <= w.t_max};
}

// Parabola form of the relative difference: L2 (t - t0)^2 - (dp/p0)^2 / 2.
inline double delta_parabola(const GaussianPacket& g, double X, double t) {
    const ApproxCoefficients c = lambda_coefficients(g, X);
    const double t0 = (X - g.x0) * kAtomicUnits.m / g.p_center;
    const double r = g.dp / g.p_center;
    return c.lambda2 * (t - t0) * (t - t0) - 0.5 * r * r;
}

// Leading interference current of a superposition with dp -> 0 and
// p2/p1 >> beta >> 1: a pure cosine of period 4 pi m hbar / p2^2 whose
// amplitude carries the packet-overlap envelope evaluated at its maximum.
inline double interference_current_leading(const SuperpositionState& s, double X, double t) {
    const double hbar = kAtomicUnits.hbar;
    const double m = kAtomicUnits.m;
    const double p2 = s.packet2.p_center;
    const double x0 = s.packet2.x0;
    const double amp = 2.0 * std::sqrt(2.0 * kPi) / (m * kAtomicUnits.h) * s.beta * s.alpha *
                       s.alpha * s.packet2.dp * p2;
    return amp * std::cos(p2 * p2 * t / (2.0 * hbar * m) - p2 * (X - x0) / hbar);
}

}  // namespace arrival
