#pragma once

// Scattering models for the 1D setup: free propagation (T = 1) or a
// rectangular barrier on [0, d]. The transmission amplitude follows the
// stationary matching convention where the transmitted wave for x > d is
// T(p) e^{ipx/hbar}; in the free limit (d -> 0 or V0 -> 0) T reduces to 1
// with no residual phase.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "arrival/constants.hpp"
#include "arrival/quadrature.hpp"
#include "arrival/states.hpp"

namespace arrival {

class ScatteringModel {
public:
    static ScatteringModel free() { return ScatteringModel(); }

    static ScatteringModel rectangular_barrier(double width, double height) {
        if (!(width > 0.0))
            throw std::invalid_argument("ScatteringModel: barrier width must be > 0");
        if (!(height > 0.0))
            throw std::invalid_argument("ScatteringModel: barrier height must be > 0");
        ScatteringModel m;
        m.free_ = false;
        m.d_ = width;
        m.v0_ = height;
        m.p_barrier_ = std::sqrt(2.0 * kAtomicUnits.m * height);
        return m;
    }

    static ScatteringModel barrier_from_p(double width, double p_barrier) {
        if (!(p_barrier > 0.0))
            throw std::invalid_argument("ScatteringModel: p_barrier must be > 0");
        return rectangular_barrier(width,
                                   p_barrier * p_barrier / (2.0 * kAtomicUnits.m));
    }

    bool is_free() const { return free_; }
    double width() const { return d_; }
    double height() const { return v0_; }
    double p_barrier() const { return p_barrier_; }

    std::complex<double> transmission_amplitude(double p) const {
        if (!(p > 0.0))
            throw std::domain_error("transmission_amplitude: requires p > 0");
        if (free_) return {1.0, 0.0};

        const double hbar = kAtomicUnits.hbar;
        const double k = p / hbar;
        // kappa^2, signed: positive below the barrier top, negative above.
        const double z2 = (p_barrier_ * p_barrier_ - p * p) / (hbar * hbar);
        const double s = z2 * d_ * d_;  // (kappa d)^2, signed

        // cosh(kappa d) and sinh(kappa d)/(kappa d) are entire in s, so one
        // expression covers tunneling, the barrier top and the trigonometric
        // regime without any branch seam.
        double ch, shc;
        if (std::abs(s) < 1e-8) {
            ch = 1.0 + s / 2.0 + s * s / 24.0;
            shc = 1.0 + s / 6.0 + s * s / 120.0;
        } else if (s > 0.0) {
            const double w = std::sqrt(s);
            if (w > 700.0) return {0.0, 0.0};  // |T| below double underflow
            ch = std::cosh(w);
            shc = std::sinh(w) / w;
        } else {
            const double w = std::sqrt(-s);
            ch = std::cos(w);
            shc = std::sin(w) / w;
        }
        const std::complex<double> denom(ch, 0.5 * d_ * ((z2 - k * k) / k) * shc);
        return std::polar(1.0, -k * d_) / denom;
    }

private:
    ScatteringModel() = default;

    bool free_ = true;
    double d_ = 0.0;
    double v0_ = 0.0;
    double p_barrier_ = 0.0;
};

// Transmitted-channel norm: integral of |T(p)|^2 |<p|psi>|^2 over p > 0.
inline double transmittance(const StateSpec& state, const ScatteringModel& model,
                            const QuadratureSpec& quad) {
    const auto integrand = [&](double p) -> std::complex<double> {
        const double a = std::abs(momentum_amplitude(state, p));
        const double t = std::abs(model.transmission_amplitude(p));
        return {t * t * a * a, 0.0};
    };
    // Non-oscillatory; the barrier structure is resolved by refinement.
    const auto rate = [&](double) { return model.width() / kAtomicUnits.hbar; };
    return integrate_momentum(integrand, momentum_supports(state), rate, quad).real();
}

}  // namespace arrival
