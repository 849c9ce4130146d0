#pragma once

// The computational core: the functional
//
//   I[f] = integral_0^inf dp T(p) f(p) <p|psi_in> e^{-i p^2 t / 2m hbar} e^{i p X / hbar}
//
// and the observables built from it,
//
//   <J(X)>   = Re(I[p]* I[1]) / (m h)      (probability current, may be < 0)
//   <J+(X)>  = |I[sqrt p]|^2  / (m h)      (positive-definite current)
//   P_X(t)   = <J+(X)> / Transmittance     (normalized arrival density)
//
// plus transmitted position densities and their half-line integrals, which
// the experiment-design solvers consume. All evaluations act on the freely
// evolving transmitted state; time samples are independent propagator
// integrals, not steps of a PDE evolution.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "arrival/constants.hpp"
#include "arrival/quadrature.hpp"
#include "arrival/scattering.hpp"
#include "arrival/states.hpp"

namespace arrival {

struct DetectorConfig {
    double X = 0.0;  // detector position; behind the barrier for scattering runs
};

struct CurrentSample {
    double t = 0.0;
    double j = 0.0;
    double j_plus = 0.0;
    double p_x = 0.0;
};

enum class MomentumWeight { One, P, SqrtP };

namespace detail {

inline double weight_value(MomentumWeight w, double p) {
    switch (w) {
        case MomentumWeight::One: return 1.0;
        case MomentumWeight::P: return p;
        case MomentumWeight::SqrtP: return std::sqrt(p);
    }
    return 0.0;
}

// Stationary-phase rate of the I[f] integrand; the barrier width is added to
// cover the e^{-ikd} factor carried by T(p).
struct MomentumPhaseRate {
    double x_rel;  // X - x0
    double t;
    double d;
    double operator()(double p) const {
        const double hbar = kAtomicUnits.hbar;
        return (std::abs(x_rel - p * t / kAtomicUnits.m) + d) / hbar;
    }
};

}  // namespace detail

template <typename WeightFn>
std::complex<double> functional_I(WeightFn&& f, const StateSpec& state,
                                  const ScatteringModel& model, double X, double t,
                                  const QuadratureSpec& quad) {
    const double hbar = kAtomicUnits.hbar;
    const double m = kAtomicUnits.m;
    const auto integrand = [&](double p) -> std::complex<double> {
        const double phase = (p * X - 0.5 * p * p * t / m) / hbar;
        return model.transmission_amplitude(p) * f(p) * momentum_amplitude(state, p) *
               std::polar(1.0, phase);
    };
    const detail::MomentumPhaseRate rate{X - centroid_x0(state), t, model.width()};
    return integrate_momentum(integrand, momentum_supports(state), rate, quad);
}

inline std::complex<double> functional_I(MomentumWeight w, const StateSpec& state,
                                         const ScatteringModel& model, double X, double t,
                                         const QuadratureSpec& quad) {
    return functional_I([w](double p) { return detail::weight_value(w, p); }, state, model, X, t,
                        quad);
}

inline double expectation_J(const StateSpec& state, const ScatteringModel& model, double X,
                            double t, const QuadratureSpec& quad) {
    const auto i1 = functional_I(MomentumWeight::One, state, model, X, t, quad);
    const auto ip = functional_I(MomentumWeight::P, state, model, X, t, quad);
    return std::real(std::conj(ip) * i1) / (kAtomicUnits.m * kAtomicUnits.h);
}

inline double expectation_Jplus(const StateSpec& state, const ScatteringModel& model, double X,
                                double t, const QuadratureSpec& quad) {
    const auto is = functional_I(MomentumWeight::SqrtP, state, model, X, t, quad);
    return std::norm(is) / (kAtomicUnits.m * kAtomicUnits.h);
}

inline double arrival_distribution(const StateSpec& state, const ScatteringModel& model, double X,
                                   double t, const QuadratureSpec& quad,
                                   double transmittance_value) {
    if (!(transmittance_value > 0.0))
        throw std::domain_error("arrival_distribution: fully reflecting scenario (T = 0)");
    return expectation_Jplus(state, model, X, t, quad) / transmittance_value;
}

inline double arrival_distribution(const StateSpec& state, const ScatteringModel& model, double X,
                                   double t, const QuadratureSpec& quad) {
    return arrival_distribution(state, model, X, t, quad, transmittance(state, model, quad));
}

// Freely evolving transmitted wave in position space,
//   psi_tr(x,t) = (2 pi hbar)^{-1/2} integral_0^inf dp T(p) <p|psi> e^{ipx/hbar} e^{-ip^2 t/2m hbar}.
inline std::complex<double> transmitted_position_amplitude(const StateSpec& state,
                                                           const ScatteringModel& model, double x,
                                                           double t, const QuadratureSpec& quad) {
    return functional_I(MomentumWeight::One, state, model, x, t, quad) /
           std::sqrt(2.0 * kPi * kAtomicUnits.hbar);
}

inline double transmitted_position_density(const StateSpec& state, const ScatteringModel& model,
                                           double x, double t, const QuadratureSpec& quad) {
    return std::norm(transmitted_position_amplitude(state, model, x, t, quad));
}

enum class TailSide { Below, Above };

namespace detail {

inline double spread_at_time(const StateSpec& state, double t) {
    const double dp = momentum_spread(state);
    const double sx = kAtomicUnits.hbar / (2.0 * dp);
    const double g = 2.0 * dp * dp * t / (kAtomicUnits.m * kAtomicUnits.hbar);
    return sx * std::sqrt(1.0 + g * g);
}

inline double support_p_max(const StateSpec& state, double n_sigma) {
    double pmax = 0.0;
    for (const Support& s : momentum_supports(state))
        pmax = std::max(pmax, s.center + n_sigma * s.width);
    return pmax;
}

}  // namespace detail

// Integral of the transmitted density over (-inf, bound] or [bound, +inf).
// The improper end is truncated where the packet cannot reach: the momentum
// support is nonnegative and bounded above, so at time t everything lives in
// [x0 - 8 sigma_x(t), x0 + p_max t / m + 8 sigma_x(t)] up to a margin for the
// barrier delay.
inline double position_tail_probability(const StateSpec& state, const ScatteringModel& model,
                                        double bound, TailSide side, double t,
                                        const QuadratureSpec& quad) {
    const double hbar = kAtomicUnits.hbar;
    const double m = kAtomicUnits.m;
    const double sxt = detail::spread_at_time(state, t);
    const double pmax = detail::support_p_max(state, quad.n_sigma);
    const double x0 = centroid_x0(state);
    const double margin = 8.0 * sxt + 2.0 * model.width() + 10.0;
    const double drift = pmax * t / m;

    Interval iv;
    if (side == TailSide::Below) {
        iv.lo = x0 + std::min(0.0, drift) - margin;
        iv.hi = bound;
    } else {
        iv.lo = bound;
        iv.hi = x0 + std::max(0.0, drift) + margin;
    }
    if (!(iv.hi > iv.lo)) return 0.0;

    const auto integrand = [&](double x) -> std::complex<double> {
        return {transmitted_position_density(state, model, x, t, quad), 0.0};
    };
    // |psi_tr|^2 cannot oscillate faster in x than the full momentum extent.
    const auto rate = [pmax, hbar](double) { return pmax / hbar; };
    return integrate_intervals(integrand, {iv}, rate, quad).real();
}

}  // namespace arrival
