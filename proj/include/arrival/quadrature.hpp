#pragma once

// Oscillation-aware composite Gauss-Legendre integration and bracketed
// bisection. Panel counts start from the local phase rate (so every
// oscillation wavelength gets its share of nodes) and double until two
// successive refinements agree within tolerance. Evaluation order is fixed
// left-to-right, which makes results bit-reproducible run to run.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "arrival/constants.hpp"

namespace arrival {

struct QuadratureSpec {
    double n_sigma = 12.0;        // truncation half-width in units of the packet spread
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    std::size_t max_panels = std::size_t{1} << 16;
    double nodes_per_wavelength = 8.0;

    void validate() const {
        if (!(n_sigma >= 6.0))
            throw std::invalid_argument("QuadratureSpec: n_sigma must be >= 6");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        if (!(nodes_per_wavelength >= 4.0))
            throw std::invalid_argument("QuadratureSpec: nodes_per_wavelength must be >= 4");
        if (max_panels < 4)
            throw std::invalid_argument("QuadratureSpec: max_panels too small");
    }
};

class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_error() const { return achieved_; }

private:
    double achieved_;
};

class bracketing_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct Support {
    double center = 0.0;
    double width = 0.0;
};

namespace detail {

// 16-point Gauss-Legendre rule on [-1,1], positive half of the nodes.
inline constexpr std::array<double, 8> kGlNode = {
    0.09501250983763744019, 0.2816035507792589132, 0.4580167776572273863,
    0.6178762444026437484,  0.7554044083550030339, 0.8656312023878317439,
    0.9445750230732325761,  0.9894009349916499326};
inline constexpr std::array<double, 8> kGlWeight = {
    0.1894506104550684963,  0.1826034150449235889, 0.1691565193950025382,
    0.1495959888165767321,  0.1246289712555338721, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485};

template <typename F>
std::complex<double> gl16_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < kGlNode.size(); ++i) {
        acc += kGlWeight[i] * (f(c - h * kGlNode[i]) + f(c + h * kGlNode[i]));
    }
    return h * acc;
}

template <typename F>
std::complex<double> composite_gl16(F&& f, double a, double b, std::size_t panels) {
    const double w = (b - a) / static_cast<double>(panels);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < panels; ++k) {
        acc += gl16_panel(f, a + static_cast<double>(k) * w, a + static_cast<double>(k + 1) * w);
    }
    return acc;
}

}  // namespace detail

// Integrates f over [iv.lo, iv.hi]. `rate` maps an abscissa to the local
// phase rate |d(phase)/dx|; sampling is sized so one oscillation wavelength
// 2*pi/rate receives at least spec.nodes_per_wavelength nodes before the
// first refinement check.
template <typename F, typename Rate>
std::complex<double> integrate_interval(F&& f, const Interval& iv, Rate&& rate,
                                        const QuadratureSpec& spec, double abs_tol,
                                        double* err_out = nullptr) {
    const double len = iv.hi - iv.lo;
    if (!(len > 0.0)) {
        if (err_out) *err_out = 0.0;
        return {0.0, 0.0};
    }
    double max_rate = 0.0;
    for (int i = 0; i <= 16; ++i) {
        max_rate = std::max(max_rate, rate(iv.lo + len * static_cast<double>(i) / 16.0));
    }
    const double wavelengths = len * max_rate / (2.0 * kPi);
    double want = std::ceil(wavelengths * spec.nodes_per_wavelength / 16.0);
    if (!(want >= 2.0)) want = 2.0;
    std::size_t panels = (want > static_cast<double>(spec.max_panels))
                             ? spec.max_panels
                             : static_cast<std::size_t>(want);

    std::complex<double> coarse = detail::composite_gl16(f, iv.lo, iv.hi, panels);
    for (;;) {
        if (panels > spec.max_panels / 2) {
            throw numerical_error("integrate_interval: panel cap exceeded before convergence",
                                  std::abs(coarse));
        }
        panels *= 2;
        const std::complex<double> fine = detail::composite_gl16(f, iv.lo, iv.hi, panels);
        const double err = std::abs(fine - coarse);
        if (err <= std::max(spec.rel_tol * std::abs(fine), abs_tol)) {
            if (err_out) *err_out = err;
            return fine;
        }
        coarse = fine;
    }
}

template <typename F, typename Rate>
std::complex<double> integrate_intervals(F&& f, const std::vector<Interval>& ivs, Rate&& rate,
                                         const QuadratureSpec& spec, double* err_out = nullptr) {
    spec.validate();
    if (ivs.empty()) throw std::invalid_argument("integrate_intervals: no intervals");
    const double abs_share = spec.abs_tol / static_cast<double>(ivs.size());
    std::complex<double> total{0.0, 0.0};
    double err_total = 0.0;
    for (const Interval& iv : ivs) {
        double err = 0.0;
        total += integrate_interval(f, iv, rate, spec, abs_share, &err);
        err_total += err;
    }
    if (err_out) *err_out = err_total;
    return total;
}

// Momentum-axis entry point: one truncated interval per support, clipped at
// p = 0 (the formalism integrates over positive momenta only) and merged
// where supports overlap.
inline std::vector<Interval> momentum_intervals(const std::vector<Support>& supports,
                                                double n_sigma) {
    if (supports.empty()) throw std::invalid_argument("momentum_intervals: no supports");
    std::vector<Interval> ivs;
    ivs.reserve(supports.size());
    for (const Support& s : supports) {
        if (!(s.width > 0.0)) throw std::invalid_argument("momentum_intervals: width must be > 0");
        const double lo = std::max(0.0, s.center - n_sigma * s.width);
        const double hi = s.center + n_sigma * s.width;
        if (hi > lo) ivs.push_back({lo, hi});
    }
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& iv : ivs) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

template <typename F, typename Rate>
std::complex<double> integrate_momentum(F&& f, const std::vector<Support>& supports,
                                        Rate&& phase_rate, const QuadratureSpec& spec,
                                        double* err_out = nullptr) {
    return integrate_intervals(f, momentum_intervals(supports, spec.n_sigma), phase_rate, spec,
                               err_out);
}

// Deterministic bisection. Requires f(lo) and f(hi) to bracket a sign change.
template <typename F>
double find_root(F&& f, double lo, double hi, double tol) {
    if (!(hi > lo)) throw std::invalid_argument("find_root: empty bracket");
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw bracketing_error("find_root: no sign change in bracket");
    }
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace arrival
