#pragma once

// Atomic units throughout: hbar = m_electron = 1, h = 2*pi.

#include <stdexcept>

namespace arrival {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct PhysicalConstants {
    double hbar = 1.0;
    double m = 1.0;
    double h = 2.0 * kPi;  // kept explicit: the current prefactors carry 1/(m h)

    constexpr PhysicalConstants() = default;
    PhysicalConstants(double hbar_, double m_) : hbar(hbar_), m(m_), h(2.0 * kPi * hbar_) {
        if (!(hbar > 0.0) || !(m > 0.0))
            throw std::invalid_argument("PhysicalConstants: hbar and m must be positive");
    }
};

inline constexpr PhysicalConstants kAtomicUnits{};

}  // namespace arrival
