#pragma once

// Comparison diagnostics between the two candidate arrival densities:
// Delta = 1 - <J>/<J+> together with the modulus variant 1 - |<J>|/<J+>,
// time-grid scans of a scenario, and feature extraction (zero crossings,
// local extrema, current-negativity intervals) from a scanned series.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "arrival/observables.hpp"
#include "arrival/protocol.hpp"

namespace arrival {

// Below this <J+> the ratio is numerically meaningless; such samples carry
// NaN markers and are skipped by feature extraction.
inline constexpr double kJplusFloor = 1e-30;

struct DeltaPair {
    double delta = 0.0;
    double delta_abs = 0.0;
};

// For j >= 0 the two values coincide; for j < 0 they satisfy
// delta + delta_abs = 2 identically.
inline DeltaPair relative_difference(double j, double j_plus) {
    if (!(j_plus > kJplusFloor)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
    return {1.0 - j / j_plus, 1.0 - std::abs(j) / j_plus};
}

struct GridSpec {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t count = 0;
};

struct DeltaSample {
    double t = 0.0;
    double delta = 0.0;
    double delta_abs = 0.0;
    bool j_negative = false;
};

struct ScanSample {
    CurrentSample current;
    DeltaSample diff;
    double t_n = 0.0;
    bool currents_valid = false;  // false: quadrature failed at this t (poisoned)
    bool delta_defined = false;   // false: <J+> below floor or currents invalid
};

struct TimeSeries {
    std::string scenario_id;
    GridSpec grid;
    NormalizationMap norm;
    double transmittance = 1.0;
    std::vector<ScanSample> samples;
};

inline TimeSeries scan(const Scenario& sc, const GridSpec& grid) {
    sc.validate();
    if (grid.count < 2) throw std::invalid_argument("scan: grid needs at least 2 samples");
    if (!(grid.t_end > grid.t_start)) throw std::invalid_argument("scan: degenerate window");
    TimeSeries series;
    series.scenario_id = sc.id;
    series.grid = grid;
    series.norm = sc.norm;
    series.transmittance = sc.transmittance;
    series.samples.reserve(grid.count);
    const double step = (grid.t_end - grid.t_start) / static_cast<double>(grid.count - 1);
    for (std::size_t i = 0; i < grid.count; ++i) {
        ScanSample s;
        const double t = grid.t_start + step * static_cast<double>(i);
        s.current.t = s.diff.t = t;
        s.t_n = normalize_time(t, sc.norm);
        try {
            s.current.j = expectation_J(sc.state, sc.model, sc.detector.X, t, sc.quad);
            s.current.j_plus = expectation_Jplus(sc.state, sc.model, sc.detector.X, t, sc.quad);
            s.current.p_x = s.current.j_plus / sc.transmittance;
            s.diff.j_negative = s.current.j < 0.0;
            s.currents_valid = true;
            const DeltaPair dp = relative_difference(s.current.j, s.current.j_plus);
            s.diff.delta = dp.delta;
            s.diff.delta_abs = dp.delta_abs;
            s.delta_defined = !std::isnan(dp.delta);
        } catch (const numerical_error&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            s.current.j = s.current.j_plus = s.current.p_x = nan;
            s.diff.delta = s.diff.delta_abs = nan;
        }
        series.samples.push_back(s);
    }
    return series;
}

inline TimeSeries scan(const Scenario& sc) {
    return scan(sc, GridSpec{sc.t_start, sc.t_end, sc.grid_size});
}

// --- feature extraction ------------------------------------------------------

struct ZeroCrossing {
    double t = 0.0;
    bool rising = false;  // delta passes from negative to positive
};

struct Extremum {
    double t = 0.0;
    double value = 0.0;
    bool maximum = false;
};

struct NegativityInterval {
    double t_enter = 0.0;
    double t_exit = 0.0;
};

struct FeatureReport {
    std::vector<ZeroCrossing> delta_zero_crossings;
    std::vector<Extremum> delta_extrema;
    std::vector<NegativityInterval> j_negative_intervals;
};

namespace detail {

inline double interp_zero(double t0, double v0, double t1, double v1) {
    return t0 + v0 * (t1 - t0) / (v0 - v1);
}

// Vertex of the parabola through three equidistant samples.
inline void parabolic_refine(double tm, double h, double a, double b, double c, double& t_out,
                             double& v_out) {
    const double denom = a - 2.0 * b + c;
    if (denom == 0.0) {
        t_out = tm;
        v_out = b;
        return;
    }
    const double off = 0.5 * (a - c) / denom;
    t_out = tm + off * h;
    v_out = b - 0.25 * (a - c) * off;
}

}  // namespace detail

inline FeatureReport extract_features(const TimeSeries& series) {
    if (series.samples.size() < 3)
        throw std::invalid_argument("extract_features: need at least 3 samples");
    FeatureReport report;
    const auto& s = series.samples;

    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (!s[i].delta_defined || !s[i + 1].delta_defined) continue;
        const double a = s[i].diff.delta, b = s[i + 1].diff.delta;
        if (a == 0.0) continue;  // counted by the neighbor pair
        if (a * b < 0.0) {
            report.delta_zero_crossings.push_back(
                {detail::interp_zero(s[i].diff.t, a, s[i + 1].diff.t, b), a < 0.0});
        }
    }

    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (!s[i - 1].delta_defined || !s[i].delta_defined || !s[i + 1].delta_defined) continue;
        const double a = s[i - 1].diff.delta, b = s[i].diff.delta, c = s[i + 1].diff.delta;
        const bool is_max = b > a && b > c;
        const bool is_min = b < a && b < c;
        if (!is_max && !is_min) continue;
        Extremum e;
        e.maximum = is_max;
        detail::parabolic_refine(s[i].diff.t, s[i].diff.t - s[i - 1].diff.t, a, b, c, e.t,
                                 e.value);
        report.delta_extrema.push_back(e);
    }

    bool inside = false;
    NegativityInterval cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].currents_valid) continue;
        const bool neg = s[i].current.j < 0.0;
        if (neg && !inside) {
            inside = true;
            cur.t_enter = (i > 0 && s[i - 1].currents_valid && s[i - 1].current.j >= 0.0)
                              ? detail::interp_zero(s[i - 1].current.t, s[i - 1].current.j,
                                                    s[i].current.t, s[i].current.j)
                              : s[i].current.t;
        } else if (!neg && inside) {
            inside = false;
            cur.t_exit = (i > 0 && s[i - 1].currents_valid)
                             ? detail::interp_zero(s[i - 1].current.t, s[i - 1].current.j,
                                                   s[i].current.t, s[i].current.j)
                             : s[i].current.t;
            report.j_negative_intervals.push_back(cur);
        }
    }
    if (inside) {
        cur.t_exit = s.back().current.t;
        report.j_negative_intervals.push_back(cur);
    }
    return report;
}

}  // namespace arrival
