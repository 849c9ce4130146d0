#pragma once

// CSV emission. Fixed significant-digit formatting and a fixed row order
// make the output byte-identical across reruns with the same configuration.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "arrival/comparison.hpp"
#include "arrival/protocol.hpp"

namespace arrival {

inline std::string format_number(double v, int sig_digits) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", sig_digits, v);
    return buf;
}

inline std::string emit_timeseries(const TimeSeries& series, int sig_digits = 12) {
    std::string out = "t,t_n,j,j_plus,p_x,delta,delta_abs\n";
    for (const ScanSample& s : series.samples) {
        const double nan = std::nan("");
        out += format_number(s.current.t, sig_digits);
        out += ',';
        out += format_number(s.t_n, sig_digits);
        out += ',';
        out += format_number(s.currents_valid ? s.current.j : nan, sig_digits);
        out += ',';
        out += format_number(s.currents_valid ? s.current.j_plus : nan, sig_digits);
        out += ',';
        out += format_number(s.currents_valid ? s.current.p_x : nan, sig_digits);
        out += ',';
        out += format_number(s.diff.delta, sig_digits);
        out += ',';
        out += format_number(s.diff.delta_abs, sig_digits);
        out += '\n';
    }
    return out;
}

inline std::string emit_table(const std::vector<TableRowOutcome>& rows, int sig_digits = 12) {
    std::string out = "d,x0,t_i,t_f,X,transmittance,epsilon_used\n";
    for (const TableRowOutcome& r : rows) {
        out += format_number(r.row.d, sig_digits);
        out += ',';
        out += format_number(r.row.x0, sig_digits);
        out += ',';
        out += format_number(r.row.t_i, sig_digits);
        out += ',';
        out += format_number(r.row.t_f, sig_digits);
        out += ',';
        out += format_number(r.row.X, sig_digits);
        out += ',';
        out += format_number(r.row.transmittance, sig_digits);
        out += ',';
        out += format_number(r.row.epsilon, sig_digits);
        out += '\n';
    }
    return out;
}

}  // namespace arrival
