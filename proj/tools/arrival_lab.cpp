// arrival-lab: deterministic command-line front end.
//
//   arrival-lab run      --scenario fig3 [--grid N] [--out PATH] ...
//   arrival-lab sweep    --scenario fig1 [--out PREFIX] ...
//   arrival-lab table    --id table1 [--epsilon 1e-4] [--out PATH] ...
//   arrival-lab validate
//
// Every physical quantity is emitted in atomic units. Identical
// configuration produces byte-identical output.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "arrival/analytic.hpp"
#include "arrival/comparison.hpp"
#include "arrival/config.hpp"
#include "arrival/csv.hpp"
#include "arrival/protocol.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartialTable = 4;

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw arrival::config_error("cannot open output file '" + path + "'");
    out << payload;
    if (!out) throw arrival::config_error("write failed for output file '" + path + "'");
}

double value_or(const std::map<std::string, std::string>& params, const std::string& key,
                double fallback) {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    return arrival::detail::parse_double(key, it->second, "inline scenario");
}

double require_value(const std::map<std::string, std::string>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end())
        throw arrival::config_error("inline scenario: missing required key '" + key + "'");
    return arrival::detail::parse_double(key, it->second, "inline scenario");
}

arrival::Scenario inline_scenario(const arrival::RunConfig& cfg,
                                  const arrival::QuadratureSpec& quad) {
    using namespace arrival;
    const auto& p = cfg.inline_params;

    ScatteringModel model = ScatteringModel::free();
    const auto model_it = p.find("model");
    if (model_it != p.end() && model_it->second == "barrier") {
        model = ScatteringModel::barrier_from_p(require_value(p, "d"),
                                                value_or(p, "p_barrier", kPresetPBarrier));
    } else if (model_it != p.end() && model_it->second != "free") {
        throw config_error("inline scenario: model must be 'free' or 'barrier'");
    }

    const double dp = require_value(p, "dp");
    const double x0 = value_or(p, "x0", 0.0);
    StateSpec state = [&]() -> StateSpec {
        if (p.count("beta")) {
            return SuperpositionState(require_value(p, "beta"),
                                      GaussianPacket(require_value(p, "p1"), dp, x0),
                                      GaussianPacket(require_value(p, "p2"), dp, x0));
        }
        return GaussianPacket(require_value(p, "p0"), dp, x0);
    }();

    Scenario sc{.id = "inline",
                .state = state,
                .model = model,
                .detector = DetectorConfig{require_value(p, "X")},
                .t_start = value_or(p, "t_start", 0.0),
                .t_end = require_value(p, "t_end"),
                .norm = {},
                .grid_size = 1024,
                .quad = quad,
                .transmittance = 1.0};
    if (!(sc.t_end > sc.t_start)) throw config_error("inline scenario: t_end must exceed t_start");
    sc.norm = {TimeNormalization::Window, 0.0, sc.t_start, sc.t_end};
    sc.transmittance = transmittance(sc.state, sc.model, quad);
    return sc;
}

void warn_state(const arrival::Scenario& sc) {
    if (const auto w = arrival::state_warning(sc.state)) {
        std::cerr << "warning: scenario " << sc.id << ": " << *w << "\n";
    }
}

arrival::ProtocolThresholds thresholds_from(const arrival::RunConfig& cfg) {
    arrival::ProtocolThresholds thr;
    if (!std::isnan(cfg.epsilon)) thr.epsilon = cfg.epsilon;
    return thr;
}

arrival::QuadratureSpec quad_from(const arrival::RunConfig& cfg) {
    arrival::QuadratureSpec quad;
    if (!std::isnan(cfg.quad_rel_tol)) quad.rel_tol = cfg.quad_rel_tol;
    return quad;
}

int cmd_run(const arrival::RunConfig& cfg) {
    using namespace arrival;
    const QuadratureSpec quad = quad_from(cfg);
    std::vector<Scenario> scenarios;
    if (!cfg.scenario.empty()) {
        Preset ps = preset(cfg.scenario, thresholds_from(cfg), quad);
        scenarios = std::move(ps.scenarios);
    } else {
        scenarios.push_back(inline_scenario(cfg, quad));
    }
    if (cfg.command == RunConfig::Command::Run && scenarios.size() != 1) {
        throw config_error("preset '" + cfg.scenario +
                           "' expands to several scenarios; use `sweep` for families");
    }

    std::string combined;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        Scenario& sc = scenarios[i];
        if (cfg.grid != 0) sc.grid_size = cfg.grid;
        warn_state(sc);
        const TimeSeries series = scan(sc);
        const std::string payload = emit_timeseries(series, cfg.sig_digits);
        if (scenarios.size() == 1) {
            write_output(cfg.out_path, payload);
        } else if (cfg.out_path.empty()) {
            combined += "# scenario " + sc.id + "\n" + payload;
        } else {
            write_output(cfg.out_path + "." + sc.id + ".csv", payload);
        }
    }
    if (scenarios.size() > 1 && cfg.out_path.empty()) write_output("", combined);
    return kExitOk;
}

int cmd_table(const arrival::RunConfig& cfg) {
    using namespace arrival;
    if (cfg.scenario != "table1" && cfg.scenario != "table2")
        throw config_error("table: pass --id table1 or --id table2");
    const auto rows = solve_table(cfg.scenario, thresholds_from(cfg), quad_from(cfg));
    write_output(cfg.out_path, emit_table(rows, cfg.sig_digits));
    bool any_bad = false;
    for (const auto& r : rows) {
        if (!r.ok) {
            any_bad = true;
            std::cerr << "warning: row d=" << r.row.d << " failed: " << r.error << "\n";
        }
    }
    return any_bad ? kExitPartialTable : kExitOk;
}

struct ValidationCheck {
    std::string name;
    bool ok;
};

int cmd_validate(const arrival::RunConfig& cfg) {
    using namespace arrival;
    const QuadratureSpec quad = quad_from(cfg);
    std::vector<ValidationCheck> checks;

    const GaussianPacket g(0.5, 0.01, 0.0);
    const StateSpec state(g);
    const ScatteringModel free_model = ScatteringModel::free();
    const double X = 150.0;

    {
        double worst = 0.0;
        for (int i = 0; i <= 24; ++i) {
            const double t = 600.0 * i / 24.0;
            const double jq = expectation_J(state, free_model, X, t, quad);
            const double jc = closed_form_current(g, X, t);
            worst = std::max(worst, std::abs(jq / jc - 1.0));
        }
        checks.push_back({"closed-form current vs quadrature", worst < 1e-8});
    }
    {
        bool ok = true;
        for (double t : {0.0, 120.0, 300.0, 555.0}) {
            const auto dl = delta_lambda(g, X, t);
            const auto i1 = functional_I(MomentumWeight::One, state, free_model, X, t, quad);
            const auto ip = functional_I(MomentumWeight::P, state, free_model, X, t, quad);
            const auto ip2 = functional_I([](double p) { return p * p; }, state, free_model, X,
                                          t, quad);
            ok = ok && std::abs(ip - dl.lambda * i1) <= 1e-9 * std::abs(ip);
            const auto expect = (dl.lambda * dl.lambda + 1.0 / (2.0 * dl.delta)) * i1;
            ok = ok && std::abs(ip2 - expect) <= 1e-9 * std::abs(ip2);
        }
        checks.push_back({"moment identities I[p], I[p^2]", ok});
    }
    {
        const double norm = transmittance(state, free_model, quad);
        checks.push_back({"free transmittance = 1", std::abs(norm - 1.0) < 1e-9});
    }
    {
        const ScatteringModel barrier = ScatteringModel::barrier_from_p(2.0, 0.8);
        bool ok = true;
        for (double eps : {1e-6, 1e-7, 1e-8}) {
            const auto tl = barrier.transmission_amplitude(0.8 - eps);
            const auto tr = barrier.transmission_amplitude(0.8 + eps);
            ok = ok && std::abs(tl - tr) < 1e-5;
        }
        for (int i = 1; i <= 40; ++i) {
            const double t2 = std::norm(barrier.transmission_amplitude(0.05 * i));
            ok = ok && t2 > 0.0 && t2 <= 1.0 + 1e-12;
        }
        checks.push_back({"barrier amplitude continuity and bounds", ok});
    }
    {
        const ScatteringModel barrier = ScatteringModel::barrier_from_p(2.0, 0.8);
        const GaussianPacket gb(0.5, 0.01, -201.8);
        const StateSpec sb(gb);
        const double tr = transmittance(sb, barrier, quad);
        const double below =
            position_tail_probability(sb, barrier, 100.0, TailSide::Below, 600.0, quad);
        const double above =
            position_tail_probability(sb, barrier, 100.0, TailSide::Above, 600.0, quad);
        checks.push_back({"position tail partition", std::abs(below + above - tr) < 1e-8});
    }

    int passed = 0;
    for (const auto& c : checks) {
        std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << "\n";
        if (c.ok) ++passed;
    }
    std::cout << passed << "/" << checks.size() << " checks passed\n";
    return passed == static_cast<int>(checks.size()) ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const arrival::RunConfig cfg = arrival::parse_config(args);
        switch (cfg.command) {
            case arrival::RunConfig::Command::Run:
            case arrival::RunConfig::Command::Sweep:
                return cmd_run(cfg);
            case arrival::RunConfig::Command::Table:
                return cmd_table(cfg);
            case arrival::RunConfig::Command::Validate:
                return cmd_validate(cfg);
        }
    } catch (const arrival::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const arrival::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (achieved error " << e.achieved_error() << ")\n";
        return kExitNumerical;
    } catch (const arrival::bracketing_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
