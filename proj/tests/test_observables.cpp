#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "arrival/analytic.hpp"
#include "arrival/observables.hpp"
#include "support/oracles.hpp"

using namespace arrival;
using Catch::Approx;
using cplx = std::complex<double>;

namespace {

double unit_draw(std::mt19937& gen) {
    return static_cast<double>(gen()) / 4294967296.0;
}

const QuadratureSpec kQuad{};

}  // namespace

TEST_CASE("functional with zero weight vanishes") {
    const StateSpec g(GaussianPacket(0.5, 0.01, 0.0));
    const auto val = functional_I([](double) { return 0.0; }, g, ScatteringModel::free(), 150.0,
                                  100.0, kQuad);
    REQUIRE(std::abs(val) == 0.0);
}

TEST_CASE("I[1] for the free gaussian matches the closed form") {
    QuadratureSpec quad;
    quad.rel_tol = 1e-12;
    const GaussianPacket g(0.5, 0.01, -30.0);
    const StateSpec state(g);
    for (double t : {0.0, 150.0, 300.0, 600.0}) {
        const auto got = functional_I(MomentumWeight::One, state, ScatteringModel::free(), 120.0,
                                      t, quad);
        const auto expect = oracles::closed_I1(0.5, 0.01, 120.0 - (-30.0), t);
        REQUIRE(std::abs(got - expect) <= 1e-10 * std::abs(expect));
    }
}

TEST_CASE("moment identities at random detector points") {
    QuadratureSpec quad;
    quad.rel_tol = 1e-12;
    std::mt19937 gen(777);
    const ScatteringModel free_model = ScatteringModel::free();
    for (int i = 0; i < 12; ++i) {
        const double dp = 0.005 + 0.015 * unit_draw(gen);
        const double x_rel = 30.0 + 270.0 * unit_draw(gen);
        const double t = 600.0 * unit_draw(gen);
        const GaussianPacket g(0.5, dp, 0.0);
        const StateSpec state(g);
        const auto dl = delta_lambda(g, x_rel, t);
        const auto i1 = functional_I(MomentumWeight::One, state, free_model, x_rel, t, quad);
        const auto ip = functional_I(MomentumWeight::P, state, free_model, x_rel, t, quad);
        const auto ip2 =
            functional_I([](double p) { return p * p; }, state, free_model, x_rel, t, quad);
        REQUIRE(std::abs(ip - dl.lambda * i1) <= 1e-9 * std::abs(ip));
        const auto expect2 = (dl.lambda * dl.lambda + 1.0 / (2.0 * dl.delta)) * i1;
        REQUIRE(std::abs(ip2 - expect2) <= 1e-9 * std::abs(ip2));
    }
}

TEST_CASE("current at the centroid at t = 0") {
    const StateSpec g(GaussianPacket(0.5, 0.01, 25.0));
    const double j = expectation_J(g, ScatteringModel::free(), 25.0, 0.0, kQuad);
    REQUIRE(j == Approx(0.0039894228040143268).epsilon(1e-9));
}

TEST_CASE("current matches the exact gaussian formula on a grid") {
    QuadratureSpec quad;
    quad.rel_tol = 1e-11;
    const GaussianPacket g(0.5, 0.01, 0.0);
    const StateSpec state(g);
    const ScatteringModel free_model = ScatteringModel::free();
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = 600.0 * i / 100.0;
        const double jq = expectation_J(state, free_model, 150.0, t, quad);
        const double jc = closed_form_current(g, 150.0, t);
        worst = std::max(worst, std::abs(jq / jc - 1.0));
    }
    REQUIRE(worst < 1e-8);
}

TEST_CASE("fig-3 state current turns negative near t = 40 and t = 400") {
    const SuperpositionState s(2.0, GaussianPacket(0.2, 0.01, 0.0),
                               GaussianPacket(0.5, 0.01, 0.0));
    const StateSpec state(s);
    const ScatteringModel free_model = ScatteringModel::free();
    REQUIRE(expectation_J(state, free_model, 150.0, 39.5, kQuad) < 0.0);
    REQUIRE(expectation_J(state, free_model, 150.0, 399.0, kQuad) < 0.0);
    REQUIRE(expectation_Jplus(state, free_model, 150.0, 39.5, kQuad) >= 0.0);
    REQUIRE(expectation_Jplus(state, free_model, 150.0, 399.0, kQuad) >= 0.0);
}

TEST_CASE("positive current coincides with the current as dp -> 0") {
    const ScatteringModel free_model = ScatteringModel::free();
    // fixed t/t0 = 0.8, X - x0 = 3 sigma_x; relative gap shrinks ~ (dp/p0)^2
    double prev_gap = 0.0;
    bool first = true;
    for (double dp : {0.01, 0.005, 0.0025}) {
        const double x_rel = 3.0 / (2.0 * dp);
        const double t = 0.8 * x_rel / 0.5;
        const StateSpec state(GaussianPacket(0.5, dp, 0.0));
        const double j = expectation_J(state, free_model, x_rel, t, kQuad);
        const double jp = expectation_Jplus(state, free_model, x_rel, t, kQuad);
        const double gap = std::abs(jp - j) / jp;
        if (!first) {
            const double ratio = prev_gap / gap;
            REQUIRE(ratio == Approx(4.0).margin(0.5));
        }
        prev_gap = gap;
        first = false;
    }
}

TEST_CASE("arrival distribution normalizes and degenerates correctly") {
    QuadratureSpec quad;
    const GaussianPacket g(0.5, 0.01, 0.0);
    const StateSpec state(g);
    const ScatteringModel free_model = ScatteringModel::free();
    const double tr = transmittance(state, free_model, quad);
    REQUIRE(tr == Approx(1.0).epsilon(1e-9));

    // P_X == J+ in the free case
    const double px = arrival_distribution(state, free_model, 150.0, 300.0, quad, tr);
    const double jp = expectation_Jplus(state, free_model, 150.0, 300.0, quad);
    REQUIRE(px == Approx(jp).epsilon(1e-8));

    // integral over a window holding all but ~1e-15 of the mass
    const double t0 = 300.0, sigma_t = 100.0;
    const auto integrand = [&](double t) -> cplx {
        return {arrival_distribution(state, free_model, 150.0, t, quad, tr), 0.0};
    };
    const auto rate = [](double) { return 0.62 * 0.62 / 2.0; };
    const auto mass = integrate_intervals(integrand, {{t0 - 8.0 * sigma_t, t0 + 8.0 * sigma_t}},
                                          rate, quad);
    REQUIRE(mass.real() == Approx(1.0).margin(1e-4));

    // fully reflecting: huge barrier makes the transmitted norm underflow
    const ScatteringModel wall = ScatteringModel::barrier_from_p(5000.0, 0.8);
    REQUIRE_THROWS_AS(arrival_distribution(state, wall, 150.0, 100.0, quad), std::domain_error);
}

TEST_CASE("transmitted position density: free gaussian at t = 0") {
    const GaussianPacket g(0.5, 0.01, -10.0);
    const StateSpec state(g);
    const ScatteringModel free_model = ScatteringModel::free();
    const double sx = g.spatial_spread();
    for (double x : {-110.0, -40.0, -10.0, 30.0, 90.0}) {
        const double rho = transmitted_position_density(state, free_model, x, 0.0, kQuad);
        const double u = (x - g.x0) / sx;
        const double expect = std::exp(-0.5 * u * u) / (sx * std::sqrt(2.0 * kPi));
        REQUIRE(rho == Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("transmitted density integrates to the transmittance") {
    QuadratureSpec quad;
    const GaussianPacket g(0.5, 0.01, -201.8);
    const StateSpec state(g);
    const ScatteringModel barrier = ScatteringModel::barrier_from_p(2.0, 0.8);
    const double tr = transmittance(state, barrier, quad);
    for (double t : {0.0, 785.0}) {
        const double below =
            position_tail_probability(state, barrier, 500.0, TailSide::Below, t, quad);
        const double above =
            position_tail_probability(state, barrier, 500.0, TailSide::Above, t, quad);
        REQUIRE(below + above == Approx(tr).margin(1e-6 * tr + 1e-10));
    }
}

TEST_CASE("free packet variance grows with the spreading factor") {
    QuadratureSpec quad;
    const GaussianPacket g(0.5, 0.01, 0.0);
    const StateSpec state(g);
    const ScatteringModel free_model = ScatteringModel::free();
    const double t = 400.0;
    const auto moment = [&](int n) {
        const auto f = [&](double x) -> cplx {
            const double rho = transmitted_position_density(state, free_model, x, t, quad);
            return {rho * std::pow(x, n), 0.0};
        };
        const auto rate = [](double) { return 0.65; };
        return integrate_intervals(f, {{-400.0, 800.0}}, rate, quad).real();
    };
    const double m0 = moment(0);
    const double mean = moment(1) / m0;
    const double var = moment(2) / m0 - mean * mean;
    const double sx = g.spatial_spread();
    const double growth = 1.0 + 4.0 * std::pow(g.dp, 4) * t * t;
    REQUIRE(m0 == Approx(1.0).epsilon(1e-6));
    REQUIRE(mean == Approx(0.5 * t).epsilon(1e-6));
    REQUIRE(var == Approx(sx * sx * growth).epsilon(1e-5));
}

TEST_CASE("position tails split symmetrically at the centroid") {
    const GaussianPacket g(0.5, 0.01, -7.0);
    const StateSpec state(g);
    const ScatteringModel free_model = ScatteringModel::free();
    const double below =
        position_tail_probability(state, free_model, -7.0, TailSide::Below, 0.0, kQuad);
    const double above =
        position_tail_probability(state, free_model, -7.0, TailSide::Above, 0.0, kQuad);
    REQUIRE(below == Approx(0.5).epsilon(1e-9));
    REQUIRE(above == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("switch-on residual of the published d=8 narrow row") {
    QuadratureSpec quad;
    const GaussianPacket g(0.5, 0.01, -275.4);
    const StateSpec state(g);
    const ScatteringModel barrier = ScatteringModel::barrier_from_p(8.0, 0.8);
    const double tr = transmittance(state, barrier, quad);
    const double tail =
        position_tail_probability(state, barrier, 8.0, TailSide::Below, 933.0, quad);
    // the published window parameters sit at the 1e-4 * transmittance level
    REQUIRE(tail / tr > 0.5e-4);
    REQUIRE(tail / tr < 2.0e-4);
}
