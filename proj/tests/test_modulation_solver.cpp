#include <doctest.h>

#include <cmath>

#include "tp/charts.hpp"
#include "tp/oracles.hpp"

using namespace tp;

namespace {

double max_diff(const ComplexField& a, const ComplexField& b) {
    ComplexField d = a;
    d -= b;
    return d.max_abs();
}

} // namespace

TEST_CASE("chart-1 homogeneous envelope follows a' = -a - 3a^3") {
    Grid1D g(8, 64);
    ModulationSet ms(g, 4);
    const double a0 = 0.6;
    ms.set_field(1, 1, ComplexField::constant(g, cdouble(a0, 0.0)));

    // eps1* -> 0: frozen chart-1 scalars with value 0
    ChartFlow flow = frozen_flow(ChartScalars{1, 0.0}, 1.0, 3.0);
    ModulationTrajectory traj = solve_modulation(ms, flow, {}, 3.0, 5e-4, {3.0});
    REQUIRE(traj.ok);

    auto rhs = [](double, cdouble a) { return -a - 3.0 * a * a * a; };
    cdouble oracle = rk4(rhs, cdouble(a0, 0.0), 0.0, 3.0, 30000);
    cdouble got = traj.sets.back().stored(1, 1).values()[0];
    CHECK(std::abs(got - oracle) / std::abs(oracle) < 1e-6);
}

TEST_CASE("chart-2 linear second-order equation matches its quadrature solution") {
    Grid1D g(8, 64);
    const double zeta = 0.1;
    const double v0 = -1.0 / std::sqrt(zeta);
    const cdouble nu1(0.7, 0.0);
    const cdouble a_star(0.05, -0.02);

    ModulationSet ms(g, 5);
    // A_{1,1} = 0: the j = 2 row is the linear inhomogeneous equation
    ms.set_field(1, 2, ComplexField::constant(g, a_star));

    ChartFlow flow = k2_flow(zeta, 1.0 / std::sqrt(zeta), 0.1);
    const double T2 = flow.T_end;
    ModulationTrajectory traj =
        solve_modulation(ms, flow, {{1, nu1}}, T2, 1e-3, {T2});
    REQUIRE(traj.ok);

    // integrating factor solution: A(t) = e^{I(t)} (A* + nu1 int_0^t e^{-I})
    auto I = [&](double t) { return v0 * t + 0.5 * t * t; };
    double src = quad_adaptive([&](double s) { return std::exp(-I(s)); }, 0.0, T2, 1e-12);
    cdouble expected = std::exp(I(T2)) * (a_star + nu1 * src);

    cdouble got = traj.sets.back().stored(1, 2).values()[0];
    CHECK(std::abs(got - expected) / std::abs(expected) < 1e-6);
}

TEST_CASE("zero data with zero source stays zero") {
    Grid1D g(8, 64);
    ModulationSet ms(g, 5);
    ChartFlow flow = k2_flow(0.1, 3.0, 0.2);
    ModulationTrajectory traj = solve_modulation(ms, flow, {}, flow.T_end, 0.01, {flow.T_end});
    REQUIRE(traj.ok);
    CHECK(traj.sets.back().max_abs() == 0.0);
}

TEST_CASE("evolution right-hand sides in each chart") {
    Grid1D g(8, 64);

    SUBCASE("chart 2, constant real envelope: dA = (v2 - 3a^2) a") {
        ModulationSet ms(g, 4);
        const double a = 0.4, v2 = 0.48;
        ms.set_field(1, 1, ComplexField::constant(g, cdouble(a, 0.0)));
        auto rhs = modulation_rhs(ms, ChartScalars{2, v2}, {});
        double expected = (v2 - 3.0 * a * a) * a;
        CHECK(std::abs(rhs.at(1).values()[0] - cdouble(expected, 0.0)) < 1e-13);

        // fixed point at a = sqrt(v2/3)
        ModulationSet fp(g, 4);
        fp.set_field(1, 1, ComplexField::constant(g, cdouble(std::sqrt(v2 / 3.0), 0.0)));
        CHECK(modulation_rhs(fp, ChartScalars{2, v2}, {}).at(1).max_abs() < 1e-14);
    }

    SUBCASE("chart 1 at eps1 = 0: pure damping form") {
        ModulationSet ms(g, 4);
        ComplexField a(g);
        for (int i = 0; i < g.n_points; ++i)
            a.values()[i] = cdouble(0.3 * std::cos(g.x(i) / 8.0), 0.1);
        ms.set_field(1, 1, a);
        ComplexField rhs = critical_rhs(ms, ChartScalars{1, 0.0}, {}, 1);
        ComplexField manual = cdouble(4.0, 0.0) * a.derivative(2);
        manual += cdouble(-1.0, 0.0) * a;
        ComplexField cubic = a * a * a.conj();
        cubic *= cdouble(3.0, 0.0);
        manual -= cubic;
        CHECK(max_diff(rhs, manual) < 1e-12);
    }

    SUBCASE("chart 3 at eps3 = 0: the classical amplitude equation") {
        ModulationSet ms(g, 4);
        ComplexField a(g);
        for (int i = 0; i < g.n_points; ++i)
            a.values()[i] = cdouble(0.2, -0.1) * std::exp(cdouble(0.0, g.x(i) / 8.0));
        ms.set_field(1, 1, a);
        ComplexField rhs = critical_rhs(ms, ChartScalars{3, 0.0}, {}, 1);
        ComplexField manual = cdouble(4.0, 0.0) * a.derivative(2);
        manual += a;
        ComplexField cubic = a * a * a.conj();
        cubic *= cdouble(3.0, 0.0);
        manual -= cubic;
        CHECK(max_diff(rhs, manual) < 1e-12);
    }
}

TEST_CASE("cascade solver is second order in the step") {
    Grid1D g(8, 64);
    std::map<int, cdouble> nu{{1, cdouble(0.4, 0.0)}};
    ModulationSet ms(g, 5);
    ComplexField a(g);
    for (int i = 0; i < g.n_points; ++i)
        a.values()[i] = cdouble(0.5 + 0.2 * std::cos(g.x(i) / 8.0), 0.1);
    ms.set_field(1, 1, a);

    ChartFlow flow = k2_flow(0.25, 1.0, 0.2);
    const double T = 1.5;
    auto run = [&](double h) {
        ModulationTrajectory t = solve_modulation(ms, flow, nu, T, h, {T});
        REQUIRE(t.ok);
        return t.sets.back();
    };
    ModulationSet ref = run(0.0005);
    auto err = [&](const ModulationSet& s) {
        double worst = 0.0;
        for (const auto& idx : s.stored_indices()) {
            ComplexField d = s.stored(idx.m, idx.j);
            d -= ref.stored(idx.m, idx.j);
            worst = std::max(worst, d.max_abs());
        }
        return worst;
    };
    double e1 = err(run(0.02));
    double e2 = err(run(0.01));
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("chart-2 assembly at r2 = eps^(1/4) is the classical static ansatz") {
    Grid1D slow(8, 64);
    Grid1D fast(32, 256);
    const double delta = 0.2; // r2 = delta = eps^{1/4}

    ModulationSet ms(slow, 5);
    ms.set_field(1, 1, ComplexField::constant(slow, cdouble(0.31, -0.12)));
    ms.set_field(1, 2, ComplexField::constant(slow, cdouble(-0.05, 0.04)));
    ms = gl_graph_eval(ms, ChartScalars{2, 0.7}, {{1, cdouble(0.2, 0.0)}});

    SpectralField psi = assemble_psi(ms, delta, fast);

    // classical form: sum_m sum_j delta^{alpha+j} A_mj e^{imx}, built directly
    std::vector<double> manual(fast.n_points, 0.0);
    for (int i = 0; i < fast.n_points; ++i) {
        double x = fast.x(i);
        cdouble acc = 0.0;
        for (const auto& idx : ms.stored_indices()) {
            cdouble a = ms.stored(idx.m, idx.j).values()[0];
            double w = std::pow(delta, idx.weight());
            if (idx.m == 0) {
                acc += w * a;
            } else {
                acc += w * a * std::exp(cdouble(0.0, idx.m * x));
                acc += w * std::conj(a) * std::exp(cdouble(0.0, -idx.m * x));
            }
        }
        manual[i] = acc.real();
    }
    auto ours = psi.to_physical();
    double worst = 0.0;
    for (int i = 0; i < fast.n_points; ++i)
        worst = std::max(worst, std::abs(ours[i] - manual[i]));
    CHECK(worst < 1e-10);
}
