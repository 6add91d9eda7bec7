#include <doctest.h>

#include <cmath>

#include "tp/oracles.hpp"
#include "tp/sh.hpp"

using namespace tp;

namespace {

SpectralField shift_field(const SpectralField& f, double dx) {
    return f.propagated([dx](double k) { return cdouble(0.0, k * dx); });
}

double max_field_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d.max_abs();
}

} // namespace

TEST_CASE("dispersion and linear phase") {
    CHECK(dispersion(1.0, 0.0) == 0.0);
    CHECK(dispersion(-1.0, 0.0) == 0.0);
    CHECK(dispersion(0.0, 0.0) == -1.0);
    CHECK(dispersion(2.0, 0.5) == -8.5);

    CHECK(linear_phase(1.0, 0.0, 0.01, 10.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(linear_phase(1.7, 0.3, 0.05, 0.0) == 0.0);
    CHECK(linear_phase(1.0, -1.0, 0.0, 2.0) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("trivial state is invariant") {
    SHParams params;
    params.grid = Grid1D(4, 64);
    params.eps = 1e-2;
    SHState s;
    s.u = SpectralField(params.grid);
    s.v = -0.5;
    for (int i = 0; i < 20; ++i) s = step(s, params, 0.1);
    CHECK(s.u.max_abs() == 0.0);
    CHECK(s.v == doctest::Approx(-0.5 + 1e-2 * 2.0).epsilon(1e-13));
}

TEST_CASE("one step of a tiny roll matches the linear phase") {
    SHParams params;
    params.grid = Grid1D(4, 64);
    params.eps = 0.01;
    const double a = 1e-8, h = 0.2, v0 = -0.3;
    SHState s;
    s.u = SpectralField(params.grid);
    s.u.set_mode(4, cdouble(a, 0.0));
    s.v = v0;
    SHState next = step(s, params, h);
    double expected = a * std::exp(linear_phase(1.0, v0, params.eps, h));
    CHECK(std::abs(next.u.mode(4)) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("homogeneous states follow the scalar ODE") {
    // u' = -u + v u - u^3 with v = -1, against an RK4 oracle
    SHParams params;
    params.grid = Grid1D(1, 8);
    params.eps = 0.0;
    SHState s;
    s.u = SpectralField::from_physical(params.grid, std::vector<double>(8, 0.5));
    s.v = -1.0;

    auto rhs = [](double, cdouble u) { return -2.0 * u - u * u * u; };
    cdouble oracle = rk4(rhs, cdouble(0.5, 0.0), 0.0, 5.0, 20000);

    IntegrateOptions opts;
    opts.h = 0.002;
    opts.obs_interval = 10.0;
    Trajectory traj = integrate(s, params, 5.0, {}, opts);
    REQUIRE(traj.ok);
    double got = traj.final_state.u.mode(0).real();
    CHECK(std::abs(got - oracle.real()) / std::abs(oracle.real()) < 1e-6);
}

TEST_CASE("exactness on linear pure modes") {
    SHParams params;
    params.grid = Grid1D(4, 64);
    params.eps = 0.02;
    params.linearized = true; // cubic disabled
    const double T = 2.0, v0 = -0.4;
    SHState s;
    s.u = SpectralField(params.grid);
    s.u.set_mode(4, cdouble(0.3, 0.1));  // k = 1
    s.u.set_mode(8, cdouble(0.05, 0.0)); // k = 2
    s.v = v0;

    SHState cur = s;
    for (int i = 0; i < 40; ++i) cur = step(cur, params, T / 40.0);

    for (int idx : {4, 8}) {
        double k = params.grid.wavenumber(idx);
        cdouble expected =
            s.u.mode(idx) * std::exp(dispersion(k, v0) * T + 0.5 * params.eps * T * T);
        CHECK(std::abs(cur.u.mode(idx) - expected) / std::abs(expected) < 1e-10);
    }
}

TEST_CASE("self-convergence is second order") {
    SHParams params;
    params.grid = Grid1D(8, 128);
    params.eps = 0.01;
    params.nu[1] = cdouble(0.3, 0.0);
    SHState s0;
    s0.u = random_band_ic(params.grid, 0.1, 5);
    s0.v = -0.2;

    auto run = [&](double h) {
        SHState s = s0;
        int n = static_cast<int>(std::round(4.0 / h));
        for (int i = 0; i < n; ++i) s = step(s, params, h);
        return s.u;
    };
    SpectralField ref = run(0.0025);
    double e1 = max_field_diff(run(0.04), ref);
    double e2 = max_field_diff(run(0.02), ref);
    double e3 = max_field_diff(run(0.01), ref);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e2 / e3 >= 3.5);
}

TEST_CASE("odd symmetry when the source vanishes") {
    SHParams params;
    params.grid = Grid1D(8, 128);
    params.eps = 5e-3;
    SHState plus, minus;
    plus.u = random_band_ic(params.grid, 0.2, 9);
    minus.u = plus.u;
    minus.u *= -1.0;
    plus.v = minus.v = -0.3;

    IntegrateOptions opts;
    opts.h = 0.05;
    opts.obs_interval = 100.0;
    Trajectory tp_ = integrate(plus, params, 30.0, {}, opts);
    Trajectory tm = integrate(minus, params, 30.0, {}, opts);
    SpectralField neg = tm.final_state.u;
    neg *= -1.0;
    CHECK(max_field_diff(tp_.final_state.u, neg) < 1e-13);
}

TEST_CASE("translation equivariance when the source vanishes") {
    SHParams params;
    params.grid = Grid1D(8, 128);
    params.eps = 5e-3;
    const double dx = params.grid.dx();
    SHState a, b;
    a.u = random_band_ic(params.grid, 0.2, 13);
    b.u = shift_field(a.u, dx);
    a.v = b.v = -0.3;

    IntegrateOptions opts;
    opts.h = 0.05;
    opts.obs_interval = 100.0;
    SpectralField ua = integrate(a, params, 20.0, {}, opts).final_state.u;
    SpectralField ub = integrate(b, params, 20.0, {}, opts).final_state.u;
    CHECK(max_field_diff(shift_field(ua, dx), ub) < 1e-10);
}

TEST_CASE("integrate: exact section crossings") {
    SHParams params;
    params.grid = Grid1D(4, 64);
    params.eps = 2e-3;
    const double rho_in = 1.0, rho_mid = 3.0, rho_out = 0.5;
    SHState s;
    s.u = roll_ic(params.grid, 1e-3);
    s.v = -rho_in;

    std::vector<Observer> obs{{"mid", rho_mid * std::sqrt(params.eps)}, {"out", rho_out}};
    IntegrateOptions opts;
    opts.h = 0.05;
    opts.obs_interval = 1000.0;
    double t_end = (rho_in + rho_out) / params.eps;
    Trajectory traj = integrate(s, params, t_end, obs, opts);
    REQUIRE(traj.ok);

    const SectionHit* mid = traj.hit("mid");
    const SectionHit* out = traj.hit("out");
    REQUIRE(mid != nullptr);
    REQUIRE(out != nullptr);
    double t_mid = (rho_in + std::sqrt(params.eps) * rho_mid) / params.eps;
    CHECK(mid->t == doctest::Approx(t_mid).epsilon(1e-12));
    CHECK(out->t == doctest::Approx(t_end).epsilon(1e-12));

    Trajectory empty = integrate(s, params, 0.0, obs, opts);
    CHECK(empty.final_state.t == 0.0);
    CHECK(empty.observables.size() == 1);
}

TEST_CASE("residual of snapshots") {
    SHParams params;
    params.grid = Grid1D(8, 128);
    params.eps = 5e-3;
    params.nu[1] = cdouble(0.2, 0.0);

    SUBCASE("zero field with zero source has zero residual") {
        SHParams zero = params;
        zero.nu.clear();
        std::vector<std::pair<double, SpectralField>> snaps;
        for (int i = 0; i < 3; ++i) snaps.push_back({0.1 * i, SpectralField(params.grid)});
        auto norms = residual_of(snaps, zero, {0.0, 0.0, 0.0}, 1);
        CHECK(norms[0] == 0.0);
    }

    SUBCASE("too few snapshots") {
        std::vector<std::pair<double, SpectralField>> snaps(2, {0.0, SpectralField(params.grid)});
        CHECK_THROWS_AS(residual_of(snaps, params, {0.0, 0.0}, 1), config_error);
    }

    SUBCASE("exact-trajectory residual is finite-difference limited") {
        SHState s0;
        s0.u = random_band_ic(params.grid, 0.05, 21);
        s0.v = -0.1;
        auto residual_for = [&](double spacing) {
            IntegrateOptions opts;
            opts.h = 0.001; // stepper error well below the FD error
            opts.obs_interval = 1e9;
            opts.snapshot_times = {1.0 - spacing, 1.0, 1.0 + spacing};
            Trajectory traj = integrate(s0, params, 1.0 + spacing, {}, opts);
            std::vector<double> v;
            for (auto& [t, u] : traj.snapshots) v.push_back(s0.v + params.eps * t);
            return residual_of(traj.snapshots, params, v, 1)[0];
        };
        double coarse = residual_for(0.2);
        double fine = residual_for(0.1);
        CHECK(coarse / fine >= 3.5);
    }
}

TEST_CASE("initial-condition families") {
    Grid1D g(8, 128);
    SpectralField roll = roll_ic(g, 0.1);
    CHECK(roll.max_abs() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(roll.mode(g.periods) - cdouble(0.05, 0.0)) < 1e-14);

    SpectralField gauss = gaussian_roll_ic(g, 0.2, g.length() / 2, 3.0);
    CHECK(gauss.max_abs() <= 0.2 + 1e-9);
    CHECK(gauss.max_conj_asymmetry() < 1e-13);

    SpectralField r1 = random_band_ic(g, 0.1, 77);
    SpectralField r2 = random_band_ic(g, 0.1, 77);
    CHECK(max_field_diff(r1, r2) == 0.0); // same seed, same field
    for (int m = 0; m <= g.n_points / 2; ++m) {
        double k = static_cast<double>(m) / g.periods;
        if (std::abs(k - 1.0) >= 0.5) CHECK(std::abs(r1.mode(m)) == 0.0);
    }
}
