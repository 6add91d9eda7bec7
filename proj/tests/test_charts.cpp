#include <doctest.h>

#include <cmath>

#include "tp/charts.hpp"
#include "tp/oracles.hpp"
#include "tp/special_functions.hpp"
#include "tp/validation.hpp"

using namespace tp;

TEST_CASE("chart-1 base flow") {
    CHECK(k1_flow(0.1, 0.1, 1.0).T_end == doctest::Approx(0.0));
    ChartFlow f = k1_flow(0.01, 0.1, 1.0);
    CHECK(f.T_end == doctest::Approx(45.0).epsilon(1e-14));
    CHECK(f.scalars(f.T_end).value == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(f.radius(f.T_end) ==
          doctest::Approx(std::pow(0.01 / 0.1, 0.25)).epsilon(1e-12));
    CHECK_THROWS_AS(k1_flow(0.2, 0.1, 1.0), domain_error);
    CHECK_THROWS_AS(k1_flow(0.0, 0.1, 1.0), domain_error);
}

TEST_CASE("chart-2 base flow") {
    const double zeta = 0.1, rho_mid = 1.0 / std::sqrt(zeta);
    ChartFlow f = k2_flow(zeta, rho_mid, 0.2);
    CHECK(f.T_end == doctest::Approx(2.0 / std::sqrt(zeta)).epsilon(1e-14));
    CHECK(f.scalars(0.0).value == doctest::Approx(-1.0 / std::sqrt(zeta)).epsilon(1e-14));
    CHECK(f.scalars(f.T_end).value == doctest::Approx(rho_mid).epsilon(1e-12));
}

TEST_CASE("chart-3 base flow") {
    CHECK(k3_flow(std::sqrt(0.5), 0.1, 0.5).T_end == doctest::Approx(0.0).epsilon(1e-12));
    ChartFlow f = k3_flow(0.5, 0.1, 0.5);
    CHECK(f.T_end == doctest::Approx(15.0).epsilon(1e-14));
    CHECK(f.scalars(f.T_end).value ==
          doctest::Approx(0.1 * std::pow(0.5, 4) / 0.25).epsilon(1e-12));
    CHECK(f.radius(f.T_end) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(k3_flow(0.9, 0.1, 0.5), domain_error);
}

TEST_CASE("chart transitions at the boundary") {
    Grid1D slow(8, 64);
    ModulationSet ms = roll_modset(slow, 5, cdouble(0.05, 0.01), 0.04, {});
    const double zeta = 0.1, r1 = 0.76;

    ChartPoint p1{ChartState{1, r1, zeta, 0.0}, ms};
    ChartPoint p2 = kappa12(p1);
    CHECK(p2.state.chart == 2);
    CHECK(p2.state.aux == doctest::Approx(-1.0 / std::sqrt(zeta)).epsilon(1e-14));
    CHECK(p2.state.r == doctest::Approx(r1 * std::pow(zeta, 0.25)).epsilon(1e-14));

    // blow-down consistency: same (v, eps) and the same assembled field
    CHECK(p1.state.v() == doctest::Approx(p2.state.v()).epsilon(1e-12));
    CHECK(p1.state.eps() == doctest::Approx(p2.state.eps()).epsilon(1e-12));
    Grid1D fast(32, 256);
    SpectralField psi1 = assemble_psi(p1.modset, p1.state.r, fast);
    SpectralField psi2 = assemble_psi(p2.modset, p2.state.r, fast);
    SpectralField d = psi1;
    d -= psi2;
    CHECK(d.max_abs() / psi1.max_abs() < 1e-11);

    ChartPoint p2b{ChartState{2, 0.21, 3.7, 0.0}, ms};
    ChartPoint p3 = kappa23(p2b);
    CHECK(p2b.state.v() == doctest::Approx(p3.state.v()).epsilon(1e-12));
    CHECK(p2b.state.eps() == doctest::Approx(p3.state.eps()).epsilon(1e-12));
    SpectralField q2 = assemble_psi(p2b.modset, p2b.state.r, fast);
    SpectralField q3 = assemble_psi(p3.modset, p3.state.r, fast);
    q3 -= q2;
    CHECK(q3.max_abs() / q2.max_abs() < 1e-11);

    SUBCASE("domain guards") {
        CHECK_THROWS_AS(kappa12(ChartPoint{ChartState{1, 1.0, 0.0, 0.0}, ms}), domain_error);
        CHECK_THROWS_AS(kappa23(ChartPoint{ChartState{2, 1.0, -1.0, 0.0}, ms}), domain_error);
        CHECK_THROWS_AS(kappa12_inverse(ChartPoint{ChartState{2, 1.0, 0.5, 0.0}, ms}),
                        domain_error);
    }
}

TEST_CASE("f21: exact source response in chart 1") {
    const double zeta = 0.1;

    SUBCASE("T1 = 0 gives an empty integral") {
        CHECK(f21(zeta, zeta).exact == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("closed gamma form vs direct quadrature") {
        for (double eps1 : {0.02, 0.05, 0.08}) {
            double T1 = (1.0 / (2.0 * eps1)) * (1.0 - eps1 / zeta);
            // f21 = (zeta/eps1)^{1/4} eps1 int_0^{T1} e^{s-T1} (1-2 eps1 s)^{-3/4} ds
            auto integrand = [&](double s) {
                return std::exp(s - T1) * std::pow(1.0 - 2.0 * eps1 * s, -0.75);
            };
            double q = std::pow(zeta / eps1, 0.25) * eps1 *
                       quad_adaptive(integrand, 0.0, T1, 1e-13);
            CHECK(std::abs(f21(eps1, zeta).exact - q) / q < 1e-8);
        }
    }

    SUBCASE("leading approximation is close to zeta and to the exact value") {
        F21Result r = f21(1e-4, zeta);
        CHECK(std::abs(r.leading - zeta) / zeta < 0.15);
        CHECK(std::abs(r.exact - r.leading) < 1e-12);
    }
}

TEST_CASE("f22: chart-2 source response constant") {
    SUBCASE("statement and proof variants coincide iff rho_mid = zeta^{-1/2}") {
        const double zeta = 0.1;
        F22Result at_boundary = f22(1.0 / std::sqrt(zeta), zeta);
        CHECK(at_boundary.statement ==
              doctest::Approx(at_boundary.proof_variant).epsilon(1e-12));
        F22Result off = f22(1.0, zeta);
        CHECK(std::abs(off.statement - off.proof_variant) > 1e-6);
    }
    SUBCASE("small zeta saturates the second error-function term") {
        F22Result r = f22(1.0, 1e-4);
        double expected = std::sqrt(std::numbers::pi / 2.0) * std::exp(0.5) *
                          (tp::erf(1.0 / std::sqrt(2.0)) + 1.0);
        CHECK(r.statement == doctest::Approx(expected).epsilon(1e-10));
    }
    SUBCASE("explicit value at rho_mid = 1, zeta = 0.25") {
        double expected = std::sqrt(std::numbers::pi / 2.0) * std::exp(0.5) *
                          (tp::erf(1.0 / std::sqrt(2.0)) + tp::erf(std::sqrt(2.0)));
        CHECK(f22(1.0, 0.25).statement == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("a12 prediction formula") {
    const double zeta = 0.1;
    const cdouble nu1(0.7, 0.0);
    const double f210 = f21(1e-8, zeta).leading;

    SUBCASE("value at t2 = 0") {
        cdouble p = a12_prediction(0.0, zeta, nu1, f210);
        CHECK(std::abs(p - nu1 / std::sqrt(zeta) * f210) < 1e-14);
    }
    SUBCASE("the exponent is stationary at t2 = zeta^{-1/2}") {
        auto expo = [&](double t) { return -t / std::sqrt(zeta) + 0.5 * t * t; };
        double t_star = 1.0 / std::sqrt(zeta);
        double d = (expo(t_star + 1e-6) - expo(t_star - 1e-6)) / 2e-6;
        CHECK(std::abs(d) < 1e-9);
    }
    SUBCASE("comparison with the linear j = 2 solver (informational)") {
        // The remark behind this prediction leaves its justification open; we
        // record the comparison rather than gate on it.
        Grid1D slow(8, 64);
        ModulationSet ms(slow, 5);
        ms.set_field(1, 2,
                     ComplexField::constant(slow, nu1 / std::sqrt(zeta) * f210));
        ChartFlow flow = k2_flow(zeta, 1.0 / std::sqrt(zeta), 0.1);
        ModulationTrajectory traj =
            solve_modulation(ms, flow, {{1, nu1}}, flow.T_end, 1e-3, {flow.T_end});
        REQUIRE(traj.ok);
        cdouble solver = traj.sets.back().stored(1, 2).values()[0];
        cdouble guess = a12_prediction(flow.T_end, zeta, nu1, f210);
        CHECK(std::abs(solver) > 0.0);
        CHECK(std::abs(guess) > 0.0);
        double rel = std::abs(guess - solver) / std::abs(solver);
        MESSAGE("a12 guess ", std::abs(guess), " vs linear solver ", std::abs(solver),
                " (rel diff ", rel, ")");
        WARN_LT(rel, 0.25);
    }
}

TEST_CASE("global time reconstruction") {
    const double eps1 = 0.01, rho_in = 1.0;
    ChartFlow f1 = k1_flow(eps1, 0.1, std::sqrt(rho_in));
    double t1 = 30.0;
    double q = quad_adaptive(
        [&](double s) { return 1.0 / (f1.radius(s) * f1.radius(s)); }, 0.0, t1, 1e-13);
    CHECK(global_time_k1(eps1, rho_in, t1) == doctest::Approx(q).epsilon(1e-10));

    ChartFlow f3 = k3_flow(0.4, 0.1, 0.6);
    double t3 = 10.0;
    double q3 = quad_adaptive(
        [&](double s) { return 1.0 / (f3.radius(s) * f3.radius(s)); }, 0.0, t3, 1e-13);
    CHECK(global_time_k3(0.4, 0.1, t3) == doctest::Approx(q3).epsilon(1e-10));

    CHECK(global_time_k2(0.5, 3.0) == doctest::Approx(12.0).epsilon(1e-14));
}

TEST_CASE("full passage") {
    Grid1D slow(8, 64);
    Grid1D fast(32, 256);
    SectionSpec sec;
    PassageOptions opts;
    opts.h_slow = 0.01;

    SUBCASE("zero data stays zero at every section") {
        ModulationSet ms(slow, 5);
        PassageRecord rec = full_passage(ms, 1e-3, {}, sec, fast, opts);
        REQUIRE(rec.ok);
        for (const auto& s : rec.samples) CHECK(s.norm_theta == 0.0);
    }

    SUBCASE("preconditions") {
        ModulationSet big = roll_modset(slow, 5, cdouble(0.2, 0.0), 0.01, {});
        CHECK_THROWS_AS(full_passage(big, 1e-3, {}, sec, fast, opts), domain_error);
        ModulationSet ok = roll_modset(slow, 5, cdouble(0.03, 0.0), 0.01, {});
        CHECK_THROWS_AS(full_passage(ok, 0.2, {}, sec, fast, opts), domain_error);
    }

    SUBCASE("symmetric case: exponential smallness at the exit section") {
        // exit norms at two eps values; differencing removes the O(1) offset
        // from the decay/growth budget so the fitted constants are clean
        // both values keep the contracted envelope representable (~e^-500)
        std::vector<double> eps_list{1.5e-3, 1e-3};
        std::vector<double> inv2eps, log_out;
        double kappa = 0.0;
        for (double eps : eps_list) {
            ModulationSet ms = roll_modset(slow, 5, cdouble(0.05, 0.0), eps, {});
            PassageRecord rec = full_passage(ms, eps, {}, sec, fast, opts);
            REQUIRE(rec.ok);
            const PassageSample* out = rec.at("out");
            REQUIRE(out != nullptr);
            inv2eps.push_back(1.0 / (2.0 * eps));
            log_out.push_back(out->log_mode1 + std::log(2.0)); // roll norm = 2 |mode1|

            if (eps == eps_list.front()) {
                // contraction constant from the chart-1 leg of the trace
                std::vector<double> xs, ys;
                for (const auto& s : rec.samples) {
                    if (s.chart != 1 || !std::isfinite(s.log_mode1)) continue;
                    xs.push_back((s.v * s.v - sec.rho_in * sec.rho_in) / (2.0 * eps));
                    ys.push_back(s.log_mode1);
                }
                kappa = fit_line(xs, ys, 4).slope;
                // the cubic term only speeds the decay up; the fitted value
                // sits at the symmetric constant 1 up to fit noise
                CHECK(kappa > 0.8);
                CHECK(kappa < 1.0 + 1e-3);
            }
        }
        LineFit exit_fit = fit_line(inv2eps, log_out, 2);
        double kappa_plus =
            (sec.rho_in * sec.rho_in + exit_fit.slope / kappa) /
            (sec.rho_out * sec.rho_out);
        CHECK(kappa_plus > 1.0);
        CHECK(kappa_plus < 1.25);
        // exponential-smallness bound with the fitted constants
        CHECK(log_out[0] < -kappa *
                               (sec.rho_in * sec.rho_in -
                                kappa_plus * sec.rho_out * sec.rho_out) /
                               (2.0 * eps_list[0]) +
                           1.0);
    }

    SUBCASE("source case: mid-section amplitude scales like sqrt(eps)") {
        std::map<int, cdouble> nu{{1, cdouble(0.002, 0.0)}};
        std::vector<double> ratios;
        for (double eps : {2e-3, 1e-3}) {
            ModulationSet ms = roll_modset(slow, 5, cdouble(0.03, 0.0), eps, nu);
            PassageRecord rec = full_passage(ms, eps, nu, sec, fast, opts);
            REQUIRE(rec.ok);
            const PassageSample* mid = rec.at("mid");
            REQUIRE(mid != nullptr);
            ratios.push_back(mid->mode1_abs / std::sqrt(eps));
        }
        CHECK(ratios[0] > 0.0);
        CHECK(std::abs(ratios[1] / ratios[0] - 1.0) < 0.05);
    }

    SUBCASE("transition times blow down to T_mid and T") {
        const double eps = 2e-3;
        ModulationSet ms = roll_modset(slow, 5, cdouble(0.02, 0.0), eps, {});
        PassageRecord rec = full_passage(ms, eps, {}, sec, fast, opts);
        REQUIRE(rec.ok);
        double t_mid = (sec.rho_in + std::sqrt(eps) * sec.rho_mid_value()) / eps;
        double t_out = (sec.rho_in + sec.rho_out) / eps;
        CHECK(std::abs(rec.t_mid / t_mid - 1.0) < 1e-9);
        CHECK(std::abs(rec.t_out / t_out - 1.0) < 1e-9);
    }
}
