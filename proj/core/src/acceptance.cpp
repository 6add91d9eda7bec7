#include "tp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tp/oracles.hpp"
#include "tp/special_functions.hpp"
#include "tp/validation.hpp"

namespace tp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1. dispersion relation: neutral exactly at k = +-1, damped elsewhere
CriterionResult criterion_dispersion(int) {
    CriterionResult res;
    res.id = 1;
    res.name = "dispersion: lambda(+-1,0)=0 and lambda(k,0)<0 off-critical";
    Grid1D g(32, 256);
    bool ok = std::abs(dispersion(1.0, 0.0)) <= 1e-15 && std::abs(dispersion(-1.0, 0.0)) <= 1e-15;
    double worst = -1.0;
    for (int i = 0; i < g.n_points; ++i) {
        double k = g.wavenumber(i);
        if (std::abs(std::abs(k) - 1.0) < 1e-12) continue;
        double lam = dispersion(k, 0.0);
        worst = std::max(worst, lam);
        if (lam >= 0.0) ok = false;
    }
    res.pass = ok;
    res.detail = "max off-critical lambda = " + fmt(worst);
    return res;
}

// 2. hierarchy golden values and exhaustive enumerator/oracle agreement
CriterionResult criterion_hierarchy(int) {
    CriterionResult res;
    res.id = 2;
    res.name = "hierarchy: golden cubic lists, graph values, oracle N<=6";
    std::ostringstream detail;
    bool ok = true;

    // a_{11} = 3 A |A|^2
    auto a11 = enumerate_cubic(1, 1, 4);
    ok &= a11.size() == 1 && a11[0].mult == 3 && a11[0].f[0] == ModeIndex{-1, 1} &&
          a11[0].f[1] == ModeIndex{1, 1} && a11[0].f[2] == ModeIndex{1, 1};

    // a_{12} = 3 A^2 conj(A2) + 6 |A|^2 A2
    auto a12 = enumerate_cubic(1, 2, 5);
    bool found3 = false, found6 = false;
    for (const auto& t : a12) {
        if (t.mult == 3 && t.f[0] == ModeIndex{-1, 2} && t.f[1] == ModeIndex{1, 1} &&
            t.f[2] == ModeIndex{1, 1})
            found3 = true;
        if (t.mult == 6 && t.f[0] == ModeIndex{-1, 1} && t.f[1] == ModeIndex{1, 1} &&
            t.f[2] == ModeIndex{1, 2})
            found6 = true;
    }
    ok &= found3 && found6 && a12.size() == 2;

    // graph values at n = 4: A01 = A21 = 0, A31 = -A11^3/64
    Grid1D slow(8, 64);
    ModulationSet ms(slow, 4);
    ms.set_field(1, 1, ComplexField::constant(slow, cdouble(2.0, 0.0)));
    ModulationSet filled = gl_graph_eval(ms, ChartScalars{2, -1.0}, {});
    ok &= filled.stored(0, 1).max_abs() == 0.0;
    ok &= filled.stored(2, 1).max_abs() == 0.0;
    ok &= filled.stored(0, 2).max_abs() == 0.0;
    ok &= filled.stored(2, 2).max_abs() == 0.0;
    double a31_err = 0.0;
    for (const auto& v : filled.stored(3, 1).values())
        a31_err = std::max(a31_err, std::abs(v - cdouble(-8.0 / 64.0, 0.0)));
    ok &= a31_err < 1e-14;
    detail << "A31 error " << fmt(a31_err);

    // exhaustive enumerator vs. polynomial oracle
    long checked = 0;
    for (int N = 3; N <= 6 && ok; ++N) {
        for (const auto& idx : all_indices(N)) {
            for (int shift : {0, 2}) {
                int w = idx.weight() + shift; // both equation slots
                auto a = enumerate_cubic_weight(idx.m, w, N);
                auto b = cubic_oracle(idx.m, w, N);
                if (a != b) {
                    ok = false;
                    detail << "; mismatch at N=" << N << " m=" << idx.m << " w=" << w;
                    break;
                }
                ++checked;
            }
            if (!ok) break;
        }
    }
    detail << "; oracle slots checked " << checked;
    res.pass = ok;
    res.detail = detail.str();
    return res;
}

// 3. residual order r^n for n in {4, 5}
CriterionResult criterion_residual_order(int workers) {
    CriterionResult res;
    res.id = 3;
    res.name = "residual order: || Res(r psi_n) || ~ r^n, n in {4,5}";
    std::ostringstream detail;
    bool ok = true;
    for (int n : {4, 5}) {
        ResidualOrderOptions opts;
        opts.order = n;
        opts.workers = workers;
        ResidualOrderResult r = residual_order_experiment(opts);
        bool this_ok = std::abs(r.fit.slope - n) <= 0.4 && r.fit.residual < 0.15;
        ok &= this_ok;
        detail << "n=" << n << ": slope " << fmt(r.fit.slope) << " resid " << fmt(r.fit.residual)
               << "; ";
    }
    res.pass = ok;
    res.detail = detail.str();
    return res;
}

// 4. static validity: error slopes of the classical ansatz
CriterionResult criterion_static(int workers) {
    CriterionResult res;
    res.id = 4;
    res.name = "static validity: ansatz error slopes over delta";
    StaticErrorOptions opts;
    opts.order = 4;
    opts.workers = workers;
    StaticErrorResult r = static_error_experiment(opts);
    bool ok = r.fit_gl.slope >= 1.3 && r.fit_n.slope >= 1.6;
    res.pass = ok;
    res.detail = "leading-order slope " + fmt(r.fit_gl.slope) + " (need >= 1.3), order-4 slope " +
                 fmt(r.fit_n.slope) + " (need >= 1.6)";
    return res;
}

// 5. dynamic validity: error at the mid section scales like eps^{(n-2)/4}
CriterionResult criterion_dynamic(int workers) {
    CriterionResult res;
    res.id = 5;
    res.name = "dynamic validity: mid-section error slope 0.75 +- 0.3 (n=5)";
    DynamicErrorOptions opts;
    opts.order = 5;
    opts.workers = workers;
    DynamicErrorResult r = dynamic_error_experiment(opts);
    res.pass = std::abs(r.fit.slope - 0.75) <= 0.3;
    res.detail = "slope " + fmt(r.fit.slope) + ", fit residual " + fmt(r.fit.residual);
    return res;
}

// 6. mid-section rolls: amplitude/sqrt(eps) converges when nu1 != 0;
//    exponential smallness when the source is off
CriterionResult criterion_mid_rolls(int workers) {
    CriterionResult res;
    res.id = 6;
    res.name = "mid-section rolls: eps^{1/2} amplitude law";
    std::ostringstream detail;

    MidAmplitudeOptions opts;
    opts.workers = workers;
    MidAmplitudeResult with_nu = mid_amplitude_check(opts);
    const auto& rows = with_nu.rows; // sorted by decreasing eps
    double r_small = rows[rows.size() - 1].ratio;
    double r_next = rows[rows.size() - 2].ratio;
    double variation = std::abs(r_small / r_next - 1.0);
    bool ok = variation < 0.2;
    detail << "ratio variation " << fmt(variation) << " (need < 0.2), prediction scale "
           << fmt(with_nu.prediction) << "; ";

    MidAmplitudeOptions zopts;
    zopts.mu_zero = true;
    zopts.workers = workers;
    MidAmplitudeResult no_nu = mid_amplitude_check(zopts);
    bool decay_ok = no_nu.decay_fit.slope < 0.0 && no_nu.decay_fit.residual < 1.0;
    ok &= decay_ok;
    detail << "mu=0: d(log amp)/d(1/eps) = " << fmt(no_nu.decay_fit.slope) << ", fit residual "
           << fmt(no_nu.decay_fit.residual) << ", kappa " << fmt(no_nu.kappa);

    res.pass = ok;
    res.detail = detail.str();
    return res;
}

// 7. linearized delay: exactly symmetric exit
CriterionResult criterion_delay_linear(int) {
    CriterionResult res;
    res.id = 7;
    res.name = "delayed loss (linear oracle): v_exit = rho_in exactly";
    DelayOptions opts;
    opts.mode = "linearized-log";
    opts.amplitude = 1e-3;
    opts.threshold = 1e-3; // threshold = initial amplitude
    opts.eps_list = {2e-3};
    DelayRecord rec = delay_single(2e-3, opts);
    res.pass = !rec.censored && std::abs(rec.v_exit - opts.rho_in) <= 1e-10;
    res.detail = "v_exit = " + fmt(rec.v_exit);
    return res;
}

// 8. full-system delay at eps = 2e-3
CriterionResult criterion_delay_full(int) {
    CriterionResult res;
    res.id = 8;
    res.name = "delayed loss (full system): kappa in (0.5,1.1), v_exit >= 0.55";
    DelayOptions opts;
    opts.eps_list = {2e-3};
    DelayRecord rec = delay_single(2e-3, opts);
    bool ok = !rec.censored && rec.v_exit >= 0.55 && rec.kappa_fit > 0.5 && rec.kappa_fit < 1.1;
    res.pass = ok;
    res.detail = "v_exit " + fmt(rec.v_exit) + ", fitted kappa " + fmt(rec.kappa_fit);
    return res;
}

// 9. chart machinery: conservation, round trips, global-time consistency
CriterionResult criterion_charts(int) {
    CriterionResult res;
    res.id = 9;
    res.name = "charts: r^4 eps conserved, kappa round trips, time consistency";
    std::ostringstream detail;
    bool ok = true;

    // conservation along the closed-form flows
    ChartFlow f1 = k1_flow(0.01, 0.1, 1.0);
    ChartFlow f3 = k3_flow(0.4, 0.1, 0.5);
    double worst_cons = 0.0;
    for (int i = 0; i <= 20; ++i) {
        double t1 = f1.T_end * i / 20.0;
        double c = std::pow(f1.radius(t1), 4) * f1.scalars(t1).value;
        worst_cons = std::max(worst_cons, std::abs(c / 0.01 - 1.0));
        double t3 = f3.T_end * i / 20.0;
        double c3 = std::pow(f3.radius(t3), 4) * f3.scalars(t3).value;
        worst_cons = std::max(worst_cons, std::abs(c3 / (0.1 * std::pow(0.4, 4)) - 1.0));
    }
    ok &= worst_cons <= 1e-14;
    detail << "conservation " << fmt(worst_cons);

    // kappa round trips on a constant-envelope modulation set
    Grid1D slow(8, 64);
    ModulationSet ms = roll_modset(slow, 5, cdouble(0.07, 0.02), 0.05, {{1, cdouble(0.3, 0.0)}});
    ChartPoint p1{ChartState{1, 0.8, 0.05, 0.0}, ms};
    ChartPoint back = kappa12_inverse(kappa12(p1));
    double worst_rt = std::abs(back.state.r - p1.state.r) + std::abs(back.state.aux - p1.state.aux);
    for (const auto& idx : ms.stored_indices()) {
        ComplexField d = back.modset.stored(idx.m, idx.j);
        d -= ms.stored(idx.m, idx.j);
        double ref = std::max(1e-30, ms.stored(idx.m, idx.j).max_abs());
        worst_rt = std::max(worst_rt, d.max_abs() / ref);
    }
    ChartPoint p2{ChartState{2, 0.3, 2.5, 0.0}, ms};
    ChartPoint back2 = kappa23_inverse(kappa23(p2));
    worst_rt = std::max(worst_rt, std::abs(back2.state.r - p2.state.r) +
                                      std::abs(back2.state.aux - p2.state.aux));
    ok &= worst_rt <= 1e-12;
    detail << ", round trip " << fmt(worst_rt);

    // blow-down / global-time consistency along a full passage
    SectionSpec sec;
    PassageOptions popts;
    popts.h_slow = 0.01;
    ModulationSet ms_in = roll_modset(slow, 5, cdouble(0.03, 0.0), 1e-3, {{1, cdouble(0.4, 0.0)}});
    PassageRecord rec = full_passage(ms_in, 1e-3, {{1, cdouble(0.4, 0.0)}}, sec,
                                     Grid1D(32, 256), popts);
    double worst_time = rec.ok ? 0.0 : 1.0;
    if (rec.ok) {
        for (const auto& s : rec.samples) {
            double v_from_time = -sec.rho_in + 1e-3 * s.t_global;
            worst_time = std::max(worst_time, std::abs(v_from_time - s.v) / std::max(1.0, std::abs(s.v)));
        }
        double t_mid_exact = (sec.rho_in + std::sqrt(1e-3) * sec.rho_mid_value()) / 1e-3;
        double t_exact = (sec.rho_in + sec.rho_out) / 1e-3;
        worst_time = std::max(worst_time, std::abs(rec.t_mid / t_mid_exact - 1.0));
        worst_time = std::max(worst_time, std::abs(rec.t_out / t_exact - 1.0));
    }
    ok &= worst_time <= 1e-6;
    detail << ", time consistency " << fmt(worst_time);

    res.pass = ok;
    res.detail = detail.str();
    return res;
}

// 10. special functions: closed form vs. quadrature on the parameter grid
CriterionResult criterion_special(int) {
    CriterionResult res;
    res.id = 10;
    res.name = "special functions: window integral vs. quadrature, monotone";
    const double alphas[] = {0.0, 0.5, 1.0, 2.0, 5.0};
    const double betas[] = {-0.05, -0.01, 0.0, 0.01, 0.05};
    const double gammas[] = {-1.0, -0.5, 0.0, 0.5, 0.75};
    double worst = 0.0;
    bool monotone = true;
    for (double alpha : alphas)
        for (double beta : betas)
            for (double gamma : gammas) {
                double t_domain = beta != 0.0 ? 0.98 / std::abs(beta) : 10.0;
                // stay where the integrand increments are representable, so
                // strict monotonicity is meaningful at double precision
                if (alpha > 0.0) t_domain = std::min(t_domain, 30.0 / alpha);
                double prev = 0.0;
                for (int k = 1; k <= 5; ++k) {
                    double t = t_domain * k / 5.0;
                    double closed = gamma_window_integral(alpha, beta, gamma, t);
                    auto integrand = [&](double s) {
                        return std::exp(-alpha * s) * std::pow(1.0 + beta * s, -gamma);
                    };
                    double quad = quad_adaptive(integrand, 0.0, t, 1e-13);
                    worst = std::max(worst, std::abs(closed - quad) / std::abs(quad));
                    if (closed <= prev) monotone = false;
                    prev = closed;
                }
            }
    res.pass = worst <= 1e-9 && monotone;
    res.detail = "worst relative difference " + fmt(worst) +
                 (monotone ? ", monotone" : ", NOT monotone");
    return res;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, bool print) {
    using Runner = CriterionResult (*)(int);
    const Runner runners[] = {
        criterion_dispersion, criterion_hierarchy, criterion_residual_order, criterion_static,
        criterion_dynamic,    criterion_mid_rolls, criterion_delay_linear,   criterion_delay_full,
        criterion_charts,     criterion_special,
    };
    std::vector<CriterionResult> results;
    for (int i = 0; i < 10; ++i) {
        int id = i + 1;
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
            continue;
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = runners[i](opts.workers);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (print) {
            std::printf("[%s] %2d. %s  (%.1fs)  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.seconds, r.detail.c_str());
            std::fflush(stdout);
        }
        results.push_back(std::move(r));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

} // namespace tp
