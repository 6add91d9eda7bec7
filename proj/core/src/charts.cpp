#include "tp/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tp/hul_norm.hpp"
#include "tp/special_functions.hpp"

namespace tp {

ChartFlow k1_flow(double eps1_star, double zeta, double r1_star) {
    if (eps1_star <= 0.0) throw domain_error("k1_flow: eps1* must be positive");
    if (eps1_star > zeta) throw domain_error("k1_flow: eps1* > zeta (already past the chart boundary)");
    ChartFlow flow;
    flow.chart = 1;
    flow.T_end = (1.0 / (2.0 * eps1_star)) * (1.0 - eps1_star / zeta);
    flow.scalars = [eps1_star](double t) {
        return ChartScalars{1, eps1_star / (1.0 - 2.0 * eps1_star * t)};
    };
    flow.radius = [eps1_star, r1_star](double t) {
        return r1_star * std::pow(1.0 - 2.0 * eps1_star * t, 0.25);
    };
    flow.damping_integral = [eps1_star](int, double t, double h) {
        double ratio = (1.0 - 2.0 * eps1_star * (t + h)) / (1.0 - 2.0 * eps1_star * t);
        return -h - 0.25 * std::log(ratio);
    };
    return flow;
}

ChartFlow k2_flow(double zeta, double rho_mid, double r2) {
    if (zeta <= 0.0) throw domain_error("k2_flow: zeta must be positive");
    ChartFlow flow;
    flow.chart = 2;
    const double v0 = -1.0 / std::sqrt(zeta);
    flow.T_end = -v0 + rho_mid;
    flow.scalars = [v0](double t) { return ChartScalars{2, v0 + t}; };
    flow.radius = [r2](double) { return r2; };
    flow.damping_integral = [v0](int, double t, double h) {
        return (v0 + t) * h + 0.5 * h * h;
    };
    return flow;
}

ChartFlow k3_flow(double r3_star, double zeta, double rho_out) {
    if (zeta <= 0.0) throw domain_error("k3_flow: entry eps3 must be positive");
    const double r4 = std::pow(r3_star, 4);
    if (r4 > rho_out * rho_out * (1.0 + 1e-12))
        throw domain_error("k3_flow: r3*^4 > rho_out^2 (already past the exit section)");
    ChartFlow flow;
    flow.chart = 3;
    flow.T_end = std::max(0.0, (rho_out * rho_out - r4) / (2.0 * zeta * r4));
    flow.scalars = [zeta](double t) { return ChartScalars{3, zeta / (1.0 + 2.0 * zeta * t)}; };
    flow.radius = [r3_star, zeta](double t) {
        return r3_star * std::pow(1.0 + 2.0 * zeta * t, 0.25);
    };
    flow.damping_integral = [zeta](int j, double t, double h) {
        double ratio = (1.0 + 2.0 * zeta * (t + h)) / (1.0 + 2.0 * zeta * t);
        // leading row keeps the opposite eps3/2 sign, as printed
        return j == 1 ? h + 0.25 * std::log(ratio) : h - 0.25 * std::log(ratio);
    };
    return flow;
}

ChartFlow static_flow(double delta, double t_end) {
    ChartFlow flow;
    flow.chart = 3;
    flow.T_end = t_end;
    flow.scalars = [](double) { return ChartScalars{3, 0.0}; };
    flow.radius = [delta](double) { return delta; };
    flow.damping_integral = [](int, double, double h) { return h; };
    return flow;
}

ChartFlow frozen_flow(const ChartScalars& sc, double r, double t_end) {
    ChartFlow flow;
    flow.chart = sc.chart;
    flow.T_end = t_end;
    flow.scalars = [sc](double) { return sc; };
    flow.radius = [r](double) { return r; };
    flow.damping_integral = [sc](int j, double, double h) { return sc.damping(j) * h; };
    return flow;
}

namespace {

// A_l2(x_l2) = scale^w A_l1(ratio * x_l2): dilate the spectrum; exact only
// when every populated mode lands on an integer slot of the target grid.
ComplexField dilate_scaled(const ComplexField& f, double ratio, double scale_w) {
    const Grid1D& g = f.grid();
    auto coeffs = f.to_modes();
    std::vector<cdouble> out(coeffs.size(), cdouble(0.0));
    for (int s = 0; s < g.n_points; ++s) {
        if (std::abs(coeffs[s]) < 1e-300) continue;
        double target = g.mode_index(s) * ratio;
        double rounded = std::round(target);
        if (std::abs(target - rounded) > 1e-9)
            throw domain_error(
                "chart change: envelope mode does not survive the dilation exactly "
                "(use spatially constant envelopes across charts)");
        int slot = static_cast<int>(rounded);
        if (slot <= -g.n_points / 2 || slot > g.n_points / 2)
            throw domain_error("chart change: dilated envelope mode leaves the slow grid");
        out[(slot + g.n_points) % g.n_points] += scale_w * coeffs[s];
    }
    return ComplexField::from_modes(g, out);
}

ModulationSet map_envelopes(const ModulationSet& ms, double factor_base, double ratio) {
    ModulationSet out = ms;
    for (const auto& idx : ms.stored_indices()) {
        double scale = std::pow(factor_base, idx.weight());
        out.set_field(idx.m, idx.j, dilate_scaled(ms.stored(idx.m, idx.j), ratio, scale));
    }
    return out;
}

} // namespace

ChartPoint kappa12(const ChartPoint& p) {
    if (p.state.chart != 1) throw domain_error("kappa12: expects a chart-1 state");
    if (p.state.aux <= 0.0) throw domain_error("kappa12: eps1 must be positive");
    const double eps1 = p.state.aux;
    ChartPoint out;
    out.state.chart = 2;
    out.state.aux = -1.0 / std::sqrt(eps1);        // v2
    out.state.r = p.state.r * std::pow(eps1, 0.25); // r2 = r1 eps1^{1/4}
    out.state.t_local = 0.0;
    // A_{mj,2} = (-v2)^{w/2} A_{mj,1}; x1 = (r1/r2) x2
    out.modset = map_envelopes(p.modset, std::pow(eps1, -0.25), std::pow(eps1, -0.25));
    return out;
}

ChartPoint kappa12_inverse(const ChartPoint& p) {
    if (p.state.chart != 2) throw domain_error("kappa12_inverse: expects a chart-2 state");
    if (p.state.aux >= 0.0) throw domain_error("kappa12_inverse: v2 must be negative");
    const double v2 = p.state.aux;
    ChartPoint out;
    out.state.chart = 1;
    out.state.aux = 1.0 / (v2 * v2);                  // eps1
    out.state.r = std::sqrt(-v2) * p.state.r;         // r1 = (-v2)^{1/2} r2
    out.state.t_local = 0.0;
    out.modset = map_envelopes(p.modset, std::pow(-v2, -0.5), std::pow(-v2, -0.5));
    return out;
}

ChartPoint kappa23(const ChartPoint& p) {
    if (p.state.chart != 2) throw domain_error("kappa23: expects a chart-2 state");
    if (p.state.aux <= 0.0) throw domain_error("kappa23: v2 must be positive");
    const double v2 = p.state.aux;
    ChartPoint out;
    out.state.chart = 3;
    out.state.aux = 1.0 / (v2 * v2);          // eps3
    out.state.r = p.state.r * std::sqrt(v2);  // r3 = v2^{1/2} r2
    out.state.t_local = 0.0;
    // A_{mj,3} = eps3^{w/4} A_{mj,2} (inverse of A_{mj,2} = eps3^{-w/4} A_{mj,3})
    out.modset = map_envelopes(p.modset, std::pow(out.state.aux, 0.25),
                               std::pow(out.state.aux, 0.25));
    return out;
}

ChartPoint kappa23_inverse(const ChartPoint& p) {
    if (p.state.chart != 3) throw domain_error("kappa23_inverse: expects a chart-3 state");
    if (p.state.aux <= 0.0) throw domain_error("kappa23_inverse: eps3 must be positive");
    const double eps3 = p.state.aux;
    ChartPoint out;
    out.state.chart = 2;
    out.state.aux = 1.0 / std::sqrt(eps3);             // v2
    out.state.r = std::pow(eps3, 0.25) * p.state.r;    // r2 = eps3^{1/4} r3
    out.state.t_local = 0.0;
    out.modset = map_envelopes(p.modset, std::pow(eps3, -0.25), std::pow(eps3, -0.25));
    return out;
}

F21Result f21(double eps1_star, double zeta) {
    if (eps1_star <= 0.0 || eps1_star > zeta) throw domain_error("f21: need 0 < eps1* <= zeta");
    F21Result res;
    const double z_zeta = 1.0 / (2.0 * zeta);
    const double z_eps = 1.0 / (2.0 * eps1_star);
    const double pref = std::pow(zeta / 8.0, 0.25);
    res.leading = pref * upper_gamma_scaled(0.25, z_zeta);
    res.exact = pref * (upper_gamma_scaled(0.25, z_zeta) -
                        std::exp(z_zeta - z_eps) * upper_gamma_scaled(0.25, z_eps));
    return res;
}

F22Result f22(double rho_mid, double zeta) {
    if (rho_mid <= 0.0 || zeta <= 0.0) throw domain_error("f22: arguments must be positive");
    const double erfs = erf(rho_mid / std::sqrt(2.0)) + erf(1.0 / std::sqrt(2.0 * zeta));
    const double base = std::sqrt(std::numbers::pi / 2.0) * erfs;
    F22Result res;
    res.statement = base * std::exp(0.5 * rho_mid * rho_mid);
    res.proof_variant = base * std::exp(0.5 / zeta);
    return res;
}

cdouble a12_prediction(double t2, double zeta, cdouble nu1, double f210) {
    return nu1 / std::sqrt(zeta) * (f210 + t2) *
           std::exp(-t2 / std::sqrt(zeta) + 0.5 * t2 * t2);
}

double global_time_k1(double eps1_star, double rho_in, double t1) {
    return (1.0 - std::sqrt(1.0 - 2.0 * eps1_star * t1)) / (rho_in * eps1_star);
}

double global_time_k2(double r2, double t2) { return t2 / (r2 * r2); }

double global_time_k3(double r3_star, double zeta, double t3) {
    return (std::sqrt(1.0 + 2.0 * zeta * t3) - 1.0) / (zeta * r3_star * r3_star);
}

namespace {

// log of the assembled mode-1 coefficient magnitude, computed from the slow
// means so it stays usable when the norm itself underflows.
double log_mode1_of(const ModulationSet& ms, double r) {
    cdouble sum = 0.0;
    for (const auto& idx : ms.stored_indices()) {
        if (idx.m != 1) continue;
        auto coeffs = ms.stored(1, idx.j).to_modes();
        sum += std::pow(r, idx.weight()) * coeffs[0];
    }
    double a = std::abs(sum);
    return a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
}

} // namespace

PassageRecord full_passage(const ModulationSet& ms_in, double eps,
                           const std::map<int, cdouble>& nu, const SectionSpec& sections,
                           const Grid1D& fast_grid, const PassageOptions& opts) {
    PassageRecord rec;
    rec.eps = eps;
    const double rho_in = sections.rho_in;
    const double zeta = sections.zeta;
    const double rho_mid = sections.rho_mid_value();
    if (eps <= 0.0) throw domain_error("full_passage: eps must be positive");
    const double eps1_star = eps / (rho_in * rho_in);
    if (eps1_star > zeta)
        throw domain_error("full_passage: eps > rho_in^2 * zeta (entry outside chart 1)");

    const double r1_star = std::sqrt(rho_in);
    {
        SpectralField psi1 = assemble_psi(ms_in, 1.0, fast_grid); // psi, not r*psi
        double norm = hul_norm(psi1, opts.theta);
        // small admission slack: data whose leading-order amplitude sits at K
        // carries higher-order graph content of relative size O(K^2)
        if (norm > sections.K * (1.0 + 1e-3))
            throw domain_error("full_passage: initial data exceeds the section bound K");
    }

    auto sample_leg = [&](const ChartFlow& flow, const ModulationTrajectory& traj,
                          double t_global_offset,
                          const std::function<double(double)>& leg_time) {
        for (size_t i = 0; i < traj.times.size(); ++i) {
            double tl = traj.times[i];
            PassageSample s;
            s.section = "trace";
            s.chart = flow.chart;
            s.r_chart = flow.radius(tl);
            ChartScalars sc = flow.scalars(tl);
            ChartState st{flow.chart, s.r_chart, sc.value, tl};
            s.v = st.v();
            s.t_global = t_global_offset + leg_time(tl);
            double r_assemble = s.r_chart;
            SpectralField psi = assemble_psi(traj.sets[i], r_assemble, fast_grid);
            s.norm_theta = hul_norm(psi, opts.theta);
            s.mode1_abs = std::abs(psi.mode(fast_grid.periods));
            s.log_mode1 = log_mode1_of(traj.sets[i], r_assemble);
            rec.samples.push_back(s);
        }
    };

    auto leg_samples = [&](double T) {
        std::vector<double> t;
        for (int i = 0; i <= opts.trace_samples; ++i)
            t.push_back(T * i / opts.trace_samples);
        return t;
    };

    // ---- chart 1: entry section to eps1 = zeta ----
    ChartFlow flow1 = k1_flow(eps1_star, zeta, r1_star);
    ModulationTrajectory leg1 =
        solve_modulation(ms_in, flow1, nu, flow1.T_end, opts.h_slow, leg_samples(flow1.T_end));
    if (!leg1.ok) {
        rec.ok = false;
        rec.failure = "chart-1 leg: " + leg1.failure;
        return rec;
    }
    sample_leg(flow1, leg1, 0.0,
               [&](double t) { return global_time_k1(eps1_star, rho_in, t); });
    rec.samples.front().section = "in";
    double t_global = global_time_k1(eps1_star, rho_in, flow1.T_end);

    // ---- chart change K1 -> K2 ----
    ChartPoint p1;
    p1.state = ChartState{1, flow1.radius(flow1.T_end), zeta, flow1.T_end};
    p1.modset = leg1.sets.back();
    ChartPoint p2 = kappa12(p1);

    // ---- chart 2: to the mid section v2 = rho_mid ----
    ChartFlow flow2 = k2_flow(zeta, rho_mid, p2.state.r);
    ModulationTrajectory leg2 =
        solve_modulation(p2.modset, flow2, nu, flow2.T_end, opts.h_slow, leg_samples(flow2.T_end));
    if (!leg2.ok) {
        rec.ok = false;
        rec.failure = "chart-2 leg: " + leg2.failure;
        return rec;
    }
    sample_leg(flow2, leg2, t_global,
               [&](double t) { return global_time_k2(p2.state.r, t); });
    rec.samples.back().section = "mid";
    t_global += global_time_k2(p2.state.r, flow2.T_end);
    rec.t_mid = t_global;
    rec.modset_mid = leg2.sets.back();
    rec.state_mid = ChartState{2, p2.state.r, rho_mid, flow2.T_end};

    if (opts.stop_at_mid) return rec;

    // ---- chart change K2 -> K3 ----
    ChartPoint q2;
    q2.state = rec.state_mid;
    q2.modset = rec.modset_mid;
    ChartPoint p3 = kappa23(q2);

    // ---- chart 3: to the exit section r3 = sqrt(rho_out) ----
    ChartFlow flow3 = k3_flow(p3.state.r, p3.state.aux, sections.rho_out);
    ModulationTrajectory leg3 =
        solve_modulation(p3.modset, flow3, nu, flow3.T_end, opts.h_slow, leg_samples(flow3.T_end));
    if (!leg3.ok) {
        rec.ok = false;
        rec.failure = "chart-3 leg: " + leg3.failure;
        return rec;
    }
    sample_leg(flow3, leg3, t_global,
               [&](double t) { return global_time_k3(p3.state.r, p3.state.aux, t); });
    rec.samples.back().section = "out";
    t_global += global_time_k3(p3.state.r, p3.state.aux, flow3.T_end);
    rec.t_out = t_global;
    rec.modset_out = leg3.sets.back();
    rec.state_out = ChartState{3, flow3.radius(flow3.T_end),
                               flow3.scalars(flow3.T_end).value, flow3.T_end};
    return rec;
}

} // namespace tp
