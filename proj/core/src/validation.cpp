#include "tp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tp/parallel.hpp"

namespace tp {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, int min_points) {
    if (x.size() != y.size() || static_cast<int>(x.size()) < min_points)
        throw config_error("fit_line: not enough points");
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-14 * std::max(1.0, sxx * n))
        throw config_error("fit_line: degenerate abscissa");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - fit.slope * x[i] - fit.intercept;
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

ScalingFit fit_loglog(const std::vector<double>& abscissa, const std::vector<double>& ordinate) {
    if (abscissa.size() < 4) throw config_error("fit_loglog: need at least 4 points");
    for (size_t i = 0; i < abscissa.size(); ++i)
        for (size_t k = i + 1; k < abscissa.size(); ++k)
            if (abscissa[i] == abscissa[k])
                throw config_error("fit_loglog: degenerate abscissa (duplicated value)");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < abscissa.size(); ++i) {
        if (abscissa[i] <= 0.0 || ordinate[i] <= 0.0)
            throw config_error("fit_loglog: nonpositive data");
        lx.push_back(std::log(abscissa[i]));
        ly.push_back(std::log(ordinate[i]));
    }
    LineFit lf = fit_line(lx, ly, 4);
    ScalingFit fit;
    fit.abscissa = abscissa;
    fit.ordinate = ordinate;
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.residual = lf.residual;
    return fit;
}

double weighted_error(const SpectralField& u, const SpectralField& psi_assembled, double r,
                      double beta, int theta) {
    if (r <= 0.0) throw domain_error("weighted_error: r must be positive");
    SpectralField diff = u;
    diff -= psi_assembled;
    return hul_norm(diff, theta) / std::pow(r, beta);
}

ModulationSet roll_modset(const Grid1D& slow_grid, int order, cdouble a11, double eps1_star,
                          const std::map<int, cdouble>& nu) {
    ModulationSet ms(slow_grid, order);
    ms.set_field(1, 1, ComplexField::constant(slow_grid, a11));
    return gl_graph_eval(ms, ChartScalars{1, eps1_star}, nu);
}

Grid1D commensurate_fast_grid(double scale, int slow_periods) {
    for (int P = 32; P <= 6000; ++P) {
        double slots = scale * P / slow_periods;
        if (std::abs(slots - std::round(slots)) < 1e-9 && std::round(slots) >= 1.0) {
            int n = 1;
            while (n < 8 * P) n *= 2;
            if (n > 16384) break;
            return Grid1D(P, n);
        }
    }
    throw config_error("commensurate_fast_grid: no commensurate grid for this scale");
}

// ---------------------------------------------------------------------------

DynamicErrorRun dynamic_error_single(double eps, const DynamicErrorOptions& opts,
                                     const SpectralField* perturbation) {
    const SectionSpec& sec = opts.sections;
    const double rho_in = sec.rho_in;
    const double eps1_star = eps / (rho_in * rho_in);
    std::map<int, cdouble> nu{{1, opts.nu1}};

    ModulationSet ms_in =
        roll_modset(opts.slow_grid, opts.order, cdouble(opts.a11, 0.0), eps1_star, nu);

    PassageOptions popts;
    popts.order = opts.order;
    popts.theta = opts.theta;
    popts.h_slow = opts.h_slow;
    popts.stop_at_mid = true;
    PassageRecord rec = full_passage(ms_in, eps, nu, sec, opts.fast_grid, popts);
    if (!rec.ok) throw domain_error("dynamic_error_single: passage failed: " + rec.failure);

    SHParams params;
    params.eps = eps;
    params.nu = nu;
    params.grid = opts.fast_grid;

    SHState s0;
    s0.u = assemble_psi(ms_in, std::sqrt(rho_in), opts.fast_grid);
    if (perturbation) s0.u += *perturbation;
    s0.v = -rho_in;
    s0.t = 0.0;

    const double t_mid = (rho_in + std::sqrt(eps) * sec.rho_mid_value()) / eps;
    IntegrateOptions iopts;
    iopts.h = opts.h_fast;
    iopts.theta = opts.theta;
    iopts.obs_interval = t_mid; // endpoints only
    Trajectory traj = integrate(s0, params, t_mid, {}, iopts);
    if (!traj.ok) throw domain_error("dynamic_error_single: SH integration failed");

    SpectralField psi_mid = assemble_psi(rec.modset_mid, rec.state_mid.r, opts.fast_grid);
    SpectralField diff = traj.final_state.u;
    diff -= psi_mid;

    DynamicErrorRun run;
    run.eps = eps;
    run.t_mid = t_mid;
    run.err_mid = hul_norm(diff, opts.theta);
    run.u_norm = hul_norm(traj.final_state.u, opts.theta);
    run.psi_norm = hul_norm(psi_mid, opts.theta);
    return run;
}

DynamicErrorResult dynamic_error_experiment(const DynamicErrorOptions& opts) {
    DynamicErrorResult result;
    std::vector<double> eps_sorted = opts.eps_list;
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    result.runs.resize(eps_sorted.size());
    parallel_for(static_cast<int>(eps_sorted.size()), opts.workers, [&](int i) {
        result.runs[i] = dynamic_error_single(eps_sorted[i], opts);
    });
    std::vector<double> xs, ys;
    for (const auto& run : result.runs) {
        xs.push_back(run.eps);
        ys.push_back(run.err_mid);
    }
    result.fit = fit_loglog(xs, ys);
    return result;
}

// ---------------------------------------------------------------------------

namespace {

ModulationSet keep_only_leading(const ModulationSet& ms) {
    ModulationSet out(ms.grid(), ms.order());
    out.set_field(1, 1, ms.stored(1, 1));
    return out;
}

ComplexField structured_envelope(const Grid1D& slow_grid, cdouble a11, double rel, int mode) {
    ComplexField f(slow_grid);
    for (int i = 0; i < slow_grid.n_points; ++i) {
        double xbar = slow_grid.x(i);
        double k = static_cast<double>(mode) / slow_grid.periods;
        f.values()[i] = a11 * (1.0 + rel * std::cos(k * xbar));
    }
    return f;
}

} // namespace

StaticErrorRun static_error_single(double delta, const StaticErrorOptions& opts) {
    Grid1D slow_grid(opts.slow_periods, opts.slow_points);
    std::map<int, cdouble> nu; // static runs have no source
    Grid1D fast = commensurate_fast_grid(delta, opts.slow_periods);

    ModulationSet ms(slow_grid, opts.order);
    ms.set_field(1, 1,
                 structured_envelope(slow_grid, opts.a11, opts.envelope_rel, opts.envelope_mode));
    ms = gl_graph_eval(ms, ChartScalars{3, 0.0}, nu);

    std::vector<double> samples;
    for (int i = 1; i <= opts.samples; ++i) samples.push_back(opts.T0 * i / opts.samples);
    ChartFlow flow = static_flow(delta, opts.T0);
    ModulationTrajectory mt = solve_modulation(ms, flow, nu, opts.T0, opts.h_slow, samples);
    if (!mt.ok) throw domain_error("static_error_single: modulation solve failed");

    SHParams params;
    params.eps = 0.0;
    params.grid = fast;

    SHState s0;
    s0.u = assemble_psi(ms, delta, fast);
    s0.v = delta * delta;

    IntegrateOptions iopts;
    iopts.h = opts.h_fast;
    iopts.theta = opts.theta;
    iopts.obs_interval = 2.0 * opts.T0 / (delta * delta); // no intermediate rows
    for (double tbar : mt.times) iopts.snapshot_times.push_back(tbar / (delta * delta));

    Trajectory traj = integrate(s0, params, opts.T0 / (delta * delta), {}, iopts);
    if (!traj.ok) throw domain_error("static_error_single: SH integration failed");
    if (traj.snapshots.size() != mt.times.size())
        throw domain_error("static_error_single: snapshot bookkeeping mismatch");

    StaticErrorRun run;
    run.delta = delta;
    for (size_t i = 0; i < mt.times.size(); ++i) {
        const SpectralField& u = traj.snapshots[i].second;
        SpectralField psi_n = assemble_psi(mt.sets[i], delta, fast);
        SpectralField psi_gl = assemble_psi(keep_only_leading(mt.sets[i]), delta, fast);
        SpectralField dn = u, dgl = u;
        dn -= psi_n;
        dgl -= psi_gl;
        run.err_n = std::max(run.err_n, hul_norm(dn, opts.theta));
        run.err_gl = std::max(run.err_gl, hul_norm(dgl, opts.theta));
    }
    return run;
}

StaticErrorResult static_error_experiment(const StaticErrorOptions& opts) {
    StaticErrorResult result;
    std::vector<double> deltas = opts.delta_list;
    std::sort(deltas.rbegin(), deltas.rend());
    result.runs.resize(deltas.size());
    parallel_for(static_cast<int>(deltas.size()), opts.workers, [&](int i) {
        result.runs[i] = static_error_single(deltas[i], opts);
    });

    std::vector<double> xs, y_gl, y_n;
    for (const auto& r : result.runs) {
        xs.push_back(r.delta);
        y_gl.push_back(r.err_gl);
        y_n.push_back(r.err_n);
    }
    result.fit_gl = fit_loglog(xs, y_gl);
    result.fit_n = fit_loglog(xs, y_n);
    return result;
}

// ---------------------------------------------------------------------------

MidAmplitudeRow mid_amplitude_single(double eps, const MidAmplitudeOptions& opts) {
    const SectionSpec& sec = opts.sections;
    const double rho_in = sec.rho_in;
    std::map<int, cdouble> nu;
    if (!opts.mu_zero) {
        if (opts.nu1 != cdouble(0.0)) nu[1] = opts.nu1;
        for (const auto& [m, c] : opts.nu_extra) nu[m] = c;
    }

    ModulationSet ms_in = roll_modset(opts.slow_grid, opts.order, cdouble(opts.a11, 0.0),
                                      eps / (rho_in * rho_in), nu);
    SHParams params;
    params.eps = eps;
    params.nu = nu;
    params.grid = opts.fast_grid;

    SHState s0;
    s0.u = assemble_psi(ms_in, std::sqrt(rho_in), opts.fast_grid);
    s0.v = -rho_in;

    const double t_mid = (rho_in + std::sqrt(eps) * sec.rho_mid_value()) / eps;
    IntegrateOptions iopts;
    iopts.h = opts.h_fast;
    iopts.theta = opts.theta;
    iopts.obs_interval = t_mid;
    Trajectory traj = integrate(s0, params, t_mid, {}, iopts);
    if (!traj.ok) throw domain_error("mid_amplitude_single: SH integration failed");

    MidAmplitudeRow row;
    row.eps = eps;
    row.mode1_abs = std::abs(traj.final_state.u.mode(opts.fast_grid.periods));
    row.ratio = row.mode1_abs / std::sqrt(eps);
    row.log_amp = row.mode1_abs > 0.0 ? std::log(row.mode1_abs)
                                      : -std::numeric_limits<double>::infinity();
    return row;
}

MidAmplitudeResult mid_amplitude_check(const MidAmplitudeOptions& opts) {
    MidAmplitudeResult result;
    std::vector<double> eps_sorted = opts.eps_list;
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    result.rows.resize(eps_sorted.size());
    parallel_for(static_cast<int>(eps_sorted.size()), opts.workers, [&](int i) {
        result.rows[i] = mid_amplitude_single(eps_sorted[i], opts);
    });

    result.prediction =
        std::abs(opts.nu1) * f22(opts.sections.rho_mid_value(), opts.sections.zeta).statement;

    if (opts.mu_zero) {
        std::vector<double> xs, ys;
        for (const auto& row : result.rows) {
            if (!std::isfinite(row.log_amp)) continue;
            xs.push_back(1.0 / row.eps);
            ys.push_back(row.log_amp);
        }
        result.decay_fit = fit_line(xs, ys, 3);
        result.kappa = -2.0 * result.decay_fit.slope /
                       (opts.sections.rho_in * opts.sections.rho_in);
    }
    return result;
}

// ---------------------------------------------------------------------------

DelayRecord delay_single(double eps, const DelayOptions& opts) {
    const double rho = opts.rho_in;
    DelayRecord rec;
    rec.eps = eps;
    rec.rho_in = rho;
    rec.threshold = opts.threshold;

    if (opts.mode == "linearized-log") {
        // log-amplitude of mode k is the exact drift integral:
        // log a(v) = log a0 + (-q^2 (v - v0) + (v^2 - v0^2)/2) / eps.
        const double k = static_cast<double>(opts.wavenumber_index);
        const double q2 = 1.0 - k * k;
        const double v0 = -rho;
        const double L = std::log(opts.threshold / opts.amplitude);
        if (L < 0.0) {
            rec.censored = false;
            rec.v_exit = v0; // already above threshold
        } else {
            double disc = (q2 - v0) * (q2 - v0) + 2.0 * eps * L;
            if (disc >= 0.0) {
                double v = q2 + std::sqrt(disc);
                if (v <= opts.v_end_factor * rho) {
                    rec.censored = false;
                    rec.v_exit = v;
                }
            }
        }
        const double v_hi = opts.v_end_factor * rho;
        for (double v = v0; v <= v_hi + 1e-12; v += opts.v_sample) {
            double logamp =
                std::log(opts.amplitude) + (-q2 * (v - v0) + 0.5 * (v * v - v0 * v0)) / eps;
            rec.trace.push_back({v, logamp});
        }
        std::vector<double> xs, ys;
        for (auto& [v, la] : rec.trace) {
            xs.push_back((v * v - rho * rho) / (2.0 * eps));
            ys.push_back(la);
        }
        rec.kappa_fit = fit_line(xs, ys, 3).slope;
        return rec;
    }
    if (opts.mode != "full") throw config_error("delay mode must be 'full' or 'linearized-log'");

    SHParams params;
    params.eps = eps;
    params.grid = opts.grid;
    if (opts.nu1 != cdouble(0.0)) params.nu[1] = opts.nu1;

    SHState s0;
    s0.u = roll_ic(opts.grid, opts.amplitude);
    s0.v = -rho;

    if (opts.threshold <= opts.amplitude) {
        rec.censored = false;
        rec.v_exit = -rho; // degenerate guard: already past the threshold
        return rec;
    }

    const double initial_norm = hul_norm(s0.u, opts.theta);
    const double exit_norm = (opts.threshold / opts.amplitude) * initial_norm;

    const double t_end = rho * (1.0 + opts.v_end_factor) / eps;
    IntegrateOptions iopts;
    iopts.h = opts.h;
    iopts.theta = opts.theta;
    iopts.obs_interval = opts.v_sample / eps;
    Trajectory traj = integrate(s0, params, t_end, {}, iopts);
    if (!traj.ok) throw domain_error("delay_single: SH integration failed");

    for (const auto& row : traj.observables)
        if (row.norm_theta > 0.0) rec.trace.push_back({row.v, std::log(row.norm_theta)});

    for (size_t i = 1; i < traj.observables.size(); ++i) {
        const auto& a = traj.observables[i - 1];
        const auto& b = traj.observables[i];
        if (b.norm_theta >= exit_norm && a.norm_theta < exit_norm && a.norm_theta > 0.0) {
            double la = std::log(a.norm_theta), lb = std::log(b.norm_theta);
            double frac = (std::log(exit_norm) - la) / (lb - la);
            rec.censored = false;
            rec.v_exit = a.v + frac * (b.v - a.v);
            break;
        }
    }

    std::vector<double> xs, ys;
    double v_hi = rec.censored ? 0.5 : std::min(rec.v_exit, 0.5);
    for (auto& [v, ln] : rec.trace) {
        if (v < -rho + 0.05 || v > v_hi) continue;
        xs.push_back((v * v - rho * rho) / (2.0 * eps));
        ys.push_back(ln);
    }
    rec.kappa_fit = fit_line(xs, ys, 3).slope;
    return rec;
}

std::vector<DelayRecord> delay_experiment(const DelayOptions& opts) {
    std::vector<DelayRecord> records(opts.eps_list.size());
    parallel_for(static_cast<int>(opts.eps_list.size()), opts.workers,
                 [&](int i) { records[i] = delay_single(opts.eps_list[i], opts); });
    return records;
}

// ---------------------------------------------------------------------------

double residual_order_single(double r, const ResidualOrderOptions& opts) {
    Grid1D slow_grid(opts.slow_periods, opts.slow_points);
    std::map<int, cdouble> nu{{1, opts.nu1}};
    Grid1D fast = commensurate_fast_grid(r, opts.slow_periods);

    ModulationSet ms(slow_grid, opts.order);
    ms.set_field(1, 1,
                 structured_envelope(slow_grid, opts.a11, opts.envelope_rel, opts.envelope_mode));
    ms = gl_graph_eval(ms, ChartScalars{2, opts.v2_start}, nu);

    // short chart-2 trajectory; r2 is constant along the flow
    ChartFlow flow;
    flow.chart = 2;
    flow.T_end = std::numeric_limits<double>::infinity();
    const double v0 = opts.v2_start;
    flow.scalars = [v0](double t) { return ChartScalars{2, v0 + t}; };
    flow.radius = [r](double) { return r; };
    flow.damping_integral = [v0](int, double t, double h) {
        return (v0 + t) * h + 0.5 * h * h;
    };

    const double dt2 = opts.fast_dt * r * r;
    std::vector<double> samples{opts.t2_window - dt2, opts.t2_window, opts.t2_window + dt2};
    ModulationTrajectory mt = solve_modulation(ms, flow, nu, samples.back(), opts.h_slow, samples);
    if (!mt.ok) throw domain_error("residual_order_single: modulation solve failed");

    SHParams params;
    params.eps = r * r * r * r; // chart-2 radius: eps = r^4
    params.nu = nu;
    params.grid = fast;

    std::vector<std::pair<double, SpectralField>> snaps;
    std::vector<double> v_at;
    for (size_t i = 0; i < mt.times.size(); ++i) {
        ModulationSet set = opts.manifold ? mt.sets[i] : keep_only_leading(mt.sets[i]);
        snaps.push_back({mt.times[i] / (r * r), assemble_psi(set, r, fast)});
        v_at.push_back(r * r * (v0 + mt.times[i]));
    }
    return residual_of(snaps, params, v_at, opts.theta).front();
}

ResidualOrderResult residual_order_experiment(const ResidualOrderOptions& opts) {
    ResidualOrderResult result;
    result.r = opts.r_list;
    result.res.resize(opts.r_list.size());
    parallel_for(static_cast<int>(opts.r_list.size()), opts.workers, [&](int i) {
        result.res[i] = residual_order_single(opts.r_list[i], opts);
    });
    result.fit = fit_loglog(result.r, result.res);
    return result;
}

} // namespace tp
