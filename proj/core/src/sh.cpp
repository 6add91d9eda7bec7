#include "tp/sh.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tp {

SpectralField SHParams::mu_field() const {
    SpectralField f(grid);
    for (const auto& [m, c] : nu) {
        if (m < 0) throw config_error("SHParams: store nu for m >= 0 only");
        int idx = m * grid.periods; // wavenumber m has grid index m*P
        f.set_mode(idx, c);
    }
    return f;
}

void SHParams::validate() const {
    if (eps < 0.0 || eps >= 1.0) throw config_error("eps must be in (0,1)");
    if (nu.count(0) && std::abs(nu.at(0).imag()) > 0.0)
        throw config_error("nu_0 must be real");
}

namespace {

// N(u) = -u^3 + eps*mu(x), fully dealiased.
SpectralField nonlinearity(const SpectralField& u, const SHParams& p, const SpectralField& mu) {
    SpectralField out = mu;
    out *= p.eps;
    if (!p.linearized) out -= u.cubed_dealiased();
    return out;
}

} // namespace

SHState step(const SHState& state, const SHParams& params, double h) {
    if (h > params.h_max) throw config_error("step: h exceeds h_max");
    SpectralField mu = params.mu_field();
    return [&] {
        const double v0 = state.v;
        const double eps = params.eps;
        auto phase_half = [&](double k) {
            return cdouble(linear_phase(k, v0, eps, 0.5 * h), 0.0);
        };
        auto phase_full = [&](double k) {
            return cdouble(linear_phase(k, v0, eps, h), 0.0);
        };
        auto phase_second_half = [&](double k) {
            return cdouble(linear_phase(k, v0 + eps * 0.5 * h, eps, 0.5 * h), 0.0);
        };

        SpectralField f0 = nonlinearity(state.u, params, mu);
        SpectralField pred = state.u;
        f0 *= 0.5 * h;
        pred += f0;
        pred = pred.propagated(phase_half);

        SpectralField fmid = nonlinearity(pred, params, mu);
        SpectralField out = state.u.propagated(phase_full);
        fmid = fmid.propagated(phase_second_half);
        fmid *= h;
        out += fmid;

        SHState next;
        next.u = out;
        next.t = state.t + h;
        next.v = state.v + params.eps * h; // v integrated in closed form
        return next;
    }();
}

Trajectory integrate(const SHState& state0, const SHParams& params, double t_end,
                     const std::vector<Observer>& observers, const IntegrateOptions& opts) {
    Trajectory traj;
    SHState s = state0;

    // Times where a step boundary must land exactly: section crossings (v is
    // affine in t so these are exact), snapshot times, observable samples.
    std::vector<std::pair<double, int>> events; // (time, kind): 0 obs, 1 snapshot, 2+ observer idx
    for (double t = 0.0; t <= t_end + 1e-12; t += opts.obs_interval)
        events.push_back({t, 0});
    for (double t : opts.snapshot_times)
        if (t >= s.t && t <= t_end) events.push_back({t, 1});
    for (size_t i = 0; i < observers.size(); ++i) {
        if (params.eps <= 0.0) break;
        double tc = (observers[i].v_section - state0.v) / params.eps;
        if (tc >= s.t - 1e-12 && tc <= t_end + 1e-9)
            events.push_back({std::clamp(tc, s.t, t_end), static_cast<int>(2 + i)});
    }
    events.push_back({t_end, -1});
    std::sort(events.begin(), events.end());

    auto record_obs = [&](const SHState& st) {
        ObservableRow row;
        row.t = st.t;
        row.v = st.v;
        row.norm_theta = hul_norm(st.u, opts.theta);
        row.max_abs = st.u.max_abs();
        row.mode1_abs = std::abs(st.u.mode(st.u.grid().periods));
        traj.observables.push_back(row);
    };

    auto fail = [&](const std::string& why) {
        traj.ok = false;
        traj.failure = why;
        traj.t_fail = s.t;
        traj.norm_at_fail = std::isfinite(s.u.max_abs()) ? hul_norm(s.u, opts.theta) : -1.0;
        traj.final_state = s;
    };

    for (const auto& [t_event, kind] : events) {
        // advance to t_event in steps of at most opts.h
        while (s.t < t_event - 1e-13) {
            double h = std::min(opts.h, t_event - s.t);
            SHState next = step(s, params, h);
            if (!std::isfinite(next.u.modes()[0].real()) ||
                !std::isfinite(next.u.max_abs())) {
                fail("non-finite state during integration");
                return traj;
            }
            s = next;
        }
        // pin the exact closed forms at event boundaries
        s.t = t_event;
        s.v = state0.v + params.eps * s.t;
        if (kind == 0) record_obs(s);
        if (kind == 1) traj.snapshots.push_back({s.t, s.u});
        if (kind >= 2) {
            const Observer& ob = observers[kind - 2];
            SectionHit hit;
            hit.name = ob.name;
            hit.t = s.t;
            hit.v = s.v;
            hit.u = s.u;
            hit.norm_theta = hul_norm(s.u, opts.theta);
            hit.mode1_abs = std::abs(s.u.mode(s.u.grid().periods));
            traj.hits.push_back(hit);
        }
    }
    traj.final_state = s;
    return traj;
}

std::vector<double> residual_of(const std::vector<std::pair<double, SpectralField>>& snapshots,
                                const SHParams& params,
                                const std::vector<double>& v_at_snapshots, int theta) {
    if (snapshots.size() < 3)
        throw config_error("residual_of: need at least 3 equally spaced snapshots");
    if (v_at_snapshots.size() != snapshots.size())
        throw config_error("residual_of: v values must match snapshots");
    const double dt = snapshots[1].first - snapshots[0].first;
    for (size_t i = 1; i + 1 < snapshots.size(); ++i) {
        double d = snapshots[i + 1].first - snapshots[i].first;
        if (std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw config_error("residual_of: snapshots not equally spaced");
    }

    SpectralField mu = params.mu_field();
    std::vector<double> norms;
    for (size_t i = 1; i + 1 < snapshots.size(); ++i) {
        const SpectralField& psi = snapshots[i].second;
        SpectralField dpsi_dt = snapshots[i + 1].second;
        dpsi_dt -= snapshots[i - 1].second;
        dpsi_dt *= 1.0 / (2.0 * dt);

        // (1 + dxx)^2 psi = psi + 2 psi'' + psi''''
        SpectralField lin = psi + 2.0 * psi.derivative(2) + psi.derivative(4);
        SpectralField res = mu;
        res *= params.eps;
        res -= dpsi_dt;
        res -= lin;
        SpectralField vpsi = psi;
        vpsi *= v_at_snapshots[i];
        res += vpsi;
        res -= psi.cubed_dealiased();
        norms.push_back(hul_norm(res, theta));
    }
    return norms;
}

SpectralField roll_ic(const Grid1D& g, double amplitude) {
    SpectralField f(g);
    f.set_mode(g.periods, cdouble(0.5 * amplitude, 0.0)); // a*cos(x) with peak = amplitude
    return f;
}

SpectralField gaussian_roll_ic(const Grid1D& g, double amplitude, double center, double width) {
    std::vector<double> samples(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        double x = g.x(i);
        // nearest periodic image
        double d = std::remainder(x - center, g.length());
        samples[i] = amplitude * std::exp(-d * d / (2.0 * width * width)) * std::cos(x);
    }
    return SpectralField::from_physical(g, samples);
}

SpectralField random_band_ic(const Grid1D& g, double amplitude, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    SpectralField f(g);
    for (int m = 1; m <= g.n_points / 2 - 1; ++m) {
        double k = static_cast<double>(m) / g.periods;
        if (std::abs(k - 1.0) >= 0.5) continue;
        f.set_mode(m, cdouble(unif(rng), unif(rng)));
    }
    double peak = f.max_abs();
    if (peak > 0.0) f *= amplitude / peak;
    return f;
}

} // namespace tp
