#include "tp/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace tp {

ModulationSet::ModulationSet(const Grid1D& slow_grid, int order_n) : grid_(slow_grid) {
    if (order_n < 4 || order_n > 6)
        throw config_error("ModulationSet: order n must be in 4..6");
    N_ = order_n - 1;
    for (const auto& idx : all_indices(N_))
        if (idx.m >= 0) fields_.emplace(idx, ComplexField(grid_));
}

ComplexField ModulationSet::field(int m, int j) const {
    if (m >= 0) return stored(m, j);
    return stored(-m, j).conj();
}

const ComplexField& ModulationSet::stored(int m, int j) const {
    auto it = fields_.find(ModeIndex{m, j});
    if (it == fields_.end())
        throw domain_error("ModulationSet: no field at requested (m, j)");
    return it->second;
}

void ModulationSet::set_field(int m, int j, ComplexField f) {
    if (m < 0) throw domain_error("ModulationSet::set_field: store m >= 0 only");
    auto it = fields_.find(ModeIndex{m, j});
    if (it == fields_.end())
        throw domain_error("ModulationSet::set_field: invalid (m, j)");
    it->second = std::move(f);
}

std::vector<ModeIndex> ModulationSet::stored_indices() const {
    std::vector<ModeIndex> out;
    for (const auto& [idx, f] : fields_) out.push_back(idx);
    return out;
}

double ModulationSet::max_abs() const {
    double worst = 0.0;
    for (const auto& [idx, f] : fields_) worst = std::max(worst, f.max_abs());
    return worst;
}

const Hierarchy& hierarchy(int N) {
    static std::mutex mutex;
    static std::map<int, Hierarchy> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;

    Hierarchy h;
    h.N = N;
    for (const auto& idx : all_indices(N)) {
        if (idx.m < 0 || idx.critical()) continue;
        h.graph_slots.push_back(idx);
        h.graph_cubic[idx] = enumerate_cubic_weight(idx.m, idx.weight(), N);
    }
    std::stable_sort(h.graph_slots.begin(), h.graph_slots.end(),
                     [](const ModeIndex& a, const ModeIndex& b) {
                         return a.weight() != b.weight() ? a.weight() < b.weight() : a < b;
                     });
    for (int j = 1; j <= N - 2; ++j)
        h.critical_cubic[j] = enumerate_cubic_weight(1, j + 2, N);
    return cache.emplace(N, std::move(h)).first->second;
}

ComplexField evaluate_cubic(const ModulationSet& ms, const std::vector<CubicTerm>& terms) {
    ComplexField acc(ms.grid());
    for (const auto& term : terms) {
        ComplexField prod = ms.field(term.f[0].m, term.f[0].j);
        prod = prod * ms.field(term.f[1].m, term.f[1].j);
        prod = prod * ms.field(term.f[2].m, term.f[2].j);
        prod *= cdouble(static_cast<double>(term.mult), 0.0);
        acc += prod;
    }
    return acc;
}

ComplexField linear_op_apply(int i, int m, const ComplexField& f, const ChartScalars& sc,
                             const ComplexField* dt_f) {
    const double q = 1.0 - static_cast<double>(m) * m;
    switch (i) {
        case 0: // -(1 - m^2)^2
            return cdouble(-q * q, 0.0) * f;
        case 1: // -4im(1 - m^2) d/dx
            return cdouble(0.0, -4.0 * m * q) * f.derivative(1);
        case 2: { // -d/dt - r^{-1}dr - 2(1 - 3m^2)dxx + vbar
            if (!dt_f)
                throw domain_error("linear_op_apply: tilde L2 needs the time derivative");
            ComplexField out = cdouble(-1.0, 0.0) * (*dt_f);
            out += cdouble(-sc.rinv_dr() + sc.vbar(), 0.0) * f;
            out += cdouble(-2.0 * (1.0 - 3.0 * m * m), 0.0) * f.derivative(2);
            return out;
        }
        case 3: // -4im dxxx
            return cdouble(0.0, -4.0 * m) * f.derivative(3);
        case 4: // -dxxxx
            return cdouble(-1.0, 0.0) * f.derivative(4);
        default:
            throw domain_error("linear_op_apply: operator index must be 0..4");
    }
}

namespace {

cdouble nu_at(const std::map<int, cdouble>& nu, int m) {
    if (m >= 0) {
        auto it = nu.find(m);
        return it == nu.end() ? cdouble(0.0) : it->second;
    }
    auto it = nu.find(-m);
    return it == nu.end() ? cdouble(0.0) : std::conj(it->second);
}

// Time derivative of a stored field: evolution right-hand side for critical
// indices, differentiated graph formula otherwise. m may be negative.
ComplexField field_time_derivative(const ModulationSet& ms, const ChartScalars& sc,
                                   const std::map<int, cdouble>& nu, int m, int j) {
    ComplexField dt = std::abs(m) == 1 ? critical_rhs(ms, sc, nu, j)
                                       : graph_time_derivative(ms, sc, nu, std::abs(m), j);
    return m < 0 ? dt.conj() : dt;
}

// d/dt of the cubic sum, by the product rule.
ComplexField cubic_time_derivative(const ModulationSet& ms, const ChartScalars& sc,
                                   const std::map<int, cdouble>& nu,
                                   const std::vector<CubicTerm>& terms) {
    ComplexField acc(ms.grid());
    for (const auto& term : terms) {
        for (int d = 0; d < 3; ++d) {
            ComplexField prod = field_time_derivative(ms, sc, nu, term.f[d].m, term.f[d].j);
            for (int o = 0; o < 3; ++o)
                if (o != d) prod = prod * ms.field(term.f[o].m, term.f[o].j);
            prod *= cdouble(static_cast<double>(term.mult), 0.0);
            acc += prod;
        }
    }
    return acc;
}

// Right-hand side of the graph equation at (m, j), before applying -(L0)^{-1}.
ComplexField graph_bracket(const ModulationSet& ms, const ChartScalars& sc,
                           const std::map<int, cdouble>& nu, int m, int j) {
    const Hierarchy& h = hierarchy(ms.truncation());
    ComplexField bracket(ms.grid());
    if (j - 1 >= 1) bracket += linear_op_apply(1, m, ms.field(m, j - 1), sc);
    if (j - 2 >= 1) {
        ComplexField lower = ms.field(m, j - 2);
        ComplexField dt_lower = field_time_derivative(ms, sc, nu, m, j - 2);
        bracket += linear_op_apply(2, m, lower, sc, &dt_lower);
    }
    if (j - 3 >= 1) bracket += linear_op_apply(3, m, ms.field(m, j - 3), sc);
    if (j - 4 >= 1) bracket += linear_op_apply(4, m, ms.field(m, j - 4), sc);
    bracket -= evaluate_cubic(ms, h.graph_cubic.at(ModeIndex{m, j}));
    if (alpha_of(m) + j == 4)
        bracket += ComplexField::constant(ms.grid(), sc.source_factor() * nu_at(nu, m));
    return bracket;
}

} // namespace

ComplexField critical_rhs(const ModulationSet& ms, const ChartScalars& sc,
                          const std::map<int, cdouble>& nu, int j) {
    const Hierarchy& h = hierarchy(ms.truncation());
    if (j < 1 || j > ms.truncation() - 2)
        throw domain_error("critical_rhs: j outside 1..N-2");
    ComplexField a1 = ms.field(1, j);
    ComplexField rhs = cdouble(4.0, 0.0) * a1.derivative(2);
    rhs += cdouble(sc.damping(j), 0.0) * a1;
    rhs -= evaluate_cubic(ms, h.critical_cubic.at(j));
    if (j - 1 >= 1) rhs += cdouble(0.0, -4.0) * ms.field(1, j - 1).derivative(3);
    if (j - 2 >= 1) rhs -= ms.field(1, j - 2).derivative(4);
    if (j == 2)
        rhs += ComplexField::constant(ms.grid(), sc.source_factor() * nu_at(nu, 1));
    return rhs;
}

std::map<int, ComplexField> modulation_rhs(const ModulationSet& ms, const ChartScalars& sc,
                                           const std::map<int, cdouble>& nu) {
    std::map<int, ComplexField> out;
    for (int j = 1; j <= ms.truncation() - 2; ++j) out.emplace(j, critical_rhs(ms, sc, nu, j));
    return out;
}

ModulationSet gl_graph_eval(const ModulationSet& ms, const ChartScalars& sc,
                            const std::map<int, cdouble>& nu) {
    const Hierarchy& h = hierarchy(ms.truncation());
    ModulationSet out = ms;
    for (const auto& slot : h.graph_slots) {
        const double q = 1.0 - static_cast<double>(slot.m) * slot.m;
        const double inv_l0 = -1.0 / (q * q); // (L0)^{-1}
        ComplexField bracket = graph_bracket(out, sc, nu, slot.m, slot.j);
        bracket *= cdouble(-inv_l0, 0.0); // A = -(L0)^{-1} * bracket
        out.set_field(slot.m, slot.j, std::move(bracket));
    }
    return out;
}

ComplexField graph_time_derivative(const ModulationSet& ms, const ChartScalars& sc,
                                   const std::map<int, cdouble>& nu, int m, int j) {
    if (std::abs(m) == 1)
        throw domain_error("graph_time_derivative: (m, j) must be non-critical");
    const Hierarchy& h = hierarchy(ms.truncation());
    const double q = 1.0 - static_cast<double>(m) * m;
    ComplexField bracket(ms.grid());

    if (j - 1 >= 1)
        bracket += linear_op_apply(1, m, field_time_derivative(ms, sc, nu, m, j - 1), sc);
    if (j - 2 >= 1) {
        // d/dt of the tilde-L2 term.
        const ComplexField& lower = ms.stored(m, j - 2);
        ComplexField dt_lower = field_time_derivative(ms, sc, nu, m, j - 2);
        if (!lower.is_zero() || !dt_lower.is_zero()) {
            if (!lower.is_zero())
                throw domain_error(
                    "graph_time_derivative: second time derivative of a nonzero field "
                    "is outside the supported truncation range");
            // lower == 0 identically: only the first-derivative terms survive.
            ComplexField term = cdouble(-sc.rinv_dr() + sc.vbar(), 0.0) * dt_lower;
            term += cdouble(-2.0 * (1.0 - 3.0 * m * m), 0.0) * dt_lower.derivative(2);
            // -dt2(lower) contributes nothing for an identically zero field.
            bracket += term;
        }
    }
    if (j - 3 >= 1)
        bracket += linear_op_apply(3, m, field_time_derivative(ms, sc, nu, m, j - 3), sc);
    if (j - 4 >= 1)
        bracket += linear_op_apply(4, m, field_time_derivative(ms, sc, nu, m, j - 4), sc);
    bracket -= cubic_time_derivative(ms, sc, nu, h.graph_cubic.at(ModeIndex{m, j}));
    if (alpha_of(m) + j == 4)
        bracket += ComplexField::constant(ms.grid(), sc.d_source_factor() * nu_at(nu, m));

    bracket *= cdouble(1.0 / (q * q), 0.0); // -(L0)^{-1} = +1/(1-m^2)^2
    return bracket;
}

ModulationTrajectory solve_modulation(const ModulationSet& ms0, const ChartFlow& flow,
                                      const std::map<int, cdouble>& nu, double T, double h,
                                      const std::vector<double>& sample_times) {
    ModulationTrajectory traj;
    const int N = ms0.truncation();
    const Grid1D& g = ms0.grid();

    std::vector<double> samples = sample_times;
    samples.push_back(T);
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                  samples.end());

    ModulationSet ms = gl_graph_eval(ms0, flow.scalars(0.0), nu);
    double t = 0.0;

    auto diffusion_phase = [&](int /*j*/, double dt) {
        return [dt](double k) { return cdouble(-4.0 * k * k * dt, 0.0); };
    };
    auto apply_propagator = [&](const ComplexField& f, int j, double t0, double dt) {
        double damp = flow.damping_integral(j, t0, dt);
        ComplexField out = f.propagated(diffusion_phase(j, dt));
        out *= cdouble(std::exp(damp), 0.0);
        return out;
    };
    auto nonlinear_part = [&](const ModulationSet& set, const ChartScalars& sc, int j) {
        const Hierarchy& hh = hierarchy(N);
        ComplexField f(g);
        f -= evaluate_cubic(set, hh.critical_cubic.at(j));
        if (j - 1 >= 1) f += cdouble(0.0, -4.0) * set.field(1, j - 1).derivative(3);
        if (j - 2 >= 1) f -= set.field(1, j - 2).derivative(4);
        if (j == 2) f += ComplexField::constant(g, sc.source_factor() * nu_at(nu, 1));
        return f;
    };

    for (double t_sample : samples) {
        while (t < t_sample - 1e-13) {
            double dt = std::min(h, t_sample - t);
            ChartScalars sc0 = flow.scalars(t);
            ChartScalars sc_mid = flow.scalars(t + 0.5 * dt);

            // half-step predictor, cascade order j = 1, 2, ...
            ModulationSet pred = ms;
            for (int j = 1; j <= N - 2; ++j) {
                ComplexField f0 = nonlinear_part(ms, sc0, j);
                f0 *= cdouble(0.5 * dt, 0.0);
                ComplexField a = ms.field(1, j);
                a += f0;
                pred.set_field(1, j, apply_propagator(a, j, t, 0.5 * dt));
            }
            pred = gl_graph_eval(pred, sc_mid, nu);

            // full step with the midpoint nonlinearity
            ModulationSet next = ms;
            for (int j = 1; j <= N - 2; ++j) {
                ComplexField fm = nonlinear_part(pred, sc_mid, j);
                fm = apply_propagator(fm, j, t + 0.5 * dt, 0.5 * dt);
                fm *= cdouble(dt, 0.0);
                ComplexField a = apply_propagator(ms.field(1, j), j, t, dt);
                a += fm;
                next.set_field(1, j, std::move(a));
            }
            t += dt;
            ms = gl_graph_eval(next, flow.scalars(t), nu);

            if (!std::isfinite(ms.field(1, 1).max_abs())) {
                traj.ok = false;
                traj.failure = "non-finite modulation state";
                return traj;
            }
        }
        t = t_sample;
        traj.times.push_back(t);
        traj.sets.push_back(ms);
    }
    return traj;
}

SpectralField assemble_psi(const ModulationSet& ms, double r, const Grid1D& fast_grid) {
    if (r < 0.0) throw domain_error("assemble_psi: r must be nonnegative");
    SpectralField out(fast_grid);
    if (r == 0.0) return out;
    auto& target = out.modes();
    const int nf = fast_grid.n_points;
    const Grid1D& sg = ms.grid();

    for (const auto& idx : ms.stored_indices()) {
        const ComplexField& f = ms.stored(idx.m, idx.j);
        if (f.is_zero()) continue;
        const double scale = std::pow(r, idx.weight());
        auto coeffs = f.to_modes();
        for (int s = 0; s < sg.n_points; ++s) {
            cdouble c = coeffs[s];
            if (std::abs(c) < 1e-300) continue;
            // fast wavenumber m + r * (slow wavenumber); must land on the grid
            double fast_slot = idx.m * fast_grid.periods + r * sg.mode_index(s) *
                                   fast_grid.periods / static_cast<double>(sg.periods);
            double rounded = std::round(fast_slot);
            if (std::abs(fast_slot - rounded) > 1e-9)
                throw domain_error(
                    "assemble_psi: envelope mode does not land on a fast-grid wavenumber "
                    "(choose r*P/P_slow integral or a constant envelope)");
            int slot = static_cast<int>(rounded);
            if (slot <= -nf / 2 || slot >= nf / 2)
                throw domain_error("assemble_psi: envelope sideband outside the fast grid");
            cdouble contrib = scale * c;
            target[(slot + nf) % nf] += contrib;
            if (idx.m > 0) target[(nf - slot) % nf] += std::conj(contrib);
        }
    }
    return SpectralField::from_modes(fast_grid, out.modes());
}

} // namespace tp
