#pragma once

#include <optional>

#include "tp/modulation.hpp"
#include "tp/sh.hpp"

namespace tp {

// Chart identity plus its scalar variables and local time.
struct ChartState {
    int chart = 1;      // 1 | 2 | 3
    double r = 0.0;     // r_1 | r_2 | r_3
    double aux = 0.0;   // eps_1 | v_2 | eps_3
    double t_local = 0.0;

    double v() const { return chart == 1 ? -r * r : chart == 2 ? r * r * aux : r * r; }
    double eps() const {
        double r4 = r * r * r * r;
        return chart == 2 ? r4 : r4 * aux;
    }
};

struct SectionSpec {
    double rho_in = 1.0;
    double rho_mid = 0.0; // <= 0 means the default zeta^{-1/2}
    double rho_out = 0.5;
    double zeta = 0.1;
    double K = 0.1;

    double rho_mid_value() const { return rho_mid > 0.0 ? rho_mid : 1.0 / std::sqrt(zeta); }
};

// Base flows. T1 = (1/(2 eps1*)) (1 - eps1*/zeta) etc.; the radius/aux
// evaluators are exact, and r^4 * eps_l is a constant of the motion in
// charts 1 and 3.
ChartFlow k1_flow(double eps1_star, double zeta, double r1_star);
ChartFlow k2_flow(double zeta, double rho_mid, double r2);
ChartFlow k3_flow(double r3_star, double zeta, double rho_out);
// Chart 3 restricted to {eps3 = 0}: the classical amplitude equation with
// constant radius r = delta; horizon supplied by the caller.
ChartFlow static_flow(double delta, double t_end);
// Frozen scalars (tests): no drift, damping integral = damping * h.
ChartFlow frozen_flow(const ChartScalars& sc, double r, double t_end);

// Chart changes. Scalars per the affine transition maps; each envelope is
// multiplied by the matching power of (-v2) or eps3. Envelope fields must be
// spatially constant (or dilation-compatible) to cross charts exactly.
struct ChartPoint {
    ChartState state;
    ModulationSet modset;
};
ChartPoint kappa12(const ChartPoint& p);      // chart 1 -> 2, requires eps1 > 0
ChartPoint kappa12_inverse(const ChartPoint& p); // chart 2 -> 1, requires v2 < 0
ChartPoint kappa23(const ChartPoint& p);      // chart 2 -> 3, requires v2 > 0
ChartPoint kappa23_inverse(const ChartPoint& p); // chart 3 -> 2, requires eps3 > 0

// Exact integrating-factor value of the chart-1 second-order source response
// at t1 = T1, and the small-eps1 leading approximation for comparison.
struct F21Result {
    double exact = 0.0;
    double leading = 0.0; // e^{1/2 zeta} (zeta/8)^{1/4} Gamma(1/4, 1/(2 zeta))
};
F21Result f21(double eps1_star, double zeta);

// Chart-2 source response constant. statement: sqrt(pi/2) e^{rho_mid^2/2}
// (erf(rho_mid/sqrt2) + erf(1/sqrt(2 zeta))); the proof-variant prefactor is
// e^{1/2 zeta}. The two coincide only when rho_mid = zeta^{-1/2}.
struct F22Result {
    double statement = 0.0;
    double proof_variant = 0.0;
};
F22Result f22(double rho_mid, double zeta);

// Heat-kernel prediction for the first symmetry-broken correction:
// nu1 zeta^{-1/2} (f21(0) + t2) exp(-t2/sqrt(zeta) + t2^2/2).
cdouble a12_prediction(double t2, double zeta, cdouble nu1, double f210);

// Global (fast) time elapsed along one chart leg, t = int r(s)^{-2} ds,
// by closed-form antiderivatives.
double global_time_k1(double eps1_star, double rho_in, double t1);
double global_time_k2(double r2, double t2);
double global_time_k3(double r3_star, double zeta, double t3);

// Composed passage map Delta^in -> Delta^mid (-> Delta^out).
struct PassageOptions {
    int order = 5;
    int theta = 1;
    double h_slow = 0.005;
    bool stop_at_mid = false;
    int trace_samples = 24; // sampled rows along each leg for fitting/plots
};

struct PassageSample {
    std::string section; // "in", "mid", "out" or "trace"
    int chart = 0;
    double t_global = 0.0;
    double v = 0.0;
    double r_chart = 0.0;
    double norm_theta = 0.0;
    double mode1_abs = 0.0;
    double log_mode1 = 0.0; // log of the assembled mode-1 coefficient magnitude
};

struct PassageRecord {
    bool ok = true;
    std::string failure;
    double eps = 0.0;
    std::vector<PassageSample> samples;
    ModulationSet modset_mid;  // chart-2 set at the mid section
    ModulationSet modset_out;  // chart-3 set at the out section (if requested)
    ChartState state_mid, state_out;
    double t_mid = 0.0, t_out = 0.0;

    const PassageSample* at(const std::string& section) const {
        for (const auto& s : samples)
            if (s.section == section) return &s;
        return nullptr;
    }
};

// Runs the modulation equations chart by chart from the entry section
// v = -rho_in. The initial ModulationSet is in chart-1 variables.
PassageRecord full_passage(const ModulationSet& ms_in, double eps,
                           const std::map<int, cdouble>& nu, const SectionSpec& sections,
                           const Grid1D& fast_grid, const PassageOptions& opts);

} // namespace tp
