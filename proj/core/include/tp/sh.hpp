#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tp/hul_norm.hpp"
#include "tp/spectral_field.hpp"

namespace tp {

// Linear growth rate of the mode e^{ikx} about the homogeneous state.
inline double dispersion(double k, double v) {
    double q = 1.0 - k * k;
    return -q * q + v;
}

// Exact integral of dispersion(k, v0 + eps*s) over s in [0, h].
inline double linear_phase(double k, double v0, double eps, double h) {
    return dispersion(k, v0) * h + 0.5 * eps * h * h;
}

struct SHParams {
    double eps = 1e-3;                 // drift rate, eps in [0, 1); 0 = static run
    std::map<int, cdouble> nu;         // source coefficients nu_m for m >= 0 (nu_0 real)
    Grid1D grid{32, 256};
    double h_max = 0.25;
    bool linearized = false;           // drop the cubic term (diagnostics only)

    // mu(x) = sum_m nu_m e^{imx} with nu_{-m} = conj(nu_m).
    SpectralField mu_field() const;
    void validate() const;
};

struct SHState {
    SpectralField u;
    double v = 0.0;
    double t = 0.0;
};

// One second-order exponential midpoint step. The linear part is advanced by
// the exact mode-wise phase (the drift integral is closed form); the cubic and
// source are evaluated at a half-step predictor.
SHState step(const SHState& state, const SHParams& params, double h);

struct SectionHit {
    std::string name;
    double t = 0.0;
    double v = 0.0;
    SpectralField u;
    double norm_theta = 0.0;
    double mode1_abs = 0.0;
};

struct ObservableRow {
    double t, v, norm_theta, max_abs, mode1_abs;
};

struct Observer {
    std::string name;
    double v_section;
};

struct IntegrateOptions {
    double h = 0.05;
    int theta = 1;
    double obs_interval = 1.0;        // spacing of observable rows in fast time
    std::vector<double> snapshot_times;
    bool record_log_mode1 = true;     // keep the mode-1 log-amplitude trace
};

struct Trajectory {
    bool ok = true;
    std::string failure;
    double t_fail = 0.0;
    double norm_at_fail = 0.0;
    SHState final_state;
    std::vector<SectionHit> hits;
    std::vector<ObservableRow> observables;
    std::vector<std::pair<double, SpectralField>> snapshots;
    bool propagator_saturated = false;

    const SectionHit* hit(const std::string& name) const {
        for (const auto& h : hits)
            if (h.name == name) return &h;
        return nullptr;
    }
};

// Steps from state0 until t_end, firing observers when v crosses the requested
// section values. v is affine in t, so crossing times are scheduled exactly.
Trajectory integrate(const SHState& state0, const SHParams& params, double t_end,
                     const std::vector<Observer>& observers, const IntegrateOptions& opts);

// Residual norms hul_norm(-dPsi/dt - (1+dxx)^2 Psi + v Psi - Psi^3 + eps*mu, theta)
// at the interior times of >= 3 equally spaced snapshots; the time derivative
// is a centered finite difference with the recorded spacing.
std::vector<double> residual_of(const std::vector<std::pair<double, SpectralField>>& snapshots,
                                const SHParams& params,
                                const std::vector<double>& v_at_snapshots, int theta);

// Initial-condition families.
SpectralField roll_ic(const Grid1D& g, double amplitude);
SpectralField gaussian_roll_ic(const Grid1D& g, double amplitude, double center, double width);
SpectralField random_band_ic(const Grid1D& g, double amplitude, unsigned long long seed);

} // namespace tp
