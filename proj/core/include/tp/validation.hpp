#pragma once

#include "tp/charts.hpp"
#include "tp/sh.hpp"

namespace tp {

// Ordinary least squares on (x, y); residual is the RMS misfit in y units.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, int min_points = 2);

// Log-log scaling fit; >= 4 points, distinct abscissas.
struct ScalingFit {
    std::vector<double> abscissa, ordinate;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS in log units
};
ScalingFit fit_loglog(const std::vector<double>& abscissa, const std::vector<double>& ordinate);

// ||u - psi||_{H^theta_ul} / r^beta.
double weighted_error(const SpectralField& u, const SpectralField& psi_assembled, double r,
                      double beta, int theta);

// Chart-1 modulation data for roll initial conditions: constant critical
// envelope a11, non-critical entries on the graph.
ModulationSet roll_modset(const Grid1D& slow_grid, int order, cdouble a11, double eps1_star,
                          const std::map<int, cdouble>& nu);

// ---------------------------------------------------------------------------
// dynamic validity: error of the blow-up approximation at the mid section

struct DynamicErrorOptions {
    std::vector<double> eps_list{4e-3, 2e-3, 1e-3, 5e-4};
    int workers = 1;
    int order = 5;
    int theta = 1;
    SectionSpec sections{};
    double a11 = 0.04;
    // small enough that the whole passage stays in the linear regime at the
    // listed eps values (the mid-section response is |nu1| * f22 ~ 371 |nu1|)
    cdouble nu1{0.002, 0.0};
    Grid1D fast_grid{32, 256};
    Grid1D slow_grid{8, 64};
    double h_fast = 0.05;
    double h_slow = 0.005;
};

struct DynamicErrorRun {
    double eps = 0.0;
    double err_mid = 0.0;   // ||u - Psi|| at T_mid
    double t_mid = 0.0;
    double u_norm = 0.0, psi_norm = 0.0;
};

// One comparison run; `perturbation` (optional) is added to the initial u.
DynamicErrorRun dynamic_error_single(double eps, const DynamicErrorOptions& opts,
                                     const SpectralField* perturbation = nullptr);

struct DynamicErrorResult {
    std::vector<DynamicErrorRun> runs;
    ScalingFit fit;
};
DynamicErrorResult dynamic_error_experiment(const DynamicErrorOptions& opts);

// ---------------------------------------------------------------------------
// static validity: classical amplitude-equation error over [0, T0/delta^2]

struct StaticErrorOptions {
    std::vector<double> delta_list{0.2, 0.15, 0.1, 0.07};
    int workers = 1;
    int order = 4;
    int theta = 1;
    double T0 = 1.0;
    double h_fast = 0.05;
    double h_slow = 0.005;
    int slow_periods = 8;
    int slow_points = 64;
    cdouble a11{0.5, 0.0};
    double envelope_rel = 0.3; // relative size of the cos(s x/P_slow) structure
    int envelope_mode = 1;
    int samples = 16; // error is the sup over these times
};

struct StaticErrorRun {
    double delta = 0.0;
    double err_gl = 0.0; // against the leading-order ansatz
    double err_n = 0.0;  // against the order-n ansatz
};

struct StaticErrorResult {
    std::vector<StaticErrorRun> runs;
    ScalingFit fit_gl, fit_n;
};
StaticErrorRun static_error_single(double delta, const StaticErrorOptions& opts);
StaticErrorResult static_error_experiment(const StaticErrorOptions& opts);

// Smallest P >= 32 with delta * P / slow_periods integral (exact spectral
// assembly of structured envelopes), together with its point count.
Grid1D commensurate_fast_grid(double scale, int slow_periods);

// ---------------------------------------------------------------------------
// mid-section roll amplitudes

struct MidAmplitudeOptions {
    std::vector<double> eps_list{4e-3, 2e-3, 1e-3};
    int workers = 1;
    cdouble nu1{0.002, 0.0};
    std::map<int, cdouble> nu_extra; // additional source bands (m >= 0)
    bool mu_zero = false; // source off: exponential-smallness branch
    int order = 5;
    int theta = 1;
    SectionSpec sections{};
    double a11 = 0.02;
    Grid1D fast_grid{32, 256};
    Grid1D slow_grid{8, 64};
    double h_fast = 0.05;
};

struct MidAmplitudeRow {
    double eps = 0.0;
    double mode1_abs = 0.0;
    double ratio = 0.0;    // mode1 / sqrt(eps)
    double log_amp = 0.0;  // log(mode1)
};

struct MidAmplitudeResult {
    std::vector<MidAmplitudeRow> rows;
    double prediction = 0.0; // |nu1| * f22 (order of magnitude only)
    LineFit decay_fit;       // log_amp against 1/eps (mu == 0 branch)
    double kappa = 0.0;      // -2 slope / rho_in^2
};
MidAmplitudeRow mid_amplitude_single(double eps, const MidAmplitudeOptions& opts);
MidAmplitudeResult mid_amplitude_check(const MidAmplitudeOptions& opts);

// ---------------------------------------------------------------------------
// delayed loss of stability

struct DelayOptions {
    std::vector<double> eps_list{2e-3};
    int workers = 1;
    double rho_in = 1.0;
    double amplitude = 1e-3;
    cdouble nu1{0.0, 0.0}; // symmetry-breaking source; measured, no threshold claim
    double threshold = 1e-2;          // exit when the norm reaches threshold/amplitude x initial
    std::string mode = "full";        // "full" | "linearized-log"
    int wavenumber_index = 1;         // mode k = index (linearized mode)
    int theta = 1;
    Grid1D grid{32, 256};
    double h = 0.05;
    double v_end_factor = 2.0;        // censor past v = factor * rho_in
    double v_sample = 0.02;           // v spacing of the recorded trace
};

struct DelayRecord {
    double eps = 0.0;
    double rho_in = 0.0;
    double threshold = 0.0;
    bool censored = true;
    double v_exit = 0.0;
    std::vector<std::pair<double, double>> trace; // (v, log norm-or-amplitude)
    double kappa_fit = 0.0; // slope of log||u|| against (v^2 - rho^2) / (2 eps)
};
DelayRecord delay_single(double eps, const DelayOptions& opts);
std::vector<DelayRecord> delay_experiment(const DelayOptions& opts);

// ---------------------------------------------------------------------------
// residual order of the assembled ansatz

struct ResidualOrderOptions {
    std::vector<double> r_list{0.4, 0.3, 0.2, 0.15, 0.1};
    int workers = 1;
    int order = 5;
    int theta = 1;
    int slow_periods = 8;
    int slow_points = 64;
    cdouble a11{0.5, 0.2};
    double envelope_rel = 0.3;
    int envelope_mode = 1;
    cdouble nu1{0.4, 0.0};
    double v2_start = -1.0;
    double t2_window = 0.05;  // short chart-2 trajectory before snapshotting
    double fast_dt = 0.02;    // fast-time snapshot spacing
    double h_slow = 2e-4;
    bool manifold = true;     // false: leading-envelope-only ablation
};

struct ResidualOrderResult {
    std::vector<double> r, res;
    ScalingFit fit;
};
double residual_order_single(double r, const ResidualOrderOptions& opts);
ResidualOrderResult residual_order_experiment(const ResidualOrderOptions& opts);

} // namespace tp
