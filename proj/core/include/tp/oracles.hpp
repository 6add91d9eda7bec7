#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "tp/mode_index.hpp"

namespace tp {

// Verification-only oracles: independent reference routes used by the
// acceptance suite and the unit tests. Nothing here is called from the
// simulation or hierarchy code paths.

// Adaptive Simpson quadrature to the requested absolute/relative tolerance.
double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-12);

// Classical RK4 for a scalar complex ODE y' = f(t, y).
std::complex<double> rk4(const std::function<std::complex<double>(double, std::complex<double>)>& f,
                         std::complex<double> y0, double t0, double t1, int steps);

// Cubic monomials at band m and radial weight w obtained by multiplying the
// truncated ansatz polynomial out symbolically (three successive products
// with bookkept factor multisets), independent of the combinatorial
// enumeration it checks.
std::vector<CubicTerm> cubic_oracle(int m, int w, int N);

} // namespace tp
