#pragma once

namespace tp {

// Upper incomplete gamma function Gamma(a, z) = int_z^inf s^(a-1) e^(-s) ds
// for z >= 0. Series / continued fraction up to z = 30, asymptotic series
// beyond. a <= 0 requires z > 0.
double upper_gamma(double a, double z);

// exp(z) * Gamma(a, z); stays representable for large z.
double upper_gamma_scaled(double a, double z);

// Q(t) = int_0^t exp(-alpha s) (1 + beta s)^(-gamma) ds, evaluated in closed
// form through incomplete gamma functions (elementary antiderivative when
// beta == 0 or alpha == 0). Domain: t >= 0 and, for beta != 0, t < 1/|beta|.
double gamma_window_integral(double alpha, double beta, double gamma, double t);

// Standard error function (thin wrapper, keeps the artifact surface in one place).
double erf(double z);

} // namespace tp
