#include "tp/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tp/errors.hpp"

namespace tp {

namespace {

constexpr double kAsymptoticSwitch = 30.0;

// exp(z) * Gamma(a, z) via the asymptotic expansion
// Gamma(a,z) ~ e^-z z^(a-1) (1 + (a-1)/z + (a-1)(a-2)/z^2 + ...).
double asymptotic_scaled(double a, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 10; ++k) {
        double next = term * (a - k) / z;
        if (k > 3 && std::abs(next) >= std::abs(term)) break; // divergent tail
        term = next;
        sum += term;
        if (k >= 3 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::pow(z, a - 1.0) * sum;
}

// exp(z) * Gamma(a, z) by Lentz's continued fraction; valid for z >= a + 1.
double continued_fraction_scaled(double a, double z) {
    const double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::pow(z, a) * h;
}

// Regularized-style series for the lower incomplete gamma; valid for a > 0,
// z < a + 1. Returns gamma(a, z) (no scaling).
double lower_series(double a, double z) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= z / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-z + a * std::log(z));
}

// scaled_E(a, x) = e^-x * int_0^x eta^(a-1) e^eta d eta, a > 0, x >= 0.
// All series terms are positive; summed in log space to stay representable.
double scaled_E(double a, double x) {
    if (x == 0.0) return 0.0;
    const double lx = std::log(x);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    const int kmax = static_cast<int>(10.0 * x) + 500;
    for (int k = 0; k < kmax; ++k) {
        double lt = (a + k) * lx - std::lgamma(k + 1.0) - std::log(a + k);
        logs.push_back(lt);
        peak = std::max(peak, lt);
        if (k > x && lt < peak - 45.0) break;
    }
    double sum = 0.0;
    for (double lt : logs) sum += std::exp(lt - peak);
    return std::exp(peak - x) * sum;
}

} // namespace

double upper_gamma_scaled(double a, double z) {
    if (z < 0.0) throw domain_error("upper_gamma: z must be nonnegative");
    if (z == 0.0) {
        if (a <= 0.0) throw domain_error("upper_gamma: a <= 0 requires z > 0");
        return std::tgamma(a);
    }
    if (z > kAsymptoticSwitch) return asymptotic_scaled(a, z);
    if (z >= a + 1.0 || a <= 0.0) return continued_fraction_scaled(a, z);
    return std::exp(z) * (std::tgamma(a) - lower_series(a, z));
}

double upper_gamma(double a, double z) {
    return std::exp(-z) * upper_gamma_scaled(a, z);
}

double gamma_window_integral(double alpha, double beta, double gamma, double t) {
    if (t < 0.0) throw domain_error("gamma_window_integral: t must be nonnegative");
    if (beta != 0.0 && t >= 1.0 / std::abs(beta))
        throw domain_error("gamma_window_integral: t outside [0, 1/|beta|)");
    if (t == 0.0) return 0.0;

    if (beta == 0.0)
        return alpha == 0.0 ? t : (1.0 - std::exp(-alpha * t)) / alpha;

    if (alpha == 0.0) {
        if (gamma == 1.0) return std::log1p(beta * t) / beta;
        return (std::pow(1.0 + beta * t, 1.0 - gamma) - 1.0) / (beta * (1.0 - gamma));
    }

    if (alpha < 0.0) {
        // Reverse the integration direction to reduce to decaying exponent:
        // Q(alpha,beta,gamma,t) = e^{-alpha t} (1+beta t)^{-gamma}
        //                         * Q(-alpha, -beta/(1+beta t), gamma, t).
        double w = 1.0 + beta * t;
        return std::exp(-alpha * t) * std::pow(w, -gamma) *
               gamma_window_integral(-alpha, -beta / w, gamma, t);
    }

    const double a = 1.0 - gamma;
    const double x0 = alpha / beta;
    if (beta > 0.0) {
        // Both gamma arguments positive; scaled form avoids exp overflow.
        double g0 = upper_gamma_scaled(a, x0);
        double g1 = upper_gamma_scaled(a, x0 * (1.0 + beta * t));
        return std::pow(beta / alpha, 1.0 - gamma) / beta *
               (g0 - std::exp(-alpha * t) * g1);
    }
    // beta < 0: the substitution eta = (alpha/u)(1 - u s), u = -beta, gives a
    // growing-exponent integral handled by scaled_E.
    const double u = -beta;
    const double eta0 = alpha / u;
    const double eta1 = eta0 * (1.0 - u * t);
    return std::pow(u / alpha, -gamma) / alpha *
           (scaled_E(a, eta0) - std::exp(-alpha * t) * scaled_E(a, eta1));
}

double erf(double z) { return std::erf(z); }

} // namespace tp
