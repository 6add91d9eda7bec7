#include "tp/hul_norm.hpp"

#include <algorithm>
#include <cmath>

namespace tp {

namespace {

// Cumulative trapezoid integral of periodic samples g over [0, x]; linear
// interpolation between grid points makes partial end cells consistent with
// the trapezoid rule.
class PeriodicCumulative {
public:
    PeriodicCumulative(const std::vector<double>& g, double dx, double length)
        : g_(g), dx_(dx), length_(length), cum_(g.size() + 1, 0.0) {
        const size_t n = g.size();
        for (size_t i = 0; i < n; ++i) {
            double right = (i + 1 < n) ? g[i + 1] : g[0];
            cum_[i + 1] = cum_[i] + 0.5 * (g[i] + right) * dx_;
        }
    }

    double total() const { return cum_.back(); }

    // Integral over [0, x] for x possibly outside [0, L).
    double at(double x) const {
        double wraps = std::floor(x / length_);
        double x0 = x - wraps * length_;
        double pos = x0 / dx_;
        size_t i = std::min(static_cast<size_t>(pos), g_.size() - 1);
        double frac = pos - i;
        const size_t n = g_.size();
        double gi = g_[i];
        double gi1 = (i + 1 < n) ? g_[i + 1] : g_[0];
        double partial = cum_[i] + frac * dx_ * (gi + 0.5 * frac * (gi1 - gi));
        return wraps * total() + partial;
    }

    double over(double a, double b) const { return at(b) - at(a); }

private:
    const std::vector<double>& g_;
    double dx_, length_;
    std::vector<double> cum_;
};

} // namespace

double hul_norm(const SpectralField& f, int theta, double window, double stride) {
    const Grid1D& g = f.grid();
    if (theta < 0 || theta > 4) throw domain_error("hul_norm: theta must be in 0..4");
    if (window <= 0.0 || window > g.length())
        throw domain_error("hul_norm: window must be in (0, L]");
    if (stride <= 0.0) stride = g.dx();

    // Pointwise sum of |d^j u|^2, j = 0..theta.
    std::vector<double> density(g.n_points, 0.0);
    for (int j = 0; j <= theta; ++j) {
        auto phys = (j == 0) ? f.to_physical() : f.derivative(j).to_physical();
        for (int i = 0; i < g.n_points; ++i) density[i] += phys[i] * phys[i];
    }

    PeriodicCumulative cum(density, g.dx(), g.length());
    double best = 0.0;
    for (double y = 0.0; y < g.length() - 0.5 * stride; y += stride)
        best = std::max(best, cum.over(y - 0.5 * window, y + 0.5 * window));
    return std::sqrt(best);
}

} // namespace tp
