#include "tp/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace tp {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double quad_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    double whole = simpson(a, b, fa, fm, fb);
    double scale = std::max({1e-30, std::abs(whole)});
    return adaptive(f, a, b, fa, fm, fb, whole, tol * scale, 48);
}

std::complex<double> rk4(const std::function<std::complex<double>(double, std::complex<double>)>& f,
                         std::complex<double> y0, double t0, double t1, int steps) {
    std::complex<double> y = y0;
    double t = t0;
    double h = (t1 - t0) / steps;
    for (int i = 0; i < steps; ++i) {
        auto k1 = f(t, y);
        auto k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        auto k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        auto k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return y;
}

std::vector<CubicTerm> cubic_oracle(int m, int w, int N) {
    // polynomial entries keyed by (band, weight, sorted factor list)
    struct Key {
        int m, w;
        std::vector<ModeIndex> factors;
        bool operator<(const Key& o) const {
            if (m != o.m) return m < o.m;
            if (w != o.w) return w < o.w;
            return std::lexicographical_compare(
                factors.begin(), factors.end(), o.factors.begin(), o.factors.end(),
                [](const ModeIndex& a, const ModeIndex& b) { return a < b; });
        }
    };
    using Poly = std::map<Key, long>;

    Poly base;
    for (const auto& idx : all_indices(N))
        base[{idx.m, idx.weight(), {idx}}] = 1;

    auto multiply = [](const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                Key k;
                k.m = ka.m + kb.m;
                k.w = ka.w + kb.w;
                k.factors = ka.factors;
                k.factors.insert(k.factors.end(), kb.factors.begin(), kb.factors.end());
                std::sort(k.factors.begin(), k.factors.end());
                out[k] += ca * cb;
            }
        return out;
    };

    Poly square = multiply(base, base);
    // keep only entries that can still land at total weight w
    Poly cube = multiply(square, base);

    std::vector<CubicTerm> out;
    for (const auto& [key, coeff] : cube) {
        if (key.m != m || key.w != w) continue;
        CubicTerm term;
        term.f[0] = key.factors[0];
        term.f[1] = key.factors[1];
        term.f[2] = key.factors[2];
        term.mult = static_cast<int>(coeff);
        out.push_back(term);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace tp
