#pragma once

#include <cmath>
#include <numbers>

#include "tp/errors.hpp"

namespace tp {

// Uniform collocation grid for a real 2*pi*P periodic domain.
// Wavenumbers are k_j = j/P for signed integer j; j = 0 .. n/2-1 and the
// negative half in the usual FFT layout.
struct Grid1D {
    int periods = 32;   // P, domain length L = 2*pi*P
    int n_points = 256; // power of two

    Grid1D() = default;
    Grid1D(int P, int n) : periods(P), n_points(n) {
        if (P <= 0) throw config_error("Grid1D: periods must be positive");
        if (n <= 0 || (n & (n - 1)) != 0)
            throw config_error("Grid1D: n_points must be a positive power of two");
        if (n < 8 * P)
            throw config_error("Grid1D: need n_points >= 8*periods collocation points");
    }

    double length() const { return 2.0 * std::numbers::pi * periods; }
    double dx() const { return length() / n_points; }
    double x(int i) const { return dx() * i; }

    // Signed mode index for FFT slot i in [0, n).
    int mode_index(int i) const { return i <= n_points / 2 ? i : i - n_points; }
    // Wavenumber of FFT slot i.
    double wavenumber(int i) const { return static_cast<double>(mode_index(i)) / periods; }

    bool operator==(const Grid1D& o) const {
        return periods == o.periods && n_points == o.n_points;
    }
};

} // namespace tp
