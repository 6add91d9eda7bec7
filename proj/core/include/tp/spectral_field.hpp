#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "tp/grid.hpp"

namespace tp {

using cdouble = std::complex<double>;

// Forward/backward FFT between physical samples and Fourier coefficients,
// normalized so that u(x) = sum_j c_j exp(i k_j x). Thread-safe.
std::vector<cdouble> fft_forward(const std::vector<cdouble>& samples);
std::vector<cdouble> fft_backward(const std::vector<cdouble>& coeffs);

// Real periodic field stored as conjugate-symmetric Fourier coefficients.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const Grid1D& g) : grid_(g), modes_(g.n_points, cdouble(0.0)) {}

    static SpectralField from_physical(const Grid1D& g, const std::vector<double>& samples);
    // Direct construction from coefficients; symmetrizes to enforce reality.
    static SpectralField from_modes(const Grid1D& g, std::vector<cdouble> modes);

    const Grid1D& grid() const { return grid_; }
    const std::vector<cdouble>& modes() const { return modes_; }
    std::vector<cdouble>& modes() { return modes_; }

    // Coefficient for signed mode index m (k = m/P); zero outside range.
    cdouble mode(int m) const;
    void set_mode(int m, cdouble c); // keeps the conjugate slot in sync

    std::vector<double> to_physical() const;

    SpectralField derivative(int order) const;
    // modes[j] <- exp(phase(k_j)) * modes[j]; phase may be complex.
    // Saturates the real part of the phase at +700 and reports it.
    SpectralField propagated(const std::function<cdouble(double)>& phase,
                             bool* overflowed = nullptr) const;
    // Exact projection of the pointwise cube onto the retained modes
    // (zero padding to twice the resolution).
    SpectralField cubed_dealiased() const;

    double max_abs() const;                // max |u(x_i)|
    double l2_integral() const;            // integral of u^2 over the domain, via Parseval
    double max_conj_asymmetry() const;     // diagnostic: worst |c(-m) - conj(c(m))|

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    Grid1D grid_;
    std::vector<cdouble> modes_;
    void symmetrize();
};

// Complex-valued field on the (slow) grid, physical-space samples.
class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(const Grid1D& g) : grid_(g), values_(g.n_points, cdouble(0.0)) {}
    ComplexField(const Grid1D& g, std::vector<cdouble> v);
    static ComplexField constant(const Grid1D& g, cdouble c);

    const Grid1D& grid() const { return grid_; }
    const std::vector<cdouble>& values() const { return values_; }
    std::vector<cdouble>& values() { return values_; }

    std::vector<cdouble> to_modes() const { return fft_forward(values_); }
    static ComplexField from_modes(const Grid1D& g, const std::vector<cdouble>& coeffs);

    ComplexField derivative(int order) const;
    ComplexField conj() const;
    ComplexField propagated(const std::function<cdouble(double)>& phase) const;

    double max_abs() const;
    bool is_zero() const; // exactly zero everywhere

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(cdouble s);
    friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
    friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
    friend ComplexField operator*(cdouble s, ComplexField a) { return a *= s; }

    // Pointwise product.
    friend ComplexField operator*(const ComplexField& a, const ComplexField& b);

private:
    Grid1D grid_;
    std::vector<cdouble> values_;
};

} // namespace tp
