#include "tp/spectral_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace tp {

namespace {

// FFTW plan creation is not thread safe; execution with explicit buffers is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(const std::vector<cdouble>& in, std::vector<cdouble>& out, int sign) {
        const int n = static_cast<int>(in.size());
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_pair(n, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cdouble> a(n), b(n);
                plan = fftw_plan_dft_1d(
                    n, reinterpret_cast<fftw_complex*>(a.data()),
                    reinterpret_cast<fftw_complex*>(b.data()), sign,
                    FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan,
                         reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in.data())),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

} // namespace

std::vector<cdouble> fft_forward(const std::vector<cdouble>& samples) {
    std::vector<cdouble> out(samples.size());
    PlanCache::instance().execute(samples, out, FFTW_FORWARD);
    const double inv = 1.0 / samples.size();
    for (auto& c : out) c *= inv;
    return out;
}

std::vector<cdouble> fft_backward(const std::vector<cdouble>& coeffs) {
    std::vector<cdouble> out(coeffs.size());
    PlanCache::instance().execute(coeffs, out, FFTW_BACKWARD);
    return out;
}

SpectralField SpectralField::from_physical(const Grid1D& g, const std::vector<double>& samples) {
    if (static_cast<int>(samples.size()) != g.n_points)
        throw config_error("SpectralField::from_physical: sample count does not match grid");
    std::vector<cdouble> buf(samples.begin(), samples.end());
    SpectralField f(g);
    f.modes_ = fft_forward(buf);
    f.symmetrize();
    return f;
}

SpectralField SpectralField::from_modes(const Grid1D& g, std::vector<cdouble> modes) {
    if (static_cast<int>(modes.size()) != g.n_points)
        throw config_error("SpectralField::from_modes: coefficient count does not match grid");
    SpectralField f(g);
    f.modes_ = std::move(modes);
    f.symmetrize();
    return f;
}

void SpectralField::symmetrize() {
    const int n = grid_.n_points;
    modes_[0] = cdouble(modes_[0].real(), 0.0);
    modes_[n / 2] = cdouble(modes_[n / 2].real(), 0.0);
    for (int i = 1; i < n / 2; ++i) {
        cdouble avg = 0.5 * (modes_[i] + std::conj(modes_[n - i]));
        modes_[i] = avg;
        modes_[n - i] = std::conj(avg);
    }
}

cdouble SpectralField::mode(int m) const {
    const int n = grid_.n_points;
    if (m > n / 2 || m < -n / 2 + 1) return 0.0;
    return modes_[(m + n) % n];
}

void SpectralField::set_mode(int m, cdouble c) {
    const int n = grid_.n_points;
    if (m > n / 2 || m < -n / 2 + 1)
        throw config_error("SpectralField::set_mode: mode outside grid range");
    if (m == 0 || m == n / 2) {
        modes_[(m + n) % n] = cdouble(c.real(), 0.0);
        return;
    }
    modes_[(m + n) % n] = c;
    modes_[(n - m) % n] = std::conj(c);
}

std::vector<double> SpectralField::to_physical() const {
    std::vector<cdouble> buf = fft_backward(modes_);
    std::vector<double> out(buf.size());
    for (size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return out;
}

SpectralField SpectralField::derivative(int order) const {
    SpectralField out(grid_);
    const int n = grid_.n_points;
    for (int i = 0; i < n; ++i) {
        cdouble ik(0.0, grid_.wavenumber(i));
        // The Nyquist mode has no well-defined odd derivative; it is zero for
        // band-limited data anyway.
        if (i == n / 2 && order % 2 == 1) {
            out.modes_[i] = 0.0;
            continue;
        }
        cdouble factor = 1.0;
        for (int k = 0; k < order; ++k) factor *= ik;
        out.modes_[i] = factor * modes_[i];
    }
    out.symmetrize();
    return out;
}

SpectralField SpectralField::propagated(const std::function<cdouble(double)>& phase,
                                        bool* overflowed) const {
    SpectralField out(grid_);
    bool sat = false;
    for (int i = 0; i < grid_.n_points; ++i) {
        cdouble p = phase(grid_.wavenumber(i));
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw domain_error("propagated: non-finite phase");
        if (p.real() > 700.0) {
            p = cdouble(700.0, p.imag());
            sat = true;
        }
        out.modes_[i] = std::exp(p) * modes_[i];
    }
    if (overflowed) *overflowed = sat;
    out.symmetrize();
    return out;
}

SpectralField SpectralField::cubed_dealiased() const {
    const int n = grid_.n_points;
    const int m = 2 * n;
    std::vector<cdouble> padded(m, cdouble(0.0));
    // Copy retained modes into the larger spectral array (Nyquist dropped).
    for (int i = 0; i < n; ++i) {
        int idx = grid_.mode_index(i);
        if (idx == n / 2) continue;
        padded[(idx + m) % m] = modes_[i];
    }
    std::vector<cdouble> phys = fft_backward(padded);
    for (auto& v : phys) {
        double re = v.real();
        v = cdouble(re * re * re, 0.0);
    }
    std::vector<cdouble> cubed = fft_forward(phys);
    SpectralField out(grid_);
    for (int i = 0; i < n; ++i) {
        int idx = grid_.mode_index(i);
        if (idx == n / 2) {
            out.modes_[i] = 0.0;
            continue;
        }
        out.modes_[i] = cubed[(idx + m) % m];
    }
    out.symmetrize();
    return out;
}

double SpectralField::max_abs() const {
    auto phys = to_physical();
    double m = 0.0;
    for (double v : phys) m = std::max(m, std::abs(v));
    return m;
}

double SpectralField::l2_integral() const {
    double sum = 0.0;
    for (const auto& c : modes_) sum += std::norm(c);
    return sum * grid_.length();
}

double SpectralField::max_conj_asymmetry() const {
    const int n = grid_.n_points;
    double worst = std::abs(modes_[0].imag());
    worst = std::max(worst, std::abs(modes_[n / 2].imag()));
    for (int i = 1; i < n / 2; ++i)
        worst = std::max(worst, std::abs(modes_[i] - std::conj(modes_[n - i])));
    return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (size_t i = 0; i < modes_.size(); ++i) modes_[i] += o.modes_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (size_t i = 0; i < modes_.size(); ++i) modes_[i] -= o.modes_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : modes_) c *= s;
    return *this;
}

ComplexField::ComplexField(const Grid1D& g, std::vector<cdouble> v)
    : grid_(g), values_(std::move(v)) {
    if (static_cast<int>(values_.size()) != g.n_points)
        throw config_error("ComplexField: sample count does not match grid");
}

ComplexField ComplexField::constant(const Grid1D& g, cdouble c) {
    ComplexField f(g);
    std::fill(f.values_.begin(), f.values_.end(), c);
    return f;
}

ComplexField ComplexField::from_modes(const Grid1D& g, const std::vector<cdouble>& coeffs) {
    ComplexField f(g);
    f.values_ = fft_backward(coeffs);
    return f;
}

ComplexField ComplexField::derivative(int order) const {
    auto coeffs = to_modes();
    const int n = grid_.n_points;
    for (int i = 0; i < n; ++i) {
        if (i == n / 2 && order % 2 == 1) {
            coeffs[i] = 0.0;
            continue;
        }
        cdouble ik(0.0, grid_.wavenumber(i));
        cdouble factor = 1.0;
        for (int k = 0; k < order; ++k) factor *= ik;
        coeffs[i] *= factor;
    }
    return from_modes(grid_, coeffs);
}

ComplexField ComplexField::conj() const {
    ComplexField out(grid_);
    for (int i = 0; i < grid_.n_points; ++i) out.values_[i] = std::conj(values_[i]);
    return out;
}

ComplexField ComplexField::propagated(const std::function<cdouble(double)>& phase) const {
    auto coeffs = to_modes();
    for (int i = 0; i < grid_.n_points; ++i) {
        cdouble p = phase(grid_.wavenumber(i));
        if (p.real() > 700.0) p = cdouble(700.0, p.imag());
        coeffs[i] *= std::exp(p);
    }
    return from_modes(grid_, coeffs);
}

double ComplexField::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexField::is_zero() const {
    for (const auto& v : values_)
        if (v != cdouble(0.0)) return false;
    return true;
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
    for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ComplexField& ComplexField::operator*=(cdouble s) {
    for (auto& v : values_) v *= s;
    return *this;
}

ComplexField operator*(const ComplexField& a, const ComplexField& b) {
    ComplexField out(a.grid());
    for (size_t i = 0; i < a.values().size(); ++i)
        out.values()[i] = a.values()[i] * b.values()[i];
    return out;
}

} // namespace tp
