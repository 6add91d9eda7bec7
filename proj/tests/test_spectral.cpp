#include <doctest.h>

#include <random>

#include "tp/sh.hpp"
#include "tp/spectral_field.hpp"

using namespace tp;

namespace {

SpectralField random_real_field(const Grid1D& g, unsigned seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-amp, amp);
    std::vector<double> samples(g.n_points);
    for (auto& s : samples) s = unif(rng);
    return SpectralField::from_physical(g, samples);
}

double max_field_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d.max_abs();
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid1D(0, 64), config_error);
    CHECK_THROWS_AS(Grid1D(4, 48), config_error);  // not a power of two
    CHECK_THROWS_AS(Grid1D(32, 128), config_error); // fewer than 8 points/cell
    Grid1D g(4, 64);
    CHECK(g.dx() == doctest::Approx(2.0 * std::numbers::pi * 4 / 64));
    CHECK(g.wavenumber(1) == doctest::Approx(0.25));
    CHECK(g.wavenumber(63) == doctest::Approx(-0.25));
}

TEST_CASE("transform basics") {
    Grid1D g(1, 16);

    SUBCASE("constant field is the DC coefficient") {
        SpectralField f = SpectralField::from_physical(g, std::vector<double>(16, 1.0));
        CHECK(std::abs(f.mode(0) - cdouble(1.0, 0.0)) < 1e-14);
        for (int m = 1; m <= 7; ++m) CHECK(std::abs(f.mode(m)) < 1e-14);
    }

    SUBCASE("cos(x) splits into +-1 with weight 1/2") {
        std::vector<double> samples(16);
        for (int i = 0; i < 16; ++i) samples[i] = std::cos(g.x(i));
        SpectralField f = SpectralField::from_physical(g, samples);
        CHECK(std::abs(f.mode(1) - cdouble(0.5, 0.0)) < 1e-14);
        CHECK(std::abs(f.mode(-1) - cdouble(0.5, 0.0)) < 1e-14);
        CHECK(std::abs(f.mode(2)) < 1e-14);
    }

    SUBCASE("round trip of random real samples") {
        Grid1D big(8, 128);
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<double> samples(big.n_points);
        for (auto& s : samples) s = unif(rng);
        auto back = SpectralField::from_physical(big, samples).to_physical();
        double worst = 0.0;
        for (size_t i = 0; i < samples.size(); ++i)
            worst = std::max(worst, std::abs(back[i] - samples[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("spectral derivatives") {
    Grid1D g(4, 64);
    std::vector<double> sinx(g.n_points), cosx(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        sinx[i] = std::sin(g.x(i));
        cosx[i] = std::cos(g.x(i));
    }
    SpectralField fsin = SpectralField::from_physical(g, sinx);
    SpectralField fcos = SpectralField::from_physical(g, cosx);

    CHECK(max_field_diff(fsin.derivative(1), fcos) < 1e-10);

    // (1 + dxx)^2 annihilates the critical mode cos(x)
    SpectralField lhs = fcos + 2.0 * fcos.derivative(2) + fcos.derivative(4);
    CHECK(lhs.max_abs() < 1e-10);

    // second derivative flips the sign of the k = 1 coefficients
    SpectralField d2 = fcos.derivative(2);
    CHECK(std::abs(d2.mode(4) + fcos.mode(4)) < 1e-12); // k = 1 lives at index P
}

TEST_CASE("mode-wise propagator") {
    Grid1D g(4, 64);
    SpectralField f = random_real_field(g, 7, 0.5);

    SUBCASE("zero phase is the identity") {
        SpectralField out = f.propagated([](double) { return cdouble(0.0, 0.0); });
        CHECK(max_field_diff(out, f) < 1e-14);
    }

    SUBCASE("critical modes are neutral under lambda(k,0)") {
        SpectralField roll = roll_ic(g, 0.3);
        SpectralField out = roll.propagated(
            [](double k) { return cdouble(dispersion(k, 0.0) * 5.0, 0.0); });
        CHECK(max_field_diff(out, roll) < 1e-12);
    }

    SUBCASE("k = 2 decays by e^-9 over unit time") {
        SpectralField f2(g);
        f2.set_mode(8, cdouble(0.5, 0.0)); // wavenumber 2 at index 2P
        SpectralField out =
            f2.propagated([](double k) { return cdouble(dispersion(k, 0.0), 0.0); });
        CHECK(std::abs(out.mode(8)) ==
              doctest::Approx(0.5 * std::exp(-9.0)).epsilon(1e-12));
    }

    SUBCASE("propagator composes exactly") {
        auto p1 = [](double k) { return cdouble(-0.04 * k * k, 0.2 * k); };
        auto p2 = [](double k) { return cdouble(0.03 * k, -0.05 * k * k); };
        SpectralField seq = f.propagated(p1).propagated(p2);
        SpectralField once =
            f.propagated([&](double k) { return p1(k) + p2(k); });
        double worst = 0.0;
        for (int m = -31; m <= 31; ++m) {
            double ref = std::abs(once.mode(m));
            if (ref < 1e-30) continue;
            worst = std::max(worst, std::abs(seq.mode(m) - once.mode(m)) / ref);
        }
        CHECK(worst < 1e-12);
    }

    SUBCASE("overflowing phase saturates and reports") {
        bool flagged = false;
        SpectralField out = f.propagated([](double) { return cdouble(1e4, 0.0); }, &flagged);
        CHECK(flagged);
        CHECK(std::isfinite(out.max_abs()));
    }
}

TEST_CASE("dealiased cube") {
    Grid1D g(4, 64);

    SUBCASE("cos^3 = (3/4) cos + (1/4) cos 3x") {
        std::vector<double> cosx(g.n_points);
        for (int i = 0; i < g.n_points; ++i) cosx[i] = std::cos(g.x(i));
        SpectralField f = SpectralField::from_physical(g, cosx);
        SpectralField cube = f.cubed_dealiased();
        CHECK(std::abs(cube.mode(4) - cdouble(3.0 / 8.0, 0.0)) < 1e-13);  // (3/4)/2
        CHECK(std::abs(cube.mode(12) - cdouble(1.0 / 8.0, 0.0)) < 1e-13); // (1/4)/2
        CHECK(std::abs(cube.mode(0)) < 1e-13);
    }

    SUBCASE("constants cube to constants") {
        SpectralField f = SpectralField::from_physical(g, std::vector<double>(64, 0.7));
        CHECK(std::abs(f.cubed_dealiased().mode(0) - cdouble(0.343, 0.0)) < 1e-13);
    }

    SUBCASE("matches the oversampled oracle on band-limited data") {
        // band-limit to |k| <= n/8 so the cube fits on the 4x grid exactly
        SpectralField f = random_real_field(g, 3, 0.3);
        for (int m = g.n_points / 8 + 1; m <= g.n_points / 2; ++m) f.set_mode(m, 0.0);

        Grid1D fine(4, 256);
        std::vector<cdouble> fine_modes(fine.n_points, 0.0);
        for (int m = -g.n_points / 8; m <= g.n_points / 8; ++m)
            fine_modes[(m + fine.n_points) % fine.n_points] = f.mode(m);
        auto phys = fft_backward(fine_modes);
        std::vector<double> cubed(fine.n_points);
        for (int i = 0; i < fine.n_points; ++i) {
            double v = phys[i].real();
            cubed[i] = v * v * v;
        }
        SpectralField oracle = SpectralField::from_physical(fine, cubed);

        SpectralField ours = f.cubed_dealiased();
        double worst = 0.0, scale = oracle.max_abs();
        for (int m = -g.n_points / 2 + 1; m <= g.n_points / 2 - 1; ++m)
            worst = std::max(worst, std::abs(ours.mode(m) - oracle.mode(m)));
        CHECK(worst / scale < 1e-12);
    }
}

TEST_CASE("invariants: conjugate symmetry and Parseval") {
    Grid1D g(8, 128);
    SpectralField f = random_real_field(g, 11, 0.4);

    CHECK(f.max_conj_asymmetry() < 1e-13);
    CHECK(f.derivative(3).max_conj_asymmetry() < 1e-12);
    CHECK(f.cubed_dealiased().max_conj_asymmetry() < 1e-13);
    CHECK(f.propagated([](double k) { return cdouble(-k * k, 0.0); }).max_conj_asymmetry() <
          1e-13);

    // Parseval: sum |c|^2 * L = int u^2 dx (exact for trig polynomials)
    auto phys = f.to_physical();
    double direct = 0.0;
    for (double v : phys) direct += v * v;
    direct *= g.dx();
    CHECK(f.l2_integral() == doctest::Approx(direct).epsilon(1e-10));
}
