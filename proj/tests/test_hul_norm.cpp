#include <doctest.h>

#include <cmath>
#include <random>

#include "tp/hul_norm.hpp"
#include "tp/sh.hpp"

using namespace tp;

TEST_CASE("window norm closed forms") {
    Grid1D g(4, 1024); // fine grid so the trapezoid window integrals converge
    std::vector<double> sinx(g.n_points);
    for (int i = 0; i < g.n_points; ++i) sinx[i] = std::sin(g.x(i));
    SpectralField f = SpectralField::from_physical(g, sinx);

    SUBCASE("zero field") {
        CHECK(hul_norm(SpectralField(g), 2) == 0.0);
    }

    SUBCASE("sin, theta = 0: maximal unit-window mass") {
        // max_y int_{y-1/2}^{y+1/2} sin^2 = 1/2 + sin(1)/2
        double expected = std::sqrt(0.5 + 0.5 * std::sin(1.0));
        CHECK(hul_norm(f, 0, 1.0) == doctest::Approx(expected).epsilon(1e-3));
    }

    SUBCASE("sin, theta = 1: window integral is y-independent") {
        CHECK(hul_norm(f, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("monotone in theta") {
    Grid1D g(8, 256);
    for (unsigned seed : {1u, 2u, 3u}) {
        SpectralField f = random_band_ic(g, 0.7, seed);
        double prev = hul_norm(f, 0);
        for (int theta = 1; theta <= 4; ++theta) {
            double cur = hul_norm(f, theta);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("domain guards") {
    Grid1D g(4, 64);
    SpectralField f(g);
    CHECK_THROWS_AS(hul_norm(f, 5), domain_error);
    CHECK_THROWS_AS(hul_norm(f, 1, 2.0 * g.length()), domain_error);
}

TEST_CASE("stride and window defaults behave") {
    Grid1D g(4, 512);
    SpectralField f = roll_ic(g, 0.2);
    // a pure roll has y-independent theta=1 density: norm = amplitude/... constant
    double full = hul_norm(f, 1, 1.0);
    double coarse = hul_norm(f, 1, 1.0, 0.5);
    CHECK(full == doctest::Approx(coarse).epsilon(1e-6));
}
