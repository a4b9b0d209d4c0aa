#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nvlab/manifest.hpp"
#include "nvlab/symbol.hpp"

using namespace nvlab;

TEST_CASE("symbol values by direct substitution") {
    CHECK(eval_symbol(1.0, 0.0, 1.0) == doctest::Approx(-4.0));
    CHECK(eval_symbol(1.0, 0.0, 0.0) == doctest::Approx(2.0));
    CHECK(eval_symbol(0.0, 0.7, 2.0) == 0.0);
    CHECK(eval_symbol(0.0, -3.1, 0.5) == 0.0);
    CHECK(eval_symbol(0.0, 0.0, 1.0) == 0.0);  // removable extension
}

TEST_CASE("phase decomposes into symbol plus transport term") {
    SplitRng rng{42};
    for (int i = 0; i < 200; ++i) {
        const auto [ur, ui] = rng.disk_point(0, i, 20.0);
        const auto [xr, xi] = rng.disk_point(1, i, 5.0);
        const cplx u(ur, ui), x(xr, xi);
        if (std::abs(x) < 1e-8) continue;
        const double E = 0.1 + 3.0 * rng.uniform(2, i);
        CHECK(eval_phase(u, x, E)
              == doctest::Approx(eval_symbol(x, E) + (std::conj(u) * x).real()).epsilon(1e-12));
    }
    // u = 0 collapses to the symbol
    CHECK(eval_phase(0.0, cplx(1.2, -0.4), 1.5)
          == doctest::Approx(eval_symbol(cplx(1.2, -0.4), 1.5)));
    // on the circle |xi|^2 = 3E the rational factor vanishes
    const double E = 1.3;
    const cplx xi = std::sqrt(3.0 * E) * std::polar(1.0, 0.9);
    const cplx u(0.5, -2.0);
    CHECK(eval_phase(u, xi, E) == doctest::Approx((std::conj(u) * xi).real()).epsilon(1e-12));
    CHECK(eval_phase(cplx(1, 0), cplx(1, 0), 1.0) == doctest::Approx(-3.0));
}

TEST_CASE("symbol symmetries") {
    SplitRng rng{7};
    for (int i = 0; i < 300; ++i) {
        const auto [a, b] = rng.disk_point(0, i, 8.0);
        const double E = 0.1 + 2.0 * rng.uniform(1, i);
        // odd under xi -> -xi
        CHECK(eval_symbol(-a, -b, E) == doctest::Approx(-eval_symbol(a, b, E)).epsilon(1e-12));
        // even under xi2 -> -xi2
        CHECK(eval_symbol(a, -b, E) == doctest::Approx(eval_symbol(a, b, E)).epsilon(1e-12));
    }
}

TEST_CASE("symbol stays bounded near the origin at E = 1") {
    double mx = 0.0;
    for (int i = 1; i <= 400; ++i)
        for (int j = 0; j < 64; ++j) {
            const double r = i / 400.0;
            const double th = 2.0 * M_PI * j / 64;
            mx = std::max(mx, std::abs(eval_symbol(r * std::cos(th), r * std::sin(th), 1.0)));
        }
    // |w| <= 2 r^3 (1 + 3/r^2) = 2 r^3 + 6 r <= 8 on the unit disk
    CHECK(mx <= 8.0 + 1e-9);
}

TEST_CASE("dbar multiplier is unimodular away from zero") {
    CHECK(dbar_inv_dz_multiplier(1.0, 0.0) == cplx(1.0, 0.0));
    CHECK(dbar_inv_dz_multiplier(0.0, 1.0) == cplx(-1.0, 0.0));
    CHECK(dbar_inv_dz_multiplier(0.0, 0.0) == cplx(0.0, 0.0));
    SplitRng rng{3};
    for (int i = 0; i < 100; ++i) {
        const auto [a, b] = rng.disk_point(0, i, 10.0);
        if (a == 0 && b == 0) continue;
        CHECK(std::abs(dbar_inv_dz_multiplier(a, b)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("resonance function basics") {
    SplitRng rng{11};
    for (int i = 0; i < 200; ++i) {
        const auto [a, b] = rng.disk_point(0, i, 6.0);
        const auto [c, d] = rng.disk_point(1, i, 6.0);
        const cplx xi(a, b), xit(c, d);
        const double E = 0.2 + 2.0 * rng.uniform(2, i);
        CHECK(resonance_H(xit, xit, E) == doctest::Approx(0.0));
        // symmetric under xi <-> xit - xi
        CHECK(resonance_H(xi, xit, E)
              == doctest::Approx(resonance_H(xit - xi, xit, E)).epsilon(1e-11));
    }
}

TEST_CASE("resonance gradient matches finite differences") {
    SplitRng rng{5};
    for (double E : {0.5, 1.0, 2.0}) {
        int done = 0;
        for (int i = 0; done < 100; ++i) {
            const auto [a, b] = rng.disk_point(0, i, 6.0);
            const auto [c, d] = rng.disk_point(1, i, 6.0);
            const cplx xi(a, b), xit(c, d);
            if (std::abs(xi) < 0.3 || std::abs(xit - xi) < 0.3) continue;
            ++done;
            const auto [g1, g2] = resonance_H_gradient(xi, xit, E);
            const double h = 1e-6 * std::max(1.0, std::abs(xi));
            const double f1 = (resonance_H(xi + h, xit, E) - resonance_H(xi - h, xit, E)) / (2 * h);
            const double f2 =
                (resonance_H(xi + cplx(0, h), xit, E) - resonance_H(xi - cplx(0, h), xit, E)) / (2 * h);
            const double scale = std::max({1.0, std::abs(g1), std::abs(g2)});
            CHECK(std::abs(f1 - g1) / scale < 1e-6);
            CHECK(std::abs(f2 - g2) / scale < 1e-6);
        }
    }
}

TEST_CASE("resonance gradient E = 0 reduces to the polynomial case") {
    // with no rational correction, dH/dxi1 = -6[(x1^2-x2^2) - (e1^2-e2^2)]
    const cplx xi(1.2, -0.7), xit(0.4, 2.0);
    const auto [g1, g2] = resonance_H_gradient(xi, xit, 0.0);
    const double e1 = xit.real() - xi.real(), e2 = xit.imag() - xi.imag();
    CHECK(g1 == doctest::Approx(-6.0 * ((xi.real() * xi.real() - xi.imag() * xi.imag())
                                        - (e1 * e1 - e2 * e2))));
    CHECK(g2 == doctest::Approx(-12.0 * (-xi.real() * xi.imag() + e1 * e2)));
}

TEST_CASE("resonance gradient signals the singular configurations") {
    CHECK_THROWS_AS((void)resonance_H_gradient(cplx(0, 0), cplx(1, 1), 1.0), std::domain_error);
    CHECK_THROWS_AS((void)resonance_H_gradient(cplx(1, 1), cplx(1, 1), 1.0), std::domain_error);
}

TEST_CASE("dyadic regime magnitude of the xi2 partial") {
    // |xi| ~ E^{1/2} N much smaller than |xit - xi| ~ E^{1/2} Nc with
    // comparable components: |dH/dxi2| should scale like E * Nc^2
    const double E = 1.0;
    std::vector<double> ratios;
    for (double Nc : {8.0, 16.0, 32.0, 64.0}) {
        const double N = 1.0;
        const cplx xi = std::sqrt(E) * N * cplx(0.6, 0.8);
        const cplx diff = std::sqrt(E) * Nc * cplx(std::sqrt(0.5), std::sqrt(0.5));
        const cplx xit = xi + diff;
        const auto [g1, g2] = resonance_H_gradient(xi, xit, E);
        (void)g1;
        ratios.push_back(std::abs(g2) / (E * Nc * Nc));
    }
    for (double r : ratios) {
        CHECK(r > 0.5);
        CHECK(r < 24.0);
    }
}
