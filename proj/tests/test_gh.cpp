#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nvlab/gh.hpp"

using namespace nvlab;

TEST_CASE("low-order polynomials") {
    // P2 = z^2, P3 = z^3 + 48 t, P4 = z^4 + 192 t z
    const auto p2 = gh_poly(2);
    REQUIRE(p2.coeffs.size() == 1);
    CHECK(p2.coeffs[0] == 1);

    const auto p3 = gh_poly(3);
    REQUIRE(p3.coeffs.size() == 2);
    CHECK(p3.coeffs[0] == 1);
    CHECK(p3.coeffs[1] == 48);

    const auto p4 = gh_poly(4);
    REQUIRE(p4.coeffs.size() == 2);
    CHECK(p4.coeffs[0] == 1);
    CHECK(p4.coeffs[1] == 192);

    CHECK(gh_poly(0).coeffs[0] == 1);
    CHECK(gh_poly(1).coeffs[0] == 1);
}

TEST_CASE("coefficients match the factorial formula up to n = 25") {
    for (int n = 0; n <= 25; ++n) {
        const auto p = gh_poly(n);
        for (int k = 0; k <= n / 3; ++k) {
            // c_k = n! 8^k/(k! (n-3k)!) computed independently as a product
            long double ref = 1.0L;
            for (int j = n - 3 * k + 1; j <= n; ++j) ref *= j;  // n!/(n-3k)!
            for (int j = 1; j <= k; ++j) ref /= j;
            for (int j = 0; j < k; ++j) ref *= 8.0L;
            const long double got = static_cast<long double>(p.coeffs[k]);
            CHECK(std::abs(got - ref) <= 1e-12L * ref);
        }
    }
}

TEST_CASE("P_n(0, z) = z^n") {
    for (int n = 1; n <= 12; ++n) {
        const auto p = gh_poly(n);
        const cplx z(0.8, -0.45);
        CHECK(std::abs(p.eval(0.0, z) - std::pow(z, n)) < 1e-12 * std::abs(std::pow(z, n)));
    }
}

TEST_CASE("identities hold exactly for n = 1..20") {
    const auto rep = gh_identities_check(20);
    CHECK(rep.recurrence_ok);
    CHECK(rep.derivative_ok);
    CHECK(rep.heat_flow_ok);
}

TEST_CASE("evaluation derivatives agree with finite differences") {
    const auto p = gh_poly(7);
    const double t = 0.37;
    const cplx z(1.1, -0.6);
    const double h = 1e-6;
    const cplx fd1 = (p.eval(t, z + h) - p.eval(t, z - h)) / (2.0 * h);
    CHECK(std::abs(fd1 - p.eval_dz(t, z)) < 1e-6 * std::abs(fd1));
    const cplx fd2 = (p.eval_dz(t, z + h) - p.eval_dz(t, z - h)) / (2.0 * h);
    CHECK(std::abs(fd2 - p.eval_dz2(t, z)) < 1e-6 * std::abs(fd2));
    // heat-flow identity at the evaluation level
    const cplx fdt = (p.eval(t + h, z) - p.eval(t - h, z)) / (2.0 * h);
    CHECK(std::abs(fdt - 8.0 * p.eval_dz3(t, z)) < 1e-5 * std::max(1.0, std::abs(fdt)));
}

TEST_CASE("roots of P3 sit at the cube roots of -48 t") {
    const auto p = gh_poly(3);
    const double t = 2.5;
    const auto roots = gh_roots(p, t);
    REQUIRE(roots.size() == 3);
    const double want = std::cbrt(48.0 * t);
    for (const auto& r : roots) {
        CHECK(std::abs(std::abs(r) - want) < 1e-8 * want);
        CHECK(std::abs(p.eval(t, r)) < 1e-7 * 48.0 * t);
    }
}

TEST_CASE("overflow is signalled rather than silently wrapped") {
    CHECK_THROWS_AS((void)gh_poly(60), std::overflow_error);
}
