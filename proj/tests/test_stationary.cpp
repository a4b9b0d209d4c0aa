#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nvlab/manifest.hpp"
#include "nvlab/stationary.hpp"

using namespace nvlab;

namespace {

// independent brute-force oracle over all index pairs
std::pair<double, double> omega_oracle(const std::array<cplx, 6>& l) {
    double w1 = std::numeric_limits<double>::max();
    int bi = -1, bj = -1;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (i >= j) continue;
            if (i == 2 && j == 5) continue;
            const double d = std::abs(l[i] - l[j]);
            if (d < w1 - 1e-15) { w1 = d; bi = i; bj = j; }
        }
    int ai = (bi + 3) % 6, aj = (bj + 3) % 6;
    if (ai > aj) std::swap(ai, aj);
    double w2 = std::numeric_limits<double>::max();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (i >= j) continue;
            if (i == 2 && j == 5) continue;
            if (i == bi && j == bj) continue;
            if (i == ai && j == aj) continue;
            w2 = std::min(w2, std::abs(l[i] - l[j]));
        }
    return {w1, w2};
}

}  // namespace

TEST_CASE("triple root at the vertices") {
    for (int k = 0; k < 3; ++k) {
        const cplx ut = 18.0 * std::exp(cplx(0.0, 2.0 * M_PI * k / 3.0));
        const auto zs = roots_zeta(ut);
        const cplx want = std::exp(cplx(0.0, -2.0 * M_PI * k / 3.0));
        for (const auto& z : zs) CHECK(std::abs(z - want) < 1e-5);
        for (const auto& z : zs) CHECK(cubic_residual(ut, z) < 1e-10);

        const auto sps = stationary_set(ut);
        CHECK(sps.case_tag == StationaryCase::TripleDegenerate);
        // e^{-i pi k/3} appears among the six points
        const cplx lam_want = std::exp(cplx(0.0, -M_PI * k / 3.0));
        double nearest = 1e9;
        for (const auto& l : sps.lambdas) nearest = std::min(nearest, std::abs(l - lam_want));
        CHECK(nearest < 1e-6);
        CHECK(std::abs(sps.lambdas[0] * sps.lambdas[1] * sps.lambdas[2] - 1.0) < 1e-10);
        CHECK(sps.omega1 == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(sps.omega2 == doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("ut = 0 gives the cube roots of unity") {
    const auto zs = roots_zeta(0.0);
    for (const auto& z : zs) {
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
        CHECK(std::abs(z * z * z - 1.0) < 1e-10);
    }
    const auto sps = stationary_set(0.0);
    CHECK(sps.case_tag == StationaryCase::InteriorNondegenerate);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(std::abs(sps.lambdas[i] - sps.lambdas[j]) > 0.1);
}

TEST_CASE("boundary parameter gives a double root") {
    const double phi = M_PI / 2.0;
    const cplx ut = u_curve(phi);
    const auto zs = roots_zeta(ut);
    const cplx zd = std::exp(cplx(0.0, phi));
    const cplx zsimple = std::exp(cplx(0.0, -2.0 * phi));
    int near_double = 0, near_simple = 0;
    for (const auto& z : zs) {
        if (std::abs(z - zd) < 1e-4) ++near_double;
        if (std::abs(z - zsimple) < 1e-4) ++near_simple;
    }
    CHECK(near_double == 2);
    CHECK(near_simple == 1);
    CHECK(stationary_set(ut).case_tag == StationaryCase::OnCurve);
}

TEST_CASE("exterior point ut = 30 (exact roots 1, 2 +- sqrt 3)") {
    const auto sps = stationary_set(30.0);
    CHECK(sps.case_tag == StationaryCase::Exterior);
    CHECK(std::abs(sps.lambdas[0]) == doctest::Approx(std::sqrt(2.0 + std::sqrt(3.0))).epsilon(1e-10));
    CHECK(std::abs(sps.lambdas[1]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(sps.lambdas[2]) == doctest::Approx(std::sqrt(2.0 - std::sqrt(3.0))).epsilon(1e-10));
    CHECK(sps.omega == doctest::Approx(std::sqrt(2.0 + std::sqrt(3.0)) - 1.0).epsilon(1e-10));
    // omega1 = |l1 - l2|, omega2 = |l0 - l1| for this configuration
    const double l0 = std::sqrt(2.0 + std::sqrt(3.0)), l2 = std::sqrt(2.0 - std::sqrt(3.0));
    CHECK(sps.omega1 == doctest::Approx(1.0 - l2).epsilon(1e-9));
    CHECK(sps.omega2 == doctest::Approx(l0 - 1.0).epsilon(1e-9));
    CHECK(!in_U(30.0));
}

TEST_CASE("region membership") {
    CHECK(in_U(0.0));
    CHECK(in_U(cplx(17.99999, 0.0)));
    CHECK(!in_U(cplx(30.0, 0.0)));
    // the parametrized boundary curve scaled inward stays inside
    for (int j = 0; j < 360; ++j) {
        const double phi = 2.0 * M_PI * j / 360.0;
        for (double s : {0.0, 0.35, 0.75, 1.0})
            CHECK(in_U(s * u_curve(phi), 2e-6));
    }
    // and scaled outward leaves the region
    for (int j = 0; j < 36; ++j)
        CHECK(!in_U(1.25 * u_curve(2.0 * M_PI * j / 36.0)));
}

TEST_CASE("derivative factorization through the roots") {
    SplitRng rng{17};
    for (int s = 0; s < 50; ++s) {
        const auto [ur, ui] = rng.disk_point(0, s, 30.0);
        const cplx ut(ur, ui);
        const auto sps = stationary_set(ut);
        for (int q = 0; q < 50; ++q) {
            const auto [lr, li] = rng.disk_point(1, 50 * s + q, 2.0);
            const cplx lam(lr + 0.3, li + 0.3);
            if (std::abs(lam) < 0.4) continue;
            const cplx direct = phase_dlambda(ut, lam);
            cplx fac = -3.0 / std::pow(lam, 4);
            for (int i = 0; i < 3; ++i)
                fac *= (lam * lam - sps.lambdas[i] * sps.lambdas[i]);
            CHECK(std::abs(direct - fac) <= 1e-8 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("stationary points annihilate the phase derivative") {
    SplitRng rng{23};
    for (int s = 0; s < 400; ++s) {
        const auto [ur, ui] = rng.disk_point(0, s, 36.0);
        const cplx ut(ur, ui);
        const auto sps = stationary_set(ut);
        for (const auto& l : sps.lambdas)
            CHECK(std::abs(phase_dlambda(ut, l)) < 1e-8 * std::max(1.0, std::abs(ut)));
        // antipodal arrangement by construction
        for (int i = 0; i < 3; ++i) CHECK(sps.lambdas[i + 3] == -sps.lambdas[i]);
    }
}

TEST_CASE("exterior reciprocal-modulus structure") {
    SplitRng rng{29};
    int found = 0;
    for (int s = 0; found < 200; ++s) {
        const auto [ur, ui] = rng.disk_point(0, s, 60.0);
        const cplx ut(ur, ui);
        const auto sps = stationary_set(ut);
        if (sps.case_tag != StationaryCase::Exterior) continue;
        ++found;
        CHECK(std::abs(sps.lambdas[0]) * std::abs(sps.lambdas[2]) == doctest::Approx(1.0).epsilon(1e-10));
        const cplx r0 = sps.lambdas[0] / std::abs(sps.lambdas[0]);
        const cplx r2 = sps.lambdas[2] / std::abs(sps.lambdas[2]);
        CHECK(std::abs(r0 - r2) < 1e-8);
        CHECK(std::abs(std::abs(sps.lambdas[1]) - 1.0) < 1e-9);
        CHECK(sps.omega > 0.0);
        // lambda_0 = (1 + omega) e^{i phi/2}
        const cplx predicted = (1.0 + sps.omega) * std::exp(cplx(0.0, sps.phi / 2.0));
        CHECK(std::min(std::abs(predicted - sps.lambdas[0]), std::abs(predicted + sps.lambdas[0]))
              < 1e-8 * (1.0 + sps.omega));
    }
}

TEST_CASE("omega distances match the exhaustive oracle") {
    SplitRng rng{31};
    for (int s = 0; s < 2000; ++s) {
        const auto [ur, ui] = rng.disk_point(0, s, 36.0);
        const auto sps = stationary_set(cplx(ur, ui));
        const auto [w1, w2] = omega_oracle(sps.lambdas);
        CHECK(sps.omega1 == doctest::Approx(w1).epsilon(1e-12));
        CHECK(sps.omega2 == doctest::Approx(w2).epsilon(1e-12));
        CHECK(sps.omega1 <= sps.omega2 + 1e-12);
        CHECK(sps.omega2 < 2.0);
    }
}

TEST_CASE("boundary case distances: omega1 = 0 and the two candidate omega2 values") {
    for (double phi : {0.3, 1.1, 2.7, 4.0}) {
        const cplx ut = u_curve(phi);
        const auto sps = stationary_set(ut);
        REQUIRE(sps.case_tag == StationaryCase::OnCurve);
        CHECK(sps.omega1 == doctest::Approx(0.0).epsilon(1e-7));
        const cplx a = std::exp(cplx(0.0, phi / 2.0));
        const cplx b = std::exp(cplx(0.0, -phi));
        const double expect = std::min(std::abs(a - b), std::abs(a + b));
        CHECK(sps.omega2 == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("lemma report over a random sweep") {
    SplitRng rng{37};
    double max_circle = 0.0, max_degen = 0.0;
    for (int s = 0; s < 10000; ++s) {
        const auto [ur, ui] = rng.disk_point(0, s, 36.0);
        const auto sps = stationary_set(cplx(ur, ui));
        const auto rep = verify_lemmas(sps);
        CHECK(rep.ordering_ok);
        CHECK(rep.base_point_ok);
        CHECK(rep.cluster_ok);
        if (rep.in_ball_K) {
            max_circle = std::max(max_circle, rep.circle_dist_ratio);
            max_degen = std::max(max_degen, rep.degenerate_dist_ratio);
        }
    }
    // the bounds are existential; the sweep measures finite constants
    CHECK(max_circle < 50.0);
    CHECK(max_degen < 50.0);
    MESSAGE("measured C(circle) = ", max_circle, ", C(degenerate) = ", max_degen);
}

TEST_CASE("vertex case report is trivial") {
    const auto sps = stationary_set(cplx(18.0, 0.0));
    const auto rep = verify_lemmas(sps);
    CHECK(rep.ordering_ok);
    CHECK(rep.base_point_ok);
    CHECK(rep.circle_dist_ratio == 0.0);
    CHECK(rep.degenerate_dist_ratio == 0.0);
}
