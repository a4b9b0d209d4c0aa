#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nvlab/manifest.hpp"
#include "nvlab/solutions.hpp"
#include "nvlab/symbol.hpp"
#include "nvlab/fft2.hpp"

using namespace nvlab;

TEST_CASE("pointwise values") {
    // Q2c(0) vanishes at the origin
    CHECK(eval_solution(SolutionSpec::q2c(0.0), 0.0, 0.0, 0.0).v == doctest::Approx(0.0));
    // Q1ab(0,0) = -8 at the origin
    CHECK(eval_solution(SolutionSpec::q1ab(0, 0), 0.0, 0.0, 0.0).v == doctest::Approx(-8.0));
    // Q2c(0) = -32 |z|^2/(1+|z|^4)^2
    for (double x : {0.3, 1.0, 2.4}) {
        const double r2 = x * x;
        const double want = -32.0 * r2 / std::pow(1.0 + r2 * r2, 2);
        CHECK(eval_solution(SolutionSpec::q2c(0.0), 0.0, x, 0.0).v == doctest::Approx(want));
    }
    // expanded rational form of the c-family (frozen from the closed form)
    const auto r = eval_solution(SolutionSpec::q2c(0.5), 0.25, 1.3, -0.7);
    const double D = 1 - 24 * 0.5 * 0.25 + 0.5 * (std::pow(1.3, 3) + std::pow(-0.7, 3))
                     + std::pow(1.3 * 1.3 + 0.49, 2);
    CHECK(r.log_arg == doctest::Approx(D).epsilon(1e-12));
}

TEST_CASE("q1 equals the n = 1 rational family pointwise") {
    const auto q1 = SolutionSpec::q1ab(0, 0);
    const auto qn1 = SolutionSpec::qn0(1);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double x = -4.5 + i, y = -4.5 + j;
            CHECK(eval_solution(q1, 0.3, x, y).v
                  == doctest::Approx(eval_solution(qn1, 0.3, x, y).v).epsilon(1e-12));
        }
}

TEST_CASE("families are nonpositive") {
    SplitRng rng{5};
    for (int i = 0; i < 500; ++i) {
        const auto [x, y] = rng.disk_point(0, i, 12.0);
        CHECK(eval_solution(SolutionSpec::q1ab(0.7, -1.1), 0.0, x, y).v <= 1e-15);
        CHECK(eval_solution(SolutionSpec::q2c(0.0), 0.0, x, y).v <= 1e-15);
        CHECK(eval_solution(SolutionSpec::qn0(3), 1.0, x, y).v <= 1e-15);
    }
}

TEST_CASE("masses: -8 n pi") {
    CHECK(mass(SolutionSpec::q1ab(0, 0), 0.0) == doctest::Approx(-8.0 * M_PI).epsilon(1e-3));
    CHECK(mass(SolutionSpec::q2c(0.0), 0.0) == doctest::Approx(-16.0 * M_PI).epsilon(1e-3));
    CHECK(mass(SolutionSpec::qn0(3), 0.0) == doctest::Approx(-24.0 * M_PI).epsilon(2e-3));
}

TEST_CASE("mass is conserved in t and invariant under scaling") {
    const auto q = SolutionSpec::q2c(0.5);
    const double m0 = mass(q, 0.0);
    CHECK(mass(q, 0.02) == doctest::Approx(m0).epsilon(5e-3));
    const auto q1 = SolutionSpec::q1ab(0.3, 0.2);
    const double base = mass(q1, 0.0);
    CHECK(mass(q1.scaled_by(2.0), 0.0) == doctest::Approx(base).epsilon(5e-3));
    CHECK(mass(q1.scaled_by(0.5), 0.0) == doctest::Approx(base).epsilon(5e-3));
}

TEST_CASE("radial decay exponents") {
    auto fitted_decay = [](const SolutionSpec& s, double t) {
        // log-log slope of |v| along a ray over r in [30, 300]
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double r = 30.0; r <= 300.0; r *= 1.3) {
            const double v = std::abs(eval_solution(s, t, r * 0.8, r * 0.6).v);
            const double lx = std::log(r), ly = std::log(v);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    CHECK(std::abs(fitted_decay(SolutionSpec::q2c(0.0), 0.0) - (-6.0)) < 0.3);
    CHECK(std::abs(fitted_decay(SolutionSpec::q2c(0.7), 0.0) - (-3.0)) < 0.3);
    for (int n : {1, 2, 3})
        CHECK(std::abs(fitted_decay(SolutionSpec::qn0(n), 0.0) - (-2.0 * (n + 1))) < 0.3);
}

TEST_CASE("blow-up scan") {
    // spatial minimum of the denominator is 1 - (27/256) c^4, so the first
    // crossing sits at (1 - 27 c^4/256)/(24 c)
    for (double c : {0.5, 1.0, 1.5}) {
        const auto scan = blowup_scan(SolutionSpec::q2c(c), 100.0);
        CHECK(scan.crossed);
        const double want = (1.0 - 27.0 * std::pow(c, 4) / 256.0) / (24.0 * c);
        CHECK(scan.t_star == doctest::Approx(want).epsilon(1e-3));
        CHECK(scan.min_denom_t0 == doctest::Approx(1.0 - 27.0 * std::pow(c, 4) / 256.0).epsilon(1e-4));
    }
    CHECK(!blowup_scan(SolutionSpec::q2c(-1.0), 100.0).crossed);
    CHECK(!blowup_scan(SolutionSpec::q2c(0.0), 100.0).crossed);
    CHECK(blowup_scan(SolutionSpec::q2c(0.0), 100.0).min_denom_t0 == doctest::Approx(1.0));
}

TEST_CASE("rational-family L2 growth") {
    const auto fit = l2_growth(3, {1, 2, 4, 8, 16, 32, 64});
    CHECK(fit.increasing);
    CHECK(fit.slope >= 1.0 / 3.0);
    MESSAGE("n=3 growth slope ", fit.slope, " (candidates 4/3 and 1/3)");
    // tracked root of P3: |z0| = (48 t)^{1/3}
    CHECK(fit.root_ratio == doctest::Approx(std::cbrt(48.0)).epsilon(1e-6));
}

TEST_CASE("w field: closed form against numerical log-derivative") {
    const auto q = SolutionSpec::qn0(2);
    SplitRng rng{9};
    for (int i = 0; i < 100; ++i) {
        const auto [x, y] = rng.disk_point(0, i, 4.0);
        const cplx w = w_field(q, 0.4, x, y);
        // 24 dz^2 log(1+|P|^2) via central differences
        auto logD = [&](double xx, double yy) {
            return std::log(eval_solution(q, 0.4, xx, yy).log_arg);
        };
        const double h = 1e-4;
        auto dz = [&](auto f, double xx, double yy) {
            return cplx((f(xx + h, yy) - f(xx - h, yy)) / (2 * h),
                        -(f(xx, yy + h) - f(xx, yy - h)) / (2 * h))
                   * 0.5;
        };
        auto dlog = [&](double xx, double yy) { return dz(logD, xx, yy); };
        auto re = [&](double xx, double yy) { return dlog(xx, yy).real(); };
        auto im = [&](double xx, double yy) { return dlog(xx, yy).imag(); };
        const cplx w_fd = 24.0 * (dz(re, x, y) + cplx(0, 1) * dz(im, x, y));
        CHECK(std::abs(w - w_fd) < 2e-5 * std::max(1.0, std::abs(w)));
    }
    // n = 1 numerator vanishes at the origin
    CHECK(std::abs(w_field(SolutionSpec::qn0(1), 0.0, 0.0, 0.0)) < 1e-14);
}

TEST_CASE("w field matches the spectral multiplier on a grid") {
    const int N = 256;
    const double L = 40.0;
    Fft2 fft(N);
    std::vector<cplx> v(size_t(N) * N);
    const auto q = SolutionSpec::qn0(2);
    std::vector<cplx> w_closed(size_t(N) * N);
    for (int i = 0; i < N; ++i) {
        const double x = -L + 2.0 * L * i / N;
        for (int j = 0; j < N; ++j) {
            const double y = -L + 2.0 * L * j / N;
            v[size_t(i) * N + j] = eval_solution(q, 0.0, x, y).v;
            w_closed[size_t(i) * N + j] = w_field(q, 0.0, x, y);
        }
    }
    fft.forward(v);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const size_t id = size_t(i) * N + j;
            v[id] *= -3.0 * dbar_inv_dz_multiplier(wavenumber(i, N, L), wavenumber(j, N, L));
        }
    fft.backward_normalized(v);
    double num = 0.0, den = 0.0;
    for (size_t id = 0; id < v.size(); ++id) {
        num += std::norm(v[id] - w_closed[id]);
        den += std::norm(w_closed[id]);
    }
    CHECK(std::sqrt(num / den) < 0.02);  // truncation-limited
}

TEST_CASE("equation residual of the closed families") {
    CHECK(nv_residual(SolutionSpec::q1ab(0, 0), 0.0, 512, 60.0) < 1e-3);
    CHECK(nv_residual(SolutionSpec::q2c(0.5), 0.0, 512, 60.0) < 1e-2);
    CHECK(nv_residual(SolutionSpec::qn0(3), 1.0, 2048, 7.0) < 1e-2);
}

TEST_CASE("parameter domain checks") {
    CHECK_THROWS_AS((void)SolutionSpec::q1ab(2.0, 0.1), std::domain_error);
    CHECK_THROWS_AS((void)SolutionSpec::qn0(0), std::domain_error);
    // beyond the critical parameter the t = 0 denominator dips negative
    const auto scan = blowup_scan(SolutionSpec::q2c(1.9), 1.0);
    CHECK(scan.min_denom_t0 < 0.0);
}
