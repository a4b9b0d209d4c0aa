#include "nvlab/oscillatory.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "nvlab/bessel.hpp"
#include "nvlab/stationary.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nvlab {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr std::array<double, 8> kGlx = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                        0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlw = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                        0.0622535239386479, 0.0271524594117541};

struct ThetaWork {
    std::vector<double> ja, jb;
};

double theta_ring_w(double A, double B, double psi, ThetaWork& w) {
    const double aA = std::abs(A), aB = std::abs(B);
    if (aB < 1e-14) return kTwoPi * bessel_j0(aA);
    const double cutA = aA + 14.0 + 3.2 * std::cbrt(aA);
    const double cutB = (aB + 14.0 + 3.2 * std::cbrt(aB)) / 3.0;
    const int mmax = static_cast<int>(std::min(cutA, cutB));
    if (mmax < 1) {
        return kTwoPi * bessel_j0(aA) * bessel_j0(aB);
    }
    bessel_j_array(aA, mmax, w.ja);
    bessel_j_array(aB, 3 * mmax, w.jb);
    const double sign_step = ((A < 0.0) != (B < 0.0)) ? -1.0 : 1.0;  // (-1)^m per negative arg
    double acc = w.ja[0] * w.jb[0];
    // cos(3 m psi) by Chebyshev recurrence
    const double c1 = std::cos(3.0 * psi);
    double cm1 = 1.0, cm = c1;
    double s = sign_step;
    for (int m = 1; m <= mmax; ++m) {
        acc += 2.0 * s * w.ja[m] * w.jb[3 * m] * cm;
        const double cnext = 2.0 * c1 * cm - cm1;
        cm1 = cm;
        cm = cnext;
        s *= sign_step;
    }
    return kTwoPi * acc;
}

// ---------------------------------------------------------------------------
// torus correlation for the inside integral at E = 1
// ---------------------------------------------------------------------------

cplx inside_torus_at(double t, cplx u, double alpha, double beta, int n) {
    std::vector<cplx> F(n);
    const double u1 = u.real(), u2 = u.imag();
    for (int j = 0; j < n; ++j) {
        const double phi = kTwoPi * j / n;
        const double h = 2.0 * std::cos(3.0 * phi) + u1 * std::cos(phi) + u2 * std::sin(phi);
        F[j] = std::polar(1.0, t * h);
    }
    fftw_plan pf = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(F.data()),
                                    reinterpret_cast<fftw_complex*>(F.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE);
    fftw_execute(pf);
    fftw_destroy_plan(pf);
    std::vector<cplx> P(n);
    for (int k = 0; k < n; ++k) P[k] = F[k] * F[(n - k) % n];
    fftw_plan pb = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(P.data()),
                                    reinterpret_cast<fftw_complex*>(P.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
    fftw_execute(pb);
    fftw_destroy_plan(pb);
    // P[m]/n = sum_j F_{j+m} F_j
    cplx acc = 0.0;
    const bool plain = (alpha == 0.0 && beta == 0.0);
    for (int m = 0; m < n; ++m) {
        const double d = kTwoPi * m / n;
        const double c = 2.0 * std::abs(std::cos(0.5 * d));
        cplx g;
        if (plain) {
            g = std::abs(std::sin(d));
        } else if (c == 0.0) {
            g = 0.0;
        } else {
            g = std::pow(c, alpha) * std::polar(1.0, beta * std::log(c)) * std::abs(std::sin(d));
        }
        acc += g * (P[m] / static_cast<double>(n));
    }
    const double cell = kTwoPi / n;
    return 0.5 * cell * cell * acc;
}

IntegralResult inside_torus(double t, cplx u, double alpha, double beta) {
    const double band = t * (6.0 + std::abs(u)) + 64.0;
    int n = 4096;
    while (n < 2.8 * band) n <<= 1;
    IntegralResult r;
    r.value = inside_torus_at(t, u, alpha, beta, n);
    const cplx coarse = inside_torus_at(t, u, alpha, beta, n / 2);
    r.apost_err = std::abs(r.value - coarse);
    r.lambda_max = 2.0;
    return r;
}

// ---------------------------------------------------------------------------
// radial ring quadrature
// ---------------------------------------------------------------------------

struct RingProblem {
    double t;
    double absu, psi;
    double alpha, beta;
    // phase on the ring: A(r) cos 3th + B(r) cos(th - psi)
    virtual double A(double r) const = 0;
    virtual double B(double r) const { return t * rho(r) * absu; }
    virtual double rho(double r) const = 0;        // |xi| as a function of the ring coordinate
    virtual cplx amplitude(double r) const = 0;    // includes Jacobian and measure factor
    virtual double rate(double r) const = 0;       // bound on |d/dr of the phase|
    virtual ~RingProblem() = default;
};

// plane polar coordinates at arbitrary energy
struct PolarProblem : RingProblem {
    double E;
    double r_lo = 0.0;           // region lower edge
    double bump_R = -1.0;        // if >= 0, large-frequency bump at |xi|/sqrt(E) in [R, R+1]
    int profile = 0;
    double A(double r) const override { return t * (2.0 * r * r * r - 6.0 * E * r); }
    double rho(double r) const override { return r; }
    cplx amplitude(double r) const override {
        if (r <= 0.0) return 0.0;
        double a = std::pow(r, 1.0 + alpha);
        if (bump_R >= 0.0) a *= bump_profile(profile, r / std::sqrt(E) - bump_R);
        if (beta == 0.0) return a;
        return a * std::polar(1.0, beta * std::log(r));
    }
    double rate(double r) const override { return t * (std::abs(6.0 * r * r - 6.0 * E) + absu) + 1.0; }
};

// exterior coordinates xi = lambda + 1/conj(lambda) at E = 1, rings |lambda| = r > 1
struct LambdaProblem : RingProblem {
    double A(double r) const override { return 2.0 * t * (r * r * r + 1.0 / (r * r * r)); }
    double rho(double r) const override { return r + 1.0 / r; }
    cplx amplitude(double r) const override {
        const double rr = r + 1.0 / r;
        const double jac = (1.0 - 1.0 / (r * r * r * r)) * r;
        double a = std::pow(rr, alpha) * jac;
        if (beta == 0.0) return a;
        return a * std::polar(1.0, beta * std::log(rr));
    }
    double rate(double r) const override {
        const double r2 = r * r;
        return t * (6.0 * (r2 - 1.0 / (r2 * r2)) + absu * (1.0 - 1.0 / r2)) + 1.0;
    }
};

// integrate the ring problem over [r0, r1] with GL panels; panel span limited
// by phase_budget radians of radial phase
cplx integrate_rings(const RingProblem& pr, double r0, double r1, double phase_budget) {
    // build panel boundaries by marching at the local rate
    std::vector<double> edges{r0};
    const double len_floor = (r1 - r0) / 6.0;
    double r = r0;
    while (r < r1) {
        const double w = pr.rate(std::min(r1, r + 1e-3));
        double dr = std::min(phase_budget / w, len_floor);
        dr = std::max(dr, 1e-7);
        r = std::min(r1, r + dr);
        edges.push_back(r);
    }
    const int np = static_cast<int>(edges.size()) - 1;
    std::vector<cplx> partial(np, 0.0);
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        ThetaWork work;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 4)
#endif
        for (int p = 0; p < np; ++p) {
            const double a = edges[p], b = edges[p + 1];
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            cplx acc = 0.0;
            for (int q = 0; q < 8; ++q) {
                for (int sgn = -1; sgn <= 1; sgn += 2) {
                    const double rr = mid + sgn * half * kGlx[q];
                    const double th = theta_ring_w(pr.A(rr), pr.B(rr), pr.psi, work);
                    acc += kGlw[q] * half * pr.amplitude(rr) * th;
                }
            }
            partial[p] = acc;
        }
    }
    cplx total = 0.0;
    for (const cplx& v : partial) total += v;  // fixed order for reproducibility
    return total;
}

// lower bound of |grad phase|/t outside radius R (plane polar coordinates)
double polar_grad_floor(double R, double E, double absu) {
    return std::max(1e-9, 4.24 * (R * R - E) - absu);
}

struct TailInfo {
    double estimate;
};

TailInfo polar_tail(double Lam, double t, double E, double absu, double alpha) {
    const double G = polar_grad_floor(Lam, E, absu);
    const double amp = kTwoPi * std::pow(Lam, 1.0 + alpha);
    const double hess = std::max(1.0, t * 18.0 * Lam * Lam * Lam);
    const double sp = std::min(1.0, 3.0 / std::sqrt(hess));
    const double t1 = amp / (t * G) * sp;
    const double t2 = 4.0 * amp / ((t * G) * (t * G) * Lam);
    return {t1 + t2};
}

TailInfo lambda_tail(double Lam, double t, double absu, double alpha, double lam_max) {
    // |grad S| >= (6/r^4) prod (r^2 - |lambda_j|^2) * 2; crude three-equal-factor bound
    const double margin = std::max(1e-9, Lam * Lam - lam_max * lam_max);
    const double G = 6.0 / std::pow(Lam, 4.0) * margin * margin * margin;
    const double rr = Lam + 1.0 / Lam;
    const double amp = kTwoPi * std::pow(rr, alpha) * Lam;
    const double hess = std::max(1.0, t * 18.0 * Lam * Lam * Lam);
    const double sp = std::min(1.0, 3.0 / std::sqrt(hess));
    const double t1 = amp / (t * G) * sp;
    const double t2 = 4.0 * amp / ((t * G) * (t * G) * Lam);
    (void)absu;
    return {t1 + t2};
}

constexpr double kRelTailTarget = 0.004;

// generic adaptive outer loop shared by the three ring-based regions
IntegralResult ring_region(const RingProblem& pr, double r_lo, double lam_start, bool lambda_coords,
                           double E, double lam_stationary) {
    IntegralResult res;
    double Lam = lam_start;
    cplx val = integrate_rings(pr, r_lo, Lam, 18.0);
    double scale = std::max(std::abs(val), 1e-12);
    double last_inc = scale;
    for (int it = 0; it < 48; ++it) {
        const double tail = lambda_coords
                                ? lambda_tail(Lam, pr.t, pr.absu, pr.alpha, lam_stationary).estimate
                                : polar_tail(Lam, pr.t, E, pr.absu, pr.alpha).estimate;
        if (tail < kRelTailTarget * scale && std::abs(last_inc) < kRelTailTarget * scale) break;
        const double Lam2 = Lam * 1.22 + 0.05;
        const cplx inc = integrate_rings(pr, Lam, Lam2, 18.0);
        val += inc;
        last_inc = std::abs(inc);
        Lam = Lam2;
        scale = std::max(std::abs(val), scale * 0.3);
    }
    const cplx fine = integrate_rings(pr, r_lo, Lam, 9.0);
    const double tail_final = lambda_coords
                                  ? lambda_tail(Lam, pr.t, pr.absu, pr.alpha, lam_stationary).estimate
                                  : polar_tail(Lam, pr.t, E, pr.absu, pr.alpha).estimate;
    res.value = fine;
    res.apost_err = std::abs(fine - val) + tail_final + last_inc * 0.5;
    res.lambda_max = Lam;
    res.resolution_ok = res.apost_err <= 0.01 * std::max(std::abs(fine), 1e-300) + 1e-14;
    return res;
}

double max_stationary_modulus_lambda(cplx u) {
    const auto sps = stationary_set(u);
    double m = 0.0;
    for (const auto& l : sps.lambdas) m = std::max(m, std::abs(l));
    return m;
}

}  // namespace

double bump_profile(int profile, double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    if (profile == 1) return 0.5 * (1.0 - std::cos(M_PI * s));
    return std::exp(1.0 - 1.0 / (s * (2.0 - s)));
}

double theta_ring(double A, double B, double psi) {
    ThetaWork w;
    return theta_ring_w(A, B, psi, w);
}

IntegralResult eval_I(const IntegralSpec& spec) {
    if (spec.t <= 0.0) throw std::invalid_argument("eval_I: t must be positive");
    if (spec.E <= 0.0) throw std::invalid_argument("eval_I: E must be positive");
    const double sE = std::sqrt(spec.E);

    if (spec.region == Region::InsideB2) {
        if (spec.E == 1.0) return inside_torus(spec.t, spec.u, spec.alpha, spec.beta);
        // reduce to E = 1 by xi = sqrt(E) xi0 (ball |xi| <= 2 sqrt(E))
        IntegralResult r = inside_torus(std::pow(spec.E, 1.5) * spec.t, spec.u / spec.E, spec.alpha,
                                        spec.beta);
        const cplx fac = std::pow(cplx(spec.E, 0.0), 0.5 * cplx(spec.alpha + 2.0, spec.beta));
        r.value *= fac;
        r.apost_err *= std::abs(fac);
        return r;
    }

    if (spec.region == Region::OutsideB2 && spec.E == 1.0) {
        LambdaProblem pr;
        pr.t = spec.t;
        pr.absu = std::abs(spec.u);
        pr.psi = pr.absu > 0 ? std::arg(spec.u) : 0.0;
        pr.alpha = spec.alpha;
        pr.beta = spec.beta;
        const double lmax = max_stationary_modulus_lambda(spec.u);
        const double start = std::max(1.6, 1.2 * lmax + 0.25);
        return ring_region(pr, 1.0, start, true, 1.0, lmax);
    }

    PolarProblem pr;
    pr.t = spec.t;
    pr.E = spec.E;
    pr.absu = std::abs(spec.u);
    pr.psi = pr.absu > 0 ? std::arg(spec.u) : 0.0;
    pr.alpha = spec.alpha;
    pr.beta = spec.beta;

    double r_lo = 0.0;
    if (spec.region == Region::OutsideB2) {
        r_lo = 2.0 * sE;
    } else if (spec.region == Region::LargeFreq) {
        if (spec.cutoff_R <= 2.0) throw std::invalid_argument("eval_I: cutoff_R must exceed 2");
        pr.bump_R = spec.cutoff_R;
        pr.profile = spec.bump_profile;
        r_lo = spec.cutoff_R * sE;
    }
    // stationary points of the full phase: |grad w| ~ 6 R^2 - 6E = |u| level
    const double Rstar = std::sqrt(pr.absu / 6.0 + spec.E * (spec.region == Region::LargeFreq ? 1.0 : 3.0)) + 1.0;
    const double start = std::max({r_lo + 0.6, 1.25 * Rstar, 2.0 * sE + 0.4});
    return ring_region(pr, r_lo, start, false, spec.E, 0.0);
}

DecayProbe fit_decay(const IntegralSpec& spec, const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw std::invalid_argument("fit_decay: need at least 2 t values");
    DecayProbe probe;
    probe.spec = spec;
    for (double t : t_grid) {
        IntegralSpec s = spec;
        s.t = t;
        const IntegralResult r = eval_I(s);
        probe.t.push_back(t);
        probe.abs_I.push_back(std::abs(r.value));
        probe.apost.push_back(r.apost_err);
        if (!r.resolution_ok) probe.resolution_ok = false;
    }
    const size_t n = probe.t.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(probe.t[i]);
        const double y = std::log(std::max(probe.abs_I[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    probe.slope = (n * sxy - sx * sy) / denom;
    const double b0 = (sy - probe.slope * sx) / n;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(probe.t[i]);
        const double y = std::log(std::max(probe.abs_I[i], 1e-300));
        const double e = y - (probe.slope * x + b0);
        ss += e * e;
    }
    if (n > 2) {
        const double var = ss / (n - 2) * n / denom;
        probe.slope_ci = 1.96 * std::sqrt(std::max(var, 0.0));
    }
    return probe;
}

std::vector<cplx> worst_case_u_grid(int ring_points) {
    std::vector<cplx> us;
    for (int k = 0; k < 3; ++k) {
        const cplx v = 18.0 * std::exp(cplx(0.0, kTwoPi * k / 3.0));
        us.push_back(v);
        us.push_back(-v);
    }
    us.push_back(0.0);
    for (double radius : {6.0, 18.0, 30.0})
        for (int k = 0; k < ring_points; ++k)
            us.push_back(radius * std::exp(cplx(0.0, kTwoPi * k / ring_points)));
    return us;
}

double scaling_identity_check(double t, cplx u, double E, double alpha) {
    IntegralSpec native;
    native.alpha = alpha;
    native.E = E;
    native.u = u;
    native.t = t;
    native.region = Region::Full;
    const IntegralResult lhs = eval_I(native);

    // rescaled evaluation at E = 1 through the split engines
    IntegralSpec in1 = native, out1 = native;
    in1.E = out1.E = 1.0;
    in1.t = out1.t = std::pow(E, 1.5) * t;
    in1.u = out1.u = u / E;
    in1.region = Region::InsideB2;
    out1.region = Region::OutsideB2;
    const cplx rhs = std::pow(E, 0.5 * (alpha + 2.0)) * (eval_I(in1).value + eval_I(out1).value);

    return std::abs(lhs.value - rhs) / std::max(std::abs(lhs.value), 1e-300);
}

}  // namespace nvlab
