#include "nvlab/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nvlab/fft2.hpp"

namespace nvlab {
namespace {

struct LocalD {
    double D, Dx, Dy, Dxx, Dyy, Dxy;
};

LocalD q1ab_D(double a, double b, double x, double y) {
    return {1.0 + a * x + b * y + x * x + y * y, a + 2 * x, b + 2 * y, 2.0, 2.0, 0.0};
}

LocalD q2c_D(double c, double t, double x, double y) {
    const double r2 = x * x + y * y;
    LocalD d;
    d.D = 1.0 - 24.0 * c * t + c * (x * x * x + y * y * y) + r2 * r2;
    d.Dx = 3.0 * c * x * x + 4.0 * x * r2;
    d.Dy = 3.0 * c * y * y + 4.0 * y * r2;
    d.Dxx = 6.0 * c * x + 4.0 * r2 + 8.0 * x * x;
    d.Dyy = 6.0 * c * y + 4.0 * r2 + 8.0 * y * y;
    d.Dxy = 8.0 * x * y;
    return d;
}

struct GHCache {
    int n = -1;
    GHPoly p;
};

const GHPoly& cached_gh(int n) {
    thread_local GHCache cache;
    if (cache.n != n) {
        cache.p = gh_poly(n);
        cache.n = n;
    }
    return cache.p;
}

}  // namespace

SolutionSpec SolutionSpec::q1ab(double a, double b) {
    if (a * a + b * b >= 4.0) throw std::domain_error("q1ab requires a^2 + b^2 < 4");
    SolutionSpec s;
    s.family = Family::Q1ab;
    s.a = a;
    s.b = b;
    return s;
}

SolutionSpec SolutionSpec::q2c(double c) {
    SolutionSpec s;
    s.family = Family::Q2c;
    s.c = c;
    return s;
}

SolutionSpec SolutionSpec::qn0(int n) {
    if (n < 1) throw std::domain_error("qn0 requires n >= 1");
    SolutionSpec s;
    s.family = Family::Qn0;
    s.n = n;
    return s;
}

SolutionSpec SolutionSpec::scaled_by(double lambda) const {
    SolutionSpec s = *this;
    s.scale *= lambda;
    return s;
}

EvalResult eval_solution(const SolutionSpec& s, double t, double x, double y) {
    const double la = s.scale;
    if (la != 1.0) {
        SolutionSpec base = s;
        base.scale = 1.0;
        EvalResult r = eval_solution(base, la * la * la * t, la * x, la * y);
        r.v *= la * la;
        return r;
    }
    EvalResult r;
    switch (s.family) {
        case SolutionSpec::Family::Q1ab: {
            const LocalD d = q1ab_D(s.a, s.b, x, y);
            r.log_arg = d.D;
            if (d.D <= 0.0) {
                r.blown_up = true;
                return r;
            }
            r.v = -2.0 * (4.0 - s.a * s.a - s.b * s.b) / (d.D * d.D);
            return r;
        }
        case SolutionSpec::Family::Q2c: {
            const LocalD d = q2c_D(s.c, t, x, y);
            r.log_arg = d.D;
            if (d.D <= 0.0) {
                r.blown_up = true;
                return r;
            }
            // v = -2 Lap log D = -2 (Lap(D) D - |grad D|^2)/D^2
            r.v = -2.0 * ((d.Dxx + d.Dyy) * d.D - d.Dx * d.Dx - d.Dy * d.Dy) / (d.D * d.D);
            return r;
        }
        case SolutionSpec::Family::Qn0: {
            const GHPoly& p = cached_gh(s.n);
            const cplx z(x, y);
            const cplx P = p.eval(t, z);
            const cplx Pp = p.eval_dz(t, z);
            const double D = 1.0 + std::norm(P);
            r.log_arg = D;
            r.v = -8.0 * std::norm(Pp) / (D * D);
            return r;
        }
    }
    return r;
}

cplx w_field(const SolutionSpec& s, double t, double x, double y) {
    const double la = s.scale;
    if (la != 1.0) {
        SolutionSpec base = s;
        base.scale = 1.0;
        return la * la * w_field(base, la * la * la * t, la * x, la * y);
    }
    if (s.family == SolutionSpec::Family::Qn0) {
        const GHPoly& p = cached_gh(s.n);
        const cplx z(x, y);
        const cplx P = p.eval(t, z);
        const cplx Pp = p.eval_dz(t, z);
        const cplx Ppp = p.eval_dz2(t, z);
        const double D = 1.0 + std::norm(P);
        return 24.0 * std::conj(P) * (Ppp * D - Pp * Pp * std::conj(P)) / (D * D);
    }
    const LocalD d = (s.family == SolutionSpec::Family::Q1ab) ? q1ab_D(s.a, s.b, x, y)
                                                              : q2c_D(s.c, t, x, y);
    // W = 24 dz^2 log D = 24 (Dzz D - Dz^2)/D^2
    const cplx Dz(0.5 * d.Dx, -0.5 * d.Dy);
    const cplx Dzz(0.25 * (d.Dxx - d.Dyy), -0.5 * d.Dxy);
    return 24.0 * (Dzz * d.D - Dz * Dz) / (d.D * d.D);
}

namespace {

// angular mean of f(r cos, r sin) with doubling trapezoid
template <class F>
double angular_mean(const F& f, double r, double tol, int nmax = 4096) {
    int n = 32;
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        prev += f(r * std::cos(th), r * std::sin(th));
    }
    prev /= n;
    while (n < nmax) {
        const int n2 = 2 * n;
        double sum_new = 0.0;
        for (int i = 1; i < n2; i += 2) {
            const double th = 2.0 * M_PI * i / n2;
            sum_new += f(r * std::cos(th), r * std::sin(th));
        }
        const double cur = 0.5 * prev + sum_new / n2;
        if (std::abs(cur - prev) <= tol * std::max(1e-300, std::abs(cur))) return cur;
        prev = cur;
        n = n2;
    }
    return prev;
}

// adaptive Simpson on [a, b]
template <class F>
double simpson_adaptive(const F& f, double a, double b, double fa, double fm, double fb, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_adaptive(f, a, m, fa, flm, fm, tol / 2, depth - 1)
         + simpson_adaptive(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

template <class F>
double integrate_radial(const F& g, double a, double b, double tol) {
    const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    return simpson_adaptive(g, a, b, fa, fm, fb, tol, 28);
}

// plane integral of a sampled observable with fitted power-law tail
template <class PointF>
double plane_integral(const PointF& f, double r_core, double rel_tol) {
    const double angtol = rel_tol * 0.05;
    auto ring = [&](double r) { return 2.0 * M_PI * r * angular_mean(f, r, angtol); };

    // grow the integration radius until the ring contribution is deep in the tail
    double R = r_core;
    double inner = integrate_radial(ring, 0.0, R, 1e-12);
    for (int it = 0; it < 60; ++it) {
        const double R2 = R * 1.5;
        const double add = integrate_radial(ring, R, R2, 1e-12);
        inner += add;
        R = R2;
        if (std::abs(add) < 0.25 * rel_tol * std::abs(inner) && it > 2) break;
    }
    // fit ring(r) ~ C r^{1-p+1}: sample the angular-mean decay and extend analytically
    const double r1 = R, r2 = 1.35 * R, r3 = 1.8 * R;
    const double g1 = ring(r1), g2 = ring(r2), g3 = ring(r3);
    double tail = 0.0;
    if (g1 != 0.0 && g2 != 0.0 && g3 != 0.0 && (g1 > 0) == (g2 > 0) && (g2 > 0) == (g3 > 0)) {
        const double q = std::log(std::abs(g3 / g1)) / std::log(r3 / r1);  // ring ~ r^q, q < -1
        if (q < -1.05) {
            // integral_R^inf C r^q dr with C matched at r1
            tail = -g1 * r1 / (q + 1.0);
        }
    }
    return inner + tail;
}

double core_radius(const SolutionSpec& s, double t) {
    switch (s.family) {
        case SolutionSpec::Family::Q1ab: return 8.0 / s.scale;
        case SolutionSpec::Family::Q2c: return (8.0 + 4.0 * std::cbrt(std::abs(24.0 * s.c * t) + 1.0)) / s.scale;
        case SolutionSpec::Family::Qn0:
            return (6.0 + 2.5 * std::cbrt(48.0 * std::abs(t) * 4.0 + 1.0)) / s.scale;
    }
    return 10.0;
}

}  // namespace

double mass(const SolutionSpec& s, double t, double rel_tol) {
    auto f = [&](double x, double y) {
        const EvalResult r = eval_solution(s, t, x, y);
        if (r.blown_up) throw std::runtime_error("mass: solution blown up at sample point");
        return r.v;
    };
    return plane_integral(f, core_radius(s, t), rel_tol);
}

double l2_norm_sq(const SolutionSpec& s, double t, double rel_tol) {
    auto f = [&](double x, double y) {
        const EvalResult r = eval_solution(s, t, x, y);
        return r.v * r.v;
    };
    return plane_integral(f, core_radius(s, t), rel_tol);
}

namespace {

// Nelder-Mead on the spatial part of the Q2c denominator
double nm_min2d(double c, double x0, double y0) {
    auto f = [&](double x, double y) {
        const double r2 = x * x + y * y;
        return 1.0 + c * (x * x * x + y * y * y) + r2 * r2;
    };
    double px[3] = {x0, x0 + 0.05, x0};
    double py[3] = {y0, y0, y0 + 0.05};
    double fv[3] = {f(px[0], py[0]), f(px[1], py[1]), f(px[2], py[2])};
    for (int it = 0; it < 300; ++it) {
        int hi = 0, lo = 0;
        for (int i = 1; i < 3; ++i) {
            if (fv[i] > fv[hi]) hi = i;
            if (fv[i] < fv[lo]) lo = i;
        }
        const double cx = (px[0] + px[1] + px[2] - px[hi]) / 2.0;
        const double cy = (py[0] + py[1] + py[2] - py[hi]) / 2.0;
        const double rx = cx + (cx - px[hi]), ry = cy + (cy - py[hi]);
        const double fr = f(rx, ry);
        if (fr < fv[lo]) {
            const double ex = cx + 2.0 * (cx - px[hi]), ey = cy + 2.0 * (cy - py[hi]);
            const double fe = f(ex, ey);
            if (fe < fr) { px[hi] = ex; py[hi] = ey; fv[hi] = fe; }
            else { px[hi] = rx; py[hi] = ry; fv[hi] = fr; }
        } else if (fr < fv[hi]) {
            px[hi] = rx; py[hi] = ry; fv[hi] = fr;
        } else {
            const double sx = cx + 0.5 * (px[hi] - cx), sy = cy + 0.5 * (py[hi] - cy);
            const double fs = f(sx, sy);
            if (fs < fv[hi]) { px[hi] = sx; py[hi] = sy; fv[hi] = fs; }
            else {
                for (int i = 0; i < 3; ++i) {
                    if (i == lo) continue;
                    px[i] = 0.5 * (px[i] + px[lo]);
                    py[i] = 0.5 * (py[i] + py[lo]);
                    fv[i] = f(px[i], py[i]);
                }
            }
        }
        if (std::abs(fv[hi] - fv[lo]) < 1e-14 * (1.0 + std::abs(fv[lo]))) break;
    }
    return std::min({fv[0], fv[1], fv[2]});
}

}  // namespace

BlowupScan blowup_scan(const SolutionSpec& s, double t_max) {
    if (s.family != SolutionSpec::Family::Q2c)
        throw std::invalid_argument("blowup_scan expects a Q2c spec");
    const double c = s.c;
    BlowupScan out;

    // spatial minimum of 1 + c(x^3+y^3) + r^4 on a grid, then polish
    double best = 1.0;
    double bx = 0.0, by = 0.0;
    const int ng = 64;
    for (int i = 0; i < ng; ++i)
        for (int j = 0; j < ng; ++j) {
            const double x = -3.0 + 6.0 * i / (ng - 1);
            const double y = -3.0 + 6.0 * j / (ng - 1);
            const double r2 = x * x + y * y;
            const double val = 1.0 + c * (x * x * x + y * y * y) + r2 * r2;
            if (val < best) { best = val; bx = x; by = y; }
        }
    const double m0 = std::min(best, nm_min2d(c, bx, by));
    out.min_denom_t0 = m0;

    // denominator minimum is m0 - 24 c t; scan t for the first crossing
    if (c <= 0.0) {
        out.crossed = (m0 <= 0.0);
        out.t_star = 0.0;
        return out;
    }
    const int nt = 64;
    double prev_t = 0.0, prev_m = m0;
    for (int i = 1; i <= nt; ++i) {
        const double t = t_max * i / nt;
        const double m = m0 - 24.0 * c * t;
        if (m <= 0.0) {
            // bisect the bracket
            double lo = prev_t, hi = t;
            for (int b = 0; b < 80; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (m0 - 24.0 * c * mid <= 0.0) hi = mid;
                else lo = mid;
            }
            out.crossed = true;
            out.t_star = 0.5 * (lo + hi);
            return out;
        }
        prev_t = t;
        prev_m = m;
    }
    (void)prev_m;
    return out;
}

L2GrowthFit l2_growth(int n, const std::vector<double>& t_grid) {
    if (n < 3) throw std::invalid_argument("l2_growth expects n >= 3");
    L2GrowthFit fit;
    fit.t = t_grid;
    const SolutionSpec s = SolutionSpec::qn0(n);
    for (double t : t_grid) fit.l2sq.push_back(l2_norm_sq(s, t));

    fit.increasing = true;
    for (size_t i = 1; i < fit.l2sq.size(); ++i)
        if (fit.l2sq[i] <= fit.l2sq[i - 1]) fit.increasing = false;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const size_t m = t_grid.size();
    for (size_t i = 0; i < m; ++i) {
        const double lx = std::log(t_grid[i]), ly = std::log(fit.l2sq[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    const GHPoly p = gh_poly(n);
    const double tb = t_grid.back();
    double zbest = 0.0;
    for (const cplx& z : gh_roots(p, tb)) zbest = std::max(zbest, std::abs(z));
    fit.root_ratio = zbest / std::cbrt(tb);
    return fit;
}

double nv_residual(const SolutionSpec& s, double t, int N, double L) {
    Fft2 fft(N);
    const size_t total = static_cast<size_t>(N) * N;
    std::vector<cplx> v(total), w1(total), w2(total), dtv(total);

    for (int i = 0; i < N; ++i) {
        const double x = -L + 2.0 * L * i / N;
        for (int j = 0; j < N; ++j) {
            const double y = -L + 2.0 * L * j / N;
            const size_t id = static_cast<size_t>(i) * N + j;
            v[id] = eval_solution(s, t, x, y).v;
            const cplx W = w_field(s, t, x, y);
            w1[id] = v[id].real() * W.real();
            w2[id] = v[id].real() * W.imag();
            // closed-form time derivative per family
            switch (s.family) {
                case SolutionSpec::Family::Q1ab: dtv[id] = 0.0; break;
                case SolutionSpec::Family::Q2c: {
                    const LocalD d = q2c_D(s.c, t, x, y);
                    dtv[id] = 48.0 * s.c
                              * (-(d.Dxx + d.Dyy) / (d.D * d.D)
                                 + 2.0 * (d.Dx * d.Dx + d.Dy * d.Dy) / (d.D * d.D * d.D));
                    break;
                }
                case SolutionSpec::Family::Qn0: {
                    const GHPoly& p = cached_gh(s.n);
                    const cplx z(x, y);
                    const cplx P = p.eval(t, z), Pp = p.eval_dz(t, z);
                    const cplx P3 = p.eval_dz3(t, z), P4 = p.eval_dz4(t, z);
                    const double D = 1.0 + std::norm(P);
                    const double dnum = 16.0 * (P4 * std::conj(Pp)).real();
                    const double dD = 16.0 * (P3 * std::conj(P)).real();
                    dtv[id] = (-8.0 * dnum * D + 16.0 * std::norm(Pp) * dD) / (D * D * D);
                    break;
                }
            }
        }
    }
    if (s.scale != 1.0) throw std::invalid_argument("nv_residual: evaluate the unscaled family");

    fft.forward(v);
    fft.forward(w1);
    fft.forward(w2);
    fft.forward(dtv);

    const double kmax = M_PI / (2.0 * L / N);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < N; ++i) {
        const double k1 = wavenumber(i, N, L);
        for (int j = 0; j < N; ++j) {
            const double k2 = wavenumber(j, N, L);
            if (std::abs(k1) > (2.0 / 3.0) * kmax || std::abs(k2) > (2.0 / 3.0) * kmax) continue;
            const size_t id = static_cast<size_t>(i) * N + j;
            const cplx lin = cplx(0.0, -1.0) * (2.0 * (k1 * k1 * k1 - 3.0 * k1 * k2 * k2)) * v[id];
            const cplx nl = 2.0 * (cplx(0.0, k1) * w1[id] + cplx(0.0, k2) * w2[id]);
            const cplx resid = dtv[id] - (lin + nl);
            num += std::norm(resid);
            den += std::norm(lin);
        }
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace nvlab
