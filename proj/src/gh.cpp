#include "nvlab/gh.hpp"

#include <cmath>
#include <stdexcept>

namespace nvlab {
namespace {

int128 checked_mul(int128 a, int128 b) {
    if (a == 0 || b == 0) return 0;
    const int128 r = a * b;
    if (r / b != a) throw std::overflow_error("gh_poly: coefficient exceeds 128-bit range");
    return r;
}

double to_double(int128 v) {
    return static_cast<double>(v);
}

}  // namespace

GHPoly gh_poly(int n) {
    if (n < 0) throw std::invalid_argument("gh_poly: n must be >= 0");
    GHPoly p;
    p.n = n;
    p.coeffs.resize(n / 3 + 1);
    // c_0 = 1 (coefficient of z^n); c_{k} = c_{k-1} * 8 * (n-3k+3)(n-3k+2)(n-3k+1) / k
    int128 c = 1;
    p.coeffs[0] = 1;
    for (int k = 1; k <= n / 3; ++k) {
        const int m = n - 3 * k;
        c = checked_mul(c, 8);
        c = checked_mul(c, m + 3);
        c = checked_mul(c, m + 2);
        c = checked_mul(c, m + 1);
        c /= k;  // divides exactly: c_k = n! 8^k/(k!(n-3k)!)
        p.coeffs[k] = c;
    }
    return p;
}

cplx GHPoly::eval(double t, cplx z) const {
    cplx acc = 0.0;
    double tk = 1.0;
    // sum_k c_k t^k z^{n-3k}
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const int m = n - 3 * static_cast<int>(k);
        acc += to_double(coeffs[k]) * tk * std::pow(z, m);
        tk *= t;
    }
    return acc;
}

cplx GHPoly::eval_dz(double t, cplx z) const {
    cplx acc = 0.0;
    double tk = 1.0;
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const int m = n - 3 * static_cast<int>(k);
        if (m >= 1) acc += to_double(coeffs[k]) * tk * static_cast<double>(m) * std::pow(z, m - 1);
        tk *= t;
    }
    return acc;
}

cplx GHPoly::eval_dz2(double t, cplx z) const {
    cplx acc = 0.0;
    double tk = 1.0;
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const int m = n - 3 * static_cast<int>(k);
        if (m >= 2) acc += to_double(coeffs[k]) * tk * double(m) * double(m - 1) * std::pow(z, m - 2);
        tk *= t;
    }
    return acc;
}

cplx GHPoly::eval_dz3(double t, cplx z) const {
    cplx acc = 0.0;
    double tk = 1.0;
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const int m = n - 3 * static_cast<int>(k);
        if (m >= 3) acc += to_double(coeffs[k]) * tk * double(m) * double(m - 1) * double(m - 2) * std::pow(z, m - 3);
        tk *= t;
    }
    return acc;
}

cplx GHPoly::eval_dz4(double t, cplx z) const {
    cplx acc = 0.0;
    double tk = 1.0;
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const int m = n - 3 * static_cast<int>(k);
        if (m >= 4)
            acc += to_double(coeffs[k]) * tk * double(m) * double(m - 1) * double(m - 2) * double(m - 3)
                   * std::pow(z, m - 4);
        tk *= t;
    }
    return acc;
}

GHIdentityReport gh_identities_check(int n_max) {
    GHIdentityReport rep;
    rep.n_max = n_max;
    rep.recurrence_ok = rep.derivative_ok = rep.heat_flow_ok = true;
    std::vector<GHPoly> P(n_max + 1);
    for (int n = 0; n <= n_max; ++n) P[n] = gh_poly(n);

    for (int n = 1; n <= n_max; ++n) {
        const auto& a = P[n - 1];
        const auto& b = P[n];
        // (z + 24 t d^2) P_{n-1}: k-term of z*P_{n-1} is c_k(n-1) (z-degree n-3k);
        // k-term of 24 t d^2 P_{n-1} is 24 (n+2-3k)(n+1-3k) c_{k-1}(n-1)
        for (size_t k = 0; k < b.coeffs.size(); ++k) {
            int128 want = 0;
            if (k < a.coeffs.size() && b.n - 3 * static_cast<int>(k) >= 1) want += a.coeffs[k];
            if (k >= 1 && k - 1 < a.coeffs.size()) {
                const int m = b.n - 3 * static_cast<int>(k);  // z-degree of the target term
                want += checked_mul(checked_mul(24, int128(m + 2) * int128(m + 1)), a.coeffs[k - 1]);
            }
            if (want != b.coeffs[k]) rep.recurrence_ok = false;
        }
        // d/dz P_n = n P_{n-1}: (n-3k) c_k(n) = n c_k(n-1)
        for (size_t k = 0; k < b.coeffs.size(); ++k) {
            const int m = b.n - 3 * static_cast<int>(k);
            const int128 lhs = checked_mul(int128(m), b.coeffs[k]);
            const int128 rhs = (m >= 1 && k < a.coeffs.size()) ? checked_mul(int128(n), a.coeffs[k]) : 0;
            if (lhs != rhs) rep.derivative_ok = false;
        }
        // d/dt P_n = 8 d^3/dz^3 P_n: (k+1) c_{k+1} = 8 (n-3k)(n-3k-1)(n-3k-2) c_k
        for (size_t k = 0; k + 1 < b.coeffs.size(); ++k) {
            const int m = b.n - 3 * static_cast<int>(k);
            const int128 lhs = checked_mul(int128(k + 1), b.coeffs[k + 1]);
            const int128 rhs = checked_mul(checked_mul(int128(8) * int128(m), int128(m - 1) * int128(m - 2)),
                                           b.coeffs[k]);
            if (lhs != rhs) rep.heat_flow_ok = false;
        }
    }
    return rep;
}

std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string s;
    while (u > 0) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

std::vector<cplx> gh_roots(const GHPoly& p, double t) {
    const int n = p.n;
    if (n < 1) return {};
    // monic coefficients a_m of z^m, m = 0..n
    std::vector<cplx> a(n + 1, 0.0);
    double tk = 1.0;
    for (size_t k = 0; k < p.coeffs.size(); ++k) {
        a[n - 3 * static_cast<int>(k)] = static_cast<double>(p.coeffs[k]) * tk;
        tk *= t;
    }
    for (int m = 0; m <= n; ++m) a[m] /= a[n].real();
    auto eval = [&](cplx z) {
        cplx acc = 1.0;
        for (int m = n - 1; m >= 0; --m) acc = acc * z + a[m];
        return acc;
    };
    // Durand-Kerner from staggered initial guesses on a circle (Fujiwara bound)
    double radius = 0.5;
    for (int m = 0; m < n; ++m)
        radius = std::max(radius, 2.0 * std::pow(std::abs(a[m]), 1.0 / (n - m)));
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = radius * std::exp(cplx(0.0, 2.0 * M_PI * i / n + 0.4));
    for (int it = 0; it < 300; ++it) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            const cplx delta = eval(r[i]) / denom;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-13 * std::max(1.0, radius)) break;
    }
    return r;
}

}  // namespace nvlab
