#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

// Linear symbol of the NV flow at energy E, the associated oscillatory phase,
// the unimodular multiplier of dzbar^{-1} dz, and the resonance function of
// the quadratic interaction.
namespace nvlab {

using cplx = std::complex<double>;

// w(xi;E) = 2(xi1^3 - 3 xi1 xi2^2)(1 - 3E/|xi|^2), extended by 0 at xi = 0.
inline double eval_symbol(double xi1, double xi2, double E) {
    const double rho = xi1 * xi1 + xi2 * xi2;
    if (rho == 0.0) return 0.0;
    return 2.0 * (xi1 * xi1 * xi1 - 3.0 * xi1 * xi2 * xi2) * (1.0 - 3.0 * E / rho);
}

inline double eval_symbol(cplx xi, double E) { return eval_symbol(xi.real(), xi.imag(), E); }

// Full phase: symbol plus the transport term Re(conj(u) xi).
inline double eval_phase(cplx u, cplx xi, double E) {
    return eval_symbol(xi, E) + (std::conj(u) * xi).real();
}

// Multiplier of dzbar^{-1} dz at frequency xi: (xi1 - i xi2)/(xi1 + i xi2).
// Unimodular away from the origin; the zero mode is pinned to 0.
inline cplx dbar_inv_dz_multiplier(double xi1, double xi2) {
    if (xi1 == 0.0 && xi2 == 0.0) return {0.0, 0.0};
    return cplx(xi1, -xi2) / cplx(xi1, xi2);
}

// H[xi, xit] = w(xit) - w(xi) - w(xit - xi).
inline double resonance_H(cplx xi, cplx xit, double E) {
    return eval_symbol(xit, E) - eval_symbol(xi, E) - eval_symbol(xit - xi, E);
}

// Closed-form partials of H in xi. Singular where xi = 0 or xit = xi.
inline std::pair<double, double> resonance_H_gradient(cplx xi, cplx xit, double E) {
    const double x1 = xi.real(), x2 = xi.imag();
    const double e1 = xit.real() - x1, e2 = xit.imag() - x2;
    const double rx = x1 * x1 + x2 * x2;
    const double re = e1 * e1 + e2 * e2;
    if (rx == 0.0 || re == 0.0)
        throw std::domain_error("resonance_H_gradient: singular at xi = 0 or xit = xi");
    const double gx = 1.0 - 3.0 * E / rx;
    const double ge = 1.0 - 3.0 * E / re;
    const double d1 = -6.0 * ((x1 * x1 - x2 * x2) * gx - (e1 * e1 - e2 * e2) * ge
                              + 2.0 * E * x1 * x1 * (x1 * x1 - 3.0 * x2 * x2) / (rx * rx)
                              - 2.0 * E * e1 * e1 * (e1 * e1 - 3.0 * e2 * e2) / (re * re));
    const double d2 = -12.0 * (-x1 * x2 * gx + e1 * e2 * ge
                               + E * x1 * x2 * (x1 * x1 - 3.0 * x2 * x2) / (rx * rx)
                               - E * e1 * e2 * (e1 * e1 - 3.0 * e2 * e2) / (re * re));
    return {d1, d2};
}

}  // namespace nvlab
