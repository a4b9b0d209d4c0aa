#pragma once

#include <complex>
#include <string>
#include <vector>

// Gould-Hopper polynomials P_n(t,z) = n! sum_k (8t)^k z^{n-3k}/(k! (n-3k)!),
// the heat-flow deformation of z^n under dP/dt = 8 d^3P/dz^3.
// Coefficients are kept as exact 128-bit integers; evaluation is in doubles.
namespace nvlab {

using cplx = std::complex<double>;
using int128 = __int128;

struct GHPoly {
    int n = 0;
    std::vector<int128> coeffs;  // coeffs[k] multiplies t^k z^{n-3k}, k = 0..n/3

    cplx eval(double t, cplx z) const;
    cplx eval_dz(double t, cplx z) const;    // d/dz
    cplx eval_dz2(double t, cplx z) const;   // d^2/dz^2
    cplx eval_dz3(double t, cplx z) const;
    cplx eval_dz4(double t, cplx z) const;
};

// throws std::overflow_error if a coefficient exceeds the 128-bit range
GHPoly gh_poly(int n);

struct GHIdentityReport {
    int n_max = 0;
    bool recurrence_ok = false;   // (z + 24 t d^2/dz^2) P_{n-1} = P_n
    bool derivative_ok = false;   // dP_n/dz = n P_{n-1}
    bool heat_flow_ok = false;    // dP_n/dt = 8 d^3 P_n/dz^3
};

// exact coefficient-level verification for n = 1..n_max
GHIdentityReport gh_identities_check(int n_max);

std::string int128_to_string(int128 v);

// complex roots of P_n(t, .) (Durand-Kerner), n >= 1
std::vector<cplx> gh_roots(const GHPoly& p, double t);

}  // namespace nvlab
