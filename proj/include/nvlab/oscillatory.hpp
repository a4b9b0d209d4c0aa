#pragma once

#include <complex>
#include <vector>

// Oscillatory integrals of the linear flow:
//   I = int |xi|^(alpha + i beta) exp(i t [w(xi;E) + Re(conj(u) xi)]) dxi
// over the whole plane, inside/outside the ball |xi| <= 2 sqrt(E), or with a
// smooth large-frequency cutoff. Two independent engines are used:
//   - inside (E = 1): the substitution xi = e^{i phi1} + e^{i phi2} splits the
//     phase into h(phi1) + h(phi2); the double integral collapses to an FFT
//     correlation, spectrally accurate at O(n log n).
//   - radial rings: at fixed |xi| the angular integral is a Bessel-product
//     series 2 pi sum_m J_m(A) J_{3m}(B) cos(3 m psi); rings are combined by
//     Gauss-Legendre panels sized to the local radial phase rate, with an
//     adaptive outer truncation backed by an integration-by-parts tail bound.
namespace nvlab {

using cplx = std::complex<double>;

enum class Region { Full, InsideB2, OutsideB2, LargeFreq };

struct IntegralSpec {
    double alpha = 0.0;
    double beta = 0.0;
    double E = 1.0;
    cplx u = 0.0;
    double t = 1.0;
    Region region = Region::Full;
    double cutoff_R = 3.0;  // LargeFreq: transition on |xi|/sqrt(E) in [R, R+1]
    int bump_profile = 0;   // 0 smooth exponential, 1 raised cosine
};

struct IntegralResult {
    cplx value{0.0, 0.0};
    double apost_err = 0.0;  // refinement difference + tail estimate
    bool resolution_ok = true;
    double lambda_max = 0.0;  // outer truncation radius actually used
};

IntegralResult eval_I(const IntegralSpec& spec);

// angular integral over one ring: int_0^{2pi} exp(i(A cos 3th + B cos(th-psi))) dth
double theta_ring(double A, double B, double psi);

struct DecayProbe {
    IntegralSpec spec;
    std::vector<double> t;
    std::vector<double> abs_I;
    std::vector<double> apost;
    double slope = 0.0;
    double slope_ci = 0.0;  // 95% half-width
    bool resolution_ok = true;
};

// log-log least-squares fit of |I| over t_grid (t varied, rest from spec)
DecayProbe fit_decay(const IntegralSpec& spec, const std::vector<double>& t_grid);

// worst-case u grid: vertices +-18 e^{2 pi i k/3} plus angular rings
std::vector<cplx> worst_case_u_grid(int ring_points = 24);

// relative discrepancy between I(t,u;E) evaluated natively and the rescaled
// E = 1 evaluation E^{(alpha+2)/2} I(E^{3/2} t, u/E; 1)
double scaling_identity_check(double t, cplx u, double E, double alpha);

// bump profile value, s <= 0 -> 0, s >= 1 -> 1
double bump_profile(int profile, double s);

}  // namespace nvlab
