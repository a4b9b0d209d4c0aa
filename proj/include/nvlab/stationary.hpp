#pragma once

#include <array>
#include <complex>
#include <utility>

// Stationary points of the phase S(u, lambda) for the E = 1 normalization.
// The critical-point equation reduces to the cubic
//   zeta^3 - (conj(ut)/6) zeta^2 + (ut/6) zeta - 1 = 0,   zeta = lambda^2,
// whose three roots give six points lambda_0..lambda_5 with
// lambda_{j+3} = -lambda_j and lambda_0 lambda_1 lambda_2 = 1.
namespace nvlab {

using cplx = std::complex<double>;

enum class StationaryCase {
    TripleDegenerate,       // ut at a vertex: one triple root
    OnCurve,                // ut on the boundary curve: double + simple root
    InteriorNondegenerate,  // ut strictly inside: three distinct unimodular roots
    Exterior                // ut outside: moduli 1+omega, 1, 1/(1+omega)
};

const char* to_string(StationaryCase c);

struct LemmaReport {
    bool base_point_ok = false;      // omega1, omega2 realized from a common point
    bool cluster_ok = false;         // pair distances within each group <= 2*omega2
    bool ordering_ok = false;        // 0 <= omega1 <= omega2 < 2
    double circle_dist_ratio = 0.0;  // max_j dist(lambda_j, S^1)/omega1 (0 if omega1 = 0)
    double degenerate_dist_ratio = 0.0;  // max_j min_k |lambda_j - e^{-i pi k/3}|/omega2
    bool in_ball_K = false;          // all |lambda_j| < K = sqrt(sqrt(2)+1)
};

struct StationaryPointSet {
    cplx u_tilde;
    std::array<cplx, 6> lambdas;  // lambda_{j+3} = -lambda_j
    StationaryCase case_tag = StationaryCase::InteriorNondegenerate;
    double omega = 0.0;  // |lambda_0| - 1 in the exterior case, else 0
    double phi = 0.0;    // lambda_0 = (1+omega) e^{i phi/2}
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::pair<int, int> pair1{0, 0};  // realizing pair of omega1
    std::pair<int, int> pair2{0, 0};  // realizing pair of omega2
};

inline constexpr double kClusterK = 1.5537739740300374;  // sqrt(sqrt(2)+1)

// Roots of the critical-point cubic in zeta, product normalized to 1.
std::array<cplx, 3> roots_zeta(cplx u_tilde);

// Residual of the cubic at zeta (for diagnostics/tests).
double cubic_residual(cplx u_tilde, cplx zeta);

StationaryPointSet stationary_set(cplx u_tilde);

// Boundary curve 6(2 e^{-i phi} + e^{2 i phi}) and region membership via the
// root-moduli criterion.
cplx u_curve(double phi);
bool in_U(cplx u_tilde, double tol = 1e-7);

// Recompute (omega1, omega2, pairs) on an existing set; brute force over the
// admissible pairs with lexicographic tie-breaking.
void omega_distances(StationaryPointSet& sps);

LemmaReport verify_lemmas(const StationaryPointSet& sps);

// d/dlambda of the exterior phase at (u, lambda); the six lambdas are its roots.
cplx phase_dlambda(cplx u, cplx lam);

}  // namespace nvlab
