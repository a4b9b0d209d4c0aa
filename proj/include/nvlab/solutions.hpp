#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "nvlab/gh.hpp"

// Closed-form solution families of the zero-energy flow: the stationary lumps
// Q_{1,a,b}, the one-parameter family Q_{2,c} (finite-time blow-up for c > 0),
// and the rational family Q_{n,0} built from Gould-Hopper polynomials, whose
// L^2 norm grows without bound. All are of the form v = -2 Lap log D.
namespace nvlab {

struct SolutionSpec {
    enum class Family { Q1ab, Q2c, Qn0 };
    Family family = Family::Q1ab;
    double a = 0.0, b = 0.0;  // Q1ab parameters, a^2 + b^2 < 4
    double c = 0.0;           // Q2c parameter, |c| < 4/3^{3/4}
    int n = 1;                // Qn0 index
    double scale = 1.0;       // v_lambda(t,x,y) = lambda^2 v(lambda^3 t, lambda x, lambda y)

    static SolutionSpec q1ab(double a, double b);
    static SolutionSpec q2c(double c);
    static SolutionSpec qn0(int n);
    SolutionSpec scaled_by(double lambda) const;
};

inline constexpr double kQ2cCritical = 1.7547654790193742;  // 4/3^{3/4}

struct EvalResult {
    double v = 0.0;
    double log_arg = 1.0;  // argument of the logarithm; <= 0 signals blow-up
    bool blown_up = false;
};

EvalResult eval_solution(const SolutionSpec& s, double t, double x, double y);

// W = -3 dzbar^{-1} dz v = 24 dz^2 log D, in closed form.
cplx w_field(const SolutionSpec& s, double t, double x, double y);

// integral of v over the plane; adaptive polar quadrature with a fitted
// power-law tail correction (the families decay like r^{-3} or faster)
double mass(const SolutionSpec& s, double t, double rel_tol = 1e-4);

// squared L^2 norm over the plane
double l2_norm_sq(const SolutionSpec& s, double t, double rel_tol = 1e-4);

struct BlowupScan {
    bool crossed = false;
    double t_star = 0.0;        // first denominator zero-crossing (if crossed)
    double min_denom_t0 = 0.0;  // spatial minimum of the log-argument at t = 0
};

// scans the denominator 1 - 24 c t + c(x^3+y^3) + (x^2+y^2)^2 for its first
// zero crossing on [0, t_max]; grid bracketing plus Nelder-Mead polish
BlowupScan blowup_scan(const SolutionSpec& q2c_spec, double t_max);

struct L2GrowthFit {
    std::vector<double> t;
    std::vector<double> l2sq;
    double slope = 0.0;       // log-log slope of ||Q||^2
    bool increasing = false;  // strictly increasing over the grid
    double root_ratio = 0.0;  // |z_0(t_max)| / t_max^{1/3} for a tracked nonzero root
};

L2GrowthFit l2_growth(int n, const std::vector<double>& t_grid);

// Relative residual of the zero-energy equation on a periodic box: all terms
// are formed spectrally from the sampled field (w from the closed form), the
// result is measured on the resolved band |k| <= (2/3) k_max and normalized by
// the linear term's band norm.
double nv_residual(const SolutionSpec& s, double t, int N, double L);

}  // namespace nvlab
