#include "nvlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nvlab {
namespace {

// cubic p(z) = z^3 + a2 z^2 + a1 z + a0
struct Cubic {
    cplx a2, a1, a0;
    cplx eval(cplx z) const { return ((z + a2) * z + a1) * z + a0; }
    cplx deriv(cplx z) const { return (3.0 * z + 2.0 * a2) * z + a1; }
};

// Cardano with one Newton polish per root; robust enough away from the exact
// triple root, where the closed form already lands on the mark.
std::array<cplx, 3> solve_cubic(const Cubic& c) {
    const cplx shift = c.a2 / 3.0;
    const cplx p = c.a1 - c.a2 * c.a2 / 3.0;
    const cplx q = 2.0 * c.a2 * c.a2 * c.a2 / 27.0 - c.a2 * c.a1 / 3.0 + c.a0;
    std::array<cplx, 3> r;
    const cplx disc = q * q / 4.0 + p * p * p / 27.0;
    const cplx sq = std::sqrt(disc);
    cplx u3 = -q / 2.0 + sq;
    if (std::abs(u3) < std::abs(-q / 2.0 - sq)) u3 = -q / 2.0 - sq;
    cplx u = std::pow(u3, 1.0 / 3.0);
    if (std::abs(u) < 1e-30) {
        r = {-shift, -shift, -shift};
    } else {
        const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
        for (int k = 0; k < 3; ++k) {
            const cplx uk = u * (k == 0 ? cplx(1.0) : (k == 1 ? omega : omega * omega));
            r[k] = uk - p / (3.0 * uk) - shift;
        }
    }
    for (auto& z : r) {
        for (int it = 0; it < 2; ++it) {
            const cplx d = c.deriv(z);
            if (std::abs(d) < 1e-12) break;
            z -= c.eval(z) / d;
        }
    }
    return r;
}

double modulus_spread(const std::array<cplx, 3>& zs) {
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (const auto& z : zs) {
        lo = std::min(lo, std::abs(z));
        hi = std::max(hi, std::abs(z));
    }
    return hi - lo;
}

}  // namespace

const char* to_string(StationaryCase c) {
    switch (c) {
        case StationaryCase::TripleDegenerate: return "TripleDegenerate";
        case StationaryCase::OnCurve: return "OnCurve";
        case StationaryCase::InteriorNondegenerate: return "InteriorNondegenerate";
        case StationaryCase::Exterior: return "Exterior";
    }
    return "?";
}

std::array<cplx, 3> roots_zeta(cplx ut) {
    Cubic c{-std::conj(ut) / 6.0, ut / 6.0, cplx(-1.0, 0.0)};
    auto r = solve_cubic(c);
    // sort by modulus descending so later labeling is deterministic
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    return r;
}

double cubic_residual(cplx ut, cplx zeta) {
    Cubic c{-std::conj(ut) / 6.0, ut / 6.0, cplx(-1.0, 0.0)};
    return std::abs(c.eval(zeta));
}

cplx phase_dlambda(cplx u, cplx lam) {
    const cplx l2 = lam * lam;
    return std::conj(u) / 2.0 - u / (2.0 * l2) - 3.0 * l2 + 3.0 / (l2 * l2);
}

cplx u_curve(double phi) {
    return 6.0 * (2.0 * std::exp(cplx(0.0, -phi)) + std::exp(cplx(0.0, 2.0 * phi)));
}

bool in_U(cplx ut, double tol) {
    const auto zs = roots_zeta(ut);
    for (const auto& z : zs)
        if (std::abs(z) > 1.0 + tol) return false;
    return true;
}

void omega_distances(StationaryPointSet& s) {
    const auto& l = s.lambdas;
    auto excluded = [](int i, int j) { return i == 2 && j == 5; };
    double best = std::numeric_limits<double>::max();
    std::pair<int, int> p1{-1, -1};
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            if (excluded(i, j)) continue;
            const double d = std::abs(l[i] - l[j]);
            if (d < best - 1e-15) {
                best = d;
                p1 = {i, j};
            }
        }
    s.omega1 = best;
    s.pair1 = p1;
    // antipodal copy of the realizing pair is excluded from the omega2 search
    int k = (p1.first + 3) % 6, m = (p1.second + 3) % 6;
    if (k > m) std::swap(k, m);
    double best2 = std::numeric_limits<double>::max();
    std::pair<int, int> p2{-1, -1};
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            if (excluded(i, j)) continue;
            if ((i == p1.first && j == p1.second) || (i == k && j == m)) continue;
            const double d = std::abs(l[i] - l[j]);
            if (d < best2 - 1e-15) {
                best2 = d;
                p2 = {i, j};
            }
        }
    s.omega2 = best2;
    s.pair2 = p2;
}

StationaryPointSet stationary_set(cplx ut) {
    StationaryPointSet s;
    s.u_tilde = ut;
    auto zs = roots_zeta(ut);

    const double eqtol = 1e-7 * std::max(1.0, std::abs(ut));
    const bool z01 = std::abs(zs[0] - zs[1]) < eqtol;
    const bool z12 = std::abs(zs[1] - zs[2]) < eqtol;
    const bool z02 = std::abs(zs[0] - zs[2]) < eqtol;
    const int equal_pairs = int(z01) + int(z12) + int(z02);
    const bool unimodular = modulus_spread(zs) < 2e-7 && std::abs(std::abs(zs[0]) - 1.0) < 1e-7;

    std::array<cplx, 3> lam;
    if (equal_pairs == 3) {
        s.case_tag = StationaryCase::TripleDegenerate;
        lam = {std::sqrt(zs[0]), std::sqrt(zs[1]), std::sqrt(zs[2])};
    } else if (equal_pairs >= 1) {
        s.case_tag = StationaryCase::OnCurve;
        // label so that lambda_0 = lambda_2 = double root, lambda_1 = simple root
        cplx zd, zsimple;
        if (z01) { zd = zs[0]; zsimple = zs[2]; }
        else if (z12) { zd = zs[1]; zsimple = zs[0]; }
        else { zd = zs[0]; zsimple = zs[1]; }
        lam = {std::sqrt(zd), std::sqrt(zsimple), std::sqrt(zd)};
    } else if (unimodular) {
        s.case_tag = StationaryCase::InteriorNondegenerate;
        lam = {std::sqrt(zs[0]), std::sqrt(zs[1]), std::sqrt(zs[2])};
    } else {
        s.case_tag = StationaryCase::Exterior;
        // zs sorted by modulus descending: zeta_0 = (1+tau) e^{i phi},
        // zeta_1 = e^{-2 i phi}, zeta_2 = (1+tau)^{-1} e^{i phi}
        lam = {std::sqrt(zs[0]), std::sqrt(zs[1]), std::sqrt(zs[2])};
    }

    // fix the sign so lambda_0 lambda_1 lambda_2 = 1; always flip lambda_1
    // (the simple root in OnCurve, the unimodular root in Exterior), which
    // keeps lambda_0 and lambda_2 on their common ray
    cplx prod = lam[0] * lam[1] * lam[2];
    if (prod.real() < 0.0) lam[1] = -lam[1];

    for (int i = 0; i < 3; ++i) {
        s.lambdas[i] = lam[i];
        s.lambdas[i + 3] = -lam[i];
    }

    if (s.case_tag == StationaryCase::Exterior) {
        s.omega = std::abs(lam[0]) - 1.0;
        s.phi = 2.0 * std::arg(lam[0]);
    } else {
        s.omega = 0.0;
        s.phi = 2.0 * std::arg(lam[0]);
    }
    if (s.phi < 0.0) s.phi += 4.0 * M_PI;  // report in [0, 4pi) ~ phi/2 in [0, 2pi)
    while (s.phi >= 2.0 * M_PI) s.phi -= 2.0 * M_PI;

    omega_distances(s);
    return s;
}

LemmaReport verify_lemmas(const StationaryPointSet& s) {
    LemmaReport r;
    const auto& l = s.lambdas;
    r.ordering_ok = (s.omega1 >= -1e-14) && (s.omega1 <= s.omega2 + 1e-12) && (s.omega2 < 2.0);

    r.in_ball_K = true;
    for (const auto& z : l)
        if (std::abs(z) >= kClusterK) r.in_ball_K = false;

    // common base point: some j0,j1,j2 with omega1 = |l_j0 - l_j1|, omega2 = |l_j0 - l_j2|
    const double tol = 1e-9 * std::max(1.0, std::abs(s.u_tilde));
    r.base_point_ok = false;
    std::array<int, 3> J1{-1, -1, -1};
    for (int j0 = 0; j0 < 6 && !r.base_point_ok; ++j0)
        for (int j1 = 0; j1 < 6 && !r.base_point_ok; ++j1) {
            if (j1 == j0) continue;
            if (std::min(j0, j1) == 2 && std::max(j0, j1) == 5) continue;
            if (std::abs(std::abs(l[j0] - l[j1]) - s.omega1) > tol) continue;
            for (int j2 = 0; j2 < 6; ++j2) {
                if (j2 == j0 || j2 == j1) continue;
                if (std::min(j0, j2) == 2 && std::max(j0, j2) == 5) continue;
                if (std::abs(std::abs(l[j0] - l[j2]) - s.omega2) <= tol) {
                    r.base_point_ok = true;
                    J1 = {j0, j1, j2};
                    break;
                }
            }
        }

    // cluster bound over the realizing triple
    r.cluster_ok = true;
    if (r.base_point_ok) {
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                const double d = std::abs(l[J1[a]] - l[J1[b]]);
                if (d > 2.0 * s.omega2 + 1e-10) r.cluster_ok = false;
            }
    }

    if (s.omega1 > 1e-13) {
        double mx = 0.0;
        for (const auto& z : l) mx = std::max(mx, std::abs(std::abs(z) - 1.0));
        r.circle_dist_ratio = mx / s.omega1;
    }
    if (s.omega2 > 1e-13) {
        double mx = 0.0;
        for (const auto& z : l) {
            double nearest = std::numeric_limits<double>::max();
            for (int k = 0; k < 6; ++k) {
                const cplx star = std::exp(cplx(0.0, -M_PI * k / 3.0));
                nearest = std::min(nearest, std::abs(z - star));
            }
            mx = std::max(mx, nearest);
        }
        r.degenerate_dist_ratio = mx / s.omega2;
    }
    return r;
}

}  // namespace nvlab
