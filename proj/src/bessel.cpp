#include "nvlab/bessel.hpp"

#include <algorithm>
#include <cmath>

namespace nvlab {
namespace {

// Hankel asymptotic expansion, ~1e-13 for x >= 20.
void j01_asymptotic(double x, double& j0, double& j1) {
    const double ix = 1.0 / x;
    const double ix2 = ix * ix;
    const double p0 = 1.0 + ix2 * (-0.0703125 + ix2 * (0.112152099609375
                      + ix2 * (-0.5725014209747314 + ix2 * 6.074042001273483)));
    const double q0 = ix * (-0.125 + ix2 * (0.0732421875
                      + ix2 * (-0.2271080017089844 + ix2 * (1.727727502584457 + ix2 * -24.38052969955606))));
    const double p1 = 1.0 + ix2 * (0.1171875 + ix2 * (-0.144195556640625
                      + ix2 * (0.6765925884246826 + ix2 * -6.883914268109947)));
    const double q1 = ix * (0.375 + ix2 * (-0.1025390625
                      + ix2 * (0.2775764465332031 + ix2 * (-1.993531733751297 + ix2 * 27.24882731126854))));
    const double c = std::sqrt(2.0 / (M_PI * x));
    const double chi0 = x - 0.25 * M_PI;
    const double chi1 = x - 0.75 * M_PI;
    j0 = c * (p0 * std::cos(chi0) - q0 * std::sin(chi0));
    j1 = c * (p1 * std::cos(chi1) - q1 * std::sin(chi1));
}

// Downward (Miller) pass, normalized with J0 + 2*sum_k J_{2k} = 1.
// Entries that underflow during rescaling are genuinely below double range.
void miller_fill(double x, int mmax, std::vector<double>& out) {
    out.assign(mmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return;
    }
    const int xi = static_cast<int>(std::ceil(x));
    const int top = std::max(mmax, xi);
    const int start = top + 24 + 2 * static_cast<int>(std::cbrt(x))
                      + static_cast<int>(1.5 * std::sqrt(static_cast<double>(top)));
    double jp = 0.0;      // J_{m+1}, unnormalized
    double jc = 1e-300;   // J_m
    double norm = (start % 2 == 0) ? jc : 0.0;
    if (start <= mmax) out[start] = jc;
    const double big = 1e250, inv_big = 1e-250;
    for (int m = start; m >= 1; --m) {
        const double jm = (2.0 * m / x) * jc - jp;
        jp = jc;
        jc = jm;
        const int idx = m - 1;
        if (idx <= mmax) out[idx] = jc;
        if (idx % 2 == 0) norm += (idx == 0 ? 1.0 : 2.0) * jc;
        if (std::abs(jc) > big) {
            jc *= inv_big;
            jp *= inv_big;
            norm *= inv_big;
            for (double& v : out) v *= inv_big;  // tiny tail entries flush to 0
        }
    }
    const double scale = 1.0 / norm;
    for (double& v : out) v *= scale;
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    if (x >= 20.0) {
        double j0, j1;
        j01_asymptotic(x, j0, j1);
        return j0;
    }
    std::vector<double> tmp;
    miller_fill(x, 1, tmp);
    return tmp[0];
}

double bessel_j1(double x) {
    const double ax = std::abs(x);
    double v;
    if (ax >= 20.0) {
        double j0, j1;
        j01_asymptotic(ax, j0, j1);
        v = j1;
    } else {
        std::vector<double> tmp;
        miller_fill(ax, 1, tmp);
        v = tmp[1];
    }
    return x < 0 ? -v : v;
}

void bessel_j_array(double x, int mmax, std::vector<double>& out) {
    if (mmax < 0) {
        out.clear();
        return;
    }
    if (x == 0.0) {
        out.assign(mmax + 1, 0.0);
        out[0] = 1.0;
        return;
    }
    if (x >= 25.0 && mmax <= static_cast<int>(0.85 * x) - 5) {
        out.resize(mmax + 1);
        double j0, j1;
        j01_asymptotic(x, j0, j1);
        out[0] = j0;
        if (mmax >= 1) out[1] = j1;
        for (int m = 1; m < mmax; ++m)
            out[m + 1] = (2.0 * m / x) * out[m] - out[m - 1];
        return;
    }
    miller_fill(x, mmax, out);
}

}  // namespace nvlab
