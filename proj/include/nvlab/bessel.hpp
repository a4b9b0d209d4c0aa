#pragma once

#include <vector>

// Arrays of Bessel J_m(x) for m = 0..mmax at fixed real x >= 0.
// Forward recurrence is used while m stays below the turning point (stable
// in the oscillatory regime); otherwise a Miller-style downward pass
// normalized with J_0 + 2 sum J_{2k} = 1.
namespace nvlab {

double bessel_j0(double x);
double bessel_j1(double x);

// fills out[0..mmax] with J_m(x); x >= 0
void bessel_j_array(double x, int mmax, std::vector<double>& out);

}  // namespace nvlab
