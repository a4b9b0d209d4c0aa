#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

// Pseudospectral time integration of the flow on a periodic box [-L, L)^2:
//   dv/dt = 2 [ dx(dxx v - 3 dyy v) + div(v w) - E div w ],
//   w = -3 dzbar^{-1} dz v.
// The linear part (including the E term) is diagonal in Fourier space with
// multiplier -i w(k;E) and is propagated exactly; the quadratic term is
// advanced with integrating-factor RK4 (default) or ETDRK4.
namespace nvlab {

using cplx = std::complex<double>;

struct FieldState {
    int N = 0;
    double L = 0.0;
    double E = 0.0;
    double time = 0.0;
    std::vector<double> values;  // row-major, values[i*N+j] = v(x_i, y_j)

    double mass() const;     // integral of v
    double l2_norm() const;  // sqrt(integral v^2)
    double linf() const;
};

enum class Scheme { IntegratingFactorRK4, ETDRK4 };
enum class DealiasRule { TwoThirds, None };

struct StepperConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::IntegratingFactorRK4;
    DealiasRule dealias = DealiasRule::TwoThirds;
    double cfl_safety = 0.5;
};

enum class StepOutcome { Ok, RetriedHalfStep, BlowupSuspected };

struct Observer {
    double time, mass, l2, linf, hs_proxy;
};

class Solver {
  public:
    Solver(int N, double L, double E, DealiasRule dealias = DealiasRule::TwoThirds);
    ~Solver();

    void set_field(const std::vector<double>& values, double time = 0.0);
    FieldState state() const;

    // spectral right-hand side of the evolution at the current field
    std::vector<double> rhs() const;

    // largest stable step per the phase-rotation heuristic
    double dt_max(double cfl_safety) const;

    StepOutcome step(double dt, Scheme scheme);

    // advance to t_final; observer invoked after every accepted step
    StepOutcome evolve(double t_final, const StepperConfig& cfg,
                       const std::function<void(const Observer&)>& observer = nullptr);

    // max |Im| / max |Re| after transforms (reality check)
    double imag_residual() const;

    // with the nonlinear term disabled, one exactly-propagated linear step
    void linear_step(double dt);

    double hs_proxy(double s = 0.5) const;

    int N() const;
    double L() const;
    double E() const;
    double time() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// relative trajectory discrepancy under v -> lambda^2 v(lambda^3 t, lambda x)
// with E -> lambda^2 E; fields compared on matched grids at matched times
double scaling_symmetry_check(const FieldState& v0, double lambda, double t_final,
                              const StepperConfig& cfg);

// initial conditions sampled on the grid
std::vector<double> sample_gaussian(int N, double L, double amp, double width);

// binary snapshot: 32-byte header (magic "NVF1", u32 N, f64 L, f64 E, f64 time,
// little-endian) followed by N^2 f64 row-major values
void write_snapshot(const std::string& path, const FieldState& s);
FieldState read_snapshot(const std::string& path);

}  // namespace nvlab
