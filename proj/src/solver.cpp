#include "nvlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nvlab/fft2.hpp"
#include "nvlab/symbol.hpp"

namespace nvlab {

double FieldState::mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    const double h = 2.0 * L / N;
    return s * h * h;
}

double FieldState::l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    const double h = 2.0 * L / N;
    return std::sqrt(s * h * h);
}

double FieldState::linf() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

struct Solver::Impl {
    int N;
    double L, E, time = 0.0;
    DealiasRule dealias;
    Fft2 fft;
    std::vector<cplx> vh;  // spectral field (unnormalized DFT of v)
    std::vector<double> k1, k2;
    std::vector<double> wlin;       // w(k;E)
    std::vector<cplx> mult;         // dzbar^{-1} dz multiplier
    std::vector<unsigned char> keep;  // dealias mask

    Impl(int n, double l, double e, DealiasRule d)
        : N(n), L(l), E(e), dealias(d), fft(n), vh(size_t(n) * n, 0.0) {
        if (n < 4 || (n & (n - 1)) != 0) throw std::invalid_argument("Solver: N must be a power of two");
        k1.resize(size_t(N) * N);
        k2.resize(size_t(N) * N);
        wlin.resize(size_t(N) * N);
        mult.resize(size_t(N) * N);
        keep.assign(size_t(N) * N, 1);
        const double kmax = M_PI * N / (2.0 * L);
        for (int i = 0; i < N; ++i) {
            const double a = wavenumber(i, N, L);
            for (int j = 0; j < N; ++j) {
                const double b = wavenumber(j, N, L);
                const size_t id = size_t(i) * N + j;
                k1[id] = a;
                k2[id] = b;
                wlin[id] = eval_symbol(a, b, E);
                mult[id] = dbar_inv_dz_multiplier(a, b);
                if (dealias == DealiasRule::TwoThirds
                    && (std::abs(a) > (2.0 / 3.0) * kmax || std::abs(b) > (2.0 / 3.0) * kmax))
                    keep[id] = 0;
            }
        }
    }

    // nonlinear term in spectral space: 2 i k . F[v w]
    void nonlinear(const std::vector<cplx>& in, std::vector<cplx>& out) {
        const size_t total = vh.size();
        std::vector<cplx> v(in), w(total);
        for (size_t id = 0; id < total; ++id) w[id] = -3.0 * mult[id] * in[id];
        fft.backward_normalized(v);
        fft.backward_normalized(w);
        std::vector<cplx> f1(total), f2(total);
        for (size_t id = 0; id < total; ++id) {
            const double vr = v[id].real();
            f1[id] = vr * w[id].real();
            f2[id] = vr * w[id].imag();
        }
        fft.forward(f1);
        fft.forward(f2);
        out.resize(total);
        for (size_t id = 0; id < total; ++id) {
            out[id] = keep[id]
                          ? 2.0 * (cplx(0.0, k1[id]) * f1[id] + cplx(0.0, k2[id]) * f2[id])
                          : cplx(0.0, 0.0);
        }
    }

    double l2_of(const std::vector<cplx>& spec) const {
        double s = 0.0;
        for (const cplx& z : spec) s += std::norm(z);
        return std::sqrt(s);
    }

    void if_rk4(double dt) {
        const size_t total = vh.size();
        std::vector<cplx> e1(total), eh(total);
        for (size_t id = 0; id < total; ++id) {
            e1[id] = std::polar(1.0, -wlin[id] * dt);
            eh[id] = std::polar(1.0, -wlin[id] * dt * 0.5);
        }
        std::vector<cplx> a, b, c, d, tmp(total);
        nonlinear(vh, a);
        for (size_t id = 0; id < total; ++id) tmp[id] = eh[id] * (vh[id] + 0.5 * dt * a[id]);
        nonlinear(tmp, b);
        for (size_t id = 0; id < total; ++id) tmp[id] = eh[id] * vh[id] + 0.5 * dt * b[id];
        nonlinear(tmp, c);
        for (size_t id = 0; id < total; ++id) tmp[id] = e1[id] * vh[id] + dt * eh[id] * c[id];
        nonlinear(tmp, d);
        for (size_t id = 0; id < total; ++id)
            vh[id] = e1[id] * vh[id]
                     + dt / 6.0 * (e1[id] * a[id] + 2.0 * eh[id] * (b[id] + c[id]) + d[id]);
    }

    // diagonal ETDRK4 (Cox-Matthews), phi-weights via contour averaging
    std::vector<cplx> E1, E2, Q, F1, F2, F3;
    double etd_dt = 0.0;

    void etdrk4(double dt) {
        const size_t total = vh.size();
        if (etd_dt != dt || E1.size() != total) {
            E1.resize(total); E2.resize(total); Q.resize(total);
            F1.resize(total); F2.resize(total); F3.resize(total);
            const int M = 32;
            for (size_t id = 0; id < total; ++id) {
                const cplx Lc = cplx(0.0, -wlin[id]) * dt;
                E1[id] = std::exp(Lc);
                E2[id] = std::exp(0.5 * Lc);
                cplx q = 0, f1 = 0, f2 = 0, f3 = 0;
                for (int m = 0; m < M; ++m) {
                    const cplx z = Lc + std::polar(1.0, M_PI * (m + 0.5) / M);
                    const cplx ez = std::exp(z);
                    q += (std::exp(0.5 * z) - 1.0) / z;
                    f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / (z * z * z);
                    f2 += (2.0 + z + ez * (-2.0 + z)) / (z * z * z);
                    f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / (z * z * z);
                }
                Q[id] = dt * q / double(M);
                F1[id] = dt * f1 / double(M);
                F2[id] = dt * f2 / double(M);
                F3[id] = dt * f3 / double(M);
            }
            etd_dt = dt;
        }
        std::vector<cplx> Nu, Na, Nb, Nc, aa(total), bb(total), cc(total);
        nonlinear(vh, Nu);
        for (size_t id = 0; id < total; ++id) aa[id] = E2[id] * vh[id] + Q[id] * Nu[id];
        nonlinear(aa, Na);
        for (size_t id = 0; id < total; ++id) bb[id] = E2[id] * vh[id] + Q[id] * Na[id];
        nonlinear(bb, Nb);
        for (size_t id = 0; id < total; ++id)
            cc[id] = E2[id] * aa[id] + Q[id] * (2.0 * Nb[id] - Nu[id]);
        nonlinear(cc, Nc);
        for (size_t id = 0; id < total; ++id)
            vh[id] = E1[id] * vh[id] + Nu[id] * F1[id] + 2.0 * (Na[id] + Nb[id]) * F2[id]
                     + Nc[id] * F3[id];
    }
};

Solver::Solver(int N, double L, double E, DealiasRule dealias)
    : impl_(std::make_unique<Impl>(N, L, E, dealias)) {}
Solver::~Solver() = default;

int Solver::N() const { return impl_->N; }
double Solver::L() const { return impl_->L; }
double Solver::E() const { return impl_->E; }
double Solver::time() const { return impl_->time; }

void Solver::set_field(const std::vector<double>& values, double time) {
    if (values.size() != impl_->vh.size()) throw std::invalid_argument("set_field: size mismatch");
    std::vector<cplx> v(values.begin(), values.end());
    impl_->fft.forward(v);
    impl_->vh = std::move(v);
    impl_->time = time;
}

FieldState Solver::state() const {
    FieldState s;
    s.N = impl_->N;
    s.L = impl_->L;
    s.E = impl_->E;
    s.time = impl_->time;
    std::vector<cplx> v(impl_->vh);
    impl_->fft.backward_normalized(v);
    s.values.resize(v.size());
    for (size_t i = 0; i < v.size(); ++i) s.values[i] = v[i].real();
    return s;
}

double Solver::imag_residual() const {
    std::vector<cplx> v(impl_->vh);
    impl_->fft.backward_normalized(v);
    double mi = 0.0, mr = 0.0;
    for (const cplx& z : v) {
        mi = std::max(mi, std::abs(z.imag()));
        mr = std::max(mr, std::abs(z.real()));
    }
    return mi / std::max(mr, 1e-300);
}

std::vector<double> Solver::rhs() const {
    std::vector<cplx> nl;
    impl_->nonlinear(impl_->vh, nl);
    for (size_t id = 0; id < nl.size(); ++id)
        nl[id] += cplx(0.0, -impl_->wlin[id]) * impl_->vh[id];
    impl_->fft.backward_normalized(nl);
    std::vector<double> out(nl.size());
    for (size_t i = 0; i < nl.size(); ++i) out[i] = nl[i].real();
    return out;
}

double Solver::dt_max(double cfl_safety) const {
    double wmax = 0.0;
    for (double w : impl_->wlin) wmax = std::max(wmax, std::abs(w));
    return cfl_safety * 2.0 * M_PI / std::max(wmax, 1e-300);
}

void Solver::linear_step(double dt) {
    for (size_t id = 0; id < impl_->vh.size(); ++id)
        impl_->vh[id] *= std::polar(1.0, -impl_->wlin[id] * dt);
    impl_->time += dt;
}

double Solver::hs_proxy(double s) const {
    // sqrt( sum (1+|k|^2)^s |vhat|^2 ), normalized so s = 0 matches the L2 norm
    double acc = 0.0;
    for (size_t id = 0; id < impl_->vh.size(); ++id) {
        const double k2m = impl_->k1[id] * impl_->k1[id] + impl_->k2[id] * impl_->k2[id];
        acc += std::pow(1.0 + k2m, s) * std::norm(impl_->vh[id]);
    }
    const double cell = 2.0 * impl_->L / impl_->N;
    return std::sqrt(acc) * cell / impl_->N;
}

StepOutcome Solver::step(double dt, Scheme scheme) {
    const double before = impl_->l2_of(impl_->vh);
    const std::vector<cplx> saved = impl_->vh;
    auto advance = [&](double h) {
        if (scheme == Scheme::ETDRK4) impl_->etdrk4(h);
        else impl_->if_rk4(h);
    };
    advance(dt);
    double after = impl_->l2_of(impl_->vh);
    if (after > 10.0 * before && before > 0.0) {
        // retry once with half steps to distinguish CFL failure from focusing
        impl_->vh = saved;
        advance(0.5 * dt);
        advance(0.5 * dt);
        after = impl_->l2_of(impl_->vh);
        impl_->time += dt;
        if (after > 10.0 * before) return StepOutcome::BlowupSuspected;
        return StepOutcome::RetriedHalfStep;
    }
    impl_->time += dt;
    return StepOutcome::Ok;
}

StepOutcome Solver::evolve(double t_final, const StepperConfig& cfg,
                           const std::function<void(const Observer&)>& observer) {
    const double cap = dt_max(cfg.cfl_safety);
    const double dt_eff = std::min(cfg.dt, cap);
    StepOutcome worst = StepOutcome::Ok;
    while (impl_->time < t_final - 1e-15) {
        const double dt = std::min(dt_eff, t_final - impl_->time);
        const StepOutcome o = step(dt, cfg.scheme);
        if (o == StepOutcome::BlowupSuspected) return o;
        if (o == StepOutcome::RetriedHalfStep) worst = o;
        if (observer) {
            const FieldState s = state();
            observer({impl_->time, s.mass(), s.l2_norm(), s.linf(), hs_proxy()});
        }
    }
    return worst;
}

double scaling_symmetry_check(const FieldState& v0, double lambda, double t_final,
                              const StepperConfig& cfg) {
    // reference run
    Solver ref(v0.N, v0.L, v0.E, cfg.dealias);
    ref.set_field(v0.values);
    ref.evolve(t_final, cfg);
    const FieldState vt = ref.state();

    // rescaled initial data lambda^2 v0(lambda x) on the box L/lambda, energy lambda^2 E
    FieldState w0;
    w0.N = v0.N;
    w0.L = v0.L / lambda;
    w0.E = lambda * lambda * v0.E;
    w0.values.resize(v0.values.size());
    for (size_t i = 0; i < v0.values.size(); ++i)
        w0.values[i] = lambda * lambda * v0.values[i];  // same samples: x_j' = x_j/lambda

    Solver sc(w0.N, w0.L, w0.E, cfg.dealias);
    sc.set_field(w0.values);
    StepperConfig cfg2 = cfg;
    cfg2.dt = cfg.dt / (lambda * lambda * lambda);
    sc.evolve(t_final / (lambda * lambda * lambda), cfg2);
    const FieldState wt = sc.state();

    // compare w(t/l^3, x) with l^2 v(t, l x): gridpoints already matched
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < vt.values.size(); ++i) {
        const double a = wt.values[i];
        const double b = lambda * lambda * vt.values[i];
        num += (a - b) * (a - b);
        den += b * b;
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

std::vector<double> sample_gaussian(int N, double L, double amp, double width) {
    std::vector<double> v(size_t(N) * N);
    for (int i = 0; i < N; ++i) {
        const double x = -L + 2.0 * L * i / N;
        for (int j = 0; j < N; ++j) {
            const double y = -L + 2.0 * L * j / N;
            v[size_t(i) * N + j] = amp * std::exp(-(x * x + y * y) / (width * width));
        }
    }
    return v;
}

void write_snapshot(const std::string& path, const FieldState& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_snapshot: cannot open " + path);
    const char magic[4] = {'N', 'V', 'F', '1'};
    f.write(magic, 4);
    const uint32_t n32 = static_cast<uint32_t>(s.N);
    f.write(reinterpret_cast<const char*>(&n32), 4);
    f.write(reinterpret_cast<const char*>(&s.L), 8);
    f.write(reinterpret_cast<const char*>(&s.E), 8);
    f.write(reinterpret_cast<const char*>(&s.time), 8);
    f.write(reinterpret_cast<const char*>(s.values.data()),
            static_cast<std::streamsize>(s.values.size() * sizeof(double)));
    if (!f) throw std::runtime_error("write_snapshot: write failed for " + path);
}

FieldState read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (std::memcmp(magic, "NVF1", 4) != 0) throw std::runtime_error("read_snapshot: bad magic");
    uint32_t n32 = 0;
    FieldState s;
    f.read(reinterpret_cast<char*>(&n32), 4);
    f.read(reinterpret_cast<char*>(&s.L), 8);
    f.read(reinterpret_cast<char*>(&s.E), 8);
    f.read(reinterpret_cast<char*>(&s.time), 8);
    s.N = static_cast<int>(n32);
    s.values.resize(size_t(s.N) * s.N);
    f.read(reinterpret_cast<char*>(s.values.data()),
           static_cast<std::streamsize>(s.values.size() * sizeof(double)));
    if (!f) throw std::runtime_error("read_snapshot: truncated file " + path);
    return s;
}

}  // namespace nvlab
