#pragma once

#include <fftw3.h>

#include <complex>
#include <stdexcept>
#include <vector>

// Thin RAII wrapper around FFTW complex 2D transforms on an N x N grid.
namespace nvlab {

class Fft2 {
  public:
    explicit Fft2(int n) : n_(n) {
        buf_ = fftw_alloc_complex(static_cast<size_t>(n) * n);
        if (!buf_) throw std::bad_alloc();
        fwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_MEASURE);
        bwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_BACKWARD, FFTW_MEASURE);
    }
    ~Fft2() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft2(const Fft2&) = delete;
    Fft2& operator=(const Fft2&) = delete;

    int n() const { return n_; }
    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
    const std::complex<double>* data() const { return reinterpret_cast<const std::complex<double>*>(buf_); }

    // in-place, unnormalized forward transform of data()
    void forward() { fftw_execute(fwd_); }
    // in-place backward transform; caller divides by n*n
    void backward() { fftw_execute(bwd_); }

    void forward(std::vector<std::complex<double>>& field) {
        load(field);
        forward();
        store(field);
    }
    void backward_normalized(std::vector<std::complex<double>>& field) {
        load(field);
        backward();
        store(field);
        const double s = 1.0 / (static_cast<double>(n_) * n_);
        for (auto& v : field) v *= s;
    }

  private:
    void load(const std::vector<std::complex<double>>& f) {
        if (f.size() != static_cast<size_t>(n_) * n_) throw std::invalid_argument("Fft2: size mismatch");
        std::copy(f.begin(), f.end(), data());
    }
    void store(std::vector<std::complex<double>>& f) {
        std::copy(data(), data() + static_cast<size_t>(n_) * n_, f.begin());
    }

    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

// fftfreq-style angular wavenumber for index i on an N-point axis of length 2L
inline double wavenumber(int i, int n, double L) {
    const int k = (i <= n / 2 - 1) ? i : i - n;
    return M_PI / L * k;
}

}  // namespace nvlab
