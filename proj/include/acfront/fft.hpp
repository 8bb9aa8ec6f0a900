#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "acfront/grid.hpp"

namespace acfront {

/// Real-to-complex FFT plans for one grid shape. Plans are created once with
/// FFTW_ESTIMATE (deterministic plan choice, so results are bitwise
/// reproducible) and executed through the new-array interface, which is
/// thread safe on distinct buffers.
class FftPlan {
  public:
    explicit FftPlan(const Grid& g) : dim_(g.dim), n_(g.n) {
        std::vector<int> shape(static_cast<std::size_t>(dim_), static_cast<int>(n_));
        real_count_ = g.cells();
        complex_count_ = real_count_ / n_ * (n_ / 2 + 1);
        double* rbuf = fftw_alloc_real(real_count_);
        fftw_complex* cbuf = fftw_alloc_complex(complex_count_);
        fwd_ = fftw_plan_dft_r2c(dim_, shape.data(), rbuf, cbuf, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r(dim_, shape.data(), cbuf, rbuf, FFTW_ESTIMATE);
        fftw_free(rbuf);
        fftw_free(cbuf);
        if (!fwd_ || !bwd_) throw std::runtime_error("FftPlan: plan creation failed");
    }

    ~FftPlan() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t real_count() const { return real_count_; }
    std::size_t complex_count() const { return complex_count_; }

    void forward(const double* in, fftw_complex* out) const {
        // new-array execute requires non-const in; FFTW does not modify the
        // input of an r2c transform planned without FFTW_DESTROY_INPUT.
        fftw_execute_dft_r2c(fwd_, const_cast<double*>(in), out);
    }

    /// c2r destroys its input; callers must treat `in` as scratch.
    void backward(fftw_complex* in, double* out) const {
        fftw_execute_dft_c2r(bwd_, in, out);
    }

  private:
    int dim_;
    std::size_t n_;
    std::size_t real_count_ = 0, complex_count_ = 0;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

/// Process-wide plan cache keyed by (dim, n). Plan creation is serialized;
/// lookups after creation are cheap.
inline const FftPlan& fft_plan_for(const Grid& g) {
    static std::mutex mtx;
    static std::map<std::pair<int, std::size_t>, std::unique_ptr<FftPlan>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftPlan>(g)).first;
    return *it->second;
}

/// Half-spectrum buffer owning FFTW-aligned storage.
class Spectrum {
  public:
    explicit Spectrum(std::size_t count) : count_(count), data_(fftw_alloc_complex(count)) {
        if (!data_) throw std::bad_alloc();
    }
    ~Spectrum() { fftw_free(data_); }
    Spectrum(const Spectrum& o) : Spectrum(o.count_) {
        std::memcpy(data_, o.data_, count_ * sizeof(fftw_complex));
    }
    Spectrum& operator=(const Spectrum&) = delete;

    std::size_t size() const { return count_; }
    fftw_complex* data() { return data_; }
    std::complex<double>& operator[](std::size_t i) {
        return reinterpret_cast<std::complex<double>*>(data_)[i];
    }
    std::complex<double> operator[](std::size_t i) const {
        return reinterpret_cast<const std::complex<double>*>(data_)[i];
    }

  private:
    std::size_t count_;
    fftw_complex* data_;
};

inline Spectrum fft_forward(const Field& f) {
    const FftPlan& plan = fft_plan_for(f.grid);
    Spectrum s(plan.complex_count());
    plan.forward(f.values.data(), s.data());
    return s;
}

/// Inverse transform including the 1/n^d normalization.
inline Field fft_backward(Spectrum& s, const Grid& g, double time) {
    const FftPlan& plan = fft_plan_for(g);
    Field f(g, 0.0, time);
    plan.backward(s.data(), f.values.data());
    const double norm = 1.0 / static_cast<double>(g.cells());
    for (double& v : f.values) v *= norm;
    return f;
}

/// Visit every half-spectrum entry with its per-axis Fourier indices.
/// `fn(flat_index, m[])` where m[a] in [0, n) for a < dim-1 and the last
/// axis runs over [0, n/2].
template <typename Fn>
inline void for_each_mode(const Grid& g, Fn&& fn) {
    const std::size_t n = g.n;
    const std::size_t nlast = n / 2 + 1;
    std::vector<std::size_t> m(static_cast<std::size_t>(g.dim), 0);
    std::size_t rows = 1;
    for (int a = 0; a + 1 < g.dim; ++a) rows *= n;
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t rem = r;
        for (int a = g.dim - 2; a >= 0; --a) {
            m[static_cast<std::size_t>(a)] = rem % n;
            rem /= n;
        }
        for (std::size_t last = 0; last < nlast; ++last) {
            m[static_cast<std::size_t>(g.dim - 1)] = last;
            fn(r * nlast + last, m);
        }
    }
}

}  // namespace acfront
