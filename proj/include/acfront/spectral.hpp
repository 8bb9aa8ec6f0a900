#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "acfront/fft.hpp"
#include "acfront/grid.hpp"

namespace acfront {

/// Apply a real Fourier multiplier mult(|k|^2) in place on a half-spectrum.
template <typename Mult>
inline void apply_isotropic_multiplier(Spectrum& s, const Grid& g, Mult&& mult) {
    std::vector<double> k2axis(g.n);
    for (std::size_t m = 0; m < g.n; ++m) {
        const double k = g.wavenumber(m);
        k2axis[m] = k * k;
    }
    for_each_mode(g, [&](std::size_t idx, const std::vector<std::size_t>& m) {
        double k2 = 0.0;
        for (std::size_t a = 0; a < m.size(); ++a) k2 += k2axis[m[a]];
        s[idx] *= mult(k2);
    });
}

/// Heat semigroup e^{tΔ}: multiplier exp(-t|k|^2). Exact on the grid's
/// Fourier modes; the zero mode is untouched, so the mean is conserved.
inline Field heat(const Field& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat: t must be >= 0");
    if (t == 0.0) return f;
    Spectrum s = fft_forward(f);
    apply_isotropic_multiplier(s, f.grid, [t](double k2) { return std::exp(-t * k2); });
    return fft_backward(s, f.grid, f.time + t);
}

/// e^{t(Δ+1)}: the heat multiplier times e^t.
inline Field heat_plus_one(const Field& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_plus_one: t must be >= 0");
    if (t == 0.0) return f;
    const double et = std::exp(t);
    Spectrum s = fft_forward(f);
    apply_isotropic_multiplier(s, f.grid,
                               [t, et](double k2) { return et * std::exp(-t * k2); });
    return fft_backward(s, f.grid, f.time + t);
}

/// Spectral Laplacian (multiplier -|k|^2).
inline Field laplacian(const Field& f) {
    Spectrum s = fft_forward(f);
    apply_isotropic_multiplier(s, f.grid, [](double k2) { return -k2; });
    return fft_backward(s, f.grid, f.time);
}

/// Spectral partial derivative along `axis` (multiplier i k_axis). The
/// unmatched Nyquist mode is zeroed, the usual convention for odd-order
/// spectral derivatives on an even grid.
inline Field derivative(const Field& f, int axis) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative: bad axis");
    Spectrum s = fft_forward(f);
    const std::size_t nyq = g.n / 2;
    for_each_mode(g, [&](std::size_t idx, const std::vector<std::size_t>& m) {
        const std::size_t ma = m[static_cast<std::size_t>(axis)];
        if (ma == nyq) {
            s[idx] = 0.0;
            return;
        }
        const double k = g.wavenumber(ma);
        s[idx] *= std::complex<double>(0.0, k);
    });
    return fft_backward(s, g, f.time);
}

inline std::vector<Field> gradient(const Field& f) {
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(f.grid.dim));
    for (int a = 0; a < f.grid.dim; ++a) out.push_back(derivative(f, a));
    return out;
}

/// Convolve f with a kernel given by its continuum Fourier transform
/// khat(|k|^2), normalized so that (g * f)(x) = ∫ g(x-y) f(y) dy on the torus.
template <typename KHat>
inline Field spectral_convolve(const Field& f, KHat&& khat) {
    Spectrum s = fft_forward(f);
    apply_isotropic_multiplier(s, f.grid, khat);
    return fft_backward(s, f.grid, f.time);
}

}  // namespace acfront
