#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>

#include "acfront/grid.hpp"
#include "acfront/schedule.hpp"
#include "acfront/spectral.hpp"

namespace acfront {

/// Parameters of the mollified-noise initial datum. The mollifier is the
/// standard Gaussian density with unit covariance, scaled to width epsilon.
struct NoiseSpec {
    double epsilon = 0.0;  // in (0,1), also the mollifier width
    double alpha = 0.0;    // in (0,1)
    std::uint64_t seed = 0;
};

struct CovarianceTarget {
    double sigma = 1.0;  // > 0
    int dim = 2;
};

/// splitmix64; used to derive independent per-replica streams from one
/// master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Lattice white noise: i.i.d. centred Gaussians with variance h^{-d} per
/// cell, the unique scaling under which lattice pairings sum to L^2 pairings.
inline Field sample_white_noise(const Grid& grid, std::uint64_t seed) {
    Field f(grid);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::pow(grid.spacing, -grid.dim / 2.0));
    for (double& v : f.values) v = normal(rng);
    return f;
}

inline double mollifier_hat(double eps, double k2) {
    return std::exp(-0.5 * eps * eps * k2);
}

/// eta_eps = eps^{d/2 - alpha} (phi^eps * noise), spectral convolution.
inline Field make_eta_eps(const Field& noise, const NoiseSpec& spec) {
    const Grid& g = noise.grid;
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
        throw std::invalid_argument("make_eta_eps: epsilon must be in (0,1)");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::invalid_argument("make_eta_eps: alpha must be in (0,1)");
    if (spec.epsilon < 2.0 * g.spacing)
        throw std::invalid_argument("make_eta_eps: mollifier width below 2h is unresolvable");
    const double eps = spec.epsilon;
    const double amp = std::pow(eps, g.dim / 2.0 - spec.alpha);
    Field out = spectral_convolve(
        noise, [eps](double k2) { return mollifier_hat(eps, k2); });
    for (double& v : out.values) v *= amp;
    out.time = 0.0;
    return out;
}

inline Field sample_eta_eps(const Grid& grid, const NoiseSpec& spec) {
    return make_eta_eps(sample_white_noise(grid, spec.seed), spec);
}

/// Stationary Gaussian field with covariance sigma^{-d/2} exp(-r^2/(8 sigma)),
/// synthesized by multiplying a white-noise spectrum with the square root of
/// the covariance's Fourier transform, (8 pi)^{d/4} e^{-sigma |k|^2}.
inline Field sample_bargmann_fock(const Grid& grid, const CovarianceTarget& target,
                                  std::uint64_t seed) {
    if (!(target.sigma > 0.0))
        throw std::invalid_argument("sample_bargmann_fock: sigma must be > 0");
    if (grid.extent < 20.0 * std::sqrt(8.0 * target.sigma))
        throw std::invalid_argument(
            "sample_bargmann_fock: extent below 20 sqrt(8 sigma); wraparound not negligible");
    Field noise = sample_white_noise(grid, seed);
    const double sigma = target.sigma;
    const double amp = std::pow(8.0 * M_PI, grid.dim / 4.0);
    return spectral_convolve(noise,
                             [sigma, amp](double k2) { return amp * std::exp(-sigma * k2); });
}

struct CoupledPair {
    Field eta_eps;  // initial datum on the physical grid
    Field psi;      // limit Gaussian field; psi at rescaled x is psi(x L_eps)
};

/// Both fields from the SAME white-noise realization. psi is built with the
/// limit coupling kernel K(x) = (8 pi)^{d/4} (4 pi)^{-d/2} exp(-|x|^2/4) in
/// rescaled coordinates, which on the physical grid amounts to the multiplier
/// (8 pi)^{d/4} L^{d/2} exp(-(L^2 + eps^2/2) |k|^2). The finite-epsilon
/// coupling of the same realization is P^1_{t_star} eta_eps.
inline CoupledPair coupled_pair(const Grid& grid, const NoiseSpec& spec,
                                const Schedule& schedule) {
    Field noise = sample_white_noise(grid, spec.seed);
    CoupledPair out{make_eta_eps(noise, spec), Field{}};
    const double L = schedule.L_eps;
    const double eps = spec.epsilon;
    const double amp = std::pow(8.0 * M_PI, grid.dim / 4.0) * std::pow(L, grid.dim / 2.0);
    out.psi = spectral_convolve(noise, [L, eps, amp](double k2) {
        return amp * std::exp(-(L * L + 0.5 * eps * eps) * k2);
    });
    return out;
}

}  // namespace acfront
