#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "acfront/grid.hpp"
#include "acfront/spectral.hpp"

using namespace acfront;

namespace {
Field random_field(const Grid& g, unsigned seed) {
    Field f(g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (double& v : f.values) v = nd(rng);
    return f;
}
}  // namespace

TEST_CASE("grid validation and wavenumbers") {
    CHECK_THROWS_AS(make_grid(2, 12, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, 4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, 64, -1.0), std::invalid_argument);
    Grid g = make_grid(2, 64, 6.4);
    CHECK(g.spacing == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(g.wavenumber(0) == 0.0);
    CHECK(g.wavenumber(1) == doctest::Approx(2.0 * M_PI / 6.4).epsilon(1e-14));
    CHECK(g.wavenumber(63) == doctest::Approx(-2.0 * M_PI / 6.4).epsilon(1e-14));
    CHECK(g.wrap(-1) == 63);
    CHECK(g.wrap(64) == 0);
}

TEST_CASE("fft round trip is the identity") {
    Grid g = make_grid(2, 32, 3.2);
    Field f = random_field(g, 7);
    Spectrum s = fft_forward(f);
    Field back = fft_backward(s, g, f.time);
    CHECK(sup_distance(f, back) < 1e-13);
}

TEST_CASE("heat semigroup identity and mass conservation") {
    Grid g = make_grid(2, 64, 6.4);
    Field f = random_field(g, 11);
    Field ab = heat(heat(f, 0.3), 0.7);
    Field once = heat(f, 1.0);
    CHECK(sup_distance(ab, once) < 1e-12);
    CHECK(field_mean(once) == doctest::Approx(field_mean(f)).epsilon(1e-12));
    CHECK(once.time == doctest::Approx(1.0));
    CHECK_THROWS_AS(heat(f, -0.1), std::invalid_argument);
}

TEST_CASE("heat of a single Fourier mode decays exactly") {
    Grid g = make_grid(2, 64, 2.0 * M_PI);
    Field f(g);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            f.values[i * g.n + j] = std::cos(3.0 * static_cast<double>(i) * g.spacing);
    Field h = heat(f, 0.25);
    const double decay = std::exp(-0.25 * 9.0);
    for (std::size_t k = 0; k < f.size(); ++k)
        CHECK(h[k] == doctest::Approx(decay * f[k]).epsilon(1e-10));
}

TEST_CASE("heat_plus_one equals e^t times heat") {
    Grid g = make_grid(2, 32, 4.0);
    Field f = random_field(g, 3);
    Field a = heat_plus_one(f, 0.6);
    Field b = heat(f, 0.6);
    for (double& v : b.values) v *= std::exp(0.6);
    CHECK(sup_distance(a, b) < 1e-12);
}

TEST_CASE("spectral laplacian and derivative match closed forms") {
    Grid g = make_grid(2, 64, 2.0 * M_PI);
    Field f(g);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            f.values[i * g.n + j] = std::sin(2.0 * static_cast<double>(i) * g.spacing) *
                                    std::cos(static_cast<double>(j) * g.spacing);
    Field lap = laplacian(f);
    for (std::size_t k = 0; k < f.size(); ++k)
        CHECK(lap[k] == doctest::Approx(-5.0 * f[k]).epsilon(1e-9));
    Field dx = derivative(f, 0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            const double expected = 2.0 * std::cos(2.0 * static_cast<double>(i) * g.spacing) *
                                    std::cos(static_cast<double>(j) * g.spacing);
            CHECK(dx.values[i * g.n + j] == doctest::Approx(expected).epsilon(1e-9));
        }
    CHECK_THROWS_AS(derivative(f, 2), std::invalid_argument);
}

TEST_CASE("spectral convolution uses the continuum normalization") {
    // convolving with a Gaussian of variance 2t equals heat at time t
    Grid g = make_grid(2, 64, 6.4);
    Field f = random_field(g, 5);
    const double t = 0.05;
    Field conv = spectral_convolve(f, [t](double k2) { return std::exp(-t * k2); });
    Field h = heat(f, t);
    CHECK(sup_distance(conv, h) < 1e-12);
}

TEST_CASE("bilinear interpolation reproduces grid values and wraps") {
    Grid g = make_grid(2, 16, 1.6);
    Field f = random_field(g, 9);
    CHECK(interpolate_bilinear(f, 0.3, 0.5) == doctest::Approx(f.at(3, 5)).epsilon(1e-14));
    // midpoint of two neighbors along x
    const double mid = interpolate_bilinear(f, 0.35, 0.5);
    CHECK(mid == doctest::Approx(0.5 * (f.at(3, 5) + f.at(4, 5))).epsilon(1e-13));
    // periodic wrap
    CHECK(interpolate_bilinear(f, 1.6 + 0.3, 0.5) == doctest::Approx(f.at(3, 5)).epsilon(1e-12));
}
