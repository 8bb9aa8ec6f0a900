#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace acfront {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// Periodic rectangular lattice: n points per axis, physical side length
/// `extent`, spacing h = extent/n. All index arithmetic wraps modulo n.
struct Grid {
    int dim = 2;
    std::size_t n = 0;          // points per axis (power of two)
    double extent = 0.0;        // physical side length
    double spacing = 0.0;       // h = extent / n

    std::size_t cells() const {
        std::size_t c = 1;
        for (int a = 0; a < dim; ++a) c *= n;
        return c;
    }

    /// Wavenumber of Fourier index m on this torus, m in [0, n).
    /// Uses the symmetric (signed) integer range, so k(0) = 0 and
    /// k(n/2) is the Nyquist mode.
    double wavenumber(std::size_t m) const {
        const long long half = static_cast<long long>(n) / 2;
        long long ms = static_cast<long long>(m);
        if (ms > half) ms -= static_cast<long long>(n);
        return 2.0 * std::numbers::pi * static_cast<double>(ms) / extent;
    }

    std::vector<double> wavenumbers() const {
        std::vector<double> k(n);
        for (std::size_t m = 0; m < n; ++m) k[m] = wavenumber(m);
        return k;
    }

    std::size_t wrap(long long i) const {
        const long long nn = static_cast<long long>(n);
        long long r = i % nn;
        if (r < 0) r += nn;
        return static_cast<std::size_t>(r);
    }

    bool operator==(const Grid&) const = default;
};

inline Grid make_grid(int dim, std::size_t n, double extent) {
    if (dim < 1) throw std::invalid_argument("make_grid: dim must be >= 1");
    if (!is_power_of_two(n) || n < 8)
        throw std::invalid_argument("make_grid: points_per_axis must be a power of two >= 8");
    if (!(extent > 0.0)) throw std::invalid_argument("make_grid: extent must be positive");
    Grid g;
    g.dim = dim;
    g.n = n;
    g.extent = extent;
    g.spacing = extent / static_cast<double>(n);
    return g;
}

/// Scalar values on a Grid, row-major, tagged with a physical time.
struct Field {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    Field(const Grid& g, double fill = 0.0, double t = 0.0)
        : grid(g), values(g.cells(), fill), time(t) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    // Row-major index for 2-d access, wrapped.
    double& at(long long ix, long long iy) {
        return values[grid.wrap(ix) * grid.n + grid.wrap(iy)];
    }
    double at(long long ix, long long iy) const {
        return values[grid.wrap(ix) * grid.n + grid.wrap(iy)];
    }
};

inline void check_finite(const Field& f, const std::string& where) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::runtime_error(where + ": non-finite field value");
}

inline double field_mean(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s / static_cast<double>(f.size());
}

inline double field_max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline double field_min(const Field& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

inline double field_max(const Field& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::max(m, v);
    return m;
}

inline double sup_distance(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Bilinear interpolation at physical position (x, y) on the periodic grid
/// (2-d only).
inline double interpolate_bilinear(const Field& f, double x, double y) {
    const Grid& g = f.grid;
    const double h = g.spacing;
    double fx = x / h, fy = y / h;
    const double ix = std::floor(fx), iy = std::floor(fy);
    const double tx = fx - ix, ty = fy - iy;
    const long long i0 = static_cast<long long>(ix), j0 = static_cast<long long>(iy);
    const double v00 = f.at(i0, j0), v10 = f.at(i0 + 1, j0);
    const double v01 = f.at(i0, j0 + 1), v11 = f.at(i0 + 1, j0 + 1);
    return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
}

}  // namespace acfront
