#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "acfront/grid.hpp"

namespace acfront {

/// Level-set function at logical time sigma (stored in w.time) plus the
/// regularization of the degenerate curvature quotient.
struct LevelSetState {
    Field w;
    double delta_reg = 0.0;
};

inline double levelset_stability_bound(const Grid& g) {
    return g.spacing * g.spacing / (4.0 * static_cast<double>(g.dim));
}

/// 1e-8 of the largest gradient magnitude, floored away from zero.
inline double default_delta_reg(const Field& w) {
    const Grid& g = w.grid;
    const double inv2h = 1.0 / (2.0 * g.spacing);
    double m = 0.0;
    const long long n = static_cast<long long>(g.n);
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            const double wx = (w.at(i + 1, j) - w.at(i - 1, j)) * inv2h;
            const double wy = (w.at(i, j + 1) - w.at(i, j - 1)) * inv2h;
            m = std::max(m, std::hypot(wx, wy));
        }
    return std::max(1e-8 * m, 1e-12);
}

/// One explicit step of dw/dsigma = Lap w - (grad w tensor grad w : Hess w) /
/// (|grad w|^2 + delta_reg^2), central differences, periodic.
inline LevelSetState levelset_step(const LevelSetState& state, double dsigma) {
    const Grid& g = state.w.grid;
    if (g.dim != 2) throw std::invalid_argument("levelset_step: 2-d only");
    if (!(dsigma > 0.0) || dsigma > levelset_stability_bound(g) * (1.0 + 1e-12))
        throw std::invalid_argument("levelset_step: dsigma violates the stability bound");
    const double h = g.spacing;
    const double inv2h = 1.0 / (2.0 * h);
    const double invh2 = 1.0 / (h * h);
    const double reg2 = state.delta_reg * state.delta_reg;
    const Field& w = state.w;
    LevelSetState out{Field(g, 0.0, w.time + dsigma), state.delta_reg};
    const long long n = static_cast<long long>(g.n);
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            const double c = w.at(i, j);
            const double xp = w.at(i + 1, j), xm = w.at(i - 1, j);
            const double yp = w.at(i, j + 1), ym = w.at(i, j - 1);
            const double wx = (xp - xm) * inv2h;
            const double wy = (yp - ym) * inv2h;
            const double wxx = (xp - 2.0 * c + xm) * invh2;
            const double wyy = (yp - 2.0 * c + ym) * invh2;
            const double wxy = (w.at(i + 1, j + 1) - w.at(i + 1, j - 1) - w.at(i - 1, j + 1) +
                                w.at(i - 1, j - 1)) *
                               0.25 * invh2;
            const double num = wx * wx * wxx + 2.0 * wx * wy * wxy + wy * wy * wyy;
            const double den = wx * wx + wy * wy + reg2;
            out.w.at(i, j) = c + dsigma * (wxx + wyy - num / den);
        }
    return out;
}

/// A few iterations of the reinitialization PDE d phi/d tau = S(phi0)(1 -
/// |grad phi|) with Godunov upwinding; restores |grad w| ~ 1 near the zero set
/// without moving it. Cells whose initial value changes sign against a
/// neighbor are instead relaxed toward the subcell distance h w0 / |grad w0|
/// (frozen at entry), which pins the zero crossing in place; without this
/// anchor the smeared sign advects the interface inward by O(h) per call,
/// which accumulates over periodic redistancing into a visible front lag.
inline Field reinitialize(const Field& w0, int iterations = 10) {
    const Grid& g = w0.grid;
    if (g.dim != 2) throw std::invalid_argument("reinitialize: 2-d only");
    const double h = g.spacing;
    const double dtau = 0.5 * h;
    const long long n = static_cast<long long>(g.n);
    Field w = w0;
    std::vector<double> smooth_sign(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        smooth_sign[k] = w0[k] / std::sqrt(w0[k] * w0[k] + h * h);
    // Subcell anchor: signed distance estimate at interface-adjacent cells,
    // NaN elsewhere.
    std::vector<double> anchor(w.size(), std::numeric_limits<double>::quiet_NaN());
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            const double c0 = w0.at(i, j);
            const bool iface = c0 * w0.at(i + 1, j) < 0.0 || c0 * w0.at(i - 1, j) < 0.0 ||
                               c0 * w0.at(i, j + 1) < 0.0 || c0 * w0.at(i, j - 1) < 0.0;
            if (!iface) continue;
            const double gx = (w0.at(i + 1, j) - w0.at(i - 1, j)) / (2.0 * h);
            const double gy = (w0.at(i, j + 1) - w0.at(i, j - 1)) / (2.0 * h);
            const double gmag = std::max(std::hypot(gx, gy), 1e-12);
            anchor[static_cast<std::size_t>(g.wrap(i)) * g.n + g.wrap(j)] = c0 / gmag;
        }
    for (int it = 0; it < iterations; ++it) {
        Field next = w;
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < n; ++j) {
                const double c = w.at(i, j);
                const std::size_t idx = static_cast<std::size_t>(g.wrap(i)) * g.n + g.wrap(j);
                if (!std::isnan(anchor[idx])) {
                    const double d = anchor[idx];
                    const double s0 = d >= 0.0 ? 1.0 : -1.0;
                    next.at(i, j) = c - dtau / h * (s0 * std::abs(c) - d);
                    continue;
                }
                const double a = (c - w.at(i - 1, j)) / h;  // backward x
                const double b = (w.at(i + 1, j) - c) / h;  // forward x
                const double cc = (c - w.at(i, j - 1)) / h;
                const double dd = (w.at(i, j + 1) - c) / h;
                const double s = smooth_sign[idx];
                double grad;
                if (s > 0.0) {
                    const double gx = std::max(std::max(a, 0.0) * std::max(a, 0.0),
                                               std::min(b, 0.0) * std::min(b, 0.0));
                    const double gy = std::max(std::max(cc, 0.0) * std::max(cc, 0.0),
                                               std::min(dd, 0.0) * std::min(dd, 0.0));
                    grad = std::sqrt(gx + gy);
                } else {
                    const double gx = std::max(std::min(a, 0.0) * std::min(a, 0.0),
                                               std::max(b, 0.0) * std::max(b, 0.0));
                    const double gy = std::max(std::min(cc, 0.0) * std::min(cc, 0.0),
                                               std::max(dd, 0.0) * std::max(dd, 0.0));
                    grad = std::sqrt(gx + gy);
                }
                next.at(i, j) = c + dtau * s * (1.0 - grad);
            }
        w = std::move(next);
    }
    w.time = w0.time;
    return w;
}

/// Evolve a level-set function from its stored sigma to sigma_to, with
/// periodic redistancing.
inline LevelSetState evolve_levelset(LevelSetState state, double sigma_to,
                                     int reinit_every = 50) {
    if (sigma_to < state.w.time)
        throw std::invalid_argument("evolve_levelset: sigma_to before current time");
    const double dsigma = levelset_stability_bound(state.w.grid);
    int step = 0;
    while (state.w.time < sigma_to - 1e-12) {
        const double ds = std::min(dsigma, sigma_to - state.w.time);
        state = levelset_step(state, ds);
        if (reinit_every > 0 && ++step % reinit_every == 0)
            state.w = reinitialize(state.w);
    }
    state.w.time = sigma_to;
    return state;
}

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// v(f; sigma, x) for each requested sigma >= 1: start from w1 = clamp(f,
/// [-1,1]) at sigma = 1, run the level-set flow, take pointwise signs. The
/// sign map is independent of the choice of w1 within its class.
inline std::vector<Field> sign_map(const Field& f, const std::vector<double>& sigma_list) {
    for (double s : sigma_list)
        if (s < 1.0) throw std::invalid_argument("sign_map: sigma must be >= 1");
    std::vector<double> sigmas = sigma_list;
    std::sort(sigmas.begin(), sigmas.end());
    LevelSetState state;
    state.w = f;
    state.w.time = 1.0;
    for (double& v : state.w.values) v = std::clamp(v, -1.0, 1.0);
    state.delta_reg = default_delta_reg(state.w);
    std::vector<Field> out;
    out.reserve(sigmas.size());
    std::map<double, Field> at_sigma;
    for (double s : sigmas) {
        state = evolve_levelset(std::move(state), s);
        Field v = state.w;
        for (double& x : v.values) x = sgn(x);
        at_sigma.emplace(s, std::move(v));
    }
    for (double s : sigma_list) out.push_back(at_sigma.at(s));
    return out;
}

/// Closed polylines (vertex chains, implicit closing edge) of the zero level
/// set on the torus.
struct NodalSet {
    std::vector<std::vector<std::array<double, 2>>> polylines;

    bool empty() const { return polylines.empty(); }
};

/// Marching squares at level zero with linear edge interpolation. The two
/// ambiguous saddle patterns are resolved by the sign of the cell average
/// (positive average joins the positive corners through the cell center).
inline NodalSet extract_nodal(const Field& f) {
    const Grid& g = f.grid;
    if (g.dim != 2) throw std::invalid_argument("extract_nodal: 2-d only");
    const long long n = static_cast<long long>(g.n);
    const double h = g.spacing;

    // Edge keys: (0, i, j) crossing between P(i,j)-P(i+1,j); (1, i, j) between
    // P(i,j)-P(i,j+1). Indices wrapped.
    using EdgeKey = std::array<long long, 3>;
    auto key = [&](int type, long long i, long long j) {
        return EdgeKey{type, static_cast<long long>(g.wrap(i)), static_cast<long long>(g.wrap(j))};
    };
    auto crossing_point = [&](const EdgeKey& k) -> std::array<double, 2> {
        const long long i = k[1], j = k[2];
        const double fa = f.at(i, j);
        const double fb = k[0] == 0 ? f.at(i + 1, j) : f.at(i, j + 1);
        const double t = fa / (fa - fb);
        if (k[0] == 0) return {(static_cast<double>(i) + t) * h, static_cast<double>(j) * h};
        return {static_cast<double>(i) * h, (static_cast<double>(j) + t) * h};
    };

    std::vector<std::pair<EdgeKey, EdgeKey>> segments;
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            const double v00 = f.at(i, j), v10 = f.at(i + 1, j);
            const double v01 = f.at(i, j + 1), v11 = f.at(i + 1, j + 1);
            const bool p00 = v00 > 0.0, p10 = v10 > 0.0, p01 = v01 > 0.0, p11 = v11 > 0.0;
            const EdgeKey bottom = key(0, i, j), top = key(0, i, j + 1);
            const EdgeKey left = key(1, i, j), right = key(1, i + 1, j);
            std::vector<EdgeKey> crossed;
            if (p00 != p10) crossed.push_back(bottom);
            if (p01 != p11) crossed.push_back(top);
            if (p00 != p01) crossed.push_back(left);
            if (p10 != p11) crossed.push_back(right);
            if (crossed.size() == 2) {
                segments.emplace_back(crossed[0], crossed[1]);
            } else if (crossed.size() == 4) {
                const bool center_positive = v00 + v10 + v01 + v11 > 0.0;
                // Saddle: join the segments around the corners whose sign
                // disagrees with the center.
                const bool isolate00 = (p00 != center_positive);
                if (isolate00) {
                    segments.emplace_back(bottom, left);    // around P(i,j)
                    segments.emplace_back(top, right);      // around P(i+1,j+1)
                } else {
                    segments.emplace_back(bottom, right);   // around P(i+1,j)
                    segments.emplace_back(top, left);       // around P(i,j+1)
                }
            }
        }

    std::map<EdgeKey, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        incident[segments[s].first].push_back(s);
        incident[segments[s].second].push_back(s);
    }
    NodalSet out;
    std::vector<bool> used(segments.size(), false);
    for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        std::vector<std::array<double, 2>> poly;
        const EdgeKey start = segments[s0].first;
        EdgeKey cur = start;
        std::size_t seg = s0;
        while (true) {
            used[seg] = true;
            poly.push_back(crossing_point(cur));
            const EdgeKey next = segments[seg].first == cur ? segments[seg].second
                                                            : segments[seg].first;
            if (next == start) break;
            const auto& inc = incident.at(next);
            // Each crossing edge joins exactly two cells' segments on the torus.
            std::size_t other = inc[0] == seg ? (inc.size() > 1 ? inc[1] : seg) : inc[0];
            if (other == seg || used[other]) {
                poly.push_back(crossing_point(next));
                break;
            }
            cur = next;
            seg = other;
        }
        out.polylines.push_back(std::move(poly));
    }
    return out;
}

/// Minimum-image distance from (x, y) to the nodal set, sampling polyline
/// vertices (accuracy ~ half a cell). Empty set gives +infinity.
inline double distance_to_nodal(const NodalSet& gamma, double x, double y, double extent) {
    double best = std::numeric_limits<double>::infinity();
    auto mi = [extent](double d) {
        d = std::remainder(d, extent);
        return d;
    };
    for (const auto& poly : gamma.polylines)
        for (const auto& v : poly) {
            const double dx = mi(v[0] - x), dy = mi(v[1] - y);
            best = std::min(best, std::hypot(dx, dy));
        }
    return best;
}

/// Approximate Euclidean distance to the nodal set at every grid point:
/// polyline vertices seed their enclosing cells with exact distances, then
/// chamfer sweeps (repeated to convergence for the periodic wrap) propagate.
/// Error is a few percent of the distance, well below mask tolerances.
inline Field distance_map(const NodalSet& gamma, const Grid& g) {
    if (g.dim != 2) throw std::invalid_argument("distance_map: 2-d only");
    const double h = g.spacing;
    const long long n = static_cast<long long>(g.n);
    Field d(g, std::numeric_limits<double>::infinity(), 0.0);
    for (const auto& poly : gamma.polylines)
        for (const auto& v : poly) {
            const long long i0 = static_cast<long long>(std::floor(v[0] / h));
            const long long j0 = static_cast<long long>(std::floor(v[1] / h));
            for (long long di = 0; di <= 1; ++di)
                for (long long dj = 0; dj <= 1; ++dj) {
                    const long long i = i0 + di, j = j0 + dj;
                    const double dx = std::remainder(static_cast<double>(i) * h - v[0], g.extent);
                    const double dy = std::remainder(static_cast<double>(j) * h - v[1], g.extent);
                    double& cell = d.at(i, j);
                    cell = std::min(cell, std::hypot(dx, dy));
                }
        }
    const double ax = h, diag = h * std::numbers::sqrt2;
    auto relax = [&](long long i, long long j) {
        double& c = d.at(i, j);
        c = std::min({c, d.at(i - 1, j) + ax, d.at(i + 1, j) + ax, d.at(i, j - 1) + ax,
                      d.at(i, j + 1) + ax, d.at(i - 1, j - 1) + diag, d.at(i - 1, j + 1) + diag,
                      d.at(i + 1, j - 1) + diag, d.at(i + 1, j + 1) + diag});
    };
    for (int pass = 0; pass < 3; ++pass) {
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < n; ++j) relax(i, j);
        for (long long i = n - 1; i >= 0; --i)
            for (long long j = n - 1; j >= 0; --j) relax(i, j);
    }
    return d;
}

struct SpaceTimePoint {
    double sigma = 0.0;
    double x = 0.0;  // centered coordinates: |z| is the plain Euclidean norm
    double y = 0.0;
};

struct MaskKDelta {
    double delta = 0.0;
    std::vector<bool> spacetime;  // K_delta membership per space-time point
    std::vector<bool> space;      // K_delta^1 membership per spatial point
};

/// K_delta = {(sigma, x): |z| <= 1/delta, sigma > 1 + delta, dist(z, Gamma) >=
/// delta} with the Euclidean space-time distance to the sigma-indexed nodal
/// sets; K_delta^1 = {x: |x| <= 1/delta, d(x, Gamma_1) >= delta}. The
/// distance in K_delta^1 is taken bounded BELOW by delta: the complementary
/// inequality would select a neighborhood of the interface, where the claimed
/// convergence cannot hold.
inline MaskKDelta k_delta_masks(const std::vector<std::pair<double, NodalSet>>& gamma_traj,
                                double delta, const std::vector<SpaceTimePoint>& st_points,
                                const NodalSet& gamma1,
                                const std::vector<std::array<double, 2>>& space_points,
                                double extent, double center_x = 0.0, double center_y = 0.0) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("k_delta_masks: delta must be in (0,1)");
    MaskKDelta mask;
    mask.delta = delta;
    mask.spacetime.reserve(st_points.size());
    for (const auto& p : st_points) {
        bool in = std::hypot(p.sigma, std::hypot(p.x - center_x, p.y - center_y)) <= 1.0 / delta &&
                  p.sigma > 1.0 + delta;
        if (in) {
            double dist = std::numeric_limits<double>::infinity();
            for (const auto& [sig, gam] : gamma_traj) {
                const double dspace = distance_to_nodal(gam, p.x, p.y, extent);
                dist = std::min(dist, std::hypot(sig - p.sigma, dspace));
            }
            in = dist >= delta;
        }
        mask.spacetime.push_back(in);
    }
    mask.space.reserve(space_points.size());
    for (const auto& q : space_points) {
        const bool in = std::hypot(q[0] - center_x, q[1] - center_y) <= 1.0 / delta &&
                        distance_to_nodal(gamma1, q[0], q[1], extent) >= delta;
        mask.space.push_back(in);
    }
    return mask;
}

/// Exact shrinking circle in d = 2: R(sigma) = sqrt(R0^2 - 2 sigma), extinct
/// at sigma = R0^2/2.
inline std::optional<double> circle_oracle(double R0, double sigma) {
    if (!(R0 > 0.0)) throw std::invalid_argument("circle_oracle: R0 must be > 0");
    if (sigma < 0.0) throw std::invalid_argument("circle_oracle: sigma must be >= 0");
    const double r2 = R0 * R0 - 2.0 * sigma;
    if (r2 <= 0.0) return std::nullopt;
    return std::sqrt(r2);
}

/// Mean vertex distance from (cx, cy) of the longest polyline; the standard
/// radius readout for circle benchmarks.
inline std::optional<double> nodal_radius(const NodalSet& gamma, double cx, double cy,
                                          double extent) {
    const std::vector<std::array<double, 2>>* best = nullptr;
    for (const auto& poly : gamma.polylines)
        if (!best || poly.size() > best->size()) best = &poly;
    if (!best || best->empty()) return std::nullopt;
    double acc = 0.0;
    for (const auto& v : *best) {
        const double dx = std::remainder(v[0] - cx, extent);
        const double dy = std::remainder(v[1] - cy, extent);
        acc += std::hypot(dx, dy);
    }
    return acc / static_cast<double>(best->size());
}

}  // namespace acfront
