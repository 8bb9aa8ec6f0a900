#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "acfront/flows.hpp"
#include "acfront/grid.hpp"
#include "acfront/schedule.hpp"
#include "acfront/spectral.hpp"

namespace acfront {

struct SolverConfig {
    double dt = 0.01;                 // splitting step, <= 0.1
    double monitor_tolerance = 1e-6;  // slack on the universal envelope
};

inline void validate(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.1))
        throw std::invalid_argument("SolverConfig: require 0 < dt <= 0.1");
    if (cfg.monitor_tolerance < 0.0)
        throw std::invalid_argument("SolverConfig: monitor_tolerance must be >= 0");
}

/// One Strang step R_{dt/2} . H_{dt} . R_{dt/2}. The reaction substep is the
/// exact pointwise flow of u' = u - u^3, the diffusion substep the exact heat
/// semigroup (Delta only; e^{t(Delta+1)} would double-count the linear term).
/// Both substeps are exact, so only the splitting error remains.
inline Field step_strang(const Field& u, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_strang: dt must be > 0");
    Field v = u;
    const double half = 0.5 * dt;
    for (double& x : v.values) x = phi_bar(half, x);
    v = heat(v, dt);
    for (double& x : v.values) x = phi_bar(half, x);
    v.time = u.time + dt;
    return v;
}

/// Integrate from t_from to t_to; full steps plus one final fractional step.
/// After every step the elapsed-time envelope max|u| <= e^s/sqrt(e^{2s}-1) is
/// asserted (it holds for arbitrary initial data, and the split scheme
/// inherits it: phi_bar(s, Xi(r)) = Xi(r+s) and heat contracts the max).
inline Field evolve(const Field& u0, double t_from, double t_to, const SolverConfig& cfg) {
    validate(cfg);
    if (t_to < t_from) throw std::invalid_argument("evolve: t_to must be >= t_from");
    Field u = u0;
    u.time = t_from;
    if (t_to == t_from) return u;

    const double total = t_to - t_from;
    const std::size_t full = static_cast<std::size_t>(std::floor(total / cfg.dt));
    std::size_t step = 0;
    double elapsed = 0.0;
    auto advance = [&](double dt) {
        u = step_strang(u, dt);
        ++step;
        elapsed += dt;
        u.time = t_from + elapsed;
        const double bound = apriori_bound(elapsed) + cfg.monitor_tolerance;
        const double m = field_max_abs(u);
        if (!(m <= bound)) {
            std::ostringstream msg;
            msg << "evolve: a-priori bound violated at step " << step << " (elapsed "
                << elapsed << "): max |u| = " << m << " > " << bound;
            throw std::runtime_error(msg.str());
        }
    };
    for (std::size_t k = 0; k < full; ++k) advance(cfg.dt);
    const double rem = total - static_cast<double>(full) * cfg.dt;
    if (rem > 1e-14) advance(rem);
    u.time = t_to;
    return u;
}

/// Snapshots of one solution, sorted by time.
struct Trajectory {
    std::vector<Field> snapshots;

    double t_min() const { return snapshots.front().time; }
    double t_max() const { return snapshots.back().time; }
};

/// Evolve once, capturing the state at each requested time (plus t_from).
inline Trajectory evolve_trajectory(const Field& u0, double t_from, std::vector<double> times,
                                    const SolverConfig& cfg) {
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (t < t_from) throw std::invalid_argument("evolve_trajectory: time before t_from");
    Trajectory traj;
    Field u = u0;
    u.time = t_from;
    traj.snapshots.push_back(u);
    for (double t : times) {
        if (t == u.time) {
            if (t != t_from) traj.snapshots.push_back(u);
            continue;
        }
        u = evolve(u, u.time, t, cfg);
        traj.snapshots.push_back(u);
    }
    return traj;
}

/// Value of the trajectory at physical position (x, y) and time t, bilinear
/// in space and linear in time between the two bracketing snapshots.
inline double trajectory_value(const Trajectory& traj, double t, double x, double y) {
    const auto& snaps = traj.snapshots;
    if (snaps.empty()) throw std::invalid_argument("trajectory_value: empty trajectory");
    if (t < snaps.front().time - 1e-12 || t > snaps.back().time + 1e-12)
        throw std::out_of_range("trajectory_value: time outside the stored bracket");
    t = std::clamp(t, snaps.front().time, snaps.back().time);
    std::size_t hi = 0;
    while (hi + 1 < snaps.size() && snaps[hi].time < t) ++hi;
    if (snaps[hi].time <= t || hi == 0) return interpolate_bilinear(snaps[hi], x, y);
    const Field& a = snaps[hi - 1];
    const Field& b = snaps[hi];
    const double w = (t - a.time) / (b.time - a.time);
    return (1.0 - w) * interpolate_bilinear(a, x, y) + w * interpolate_bilinear(b, x, y);
}

/// U(sigma, x) = (e^{(1-sigma)T} v 1) u(sigma T + tau_star, x L). Negative
/// physical times clamp to the initial datum.
inline std::vector<double> rescaled_view(const Trajectory& traj, double sigma,
                                         const Schedule& s,
                                         const std::vector<std::array<double, 2>>& points) {
    double t = sigma * s.T_eps + s.tau_star;
    if (t < 0.0) t = 0.0;
    const double pre = std::max(std::exp((1.0 - sigma) * s.T_eps), 1.0);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back(pre * trajectory_value(traj, t, p[0] * s.L_eps, p[1] * s.L_eps));
    return out;
}

/// Full rescaled field: U(sigma, .) sampled on a fresh m x m grid whose
/// rescaled extent is extent_phys / L. Used by the front-propagation
/// experiments, which hand the result to the mean curvature flow.
inline Field rescaled_field(const Trajectory& traj, double sigma, const Schedule& s,
                            std::size_t m) {
    const Grid& g = traj.snapshots.front().grid;
    Grid rg = make_grid(g.dim, m, g.extent / s.L_eps);
    Field out(rg, 0.0, sigma);
    std::vector<std::array<double, 2>> pts;
    pts.reserve(rg.cells());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            pts.push_back({static_cast<double>(i) * rg.spacing,
                           static_cast<double>(j) * rg.spacing});
    std::vector<double> vals = rescaled_view(traj, sigma, s, pts);
    out.values.assign(vals.begin(), vals.end());
    return out;
}

}  // namespace acfront
