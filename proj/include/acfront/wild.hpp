#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "acfront/flows.hpp"
#include "acfront/grid.hpp"
#include "acfront/schedule.hpp"
#include "acfront/spectral.hpp"
#include "acfront/trees.hpp"

namespace acfront {

/// Trajectories of the tree fields X^tau on the uniform grid t_k = k dt,
/// keyed by tree encoding (canonical encodings unless the brute-force ordered
/// sum is requested).
struct WildTrajectories {
    double dt = 0.0;
    std::size_t steps = 0;  // snapshots at k = 0 .. steps
    std::map<std::string, std::vector<Field>> by_tree;

    const std::vector<Field>& of(const TernaryTree& t) const {
        auto it = by_tree.find(t.encode());
        if (it == by_tree.end())
            throw std::invalid_argument("WildTrajectories: missing child trajectory");
        return it->second;
    }
};

namespace detail {
inline Field triple_product(const Field& a, const Field& b, const Field& c) {
    Field out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i] * c[i];
    return out;
}
}  // namespace detail

/// X^tau on the time grid. The trunk solves (d_t - Delta - 1) X = 0 from
/// eta_eps, exactly per step. A composite tree solves the same equation with
/// forcing -X^{tau1} X^{tau2} X^{tau3} and zero initial datum; Duhamel with
/// the composite trapezoidal rule gives the one-step recursion
///   X_k = P^1_dt X_{k-1} - (dt/2) (P^1_dt f_{k-1} + f_k),
/// whose local error is O(dt^3). Results are memoized in `traj`.
inline const std::vector<Field>& compute_X_tau(const TernaryTree& tree, const Field& eta_eps,
                                               WildTrajectories& traj) {
    const std::string key = tree.encode();
    auto it = traj.by_tree.find(key);
    if (it != traj.by_tree.end()) return it->second;
    if (!(traj.dt > 0.0)) throw std::invalid_argument("compute_X_tau: dt must be > 0");

    std::vector<Field> xs;
    xs.reserve(traj.steps + 1);
    if (tree.is_leaf()) {
        Field x = eta_eps;
        x.time = 0.0;
        xs.push_back(x);
        for (std::size_t k = 1; k <= traj.steps; ++k) xs.push_back(heat_plus_one(xs.back(), traj.dt));
    } else {
        const std::vector<Field>& a = compute_X_tau(tree.children[0], eta_eps, traj);
        const std::vector<Field>& b = compute_X_tau(tree.children[1], eta_eps, traj);
        const std::vector<Field>& c = compute_X_tau(tree.children[2], eta_eps, traj);
        Field x(eta_eps.grid, 0.0, 0.0);
        xs.push_back(x);
        Field f_prev = detail::triple_product(a[0], b[0], c[0]);
        for (std::size_t k = 1; k <= traj.steps; ++k) {
            Field f_cur = detail::triple_product(a[k], b[k], c[k]);
            Field step = heat_plus_one(xs.back(), traj.dt);
            Field fp = heat_plus_one(f_prev, traj.dt);
            for (std::size_t i = 0; i < step.size(); ++i)
                step[i] -= 0.5 * traj.dt * (fp[i] + f_cur[i]);
            step.time = static_cast<double>(k) * traj.dt;
            xs.push_back(std::move(step));
            f_prev = std::move(f_cur);
        }
    }
    return traj.by_tree.emplace(key, std::move(xs)).first->second;
}

/// u^N = sum over trees with i(tau) <= N, canonical classes weighted by
/// multiplicity. Fills `traj` as a side effect.
inline std::vector<Field> wild_sum(int N, const Field& eta_eps, WildTrajectories& traj) {
    std::vector<Field> u(traj.steps + 1, Field(eta_eps.grid, 0.0, 0.0));
    for (std::size_t k = 0; k <= traj.steps; ++k) u[k].time = static_cast<double>(k) * traj.dt;
    for (const auto& cls : enumerate_trees(N)) {
        const std::vector<Field>& xs = compute_X_tau(cls.tree, eta_eps, traj);
        const double m = static_cast<double>(cls.multiplicity);
        for (std::size_t k = 0; k <= traj.steps; ++k)
            for (std::size_t i = 0; i < u[k].size(); ++i) u[k][i] += m * xs[k][i];
    }
    return u;
}

/// Same sum without canonicalization, iterating every ordered tree. Slow;
/// exists as the independent check that multiplicities are right.
inline std::vector<Field> wild_sum_bruteforce(int N, const Field& eta_eps,
                                              WildTrajectories& traj) {
    std::vector<Field> u(traj.steps + 1, Field(eta_eps.grid, 0.0, 0.0));
    for (std::size_t k = 0; k <= traj.steps; ++k) u[k].time = static_cast<double>(k) * traj.dt;
    for (int i = 0; i <= N; ++i)
        for (const auto& t : enumerate_ordered_trees(i)) {
            const std::vector<Field>& xs = compute_X_tau(t, eta_eps, traj);
            for (std::size_t k = 0; k <= traj.steps; ++k)
                for (std::size_t j = 0; j < u[k].size(); ++j) u[k][j] += xs[k][j];
        }
    return u;
}

/// R^N = sum of X^{tau1} X^{tau2} X^{tau3} over ordered triples in T_3^N whose
/// join [tau1,tau2,tau3] leaves T_3^N, i.e. i1+i2+i3+1 > N. Canonical classes
/// with product multiplicities.
inline std::vector<Field> remainder_RN(int N, const Field& eta_eps, WildTrajectories& traj) {
    const auto classes = enumerate_trees(N);
    std::vector<Field> r(traj.steps + 1, Field(eta_eps.grid, 0.0, 0.0));
    for (std::size_t k = 0; k <= traj.steps; ++k) r[k].time = static_cast<double>(k) * traj.dt;
    for (const auto& c1 : classes)
        for (const auto& c2 : classes)
            for (const auto& c3 : classes) {
                if (c1.tree.inner_count() + c2.tree.inner_count() + c3.tree.inner_count() + 1 <= N)
                    continue;
                const auto& a = compute_X_tau(c1.tree, eta_eps, traj);
                const auto& b = compute_X_tau(c2.tree, eta_eps, traj);
                const auto& c = compute_X_tau(c3.tree, eta_eps, traj);
                const double m = static_cast<double>(c1.multiplicity) *
                                 static_cast<double>(c2.multiplicity) *
                                 static_cast<double>(c3.multiplicity);
                for (std::size_t k = 0; k <= traj.steps; ++k)
                    for (std::size_t i = 0; i < r[k].size(); ++i)
                        r[k][i] += m * a[k][i] * b[k][i] * c[k][i];
            }
    return r;
}

/// w^{N,kappa}(t) = Phi_bar(t - t2^kappa, e^{-(t - t2^kappa)} P^1_{t-t1} u^N(t1)).
inline Field w_approx(const Schedule& s, const Field& u_N_at_t1, double t) {
    if (t < s.t2_kappa) throw std::invalid_argument("w_approx: t must be >= t2_kappa");
    if (t < s.t1) throw std::invalid_argument("w_approx: t must be >= t1");
    Field v = heat_plus_one(u_N_at_t1, t - s.t1);
    const double dt2 = t - s.t2_kappa;
    const double damp = std::exp(-dt2);
    for (double& x : v.values) x = phi_bar(dt2, damp * x);
    v.time = t;
    return v;
}

}  // namespace acfront
