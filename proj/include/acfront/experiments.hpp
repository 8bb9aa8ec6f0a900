#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "acfront/bounds.hpp"
#include "acfront/flows.hpp"
#include "acfront/grid.hpp"
#include "acfront/io.hpp"
#include "acfront/mcf.hpp"
#include "acfront/random_fields.hpp"
#include "acfront/schedule.hpp"
#include "acfront/solver.hpp"
#include "acfront/stats.hpp"
#include "acfront/wild.hpp"

namespace acfront {

struct GridChoice {
    std::size_t n = 0;
    double extent = 0.0;
};

/// Grid sized so that h <= epsilon/2 (the mollifier stays resolved) with the
/// largest extent a <= 512^2 grid affords.
inline GridChoice grid_for_epsilon(double eps) {
    if (eps >= 0.1) return {128, 6.4};
    if (eps >= 0.05) return {256, 6.4};
    if (eps >= 0.02) return {512, 5.12};
    const double h = eps / 2.0;
    std::size_t n = 8;
    while (n < 512 && static_cast<double>(n) * h < 5.0) n *= 2;
    return {n, static_cast<double>(n) * h};
}

struct ExperimentConfig {
    std::string id;  // E1 | E2 | E3 | E4 | BOUNDS
    double alpha = 0.5;
    double alpha_bar = 0.75;
    double kappa = 0.2;
    int d = 2;
    std::vector<double> epsilons{0.1, 0.05, 0.02};
    long long replicas = 0;  // 0 = per-experiment default
    double dt = 0.01;
    double delta = 0.2;
    double zeta = 0.2;
    std::vector<double> sigmas;  // defaults depend on the experiment
    int N = 2;
    std::uint64_t seed = 20260823;
    std::string out_dir;  // empty = keep everything in memory
};

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.epsilons.empty()) throw std::invalid_argument("ExperimentConfig: empty epsilon list");
    for (double e : cfg.epsilons)
        if (!(e > 0.0 && e < 0.36)) throw std::invalid_argument("ExperimentConfig: bad epsilon");
    if (!(cfg.alpha > 0.0 && cfg.alpha < cfg.alpha_bar && cfg.alpha_bar < 1.0))
        throw std::invalid_argument("ExperimentConfig: bad (alpha, alpha_bar)");
    if (cfg.kappa < 0.0) throw std::invalid_argument("ExperimentConfig: kappa must be >= 0");
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.1)) throw std::invalid_argument("ExperimentConfig: bad dt");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw std::invalid_argument("ExperimentConfig: delta must be in (0,1)");
    if (cfg.zeta <= 0.0) throw std::invalid_argument("ExperimentConfig: zeta must be > 0");
    if (cfg.replicas < 0) throw std::invalid_argument("ExperimentConfig: negative replicas");
    if (cfg.N < 0 || cfg.N > 4) throw std::invalid_argument("ExperimentConfig: N out of range");
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string id;
    std::uint64_t seed = 0;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<CheckResult> checks;
    double wall_seconds = 0.0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline void write_report(const ExperimentReport& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_csv(dir / (rep.id + "_table.csv"), rep.header, rep.rows);
    std::string buf = "experiment: " + rep.id + "\nseed: " + std::to_string(rep.seed) +
                      "\nwall_seconds: " + fmt(rep.wall_seconds) + "\n";
    for (const auto& c : rep.checks)
        buf += std::string(c.pass ? "PASS" : "FAIL") + "  " + c.name +
               (c.detail.empty() ? "" : "  [" + c.detail + "]") + "\n";
    detail::atomic_write(dir / (rep.id + "_summary.txt"), buf);
}

namespace detail {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline std::uint64_t replica_seed(std::uint64_t master, std::size_t eps_idx, long long replica) {
    return mix_seed(master, eps_idx * 1000003ULL + static_cast<std::uint64_t>(replica));
}

}  // namespace detail

/// Gaussian regime: covariance of U(sigma, .) at five rescaled lags against
/// the Bargmann-Fock target sigma^{-d/2} e^{-r^2/(8 sigma)}. Covariances are
/// estimated on the physical grid (lattice lag round(r L / h)) and scaled by
/// the squared prefactor, avoiding interpolation smoothing.
inline ExperimentReport run_E1_gaussian_regime(const ExperimentConfig& cfg) {
    validate(cfg);
    detail::Stopwatch clock;
    const double sigma = cfg.sigmas.empty() ? 0.5 : cfg.sigmas.front();
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("run_E1: sigma must be in (0,1)");
    const long long replicas = cfg.replicas > 0 ? cfg.replicas : 100;
    const std::vector<double> lag_r{0.0, 0.4, 0.8, 1.2, 1.6};

    ExperimentReport rep;
    rep.id = "E1";
    rep.seed = cfg.seed;
    rep.header = {"epsilon", "seed",   "replicas", "lag_index", "lag_rescaled",
                  "estimate", "target", "deviation", "std_error"};

    // deviations[eps_idx][lag]
    std::vector<std::array<double, 5>> deviations;
    std::vector<std::array<double, 5>> ses;
    std::vector<std::array<double, 5>> targets;

    std::vector<double> eps_sorted = cfg.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
        const double eps = eps_sorted[ei];
        const Schedule sch = make_schedule(eps, cfg.alpha, cfg.alpha_bar, cfg.kappa, cfg.d);
        const GridChoice gc = grid_for_epsilon(eps);
        const Grid grid = make_grid(cfg.d, gc.n, gc.extent);
        const double t_phys = sigma * sch.T_eps + sch.tau_star;
        const double pre = std::max(std::exp((1.0 - sigma) * sch.T_eps), 1.0);

        std::vector<long long> lag_cells;
        std::array<double, 5> r_actual{};
        for (std::size_t li = 0; li < lag_r.size(); ++li) {
            const long long k = std::llround(lag_r[li] * sch.L_eps / grid.spacing);
            lag_cells.push_back(k);
            r_actual[li] = static_cast<double>(k) * grid.spacing / sch.L_eps;
        }

        // Streaming form of the pooled-mean centered covariance estimator:
        // per replica keep the raw lag products and the replica mean; lattice
        // shifts preserve the mean, so centering folds in afterwards.
        std::vector<double> rep_mean(static_cast<std::size_t>(replicas));
        std::vector<std::array<double, 5>> rep_prod(static_cast<std::size_t>(replicas));
        SolverConfig scfg{cfg.dt, 1e-5};
        for (long long r = 0; r < replicas; ++r) {
            NoiseSpec ns{eps, cfg.alpha, detail::replica_seed(cfg.seed, ei, r)};
            Field eta = sample_eta_eps(grid, ns);
            Field u = evolve(eta, 0.0, t_phys, scfg);
            rep_mean[static_cast<std::size_t>(r)] = field_mean(u);
            for (std::size_t li = 0; li < lag_r.size(); ++li) {
                double acc = 0.0;
                const long long k = lag_cells[li];
                for (long long i = 0; i < static_cast<long long>(grid.n); ++i)
                    for (long long j = 0; j < static_cast<long long>(grid.n); ++j)
                        acc += u.at(i, j) * u.at(i + k, j);
                rep_prod[static_cast<std::size_t>(r)][li] =
                    acc / static_cast<double>(grid.cells());
            }
        }
        double mu = 0.0;
        for (double v : rep_mean) mu += v;
        mu /= static_cast<double>(replicas);

        std::array<double, 5> dev{}, se{}, tgt{};
        for (std::size_t li = 0; li < lag_r.size(); ++li) {
            std::vector<double> units;
            units.reserve(static_cast<std::size_t>(replicas));
            for (long long r = 0; r < replicas; ++r) {
                const std::size_t rs = static_cast<std::size_t>(r);
                units.push_back(rep_prod[rs][li] - 2.0 * mu * rep_mean[rs] + mu * mu);
            }
            const auto [cmean, cse] = mean_and_se(units);
            const double est = pre * pre * cmean;
            const double e_se = pre * pre * cse;
            const double target = std::pow(sigma, -cfg.d / 2.0) *
                                  std::exp(-r_actual[li] * r_actual[li] / (8.0 * sigma));
            dev[li] = std::abs(est - target);
            se[li] = e_se;
            tgt[li] = target;
            rep.rows.push_back({fmt(eps), std::to_string(cfg.seed), std::to_string(replicas),
                                std::to_string(li), fmt(r_actual[li]), fmt(est), fmt(target),
                                fmt(dev[li]), fmt(e_se)});
        }
        deviations.push_back(dev);
        ses.push_back(se);
        targets.push_back(tgt);
    }

    const std::size_t last = eps_sorted.size() - 1;
    for (std::size_t li = 0; li < lag_r.size(); ++li) {
        const bool within = deviations[last][li] <= 3.0 * ses[last][li];
        rep.checks.push_back({"E1 covariance lag " + std::to_string(li) + " within 3 SE at eps=" +
                                  fmt(eps_sorted[last]),
                              within,
                              "deviation " + fmt(deviations[last][li]) + " vs 3SE " +
                                  fmt(3.0 * ses[last][li])});
    }
    if (eps_sorted.size() >= 2) {
        int improving = 0;
        for (std::size_t li = 0; li < lag_r.size(); ++li)
            if (deviations[last][li] < deviations[0][li]) ++improving;
        rep.checks.push_back({"E1 deviation decreases along the epsilon ladder in >= 4 of 5 lags",
                              improving >= 4, std::to_string(improving) + "/5 lags improving"});
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

namespace detail {

/// Rescaled-coordinate K_delta^1 membership on a subsample of the physical
/// grid: |x| <= 1/delta and d(x, Gamma_1) >= delta, both in rescaled units.
/// `dist_phys` is the physical-unit distance map of Gamma_1. Returns the
/// flat physical indices of points in the mask.
inline std::vector<std::size_t> k1_mask_indices(const Grid& grid, const Schedule& sch,
                                                const Field& dist_phys, double delta,
                                                std::size_t stride) {
    std::vector<std::size_t> idx;
    const double c = grid.extent / 2.0;
    for (std::size_t i = 0; i < grid.n; i += stride)
        for (std::size_t j = 0; j < grid.n; j += stride) {
            const double x = static_cast<double>(i) * grid.spacing;
            const double y = static_cast<double>(j) * grid.spacing;
            const double rx = (x - c) / sch.L_eps, ry = (y - c) / sch.L_eps;
            if (std::hypot(rx, ry) > 1.0 / delta) continue;
            if (dist_phys.values[i * grid.n + j] / sch.L_eps < delta) continue;
            idx.push_back(i * grid.n + j);
        }
    return idx;
}

inline double masked_sup(const Field& a, const Field& b, const std::vector<std::size_t>& idx) {
    double m = 0.0;
    for (std::size_t k : idx) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace detail

/// Front profile: pathwise coupled comparison of u(t_star + t, x L) against
/// Phi(t, Psi(x)) at t in {-2, 0, 2}, sup over the K_delta^1 mask, reported
/// per epsilon (the masked error should fall along the ladder).
inline ExperimentReport run_E2_front_profile(const ExperimentConfig& cfg) {
    validate(cfg);
    detail::Stopwatch clock;
    const long long replicas = cfg.replicas > 0 ? cfg.replicas : 20;
    const std::vector<double> t_offsets{-2.0, 0.0, 2.0};

    ExperimentReport rep;
    rep.id = "E2";
    rep.seed = cfg.seed;
    rep.header = {"epsilon", "seed", "replica", "t_offset", "masked_sup", "near_front_sup",
                  "mask_points"};

    std::vector<double> eps_sorted = cfg.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    // median masked sup per (eps, t_offset)
    std::vector<std::array<double, 3>> med(eps_sorted.size());

    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
        const double eps = eps_sorted[ei];
        const Schedule sch = make_schedule(eps, cfg.alpha, cfg.alpha_bar, cfg.kappa, cfg.d);
        const GridChoice gc = grid_for_epsilon(eps);
        const Grid grid = make_grid(cfg.d, gc.n, gc.extent);
        SolverConfig scfg{cfg.dt, 1e-5};
        std::array<std::vector<double>, 3> sups;
        for (long long r = 0; r < replicas; ++r) {
            NoiseSpec ns{eps, cfg.alpha, detail::replica_seed(cfg.seed, ei, r)};
            CoupledPair pair = coupled_pair(grid, ns, sch);
            const Field dist1 = distance_map(extract_nodal(pair.psi), grid);
            const std::vector<std::size_t> mask =
                detail::k1_mask_indices(grid, sch, dist1, cfg.delta, 2);

            Field u = pair.eta_eps;
            double t_prev = 0.0;
            for (std::size_t ti = 0; ti < t_offsets.size(); ++ti) {
                const double t_phys = sch.t_star + t_offsets[ti];
                u = evolve(u, t_prev, t_phys, scfg);
                t_prev = t_phys;
                Field target = pair.psi;
                for (double& v : target.values) v = phi(t_offsets[ti], v);
                const double sup = detail::masked_sup(u, target, mask);
                // complementary readout near the interface
                double near = 0.0;
                for (std::size_t i = 0; i < grid.n; i += 2)
                    for (std::size_t j = 0; j < grid.n; j += 2) {
                        const std::size_t k = i * grid.n + j;
                        if (dist1.values[k] / sch.L_eps < cfg.delta)
                            near = std::max(near, std::abs(u[k] - target[k]));
                    }
                sups[ti].push_back(sup);
                rep.rows.push_back({fmt(eps), std::to_string(cfg.seed), std::to_string(r),
                                    fmt(t_offsets[ti]), fmt(sup), fmt(near),
                                    std::to_string(mask.size())});
            }
        }
        for (std::size_t ti = 0; ti < t_offsets.size(); ++ti) med[ei][ti] = median(sups[ti]);
    }

    if (eps_sorted.size() >= 3) {
        int monotone = 0;
        for (std::size_t ti = 0; ti < t_offsets.size(); ++ti) {
            bool mono = true;
            for (std::size_t ei = 0; ei + 1 < eps_sorted.size(); ++ei)
                if (!(med[ei + 1][ti] < med[ei][ti])) mono = false;
            if (mono) ++monotone;
        }
        rep.checks.push_back({"E2 masked error decreases along the ladder in >= 2 of 3 offsets",
                              monotone >= 2, std::to_string(monotone) + "/3 offsets monotone"});
    } else if (eps_sorted.size() == 2) {
        int improving = 0;
        for (std::size_t ti = 0; ti < 3; ++ti)
            if (med[1][ti] < med[0][ti]) ++improving;
        rep.checks.push_back({"E2 masked error decreases for the smaller epsilon in >= 2 of 3 "
                              "offsets",
                              improving >= 2, std::to_string(improving) + "/3 offsets improving"});
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// Front formation: at t_star^kappa, masked error of u(. L) against sgn Psi
/// on K_delta^1; exceedance fraction over zeta; and the sharper comparison
/// against w^{N,kappa}.
inline ExperimentReport run_E3_front_formation(const ExperimentConfig& cfg) {
    validate(cfg);
    if (!(cfg.kappa > 0.0 && cfg.kappa < 0.25))
        throw std::invalid_argument("run_E3: kappa must be in (0, 1/4)");
    detail::Stopwatch clock;
    const long long replicas = cfg.replicas > 0 ? cfg.replicas : 20;

    ExperimentReport rep;
    rep.id = "E3";
    rep.seed = cfg.seed;
    rep.header = {"epsilon", "seed",     "replica",     "masked_sup_sgn", "masked_sup_w",
                  "exceeds_zeta", "mask_points"};

    std::vector<double> eps_sorted = cfg.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    std::vector<double> exceed_frac(eps_sorted.size(), 0.0);
    std::vector<double> med_sgn(eps_sorted.size(), 0.0);
    std::vector<double> med_w(eps_sorted.size(), 0.0);

    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
        const double eps = eps_sorted[ei];
        const Schedule sch = make_schedule(eps, cfg.alpha, cfg.alpha_bar, cfg.kappa, cfg.d);
        const GridChoice gc = grid_for_epsilon(eps);
        const Grid grid = make_grid(cfg.d, gc.n, gc.extent);
        SolverConfig scfg{cfg.dt, 1e-5};
        std::vector<double> sup_sgn, sup_w;
        long long exceed = 0;
        for (long long r = 0; r < replicas; ++r) {
            NoiseSpec ns{eps, cfg.alpha, detail::replica_seed(cfg.seed, ei, r)};
            CoupledPair pair = coupled_pair(grid, ns, sch);
            const Field dist1 = distance_map(extract_nodal(pair.psi), grid);
            const std::vector<std::size_t> mask =
                detail::k1_mask_indices(grid, sch, dist1, cfg.delta, 2);

            const Field u = evolve(pair.eta_eps, 0.0, sch.t_star_kappa, scfg);
            Field sgn_psi = pair.psi;
            for (double& v : sgn_psi.values) v = sgn(v);
            const double e_sgn = detail::masked_sup(u, sgn_psi, mask);

            // w^{N,kappa} from the truncated expansion at t1; a coarser
            // quadrature step keeps the memoized trajectories small
            const std::size_t steps =
                static_cast<std::size_t>(std::ceil(sch.t1 / 0.04));
            WildTrajectories traj{sch.t1 / static_cast<double>(steps), steps, {}};
            std::vector<Field> uN = wild_sum(cfg.N, pair.eta_eps, traj);
            const Field w = w_approx(sch, uN.back(), sch.t_star_kappa);
            const double e_w = detail::masked_sup(u, w, mask);

            sup_sgn.push_back(e_sgn);
            sup_w.push_back(e_w);
            if (e_sgn > cfg.zeta) ++exceed;
            rep.rows.push_back({fmt(eps), std::to_string(cfg.seed), std::to_string(r), fmt(e_sgn),
                                fmt(e_w), e_sgn > cfg.zeta ? "1" : "0",
                                std::to_string(mask.size())});
        }
        exceed_frac[ei] = static_cast<double>(exceed) / static_cast<double>(replicas);
        med_sgn[ei] = median(sup_sgn);
        med_w[ei] = median(sup_w);
    }

    const std::size_t last = eps_sorted.size() - 1;
    if (eps_sorted.size() >= 2)
        rep.checks.push_back({"E3 masked sgn error decreases along the epsilon ladder",
                              med_sgn[last] < med_sgn[0],
                              fmt(med_sgn[0]) + " -> " + fmt(med_sgn[last])});
    rep.checks.push_back({"E3 median masked error <= 0.2 at the smallest epsilon",
                          med_sgn[last] <= 0.2, "median " + fmt(med_sgn[last])});
    rep.checks.push_back({"E3 w approximant is sharper than sgn Psi at the smallest epsilon",
                          med_w[last] <= med_sgn[last],
                          "w " + fmt(med_w[last]) + " vs sgn " + fmt(med_sgn[last])});
    if (eps_sorted.size() >= 2)
        rep.checks.push_back({"E3 exceedance fraction does not grow along the ladder",
                              exceed_frac[last] <= exceed_frac[0],
                              fmt(exceed_frac[0]) + " -> " + fmt(exceed_frac[last])});
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// Propagation regime: U(sigma, .) against the sign map of Psi evolved by
/// level-set MCF, sup over the K_delta mask; plus the deterministic seeded
/// circle run through the full pipeline.
inline ExperimentReport run_E4_mcf_propagation(const ExperimentConfig& cfg) {
    validate(cfg);
    detail::Stopwatch clock;
    const long long replicas = cfg.replicas > 0 ? cfg.replicas : 6;
    std::vector<double> sigmas = cfg.sigmas.empty() ? std::vector<double>{1.5, 2.0} : cfg.sigmas;
    std::sort(sigmas.begin(), sigmas.end());
    for (double s : sigmas)
        if (!(s > 1.0 && s <= 1.0 / cfg.delta))
            throw std::invalid_argument("run_E4: sigma must lie in (1, 1/delta]");
    const std::size_t m = 128;  // rescaled grid for the MCF side

    ExperimentReport rep;
    rep.id = "E4";
    rep.seed = cfg.seed;
    rep.header = {"epsilon", "seed", "replica", "sigma", "masked_sup", "masked_sup_2delta",
                  "mask_points"};

    std::vector<double> eps_sorted = cfg.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    std::vector<double> med_err(eps_sorted.size(), 0.0);
    bool mask_monotone_ok = true;

    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
        const double eps = eps_sorted[ei];
        const Schedule sch = make_schedule(eps, cfg.alpha, cfg.alpha_bar, cfg.kappa, cfg.d);
        const GridChoice gc = grid_for_epsilon(eps);
        const Grid grid = make_grid(cfg.d, gc.n, gc.extent);
        SolverConfig scfg{cfg.dt, 1e-5};
        std::vector<double> errs;
        for (long long r = 0; r < replicas; ++r) {
            NoiseSpec ns{eps, cfg.alpha, detail::replica_seed(cfg.seed, ei, r)};
            CoupledPair pair = coupled_pair(grid, ns, sch);

            // AC side: trajectory through all sigma checkpoints
            std::vector<double> times{sch.t_star};
            for (double s : sigmas) times.push_back(sch.t_star + (s - 1.0) * sch.T_eps);
            Trajectory traj = evolve_trajectory(pair.eta_eps, 0.0, times, scfg);

            // MCF side on the rescaled grid
            const Grid rgrid = make_grid(2, m, grid.extent / sch.L_eps);
            Field psi_resc(rgrid, 0.0, 1.0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    psi_resc.values[i * m + j] = interpolate_bilinear(
                        pair.psi, static_cast<double>(i) * rgrid.spacing * sch.L_eps,
                        static_cast<double>(j) * rgrid.spacing * sch.L_eps);
            // sign fields and the nodal trajectory from one level-set run
            LevelSetState state{psi_resc, 0.0};
            for (double& v : state.w.values) v = std::clamp(v, -1.0, 1.0);
            state.delta_reg = default_delta_reg(state.w);
            std::vector<std::pair<double, Field>> dist_slices;  // sigma -> distance map
            std::vector<Field> signs;
            std::vector<double> dense{1.0};
            for (double s : sigmas) {
                dense.push_back(0.5 * (dense.back() + s));
                dense.push_back(s);
            }
            for (double s : dense) {
                state = evolve_levelset(std::move(state), s);
                dist_slices.emplace_back(s, distance_map(extract_nodal(state.w), rgrid));
                if (std::find(sigmas.begin(), sigmas.end(), s) != sigmas.end()) {
                    Field v = state.w;
                    for (double& x : v.values) x = sgn(x);
                    signs.push_back(std::move(v));
                }
            }

            for (std::size_t si = 0; si < sigmas.size(); ++si) {
                const double s = sigmas[si];
                Field U = rescaled_field(traj, s, sch, m);
                // space-time mask at this sigma slice, two delta levels
                double sup_d = 0.0, sup_2d = 0.0;
                std::size_t count_d = 0;
                const double c = rgrid.extent / 2.0;
                for (std::size_t i = 0; i < m; i += 2)
                    for (std::size_t j = 0; j < m; j += 2) {
                        const double x = static_cast<double>(i) * rgrid.spacing - c;
                        const double y = static_cast<double>(j) * rgrid.spacing - c;
                        double dist = std::numeric_limits<double>::infinity();
                        for (const auto& [sg, dmap] : dist_slices)
                            dist = std::min(dist, std::hypot(sg - s, dmap.values[i * m + j]));
                        const double err =
                            std::abs(U.values[i * m + j] - signs[si].values[i * m + j]);
                        auto in_mask = [&](double dl) {
                            return std::hypot(s, std::hypot(x, y)) <= 1.0 / dl &&
                                   s > 1.0 + dl && dist >= dl;
                        };
                        if (in_mask(cfg.delta)) {
                            sup_d = std::max(sup_d, err);
                            ++count_d;
                        }
                        if (in_mask(2.0 * cfg.delta)) sup_2d = std::max(sup_2d, err);
                    }
                if (sup_2d > sup_d + 1e-12) mask_monotone_ok = false;
                errs.push_back(sup_d);
                rep.rows.push_back({fmt(eps), std::to_string(cfg.seed), std::to_string(r), fmt(s),
                                    fmt(sup_d), fmt(sup_2d), std::to_string(count_d)});
            }
        }
        med_err[ei] = median(errs);
    }

    // Deterministic seeded circle through the full pipeline at eps = 0.05.
    {
        const double eps = 0.05;
        const Schedule sch = make_schedule(eps, cfg.alpha, cfg.alpha_bar, cfg.kappa, cfg.d);
        const Grid grid = make_grid(2, 512, 12.8);
        const double R_phys0 = 4.2;
        const double c = grid.extent / 2.0;
        Field u0(grid, 0.0, 0.0);
        for (std::size_t i = 0; i < grid.n; ++i)
            for (std::size_t j = 0; j < grid.n; ++j) {
                const double x = static_cast<double>(i) * grid.spacing - c;
                const double y = static_cast<double>(j) * grid.spacing - c;
                u0.values[i * grid.n + j] =
                    std::tanh((R_phys0 - std::hypot(x, y)) / std::sqrt(2.0));
            }
        std::vector<double> times{sch.t_star};
        for (double s : sigmas) times.push_back(sch.t_star + (s - 1.0) * sch.T_eps);
        SolverConfig scfg{cfg.dt, 1e-5};
        Trajectory traj = evolve_trajectory(u0, 0.0, times, scfg);
        const std::size_t mc = 256;
        auto radius_at = [&](double s) -> std::optional<double> {
            Field U = rescaled_field(traj, s, sch, mc);
            const NodalSet gamma = extract_nodal(U);
            return nodal_radius(gamma, U.grid.extent / 2.0, U.grid.extent / 2.0, U.grid.extent);
        };
        const std::optional<double> R1 = radius_at(1.0);
        const double cell = grid.extent / sch.L_eps / static_cast<double>(mc);
        for (double s : sigmas) {
            const std::optional<double> Rs = radius_at(s);
            bool ok = false;
            std::string det;
            if (R1 && Rs) {
                const double pred = std::sqrt(std::max(*R1 * *R1 - 2.0 * (s - 1.0), 0.0));
                ok = std::abs(*Rs - pred) <= 3.0 * cell;
                det = "measured " + fmt(*Rs) + " predicted " + fmt(pred) + " cell " + fmt(cell);
            } else {
                det = "zero set not found";
            }
            rep.checks.push_back(
                {"E4 seeded circle radius within 3 cells at sigma=" + fmt(s), ok, det});
        }
    }

    if (eps_sorted.size() >= 2) {
        const std::size_t last = eps_sorted.size() - 1;
        rep.checks.push_back({"E4 masked error decreases along the epsilon ladder",
                              med_err[last] < med_err[0],
                              fmt(med_err[0]) + " -> " + fmt(med_err[last])});
    }
    rep.checks.push_back({"E4 mask monotonicity: error on K_{2 delta} <= error on K_delta",
                          mask_monotone_ok, ""});
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// Moment-bound ratio tables: empirical L2 norms of X^tau and grad X^tau
/// against the evaluated bound formulas, plus the truncation error u - u^N
/// across N.
inline ExperimentReport run_BOUNDS(const ExperimentConfig& cfg) {
    validate(cfg);
    detail::Stopwatch clock;
    const long long replicas = cfg.replicas > 0 ? cfg.replicas : 200;
    const int N = std::min(cfg.N, 2);
    const std::size_t checkpoints = 5;  // fractions of t1

    ExperimentReport rep;
    rep.id = "BOUNDS";
    rep.seed = cfg.seed;
    rep.header = {"epsilon", "seed",  "tree", "leaves", "inner",   "t",
                  "bound",   "empirical_L2", "ratio", "grad_bound", "grad_empirical_L2",
                  "grad_ratio"};

    std::vector<double> eps_sorted = cfg.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    const auto classes = enumerate_trees(N);

    // ratios[eps][class][checkpoint]
    std::vector<std::vector<std::vector<double>>> ratios(
        eps_sorted.size(),
        std::vector<std::vector<double>>(classes.size(), std::vector<double>(checkpoints, 0.0)));
    // truncation errors med over replicas: trunc[eps][N]
    std::vector<std::array<double, 4>> trunc(eps_sorted.size(), {0.0, 0.0, 0.0, 0.0});

    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
        const double eps = eps_sorted[ei];
        const Schedule sch = make_schedule(eps, cfg.alpha, cfg.alpha_bar, cfg.kappa, cfg.d);
        const GridChoice gc = grid_for_epsilon(eps);
        const Grid grid = make_grid(cfg.d, gc.n, gc.extent);

        const std::size_t steps = static_cast<std::size_t>(std::ceil(sch.t1 / 0.025));
        const double dt = sch.t1 / static_cast<double>(steps);
        std::vector<std::size_t> cp_steps;
        std::vector<double> cp_times;
        for (std::size_t k = 1; k <= checkpoints; ++k) {
            cp_steps.push_back(steps * k / checkpoints);
            cp_times.push_back(static_cast<double>(steps * k / checkpoints) * dt);
        }

        // accumulated second moments: [class][checkpoint]
        std::vector<std::vector<double>> m2(classes.size(),
                                            std::vector<double>(checkpoints, 0.0));
        std::vector<std::vector<double>> g2(classes.size(),
                                            std::vector<double>(checkpoints, 0.0));
        std::vector<std::array<double, 4>> trunc_acc(static_cast<std::size_t>(replicas));

        SolverConfig scfg{std::min(cfg.dt, dt), 1e-5};
        for (long long r = 0; r < replicas; ++r) {
            NoiseSpec ns{eps, cfg.alpha, detail::replica_seed(cfg.seed, ei, r)};
            Field eta = sample_eta_eps(grid, ns);
            WildTrajectories traj{dt, steps, {}};
            for (std::size_t ci = 0; ci < classes.size(); ++ci) {
                const auto& xs = compute_X_tau(classes[ci].tree, eta, traj);
                for (std::size_t k = 0; k < checkpoints; ++k) {
                    const Field& x = xs[cp_steps[k]];
                    double acc = 0.0;
                    for (double v : x.values) acc += v * v;
                    m2[ci][k] += acc / static_cast<double>(x.size());
                    double gacc = 0.0;
                    for (const Field& gax : gradient(x))
                        for (double v : gax.values) gacc += v * v;
                    g2[ci][k] += gacc / static_cast<double>(x.size());
                }
            }
            // truncation error for N = 0..3 against the solver, read at
            // t = 0.4 t1: at the desk-scale epsilons the geometric factor
            // e^t eps^{1-alpha} Gamma^{1/2} exceeds 1 near t1 itself, so the
            // series is only asked to be monotone where it converges
            const Field u_cp = evolve(eta, 0.0, cp_times[1], scfg);
            for (int n = 0; n <= 3; ++n) {
                std::vector<Field> uN = wild_sum(n, eta, traj);
                trunc_acc[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] =
                    sup_distance(u_cp, uN[cp_steps[1]]);
            }
        }

        for (int n = 0; n <= 3; ++n) {
            std::vector<double> v;
            for (long long r = 0; r < replicas; ++r)
                v.push_back(trunc_acc[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)]);
            trunc[ei][static_cast<std::size_t>(n)] = median(v);
        }

        for (std::size_t ci = 0; ci < classes.size(); ++ci)
            for (std::size_t k = 0; k < checkpoints; ++k) {
                const double emp = std::sqrt(m2[ci][k] / static_cast<double>(replicas));
                const double gemp = std::sqrt(g2[ci][k] / static_cast<double>(replicas));
                BoundInputs in{eps, cfg.alpha, cfg.d, cp_times[k], classes[ci].tree};
                const double bnd = moment_bound(in);
                const double gbnd = gradient_moment_bound(in);
                ratios[ei][ci][k] = emp / bnd;
                rep.rows.push_back({fmt(eps), std::to_string(cfg.seed),
                                    classes[ci].tree.encode(),
                                    std::to_string(classes[ci].tree.leaf_count()),
                                    std::to_string(classes[ci].tree.inner_count()),
                                    fmt(cp_times[k]), fmt(bnd), fmt(emp), fmt(emp / bnd),
                                    fmt(gbnd), fmt(gemp), fmt(gemp / gbnd)});
            }
    }

    if (eps_sorted.size() >= 2) {
        bool bounded = true;
        double worst = 1.0;
        for (std::size_t ci = 0; ci < classes.size(); ++ci)
            for (std::size_t k = 0; k < checkpoints; ++k)
                for (std::size_t ei = 1; ei < eps_sorted.size(); ++ei) {
                    const double a = ratios[0][ci][k], b = ratios[ei][ci][k];
                    const double f = std::max(a / b, b / a);
                    worst = std::max(worst, f);
                    if (f > 3.0) bounded = false;
                }
        rep.checks.push_back({"BOUNDS ratio within factor 3 across the epsilon ladder", bounded,
                              "worst factor " + fmt(worst)});
    }
    bool trunc_ok = true;
    std::string trunc_detail;
    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
        trunc_detail += (ei ? "; " : "") + std::string("eps=") + fmt(eps_sorted[ei]) + ":";
        for (int n = 0; n <= 3; ++n)
            trunc_detail += " " + fmt(trunc[ei][static_cast<std::size_t>(n)]);
        for (int n = 1; n <= 3; ++n)
            // 2% slack: at the larger N both sides sit on the same
            // quadrature/splitting noise floor
            if (trunc[ei][static_cast<std::size_t>(n)] >
                trunc[ei][static_cast<std::size_t>(n - 1)] * 1.02 + 1e-10)
                trunc_ok = false;
    }
    rep.checks.push_back({"BOUNDS truncation error non-increasing in N in {0,1,2,3} at t=0.4 t1",
                          trunc_ok, "medians (N=0..3) " + trunc_detail});
    rep.wall_seconds = clock.seconds();
    return rep;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    if (cfg.id == "E1")
        rep = run_E1_gaussian_regime(cfg);
    else if (cfg.id == "E2")
        rep = run_E2_front_profile(cfg);
    else if (cfg.id == "E3")
        rep = run_E3_front_formation(cfg);
    else if (cfg.id == "E4")
        rep = run_E4_mcf_propagation(cfg);
    else if (cfg.id == "BOUNDS")
        rep = run_BOUNDS(cfg);
    else
        throw std::invalid_argument("run_experiment: unknown id " + cfg.id);
    if (!cfg.out_dir.empty()) write_report(rep, cfg.out_dir);
    return rep;
}

}  // namespace acfront
