// Command-line front end: schedules, field sampling, PDE runs, bound tables,
// level-set runs, full experiments, rendering.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure, 3 one or more
// experiment checks failed.

#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acfront/config.hpp"
#include "acfront/experiments.hpp"
#include "acfront/io.hpp"
#include "acfront/mcf.hpp"
#include "acfront/random_fields.hpp"
#include "acfront/schedule.hpp"
#include "acfront/solver.hpp"
#include "acfront/wild.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

acfront::ExperimentConfig config_from_file(const std::string& path) {
    acfront::Config file = acfront::Config::load(path);
    acfront::ExperimentConfig cfg;
    cfg.alpha = file.get_double("alpha", cfg.alpha);
    cfg.alpha_bar = file.get_double("alpha_bar", cfg.alpha_bar);
    cfg.kappa = file.get_double("kappa", cfg.kappa);
    cfg.d = static_cast<int>(file.get_int("d", cfg.d));
    if (file.has("epsilons")) cfg.epsilons = parse_list(file.get_string("epsilons"));
    cfg.replicas = file.get_int("replicas", cfg.replicas);
    cfg.dt = file.get_double("dt", cfg.dt);
    cfg.delta = file.get_double("delta", cfg.delta);
    cfg.zeta = file.get_double("zeta", cfg.zeta);
    if (file.has("sigmas")) cfg.sigmas = parse_list(file.get_string("sigmas"));
    cfg.N = static_cast<int>(file.get_int("N", cfg.N));
    cfg.seed = file.get_seed("seed", cfg.seed);
    cfg.out_dir = file.get_string("out_dir", cfg.out_dir);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale laboratory for mollified-noise Allen-Cahn front dynamics"};
    app.require_subcommand(1);

    // schedule
    double epsilon = 0.01, alpha = 0.5, alpha_bar = 0.75, kappa = 0.0;
    int d = 2;
    auto* sub_schedule = app.add_subcommand("schedule", "Print the time/length schedule");
    sub_schedule->add_option("--epsilon", epsilon)->required();
    sub_schedule->add_option("--alpha", alpha);
    sub_schedule->add_option("--alpha-bar", alpha_bar);
    sub_schedule->add_option("--kappa", kappa);
    sub_schedule->add_option("--d", d);

    // sample
    std::string kind = "eta", out_path = "field.afld";
    std::size_t n_points = 256;
    double extent = 6.4, sigma_bf = 0.5;
    std::uint64_t seed = 1;
    auto* sub_sample = app.add_subcommand("sample", "Sample eta_eps, the limit field, or a "
                                                    "Bargmann-Fock field");
    sub_sample->add_option("--kind", kind, "eta | psi | bf")
        ->check(CLI::IsMember({"eta", "psi", "bf"}));
    sub_sample->add_option("--epsilon", epsilon);
    sub_sample->add_option("--alpha", alpha);
    sub_sample->add_option("--alpha-bar", alpha_bar);
    sub_sample->add_option("--kappa", kappa);
    sub_sample->add_option("--sigma", sigma_bf, "covariance width for --kind bf");
    sub_sample->add_option("--n", n_points);
    sub_sample->add_option("--extent", extent);
    sub_sample->add_option("--seed", seed);
    sub_sample->add_option("--out", out_path);

    // evolve
    std::string in_path;
    double t_from = 0.0, t_to = 1.0, dt = 0.01;
    auto* sub_evolve = app.add_subcommand("evolve", "Integrate the PDE between two times");
    sub_evolve->add_option("--in", in_path)->required();
    sub_evolve->add_option("--t-from", t_from);
    sub_evolve->add_option("--t-to", t_to)->required();
    sub_evolve->add_option("--dt", dt);
    sub_evolve->add_option("--out", out_path)->required();

    // wild
    int n_max = 2;
    double t_max = 1.0;
    auto* sub_wild = app.add_subcommand("wild", "Emit the moment-bound table as CSV");
    sub_wild->add_option("--epsilon", epsilon)->required();
    sub_wild->add_option("--alpha", alpha);
    sub_wild->add_option("--d", d);
    sub_wild->add_option("--t-max", t_max);
    sub_wild->add_option("--n-max", n_max);
    sub_wild->add_option("--out", out_path)->required();

    // mcf
    double sigma_to = 2.0;
    std::string nodal_out;
    auto* sub_mcf = app.add_subcommand("mcf", "Run the level-set flow on a stored field");
    sub_mcf->add_option("--in", in_path)->required();
    sub_mcf->add_option("--sigma-to", sigma_to);
    sub_mcf->add_option("--out", out_path)->required();
    sub_mcf->add_option("--nodal-out", nodal_out, "optional CSV of the final zero set");

    // experiment
    std::string experiment_id, config_path, out_dir;
    long long replicas = 0;
    bool seed_given = false;
    auto* sub_exp = app.add_subcommand("experiment", "Run a full experiment");
    sub_exp->add_option("id", experiment_id, "E1 | E2 | E3 | E4 | BOUNDS")->required();
    sub_exp->add_option("--config", config_path);
    sub_exp->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    sub_exp->add_option("--out", out_dir);
    sub_exp->add_option("--replicas", replicas);

    // render
    auto* sub_render = app.add_subcommand("render", "Render a stored field to 8-bit PGM");
    sub_render->add_option("--in", in_path)->required();
    sub_render->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sub_schedule->parsed()) {
            acfront::Schedule s = acfront::make_schedule(epsilon, alpha, alpha_bar, kappa, d);
            std::printf("epsilon      %.12g\n", s.epsilon);
            std::printf("T_eps        %.12g\n", s.T_eps);
            std::printf("L_eps        %.12g\n", s.L_eps);
            std::printf("c_const      %.12g\n", s.c_const);
            std::printf("tau_star     %.12g\n", s.tau_star);
            std::printf("t_star       %.12g\n", s.t_star);
            std::printf("t1           %.12g\n", s.t1);
            std::printf("t2           %.12g\n", s.t2);
            std::printf("t2_kappa     %.12g\n", s.t2_kappa);
            std::printf("t_star_kappa %.12g\n", s.t_star_kappa);
        } else if (sub_sample->parsed()) {
            acfront::Grid grid = acfront::make_grid(2, n_points, extent);
            acfront::Field f;
            if (kind == "eta") {
                f = acfront::sample_eta_eps(grid, {epsilon, alpha, seed});
            } else if (kind == "psi") {
                acfront::Schedule s = acfront::make_schedule(epsilon, alpha, alpha_bar, kappa, d);
                f = acfront::coupled_pair(grid, {epsilon, alpha, seed}, s).psi;
            } else {
                f = acfront::sample_bargmann_fock(grid, {sigma_bf, 2}, seed);
            }
            acfront::write_field(f, out_path);
        } else if (sub_evolve->parsed()) {
            acfront::Field f = acfront::read_field(in_path);
            acfront::Field g = acfront::evolve(f, t_from, t_to, {dt, 1e-5});
            acfront::write_field(g, out_path);
        } else if (sub_wild->parsed()) {
            std::vector<std::vector<std::string>> rows;
            const auto classes = acfront::enumerate_trees(n_max);
            for (const auto& cls : classes)
                for (int k = 0; k <= 20; ++k) {
                    const double t = t_max * static_cast<double>(k) / 20.0;
                    acfront::BoundInputs in{epsilon, alpha, d, t, cls.tree};
                    rows.push_back({cls.tree.encode(), std::to_string(cls.tree.leaf_count()),
                                    std::to_string(cls.tree.inner_count()), acfront::fmt(t),
                                    acfront::fmt(acfront::moment_bound(in)),
                                    acfront::fmt(acfront::gradient_moment_bound(in)),
                                    std::to_string(cls.multiplicity)});
                }
            acfront::write_csv(out_path,
                               {"tree_id", "leaves", "inner", "t", "bound", "grad_bound",
                                "multiplicity"},
                               rows);
        } else if (sub_mcf->parsed()) {
            acfront::Field f = acfront::read_field(in_path);
            acfront::LevelSetState state{f, 0.0};
            if (state.w.time < 1.0) state.w.time = 1.0;
            state.delta_reg = acfront::default_delta_reg(state.w);
            state = acfront::evolve_levelset(std::move(state), sigma_to);
            acfront::write_field(state.w, out_path);
            if (!nodal_out.empty())
                acfront::write_nodal_csv(acfront::extract_nodal(state.w).polylines, nodal_out);
        } else if (sub_exp->parsed()) {
            acfront::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = config_from_file(config_path);
            cfg.id = experiment_id;
            if (seed_given) cfg.seed = seed;
            if (replicas > 0) cfg.replicas = replicas;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            acfront::ExperimentReport rep = acfront::run_experiment(cfg);
            for (const auto& c : rep.checks)
                std::printf("%s  %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                            c.detail.empty() ? "" : "  ", c.detail.c_str());
            if (!rep.all_pass()) return 3;
        } else if (sub_render->parsed()) {
            acfront::write_pgm(acfront::read_field(in_path), out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
