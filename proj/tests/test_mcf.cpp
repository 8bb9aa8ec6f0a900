#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acfront/grid.hpp"
#include "acfront/mcf.hpp"

using namespace acfront;

namespace {

// Signed cone R - |x - c| with the minimum-image metric: positive inside the
// circle of radius R around the grid center.
Field circle_cone(const Grid& g, double R, double scale = 1.0) {
    Field f(g);
    const double c = 0.5 * g.extent;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            const double dx = std::remainder(static_cast<double>(i) * g.spacing - c, g.extent);
            const double dy = std::remainder(static_cast<double>(j) * g.spacing - c, g.extent);
            f.values[i * g.n + j] = scale * (R - std::hypot(dx, dy));
        }
    return f;
}

LevelSetState make_state(Field w, double sigma0 = 0.0) {
    LevelSetState s;
    s.w = std::move(w);
    s.w.time = sigma0;
    s.delta_reg = default_delta_reg(s.w);
    return s;
}

double measured_radius(const Field& w, double required = -1.0) {
    auto r = nodal_radius(extract_nodal(w), 0.5 * w.grid.extent, 0.5 * w.grid.extent,
                          w.grid.extent);
    REQUIRE(r.has_value());
    (void)required;
    return *r;
}

}  // namespace

TEST_CASE("constant level-set functions are invariant under the flow") {
    Grid g = make_grid(2, 32, 3.2);
    LevelSetState s = make_state(Field(g, 0.7));
    // the flow itself leaves constants fixed (reinitialization disabled: with
    // no zero set it would legitimately push the value toward a distance
    // function, which changes nothing about the sign map)
    s = evolve_levelset(std::move(s), 0.5, 0);
    for (double v : s.w.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
    // and with redistancing on, the sign never changes
    LevelSetState s2 = make_state(Field(g, 0.7));
    s2 = evolve_levelset(std::move(s2), 0.5);
    for (double v : s2.w.values) CHECK(v > 0.0);
}

TEST_CASE("step rejects time steps above the stability bound") {
    Grid g = make_grid(2, 64, 6.4);
    CHECK(levelset_stability_bound(g) == doctest::Approx(0.01 / 8.0).epsilon(1e-14));
    LevelSetState s = make_state(circle_cone(g, 2.0));
    CHECK_THROWS_AS(levelset_step(s, 2.0 * levelset_stability_bound(g)), std::invalid_argument);
    CHECK_THROWS_AS(levelset_step(s, -0.001), std::invalid_argument);
}

TEST_CASE("a circle shrinks at the exact rate R(sigma) = sqrt(R0^2 - 2 sigma)") {
    Grid g = make_grid(2, 128, 12.8);  // h = 0.1
    LevelSetState s = make_state(circle_cone(g, 2.5));
    const double R0 = measured_radius(s.w);
    CHECK(std::abs(R0 - 2.5) < g.spacing);
    for (double sigma : {0.5, 1.0, 1.5}) {
        s = evolve_levelset(std::move(s), sigma);
        const double expect = std::sqrt(R0 * R0 - 2.0 * sigma);
        CHECK(std::abs(measured_radius(s.w) - expect) < 2.0 * g.spacing);
    }
}

TEST_CASE("the discrete flow commutes with quarter turns") {
    Grid g = make_grid(2, 64, 6.4);
    Field f(g);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            const double x = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(g.n);
            const double y = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(g.n);
            f.values[i * g.n + j] = std::sin(x) + 0.4 * std::cos(2.0 * y) - 0.2 * std::sin(x + y);
        }
    auto rot = [&](const Field& w) {  // (x, y) -> (y, -x) on the index torus
        Field out(g, 0.0, w.time);
        for (long long i = 0; i < static_cast<long long>(g.n); ++i)
            for (long long j = 0; j < static_cast<long long>(g.n); ++j)
                out.at(i, j) = w.at(j, -i);
        return out;
    };
    const double ds = levelset_stability_bound(g);
    LevelSetState a = make_state(f);
    LevelSetState b = make_state(rot(f));
    for (int k = 0; k < 10; ++k) {
        a = levelset_step(a, ds);
        b = levelset_step(b, ds);
    }
    CHECK(sup_distance(rot(a.w), b.w) < 1e-10);
}

TEST_CASE("reinitialization restores a unit gradient without moving the front") {
    Grid g = make_grid(2, 128, 12.8);
    Field w = circle_cone(g, 3.0, 3.0);  // gradient magnitude 3 everywhere
    const double r_before = measured_radius(w);
    Field r = reinitialize(w, 40);
    const double r_after = measured_radius(r);
    CHECK(std::abs(r_after - r_before) < 2.0 * g.spacing);
    // gradient near the front is close to 1
    const double inv2h = 1.0 / (2.0 * g.spacing);
    for (long long i = 0; i < static_cast<long long>(g.n); ++i)
        for (long long j = 0; j < static_cast<long long>(g.n); ++j) {
            if (std::abs(w.at(i, j)) > 3.0 * 1.0) continue;  // within 1 of the front
            const double gx = (r.at(i + 1, j) - r.at(i - 1, j)) * inv2h;
            const double gy = (r.at(i, j + 1) - r.at(i, j - 1)) * inv2h;
            CHECK(std::hypot(gx, gy) == doctest::Approx(1.0).epsilon(0.2));
        }
}

TEST_CASE("sign map basics") {
    Grid g = make_grid(2, 64, 6.4);
    // strictly positive data stays +1
    Field pos(g, 0.4);
    auto sp = sign_map(pos, {1.0, 2.0});
    for (const Field& v : sp)
        for (double x : v.values) CHECK(x == 1.0);
    // sigma = 1 is the plain sign of the datum
    Field f = circle_cone(g, 1.5);
    auto s1 = sign_map(f, {1.0});
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(s1[0][k] == sgn(f[k]));
    CHECK_THROWS_AS(sign_map(f, {0.5}), std::invalid_argument);
}

TEST_CASE("a small negative inclusion becomes extinct") {
    Grid g = make_grid(2, 64, 6.4);
    Field f = circle_cone(g, 0.8);
    for (double& v : f.values) v = -v;  // negative inside the small circle
    // extinction at sigma - 1 = R^2/2 = 0.32; ask well past it
    auto s = sign_map(f, {2.0});
    for (double v : s[0].values) CHECK(v == 1.0);
}

TEST_CASE("sign map does not depend on the level-set representative") {
    Grid g = make_grid(2, 128, 12.8);
    Field f = circle_cone(g, 2.5);
    Field f2 = f;
    for (double& v : f2.values) v = std::tanh(2.0 * v);  // same sign class
    auto a = sign_map(f, {1.6});
    auto b = sign_map(f2, {1.6});
    NodalSet front = extract_nodal(a[0]);
    Field dist = distance_map(front, g);
    for (std::size_t k = 0; k < a[0].size(); ++k)
        if (dist[k] > 4.0 * g.spacing) CHECK(a[0][k] == b[0][k]);
}

TEST_CASE("marching squares on a circle and on constant data") {
    Grid g = make_grid(2, 128, 12.8);
    Field f = circle_cone(g, 2.0);
    NodalSet ns = extract_nodal(f);
    REQUIRE(ns.polylines.size() == 1);
    const double c = 0.5 * g.extent;
    for (const auto& v : ns.polylines[0]) {
        const double r = std::hypot(v[0] - c, v[1] - c);
        CHECK(std::abs(r - 2.0) < g.spacing);
    }
    CHECK(extract_nodal(Field(g, 1.0)).empty());
    CHECK(extract_nodal(Field(g, -1.0)).empty());
}

TEST_CASE("chamfer distance map tracks the exact point-to-set distance") {
    Grid g = make_grid(2, 128, 12.8);
    Field f = circle_cone(g, 2.0);
    NodalSet ns = extract_nodal(f);
    Field dm = distance_map(ns, g);
    for (long long i = 0; i < static_cast<long long>(g.n); i += 5)
        for (long long j = 0; j < static_cast<long long>(g.n); j += 5) {
            const double exact = distance_to_nodal(ns, static_cast<double>(i) * g.spacing,
                                                   static_cast<double>(j) * g.spacing, g.extent);
            const double approx = dm.at(i, j);
            // the (1, sqrt 2) chamfer metric has ~8% worst-case directional error
            CHECK(std::abs(approx - exact) < 0.09 * exact + g.spacing);
        }
}

TEST_CASE("space and space-time masks") {
    const double delta = 0.2, extent = 12.8;
    Grid g = make_grid(2, 128, extent);
    NodalSet unit = extract_nodal(circle_cone(g, 1.0));
    const double c = 0.5 * extent;

    // spatial mask around the unit circle: origin and far annulus points are
    // in, points within delta of the circle are out, points beyond 1/delta out
    std::vector<std::array<double, 2>> pts{
        {c, c},                // center: distance 1 >= delta -> in
        {c + 1.05, c},         // distance 0.05 < delta -> out
        {c + 2.0, c},          // distance 1 -> in
        {c + 4.9, c},          // |x - center| = 4.9 <= 1/delta = 5 -> in
    };
    std::vector<SpaceTimePoint> st{
        {2.0, c, c},              // no interface anywhere: in, |(sigma, z)| <= 5
        {1.1, c, c},              // sigma <= 1 + delta -> out
        {2.0, c + 4.0, c + 3.0},  // |(2, 5)| > 5 -> out
    };
    NodalSet empty_ns;
    MaskKDelta m = k_delta_masks({{2.0, empty_ns}}, delta, st, unit, pts, extent, c, c);
    CHECK(m.space == std::vector<bool>{true, false, true, true});
    CHECK(m.spacetime == std::vector<bool>{true, false, false});
    CHECK_THROWS_AS(k_delta_masks({}, 1.5, st, unit, pts, extent), std::invalid_argument);

    // a space-time point within delta of an interface slice is masked out
    std::vector<SpaceTimePoint> near{{2.0, c + 1.0, c}};
    MaskKDelta m2 = k_delta_masks({{2.0, unit}}, delta, near, unit, {}, extent, c, c);
    CHECK(m2.spacetime == std::vector<bool>{false});
}

TEST_CASE("nested circles stay nested (avoidance)") {
    Grid g = make_grid(2, 128, 12.8);
    LevelSetState inner = make_state(circle_cone(g, 1.8));
    LevelSetState outer = make_state(circle_cone(g, 2.6));
    const double r_in0 = measured_radius(inner.w), r_out0 = measured_radius(outer.w);
    CHECK(r_in0 < r_out0);
    inner = evolve_levelset(std::move(inner), 1.0);
    outer = evolve_levelset(std::move(outer), 1.0);
    const double r_in = measured_radius(inner.w), r_out = measured_radius(outer.w);
    CHECK(r_in < r_out);
    // both still follow the oracle
    CHECK(std::abs(r_in - std::sqrt(r_in0 * r_in0 - 2.0)) < 2.0 * g.spacing);
    CHECK(std::abs(r_out - std::sqrt(r_out0 * r_out0 - 2.0)) < 2.0 * g.spacing);
}

TEST_CASE("circle oracle") {
    CHECK(circle_oracle(2.0, 0.0).value() == 2.0);
    CHECK(circle_oracle(2.0, 1.5).value() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(!circle_oracle(2.0, 2.0).has_value());
    CHECK(!circle_oracle(2.0, 5.0).has_value());
    CHECK_THROWS_AS(circle_oracle(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(circle_oracle(2.0, -0.5), std::invalid_argument);
}

TEST_CASE("nodal radius readout") {
    Grid g = make_grid(2, 128, 12.8);
    const double c = 0.5 * g.extent;
    auto r = nodal_radius(extract_nodal(circle_cone(g, 2.2)), c, c, g.extent);
    REQUIRE(r.has_value());
    CHECK(std::abs(*r - 2.2) < g.spacing);
    CHECK(!nodal_radius(NodalSet{}, c, c, g.extent).has_value());
}
