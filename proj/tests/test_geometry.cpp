#include "approach/geometry.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "approach/rng.hpp"

using namespace approach;

namespace {

Region halfspace_region(std::vector<Hyperplane> planes, bool closed = false) {
    Region D;
    D.shape = OpenHalfspaceIntersection{std::move(planes)};
    D.closed_membership = closed;
    return D;
}

Region box_union_region(std::vector<OpenBox> boxes) {
    Region D;
    D.shape = OpenBoxUnion{std::move(boxes)};
    return D;
}

// The constraint set of the game with the two arms meeting at the top
// (alpha = 0.25): [0.75,2.25]x[1.75,2.25] union [1.25,1.75]x[0.75,2.25].
Region two_arm_region() {
    return box_union_region({OpenBox{{0.75, 1.75}, {2.25, 2.25}}, OpenBox{{1.25, 0.75}, {1.75, 2.25}}});
}

// Brute-force projection onto a two-point segment by parameter sweep.
Point segment_projection_oracle(const Point& x, const Point& a, const Point& b) {
    double best = std::numeric_limits<double>::infinity();
    Point arg = a;
    for (int k = 0; k <= 200000; ++k) {
        const Point y = lerp(a, b, k / 200000.0);
        const double d = dist2(x, y);
        if (d < best) {
            best = d;
            arg = y;
        }
    }
    return arg;
}

}  // namespace

TEST_CASE("distance_to_body closed forms") {
    Ball unit{{0.0, 0.0}, 1.0};
    CHECK(distance_to_body({2.0, 0.0}, unit) == Catch::Approx(1.0));
    CHECK(distance_to_body({0.3, 0.2}, unit) == 0.0);

    SinglePoint p{{1.0, 2.0}};
    CHECK(distance_to_body({1.0, 2.0}, p) == 0.0);
    CHECK(distance_to_body({1.0, 0.0}, p) == Catch::Approx(2.0));
}

TEST_CASE("distance to hull matches the grid oracle on the top edge") {
    HullOfPoints edge{{{1.0, 2.0}, {2.0, 2.0}}};
    CHECK(distance_to_body({1.5, 2.0}, edge) <= 1e-9);

    GridOracle oracle{{1.0, 2.0}, {2.0, 2.0}, 801};
    const auto on_edge = [&](const Point&) { return true; };  // oracle spans exactly the edge box
    const double brute = oracle.min_distance_to({1.5, 2.0}, on_edge);
    CHECK(distance_to_body({1.5, 2.0}, edge) <= brute + 1e-12);
}

TEST_CASE("project onto ball and hull") {
    Ball unit{{0.0, 0.0}, 1.0};
    const Point pb = project({2.0, 0.0}, unit);
    CHECK(pb[0] == Catch::Approx(1.0));
    CHECK(pb[1] == Catch::Approx(0.0));

    const Point inside{0.25, -0.5};
    CHECK(project(inside, unit) == inside);

    HullOfPoints seg{{{1.0, 0.0}, {0.0, 1.0}}};
    const Point ps = project({0.0, 0.0}, seg);
    CHECK(ps[0] == Catch::Approx(0.5).margin(1e-9));
    CHECK(ps[1] == Catch::Approx(0.5).margin(1e-9));

    const Point oracle_pt = segment_projection_oracle({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
    CHECK(dist2(ps, oracle_pt) <= 1e-5);
}

TEST_CASE("projection onto polytope via half-space faces") {
    // Unit square as a polytope.
    HalfspacePolytope square;
    square.faces.push_back({Hyperplane{{1.0, 0.0}, 1.0}, true});
    square.faces.push_back({Hyperplane{{-1.0, 0.0}, 0.0}, true});
    square.faces.push_back({Hyperplane{{0.0, 1.0}, 1.0}, true});
    square.faces.push_back({Hyperplane{{0.0, -1.0}, 0.0}, true});

    const Point pr = project({2.0, 2.0}, square);
    CHECK(pr[0] == Catch::Approx(1.0).margin(1e-8));
    CHECK(pr[1] == Catch::Approx(1.0).margin(1e-8));

    const auto verts = polytope_vertices(square);
    REQUIRE(verts.size() == 4);
    CHECK(support(square, {1.0, 1.0}) == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("support closed forms") {
    CHECK(support(Ball{{0.0, 0.0}, 1.0}, {1.0, 0.0}) == Catch::Approx(1.0));
    CHECK(support(SinglePoint{{2.0, -1.0}}, {3.0, 4.0}) == Catch::Approx(2.0));

    HullOfPoints hull{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}}};
    CHECK(support(hull, {1.0, 1.0}) == Catch::Approx(2.0));
    CHECK_THROWS_AS(support(hull, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("hyperplane half-spaces") {
    const Hyperplane h{{1.0, 0.0}, 0.5};  // x = 0.5
    CHECK(h.in_minus({0.2, 3.0}));
    CHECK_FALSE(h.in_plus({0.2, 3.0}));
    CHECK(h.in_plus({0.7, -1.0}));
    CHECK((h.in_minus({0.5, 0.0}) && h.in_plus({0.5, 0.0})));  // boundary belongs to both
}

TEST_CASE("region membership is strict on open sets") {
    const Region D = halfspace_region({Hyperplane{{-1.0, 0.0}, 0.0}});  // x > 0
    CHECK(region_contains(D, {0.3, 0.0}));
    CHECK_FALSE(region_contains(D, {0.0, 1.0}));  // boundary excluded

    Region closed = halfspace_region({Hyperplane{{-1.0, 0.0}, 0.0}}, /*closed=*/true);
    CHECK(region_contains(closed, {0.0, 1.0}));
    CHECK_FALSE(region_contains(closed, {-0.1, 1.0}));

    const Region arms = two_arm_region();
    CHECK(region_contains(arms, {1.5, 2.0}));
    CHECK_FALSE(region_contains(arms, {2.5, 2.5}));
}

TEST_CASE("distance_to_complement basics") {
    const Region D = halfspace_region({Hyperplane{{-1.0, 0.0}, 0.0}});  // x > 0
    HullOfPoints F{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};

    CHECK(distance_to_complement({0.3, 0.0}, D, F) == Catch::Approx(0.3));
    CHECK(distance_to_complement({-0.5, 0.0}, D, F) == 0.0);
    CHECK_THROWS_AS(distance_to_complement({5.0, 0.0}, D, F), std::invalid_argument);
}

TEST_CASE("box-union clearance agrees with the grid oracle") {
    const Region arms = two_arm_region();
    const Point x{1.5, 2.0};
    CHECK(region_clearance(x, arms) == Catch::Approx(0.25));

    GridOracle oracle{{0.0, 0.0}, {3.0, 3.0}, 301};
    const auto in_complement = [&](const Point& z) { return !region_contains(arms, z); };
    const double brute = oracle.min_distance_to(x, in_complement);
    CHECK(region_clearance(x, arms) <= brute + oracle.diagonal());
}

TEST_CASE("distance_to_region exact forms") {
    const Region D = halfspace_region({Hyperplane{{-1.0, 0.0}, 0.0}});
    CHECK(distance_to_region({0.5, 3.0}, D) == 0.0);
    CHECK(distance_to_region({-2.0, 0.0}, D) == Catch::Approx(2.0));

    const Region box = box_union_region({OpenBox{{0.0, 0.0}, {1.0, 1.0}}});
    CHECK(distance_to_region({2.0, 2.0}, box) == Catch::Approx(std::sqrt(2.0)));
    CHECK(distance_to_region({0.5, 0.5}, box) == 0.0);
}

TEST_CASE("grid_path_connected on boxes") {
    GridOracle oracle{{0.0, 0.0}, {1.0, 1.0}, 101};
    CHECK(grid_path_connected([](const Point&) { return true; }, oracle));

    const auto split = [](const Point& z) { return z[0] < 0.3 || z[0] > 0.7; };
    CHECK_FALSE(grid_path_connected(split, oracle));

    CHECK_THROWS_AS(grid_path_connected([](const Point&) { return true; }, GridOracle{{0, 0}, {1, 1}, 1}),
                    std::invalid_argument);
}

TEST_CASE("waypoint ladder first-leg set is split by the checkpoint box") {
    // conv[{(1,1)} union B({(4,1)}, 0.1)] minus the open checkpoint box around
    // (3,1): the box spans the full cross-section, so two components remain.
    const SampledConvexUnion hull(
        {{ConvexBody{SinglePoint{{1.0, 1.0}}}, 0.0}, {ConvexBody{SinglePoint{{4.0, 1.0}}}, 0.1}}, 512);
    const OpenBox checkpoint{{2.875, 0.875}, {3.125, 1.125}};
    const auto pred = [&](const Point& z) {
        return hull.contains(z) && !box_contains(checkpoint, z, /*closed=*/false);
    };
    GridOracle oracle{{0.5, 0.5}, {4.5, 1.5}, 400};
    CHECK_FALSE(grid_path_connected(pred, oracle));
}

TEST_CASE("projection variational inequality holds on random points") {
    SplitMix rng(20240801ULL);
    HullOfPoints hull{{{0.0, 1.0}, {1.0, 0.0}, {-1.0, 0.0}, {0.5, 0.8}}};
    HalfspacePolytope square;
    square.faces.push_back({Hyperplane{{1.0, 0.0}, 1.0}, true});
    square.faces.push_back({Hyperplane{{-1.0, 0.0}, 0.0}, true});
    square.faces.push_back({Hyperplane{{0.0, 1.0}, 1.0}, true});
    square.faces.push_back({Hyperplane{{0.0, -1.0}, 0.0}, true});
    const std::vector<ConvexBody> bodies{hull, square, Ball{{0.2, 0.1}, 0.7}};

    for (const auto& body : bodies) {
        std::vector<Point> extremes;
        if (std::holds_alternative<Ball>(body)) {
            for (int k = 0; k < 16; ++k) {
                const double th = 2.0 * 3.14159265358979323846 * k / 16;
                extremes.push_back({0.2 + 0.7 * std::cos(th), 0.1 + 0.7 * std::sin(th)});
            }
        } else {
            extremes = body_extreme_points(body);
        }
        for (int trial = 0; trial < 1000; ++trial) {
            const Point x{rng.next_in(-3.0, 3.0), rng.next_in(-3.0, 3.0)};
            const Point y = project(x, body);
            CHECK(std::abs(distance_to_body(x, body) - dist2(x, y)) <= 1e-9);
            const Point d = sub(x, y);
            for (const auto& v : extremes) {
                CHECK(dot(d, sub(v, y)) <= 1e-7);
            }
        }
    }
}

TEST_CASE("clearance lower-bounds the grid estimate of d(x, F minus D)") {
    SplitMix rng(77442200ULL);
    const Region arms = two_arm_region();
    GridOracle oracle{{0.5, 0.5}, {2.5, 2.5}, 101};
    int interior = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Point x{rng.next_in(0.5, 2.5), rng.next_in(0.5, 2.5)};
        if (region_contains(arms, x)) ++interior;
        const double lb = region_clearance(x, arms);
        const double grid = oracle.min_distance_to(x, [&](const Point& z) { return !region_contains(arms, z); });
        CHECK(lb <= grid + oracle.diagonal());
    }
    CHECK(interior > 2000);
}

TEST_CASE("membership is consistent with positive clearance") {
    const Region arms = two_arm_region();
    GridOracle oracle{{0.4, 0.4}, {2.6, 2.6}, 41};
    oracle.for_each_node([&](const Point& z) {
        CHECK(region_contains(arms, z) == (region_clearance(z, arms) > 0.0));
    });
}

TEST_CASE("distance bound inequality for convex regions") {
    // For x in D, any y, lambda in [0,1]:
    //   d(lx+(1-l)y, complement) >= l d(x, complement) - (1-l) d(y, D)
    SplitMix rng(31415926ULL);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 2 + rng.next_below(2);
        const int planes = 1 + static_cast<int>(rng.next_below(4));
        std::vector<Hyperplane> hs;
        for (int k = 0; k < planes; ++k) {
            Point normal(n);
            double nn = 0.0;
            for (auto& c : normal) {
                c = rng.next_in(-1.0, 1.0);
                nn += c * c;
            }
            if (nn < 1e-4) {
                normal[0] += 1.0;
            }
            hs.push_back(Hyperplane{normal, rng.next_in(0.2, 2.0)});
        }
        const Region D = halfspace_region(hs);

        Point x(n);
        bool found = false;
        for (int attempt = 0; attempt < 200 && !found; ++attempt) {
            for (auto& c : x) c = rng.next_in(-2.0, 2.0);
            found = region_contains(D, x);
        }
        if (!found) continue;

        Point y(n);
        for (auto& c : y) c = rng.next_in(-3.0, 3.0);
        const double lambda = rng.next_unit();

        const Point mid = add(scale(x, lambda), scale(y, 1.0 - lambda));
        const double lhs = region_clearance(mid, D);
        const double rhs = lambda * region_clearance(x, D) - (1.0 - lambda) * distance_to_region(y, D);
        CHECK(lhs >= rhs - 1e-7);
    }
}
