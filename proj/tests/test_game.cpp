#include "approach/game.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <functional>

#include "approach/rng.hpp"
#include "approach/scenarios.hpp"
#include "oracles.hpp"

using namespace approach;

namespace {

std::vector<std::vector<double>> random_matrix(SplitMix& rng, std::size_t r, std::size_t c) {
    std::vector<std::vector<double>> m(r, std::vector<double>(c));
    for (auto& row : m)
        for (auto& v : row) v = rng.next_in(-1.0, 1.0);
    return m;
}

}  // namespace

TEST_CASE("expected payoff basics") {
    const auto sc = build_scenario("convex_demo");
    const auto& game = sc.game;

    // Half B1 + half B2 against any pure column lands on the target point.
    MixedAction p{{0.0, 0.5, 0.5}};
    for (std::size_t j = 0; j < 2; ++j) {
        const Point u = expected_payoff(game, p, MixedAction::pure(2, j));
        CHECK(u[0] == Catch::Approx(0.0).margin(1e-15));
        CHECK(u[1] == Catch::Approx(0.0).margin(1e-15));
    }

    for (std::size_t i = 0; i < game.rows(); ++i)
        for (std::size_t j = 0; j < game.cols(); ++j) {
            const Point u = expected_payoff(game, MixedAction::pure(3, i), MixedAction::pure(2, j));
            CHECK(dist2(u, game.at(i, j)) == 0.0);
        }

    VectorPayoffGame two = VectorPayoffGame::from_tensor({
        {{1.0}, {2.0}},
        {{3.0}, {4.0}},
    });
    const Point mean = expected_payoff(two, MixedAction::uniform(2), MixedAction::uniform(2));
    CHECK(mean[0] == Catch::Approx(2.5));

    CHECK_THROWS_AS(expected_payoff(game, MixedAction::uniform(2), MixedAction::uniform(2)),
                    std::invalid_argument);
}

TEST_CASE("response and feasible sets") {
    const auto sc = build_scenario("convex_demo");
    const auto rt = response_set(sc.game, MixedAction::pure(3, 0));
    const auto& hull_t = std::get<HullOfPoints>(rt);
    REQUIRE(hull_t.vertices.size() == 2);
    CHECK(dist2(hull_t.vertices[0], {0.0, 1.0}) == 0.0);
    CHECK(dist2(hull_t.vertices[1], {0.0, 1.0}) == 0.0);

    const auto block = build_scenario("block_reactive");
    const auto rb = response_set(block.game, MixedAction::pure(3, 2));
    const auto& hull_b = std::get<HullOfPoints>(rb);
    CHECK(dist2(hull_b.vertices[0], {2.0, 3.0}) == 0.0);
    CHECK(dist2(hull_b.vertices[1], {3.0, 2.0}) == 0.0);

    VectorPayoffGame trivial = VectorPayoffGame::from_tensor({{{1.0, 2.0}}});
    const auto f1 = feasible_set(trivial);
    CHECK(std::get<HullOfPoints>(f1).vertices.size() == 1);

    const auto F = feasible_set(sc.game);
    CHECK(std::get<HullOfPoints>(F).vertices.size() == 6);
    // As a set, F is the hull of the three distinct entries.
    for (const Point& v : {Point{0.0, 1.0}, Point{1.0, 0.0}, Point{-1.0, 0.0}})
        CHECK(distance_to_body(v, F) <= 1e-12);
    for (const auto& v : std::get<HullOfPoints>(F).vertices)
        CHECK((dist2(v, {0.0, 1.0}) == 0.0 || dist2(v, {1.0, 0.0}) == 0.0 || dist2(v, {-1.0, 0.0}) == 0.0));
    SplitMix rng(123456789ULL);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> pw(3), qw(2);
        double ps = 0.0, qs = 0.0;
        for (auto& w : pw) ps += (w = rng.next_unit());
        for (auto& w : qw) qs += (w = rng.next_unit());
        for (auto& w : pw) w /= ps;
        for (auto& w : qw) w /= qs;
        const Point u = expected_payoff(sc.game, MixedAction{pw}, MixedAction{qw});
        CHECK(distance_to_body(u, F) <= 1e-9);
        CHECK(distance_to_body(u, response_set(sc.game, MixedAction{pw})) <= 1e-9);
    }
}

TEST_CASE("matrix game solver on small named games") {
    // Matching pennies: value 0, uniform row mix.
    const auto pennies = solve_matrix_game({{1.0, -1.0}, {-1.0, 1.0}}, 1e-9);
    CHECK(pennies.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(pennies.optimal_row.weights[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(pennies.duality_gap <= 1e-9);

    // Row dominance under minimization.
    const auto dominant = solve_matrix_game({{0.0, 0.0}, {1.0, 1.0}}, 1e-9);
    CHECK(dominant.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(dominant.optimal_row.weights[0] == Catch::Approx(1.0).margin(1e-12));

    // The impossibility game scalarized along (1, 0).
    const auto sc = build_scenario("convex_demo");
    const auto scal = scalarize(sc.game, {1.0, 0.0});
    const auto sol = solve_matrix_game(scal, 1e-9);
    CHECK(sol.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(sol.value == Catch::Approx(test_oracles::grid_game_value(scal, 1000)).margin(2e-3));
    CHECK(std::abs(sol.optimal_row.weights[1] - sol.optimal_row.weights[2]) <= 1e-9);
}

TEST_CASE("solver matches the simplex-grid oracle on random games") {
    SplitMix rng(0xabcdef12ULL);
    int grid_checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 2 + rng.next_below(4);
        const std::size_t c = 2 + rng.next_below(4);
        const auto m = random_matrix(rng, r, c);
        const auto sol = solve_matrix_game(m, 1e-9);
        CHECK(sol.duality_gap <= 1e-9);
        CHECK(sol.duality_gap >= -1e-9);
        if (std::min(r, c) <= 3) {
            CHECK(std::abs(sol.value - test_oracles::grid_game_value(m, 1000)) <= 2e-3);
            ++grid_checked;
        }
        CHECK(std::abs(sol.value - test_oracles::support_enumeration_value(m)) <= 1e-7);

        // LP duality at the solution itself.
        double row_val = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < c; ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < r; ++i) v += sol.optimal_row.weights[i] * m[i][j];
            row_val = std::max(row_val, v);
        }
        CHECK(std::abs(sol.value - row_val) <= 1e-9);
    }
    CHECK(grid_checked >= 50);
}

TEST_CASE("the two independent oracles agree with each other") {
    SplitMix rng(0x0c0ffeeULL);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t r = 2 + rng.next_below(4);
        const std::size_t c = 2 + rng.next_below(2);
        const auto m = random_matrix(rng, r, c);
        const double grid = test_oracles::grid_game_value(m, 1000);
        const double exact = test_oracles::support_enumeration_value(m);
        CHECK(std::abs(grid - exact) <= 2e-3);
    }
}

TEST_CASE("solver is deterministic") {
    SplitMix rng(42ULL);
    const auto m = random_matrix(rng, 4, 4);
    const auto a = solve_matrix_game(m, 1e-9);
    const auto b = solve_matrix_game(m, 1e-9);
    CHECK(a.value == b.value);
    CHECK(a.optimal_row.weights == b.optimal_row.weights);
    CHECK(a.optimal_col.weights == b.optimal_col.weights);
}

TEST_CASE("safe actions per scenario") {
    const auto imp = build_scenario("impossibility_closed_halfplane");
    CHECK(find_safe_actions(imp.game, imp.region) == std::vector<std::size_t>{0});  // T

    const auto arms = build_scenario("nonconvex_two_arms");
    CHECK(find_safe_actions(arms.game, arms.region) == std::vector<std::size_t>{0, 1});  // T1, T2

    const auto block = build_scenario("block_reactive");
    CHECK(find_safe_actions(block.game, block.region) == std::vector<std::size_t>{2});  // B

    // Safe pure actions have their whole response set inside D (vertex check).
    for (const auto* sc : {&imp, &arms, &block}) {
        for (std::size_t i : find_safe_actions(sc->game, sc->region)) {
            const auto hull = std::get<HullOfPoints>(response_set(sc->game, MixedAction::pure(sc->game.rows(), i)));
            for (const auto& v : hull.vertices) CHECK(region_contains(sc->region, v));
        }
    }
}

TEST_CASE("safety gap") {
    const auto demo = build_scenario("convex_demo");
    const auto s = MixedAction::pure(3, 0);
    const double delta = safety_gap(demo.game, demo.region, s);
    CHECK(delta == Catch::Approx(0.25));

    // Grid-oracle confirmation: distance from R1(T) = {(0,1)} to sampled
    // complement points of D inside F.
    GridOracle oracle{{-1.2, -0.2}, {1.2, 1.2}, 241};
    const ConvexBody F = feasible_set(demo.game);
    const double brute = oracle.min_distance_to({0.0, 1.0}, [&](const Point& z) {
        return body_contains(z, F, oracle.diagonal()) && !region_contains(demo.region, z);
    });
    CHECK(delta <= brute + oracle.diagonal());

    // No constraint at all: the gap is unbounded.
    Region everything;
    everything.shape = OpenHalfspaceIntersection{};
    CHECK(std::isinf(safety_gap(demo.game, everything, s)));

    // Response set touching the boundary: gap 0 (closed membership keeps T safe).
    Region tight;
    tight.shape = OpenHalfspaceIntersection{{Hyperplane{{0.0, 1.0}, 1.0}}};  // y <= 1, R1(T) = {(0,1)}
    tight.closed_membership = true;
    CHECK(safety_gap(demo.game, tight, s) == 0.0);

    CHECK_THROWS_AS(safety_gap(demo.game, demo.region, MixedAction::pure(3, 1)), std::invalid_argument);
}

TEST_CASE("safety gap is monotone under shrinking D") {
    SplitMix rng(0x5eedULL);
    const auto demo = build_scenario("convex_demo");
    const auto s = MixedAction::pure(3, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Hyperplane> planes{Hyperplane{{-1.0, 0.0}, 0.25}};
        Region base;
        base.shape = OpenHalfspaceIntersection{planes};
        const double before = safety_gap(demo.game, base, s);
        Point normal{rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
        if (norm2(normal) < 1e-3) normal[0] = 1.0;
        // Keep (0,1) inside D so the action stays safe; then shrink.
        const double offset = dot(normal, Point{0.0, 1.0}) + rng.next_in(0.05, 1.0);
        planes.push_back(Hyperplane{normal, offset});
        Region shrunk;
        shrunk.shape = OpenHalfspaceIntersection{planes};
        const double after = safety_gap(demo.game, shrunk, s);
        CHECK(after <= before + 1e-12);
    }
}

TEST_CASE("safety gap positive iff response vertices strictly inside convex D") {
    const auto demo = build_scenario("convex_demo");
    SplitMix rng(99ULL);
    for (int trial = 0; trial < 50; ++trial) {
        const double off = rng.next_in(-0.5, 0.5);
        Region D;
        D.shape = OpenHalfspaceIntersection{{Hyperplane{{0.0, 1.0}, 1.0 + off}}};  // y < 1 + off
        const auto safe = find_safe_actions(demo.game, D);
        const bool t_safe = std::find(safe.begin(), safe.end(), std::size_t{0}) != safe.end();
        if (!t_safe) {
            CHECK(off <= 0.0);
            continue;
        }
        const double delta = safety_gap(demo.game, D, MixedAction::pure(3, 0));
        CHECK((delta > 0.0) == (off > 0.0));
    }
}

TEST_CASE("dual approachability check") {
    const auto demo = build_scenario("convex_demo");
    const ConvexBody F = feasible_set(demo.game);

    // Containing the whole feasible set: trivially approachable.
    CHECK(check_convex_approachable(demo.game, F, 64, 1e-7));

    // Disjoint from the feasible set: not approachable.
    CHECK(check_convex_approachable(demo.game, ConvexBody{SinglePoint{{10.0, 10.0}}}, 64, 1e-7) == false);

    // The singleton target {(0,0)} is approachable in this game.
    CHECK(check_convex_approachable(demo.game, demo.target, 512, 1e-7));

    CHECK_THROWS_AS(check_convex_approachable(demo.game, demo.target, 4, 1e-7), std::invalid_argument);
}

TEST_CASE("scenario check report") {
    const auto demo = build_scenario("convex_demo");
    const auto check = check_scenario(demo.game, demo.target, demo.region);
    CHECK(check.c1_holds);
    CHECK(check.c2_holds);
    CHECK(check.safe_actions == std::vector<std::size_t>{0});
    CHECK(check.safe_gap == Catch::Approx(0.25));
    CHECK(check.safe_response_in_region);

    const auto block = build_scenario("block_reactive");
    ScenarioCheckOptions opts;
    opts.oracle = block.oracle(201);
    const auto bcheck = check_scenario(block.game, block.target, block.region, opts);
    CHECK(bcheck.c2_holds);
    CHECK(bcheck.safe_actions == std::vector<std::size_t>{2});
    CHECK_FALSE(bcheck.safe_response_in_region);  // R1(B) leaves D between its vertices
    CHECK(bcheck.c1_holds);
}
