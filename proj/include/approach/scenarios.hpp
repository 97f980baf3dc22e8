#pragma once

#include <optional>
#include <string>
#include <vector>

#include "approach/game.hpp"
#include "approach/geometry.hpp"
#include "approach/strategies.hpp"

namespace approach {

enum class ScenarioExpectation {
    kApproachableWhileRemaining,
    kOnlyWithHighProbability,
    kImpossible,
};

inline std::string to_string(ScenarioExpectation e) {
    switch (e) {
        case ScenarioExpectation::kApproachableWhileRemaining: return "approachable_while_remaining";
        case ScenarioExpectation::kOnlyWithHighProbability: return "only_with_high_probability";
        case ScenarioExpectation::kImpossible: return "impossible";
    }
    return "unknown";
}

struct Scenario {
    std::string name;
    VectorPayoffGame game;
    ConvexBody target;  // A
    Region region;      // D
    double alpha = 0.25;
    double alpha_prime = 0.125;
    ScenarioExpectation expectation = ScenarioExpectation::kApproachableWhileRemaining;
    std::optional<WaypointPlan> waypoint_plan;
    std::vector<std::string> recommended_strategies;
    std::vector<std::string> recommended_adversaries;
    OpenBox bounding_box;  // covers F and A, used to build grid oracles

    GridOracle oracle(int resolution) const { return GridOracle{bounding_box.lo, bounding_box.hi, resolution}; }
};

struct ScenarioOverrides {
    std::optional<double> alpha;
    std::optional<double> alpha_prime;
    std::optional<long> waypoint_t0;
    std::optional<double> waypoint_delta;
};

inline std::vector<std::string> scenario_names() {
    return {"impossibility_closed_halfplane", "nonconvex_two_arms", "waypoint_ladder", "block_reactive",
            "convex_demo"};
}

namespace detail {

inline VectorPayoffGame impossibility_game() {
    return VectorPayoffGame::from_tensor(
        {
            {{0.0, 1.0}, {0.0, 1.0}},    // T
            {{1.0, 0.0}, {-1.0, 0.0}},   // B1
            {{-1.0, 0.0}, {1.0, 0.0}},   // B2
        },
        {"T", "B1", "B2"}, {"L", "R"});
}

}  // namespace detail

inline Scenario build_scenario(const std::string& name, const ScenarioOverrides& overrides = {}) {
    const double alpha = overrides.alpha.value_or(0.25);
    const double alpha_prime = overrides.alpha_prime.value_or(0.125);
    if (!(0.0 < alpha_prime && alpha_prime < alpha && alpha < 0.5))
        throw std::invalid_argument("build_scenario: need 0 < alpha' < alpha < 1/2");

    Scenario sc;
    sc.alpha = alpha;
    sc.alpha_prime = alpha_prime;
    sc.name = name;

    if (name == "impossibility_closed_halfplane") {
        sc.game = detail::impossibility_game();
        sc.target = SinglePoint{{0.0, 0.0}};
        sc.region.shape = OpenHalfspaceIntersection{{Hyperplane{{-1.0, 0.0}, 0.0}}};  // x >= 0
        sc.region.closed_membership = true;
        sc.expectation = ScenarioExpectation::kImpossible;
        sc.recommended_strategies = {"blackwell"};
        sc.recommended_adversaries = {"stationary_uniform"};
        sc.bounding_box = OpenBox{{-1.5, -0.5}, {1.5, 1.5}};
    } else if (name == "convex_demo") {
        sc.game = detail::impossibility_game();
        sc.target = SinglePoint{{0.0, 0.0}};
        sc.region.shape = OpenHalfspaceIntersection{{Hyperplane{{-1.0, 0.0}, 0.25}}};  // x > -1/4
        sc.expectation = ScenarioExpectation::kApproachableWhileRemaining;
        sc.recommended_strategies = {"sigma_star", "blackwell"};
        sc.recommended_adversaries = {"stationary_uniform", "stationary_skewed", "adaptive_push",
                                      "scripted_left", "scripted_right", "scripted_alternate"};
        sc.bounding_box = OpenBox{{-1.5, -0.5}, {1.5, 1.5}};
    } else if (name == "nonconvex_two_arms") {
        sc.game = VectorPayoffGame::from_tensor(
            {
                {{1.0, 2.0}, {2.0, 2.0}},  // T1
                {{2.0, 2.0}, {1.0, 2.0}},  // T2
                {{1.0, 1.0}, {2.0, 1.0}},  // B1
                {{2.0, 1.0}, {1.0, 1.0}},  // B2
            },
            {"T1", "T2", "B1", "B2"}, {"L", "R"});
        sc.target = Ball{{1.5, 1.0}, alpha_prime};
        sc.region.shape = OpenBoxUnion{{
            OpenBox{{1.0 - alpha, 2.0 - alpha}, {2.0 + alpha, 2.0 + alpha}},
            OpenBox{{1.5 - alpha, 1.0 - alpha}, {1.5 + alpha, 2.0 + alpha}},
        }};
        sc.expectation = ScenarioExpectation::kOnlyWithHighProbability;
        sc.recommended_strategies = {"waypoint"};
        sc.recommended_adversaries = {"stationary_uniform", "stationary_skewed"};
        sc.bounding_box = OpenBox{{0.5, 0.5}, {2.75, 2.75}};

        // One-leg plan: hold the safe mix (its response set is the single
        // point (1.5, 2)), then steer toward the target ball. The delta-ball
        // around the final response point sits inside the checkpoint.
        WaypointPlan plan;
        plan.safe_mix.weights = {0.5, 0.5, 0.0, 0.0};
        plan.phase_mixes = {MixedAction{{0.0, 0.0, 0.5, 0.5}}};
        plan.checkpoints = {OpenTarget{ConvexBody{Ball{{1.5, 1.0}, alpha_prime}}}};
        plan.initial_duration = overrides.waypoint_t0.value_or(1000);
        plan.final_target = Ball{{1.5, 1.0}, alpha_prime};
        plan.delta = overrides.waypoint_delta.value_or(0.75 * alpha_prime);
        sc.waypoint_plan = plan;
    } else if (name == "waypoint_ladder") {
        sc.game = VectorPayoffGame::from_tensor(
            {
                {{1.0, 1.0}, {1.0, 1.0}},  // x0
                {{4.0, 1.0}, {4.0, 1.0}},  // x1
                {{2.0, 3.0}, {4.0, 3.0}},  // x2
                {{4.0, 3.0}, {2.0, 3.0}},  // x3
            },
            {"x0", "x1", "x2", "x3"}, {"L", "R"});
        sc.target = Ball{{3.0, 3.0}, alpha_prime};
        sc.region.shape = OpenBoxUnion{{
            OpenBox{{1.0 - alpha, 1.0 - alpha}, {3.0 + alpha, 1.0 + alpha}},
            OpenBox{{3.0 - alpha, 1.0 - alpha}, {3.0 + alpha, 3.0 + alpha}},
        }};
        sc.expectation = ScenarioExpectation::kOnlyWithHighProbability;
        sc.recommended_strategies = {"waypoint"};
        sc.recommended_adversaries = {"stationary_uniform"};
        sc.bounding_box = OpenBox{{0.5, 0.5}, {4.6, 3.6}};

        // Two legs: ride x1 along the bottom arm into a checkpoint box around
        // (3, 1), then steer up the vertical arm toward the target ball. The
        // checkpoint has half-width alpha' so its delta-dilation stays in D.
        WaypointPlan plan;
        plan.safe_mix = MixedAction::pure(4, 0);
        plan.phase_mixes = {MixedAction::pure(4, 1), MixedAction{{0.0, 0.0, 0.5, 0.5}}};
        Region checkpoint_box;
        checkpoint_box.shape =
            OpenBoxUnion{{OpenBox{{3.0 - alpha_prime, 1.0 - alpha_prime}, {3.0 + alpha_prime, 1.0 + alpha_prime}}}};
        plan.checkpoints = {OpenTarget{checkpoint_box}, OpenTarget{ConvexBody{Ball{{3.0, 3.0}, alpha_prime}}}};
        plan.initial_duration = overrides.waypoint_t0.value_or(1000);
        plan.final_target = Ball{{3.0, 3.0}, alpha_prime};
        plan.delta = overrides.waypoint_delta.value_or(0.1);
        sc.waypoint_plan = plan;
    } else if (name == "block_reactive") {
        sc.game = VectorPayoffGame::from_tensor(
            {
                {{1.0, 2.0}, {1.0, 2.0}},  // T1
                {{2.0, 1.0}, {2.0, 1.0}},  // T2
                {{2.0, 3.0}, {3.0, 2.0}},  // B
            },
            {"T1", "T2", "B"}, {"L", "R"});
        sc.target = SinglePoint{{2.0, 2.0}};
        sc.region.shape = OpenBoxUnion{{
            OpenBox{{2.0 - alpha, 2.0 - alpha}, {2.0 + alpha, 3.0 + alpha}},
            OpenBox{{2.0 - alpha, 2.0 - alpha}, {3.0 + alpha, 2.0 + alpha}},
        }};
        sc.expectation = ScenarioExpectation::kApproachableWhileRemaining;
        sc.recommended_strategies = {"block"};
        sc.recommended_adversaries = {"stationary_uniform", "scripted_alternate"};
        sc.bounding_box = OpenBox{{0.5, 0.5}, {3.6, 3.6}};
    } else {
        std::string names;
        for (const auto& n : scenario_names()) names += (names.empty() ? "" : ", ") + n;
        throw std::invalid_argument("build_scenario: unknown scenario '" + name + "' (valid: " + names + ")");
    }
    sc.game.validate();
    return sc;
}

}  // namespace approach
