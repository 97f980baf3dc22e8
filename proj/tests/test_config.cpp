#include "approach/config.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace approach;

TEST_CASE("config text parsing") {
    const std::string text = R"(
# experiment
scenario = convex_demo
horizon = 5000
runs = 12        # inline comment
base_seed = 42

[strategy]
name = sigma_star
kappa = 2.5

[adversary]
name = scripted
script = [0, 1, 1]
)";
    const auto cfg = parse_experiment_config(text);
    CHECK(cfg.scenario == "convex_demo");
    CHECK(cfg.horizon == 5000);
    CHECK(cfg.runs == 12);
    CHECK(cfg.base_seed == 42);
    CHECK(cfg.strategy.name == "sigma_star");
    REQUIRE(cfg.strategy.kappa.has_value());
    CHECK(*cfg.strategy.kappa == 2.5);
    REQUIRE(cfg.adversary.script.has_value());
    CHECK(*cfg.adversary.script == std::vector<std::size_t>{0, 1, 1});
}

TEST_CASE("config round trip is exact") {
    ExperimentConfig cfg;
    cfg.scenario = "waypoint_ladder";
    cfg.horizon = 100000;
    cfg.runs = 500;
    cfg.base_seed = 123456789;
    cfg.output_dir = "out/waypoint run";  // space forces quoting
    cfg.trace_stride = 10;
    cfg.grid_resolution = 400;
    cfg.parallel = 2;
    cfg.alpha = 0.3;
    cfg.alpha_prime = 0.1234567890123456;
    cfg.strategy.name = "waypoint";
    cfg.strategy.t0 = 10000;
    cfg.strategy.waypoint_delta = 0.1;
    cfg.adversary.name = "stationary";
    cfg.adversary.weights = std::vector<double>{0.875, 0.125};

    const std::string text = serialize_experiment_config(cfg);
    const auto back = parse_experiment_config(text);
    CHECK(serialize_experiment_config(back) == text);
    CHECK(back.scenario == cfg.scenario);
    CHECK(back.output_dir == cfg.output_dir);
    CHECK(back.alpha_prime == cfg.alpha_prime);
    CHECK(back.adversary.weights == cfg.adversary.weights);
}

TEST_CASE("unknown keys and bad values are rejected with diagnostics") {
    CHECK_THROWS_AS(parse_experiment_config("unknown_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[strategy]\nwhatever = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[nosuch]\nname = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("horizon = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("grid_resolution = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("horizon = 2.5\n"), ConfigError);

    try {
        parse_config_text("a = 1\nb 2\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text("a = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("a = \"unterminated\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("value forms: numbers, strings, booleans, nested arrays") {
    const auto tree = parse_config_text(R"(
n = -1.25e-3
s = hello
q = "quoted # not a comment"
b = true
a = [[1, 2], [3, 4]]
)");
    const auto& root = tree.at("");
    CHECK(root.at("n").as_number("n") == -1.25e-3);
    CHECK(root.at("s").as_string("s") == "hello");
    CHECK(root.at("q").as_string("q") == "quoted # not a comment");
    CHECK(root.at("b").as_bool("b") == true);
    const auto& arr = root.at("a").as_array("a");
    REQUIRE(arr.size() == 2);
    CHECK(arr[1].as_number_array("a") == std::vector<double>{3.0, 4.0});
}

TEST_CASE("strategy construction from config") {
    const auto demo = build_scenario("convex_demo");

    StrategyConfig sigma;
    sigma.name = "sigma_star";
    sigma.kappa = 1.5;
    const auto st = build_strategy(demo, sigma);
    REQUIRE(std::holds_alternative<ConstrainedState>(st));
    CHECK(std::get<ConstrainedState>(st).threshold_coefficient == 1.5);

    StrategyConfig bw;
    bw.name = "blackwell";
    CHECK(std::holds_alternative<BlackwellState>(build_strategy(demo, bw)));

    StrategyConfig stationary;
    stationary.name = "stationary";
    CHECK_THROWS_AS(build_strategy(demo, stationary), ConfigError);
    stationary.mix = std::vector<double>{0.0, 0.5, 0.5};
    CHECK(std::holds_alternative<StationaryStrategyState>(build_strategy(demo, stationary)));

    StrategyConfig wp;
    wp.name = "waypoint";
    CHECK_THROWS_AS(build_strategy(demo, wp), ConfigError);  // no plan on this scenario
    const auto ladder = build_scenario("waypoint_ladder");
    CHECK(std::holds_alternative<WaypointState>(build_strategy(ladder, wp)));

    StrategyConfig unknown;
    unknown.name = "nope";
    CHECK_THROWS_AS(build_strategy(demo, unknown), ConfigError);
}

TEST_CASE("adversary construction from config") {
    const auto demo = build_scenario("convex_demo");

    AdversaryConfig uniform;
    uniform.name = "stationary_uniform";
    const auto a = build_adversary(demo, uniform);
    REQUIRE(std::holds_alternative<StationaryAdversary>(a));
    CHECK(std::get<StationaryAdversary>(a).mix.weights == MixedAction::uniform(2).weights);

    AdversaryConfig skew;
    skew.name = "stationary_skewed";
    const auto b = build_adversary(demo, skew);
    CHECK(std::get<StationaryAdversary>(b).mix.weights == std::vector<double>{0.9, 0.1});

    AdversaryConfig scripted;
    scripted.name = "scripted";
    CHECK_THROWS_AS(build_adversary(demo, scripted), ConfigError);
    scripted.script = std::vector<std::size_t>{0, 1, 0};
    CHECK(std::holds_alternative<ScriptedAdversary>(build_adversary(demo, scripted)));
    scripted.script = std::vector<std::size_t>{5};
    CHECK_THROWS_AS(build_adversary(demo, scripted), ConfigError);

    AdversaryConfig push;
    push.name = "adaptive_push";
    CHECK(std::holds_alternative<AdaptivePushAdversary>(build_adversary(demo, push)));
}
