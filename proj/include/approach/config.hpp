#pragma once

// Experiment configuration: a line-oriented text format with [dotted.section]
// headers and key = value pairs. Values are decimal reals, barewords or
// quoted strings, booleans, and bracketed arrays (possibly nested). The exact
// grammar is documented in the README.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "approach/scenarios.hpp"
#include "approach/simulate.hpp"

namespace approach {

struct ConfigError : std::runtime_error {
    ConfigError(int line, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line) + ": " + what), line(line) {}
    explicit ConfigError(const std::string& what) : std::runtime_error("config: " + what), line(0) {}
    int line;
};

struct ConfigValue {
    std::variant<double, bool, std::string, std::vector<ConfigValue>> v;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<ConfigValue>>(v); }

    double as_number(const std::string& key) const {
        if (!is_number()) throw ConfigError("field '" + key + "' must be a number");
        return std::get<double>(v);
    }
    bool as_bool(const std::string& key) const {
        if (!std::holds_alternative<bool>(v)) throw ConfigError("field '" + key + "' must be a boolean");
        return std::get<bool>(v);
    }
    const std::string& as_string(const std::string& key) const {
        if (!std::holds_alternative<std::string>(v))
            throw ConfigError("field '" + key + "' must be a string");
        return std::get<std::string>(v);
    }
    const std::vector<ConfigValue>& as_array(const std::string& key) const {
        if (!is_array()) throw ConfigError("field '" + key + "' must be an array");
        return std::get<std::vector<ConfigValue>>(v);
    }
    std::vector<double> as_number_array(const std::string& key) const {
        std::vector<double> out;
        for (const auto& e : as_array(key)) out.push_back(e.as_number(key));
        return out;
    }
};

using ConfigSection = std::map<std::string, ConfigValue>;
using ConfigTree = std::map<std::string, ConfigSection>;  // "" is the root section

// ---------------------------------------------------------------------------
// Text -> tree

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

inline ConfigValue parse_value(const std::string& s, std::size_t& pos, int line);

inline ConfigValue parse_array(const std::string& s, std::size_t& pos, int line) {
    ++pos;  // '['
    std::vector<ConfigValue> items;
    while (true) {
        skip_ws(s, pos);
        if (pos >= s.size()) throw ConfigError(line, "unterminated array");
        if (s[pos] == ']') {
            ++pos;
            break;
        }
        items.push_back(parse_value(s, pos, line));
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == ',') {
            ++pos;
            continue;
        }
        if (pos < s.size() && s[pos] == ']') {
            ++pos;
            break;
        }
        throw ConfigError(line, "expected ',' or ']' in array");
    }
    return ConfigValue{std::move(items)};
}

inline ConfigValue parse_value(const std::string& s, std::size_t& pos, int line) {
    skip_ws(s, pos);
    if (pos >= s.size()) throw ConfigError(line, "missing value");
    const char c = s[pos];
    if (c == '[') return parse_array(s, pos, line);
    if (c == '"') {
        ++pos;
        std::string out;
        while (pos < s.size() && s[pos] != '"') {
            if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
            out.push_back(s[pos++]);
        }
        if (pos >= s.size()) throw ConfigError(line, "unterminated string");
        ++pos;
        return ConfigValue{out};
    }
    // Bare token up to a delimiter.
    std::size_t end = pos;
    while (end < s.size() && s[end] != ',' && s[end] != ']' && s[end] != '#' && s[end] != '=') ++end;
    std::string token = s.substr(pos, end - pos);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.pop_back();
    pos = end;
    if (token.empty()) throw ConfigError(line, "missing value");
    if (token == "true") return ConfigValue{true};
    if (token == "false") return ConfigValue{false};
    char* parse_end = nullptr;
    const double num = std::strtod(token.c_str(), &parse_end);
    if (parse_end == token.c_str() + token.size()) return ConfigValue{num};
    return ConfigValue{token};
}

}  // namespace detail

inline ConfigTree parse_config_text(const std::string& text) {
    ConfigTree tree;
    tree[""];
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            // Allow '#' inside quoted strings.
            bool in_quote = false;
            std::size_t cut = std::string::npos;
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (line[k] == '"') in_quote = !in_quote;
                if (line[k] == '#' && !in_quote) {
                    cut = k;
                    break;
                }
            }
            if (cut != std::string::npos) line = line.substr(0, cut);
        }
        std::size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        line = line.substr(b, e - b);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section.empty()) throw ConfigError(line_no, "empty section name");
            tree[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
        std::string key = line.substr(0, eq);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
        if (key.empty()) throw ConfigError(line_no, "empty key");
        std::size_t pos = eq + 1;
        const ConfigValue value = detail::parse_value(line, pos, line_no);
        detail::skip_ws(line, pos);
        if (pos != line.size()) throw ConfigError(line_no, "trailing characters after value");
        if (tree[section].count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        tree[section].emplace(std::move(key), value);
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Tree -> text. Machine files carry 17 significant digits.

namespace detail {

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline bool needs_quotes(const std::string& s) {
    if (s.empty() || s == "true" || s == "false") return true;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) return true;  // would re-parse as a number
    for (char c : s)
        if (c == ',' || c == ']' || c == '[' || c == '#' || c == '"' || c == '=') return true;
    return false;
}

inline void write_value(std::ostringstream& out, const ConfigValue& value) {
    if (std::holds_alternative<double>(value.v)) {
        out << format_number(std::get<double>(value.v));
    } else if (std::holds_alternative<bool>(value.v)) {
        out << (std::get<bool>(value.v) ? "true" : "false");
    } else if (std::holds_alternative<std::string>(value.v)) {
        const auto& s = std::get<std::string>(value.v);
        if (needs_quotes(s)) {
            out << '"';
            for (char c : s) {
                if (c == '"' || c == '\\') out << '\\';
                out << c;
            }
            out << '"';
        } else {
            out << s;
        }
    } else {
        out << '[';
        const auto& items = std::get<std::vector<ConfigValue>>(value.v);
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (k) out << ", ";
            write_value(out, items[k]);
        }
        out << ']';
    }
}

}  // namespace detail

inline std::string serialize_config_tree(const ConfigTree& tree) {
    std::ostringstream out;
    const auto write_section = [&](const ConfigSection& section) {
        for (const auto& [key, value] : section) {
            out << key << " = ";
            detail::write_value(out, value);
            out << '\n';
        }
    };
    if (const auto root = tree.find(""); root != tree.end()) write_section(root->second);
    for (const auto& [name, section] : tree) {
        if (name.empty()) continue;
        out << '\n' << '[' << name << ']' << '\n';
        write_section(section);
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Typed experiment configuration.

struct StrategyConfig {
    std::string name = "sigma_star";  // sigma_star | blackwell | waypoint | block | stationary
    std::optional<double> kappa;
    std::optional<long> t0;
    std::optional<double> waypoint_delta;
    std::optional<std::size_t> safe_action;
    std::optional<std::vector<double>> mix;  // stationary
};

struct AdversaryConfig {
    std::string name = "stationary_uniform";
    std::optional<std::vector<double>> weights;       // stationary
    std::optional<std::vector<std::size_t>> script;   // scripted
};

struct ExperimentConfig {
    std::string scenario = "convex_demo";
    std::optional<double> alpha;
    std::optional<double> alpha_prime;
    StrategyConfig strategy;
    AdversaryConfig adversary;
    long horizon = 10000;
    long runs = 100;
    std::uint64_t base_seed = 1;
    std::string output_dir = "out";
    long trace_stride = 0;  // 0: automatic
    int grid_resolution = 400;
    int parallel = 0;  // 0: all cores

    void validate() const {
        if (horizon < 1) throw ConfigError("horizon must be >= 1");
        if (runs < 1) throw ConfigError("runs must be >= 1");
        if (grid_resolution < 2) throw ConfigError("grid_resolution must be >= 2");
        if (trace_stride < 0) throw ConfigError("trace_stride must be >= 0");
        if (parallel < 0) throw ConfigError("parallel must be >= 0");
    }
};

namespace detail {

inline long as_integer(const ConfigValue& v, const std::string& key) {
    const double x = v.as_number(key);
    const long n = static_cast<long>(x);
    if (static_cast<double>(n) != x) throw ConfigError("field '" + key + "' must be an integer");
    return n;
}

}  // namespace detail

inline ExperimentConfig experiment_from_tree(const ConfigTree& tree) {
    ExperimentConfig cfg;
    for (const auto& [section, entries] : tree) {
        if (section.empty()) {
            for (const auto& [key, value] : entries) {
                if (key == "scenario") cfg.scenario = value.as_string(key);
                else if (key == "alpha") cfg.alpha = value.as_number(key);
                else if (key == "alpha_prime") cfg.alpha_prime = value.as_number(key);
                else if (key == "horizon") cfg.horizon = detail::as_integer(value, key);
                else if (key == "runs") cfg.runs = detail::as_integer(value, key);
                else if (key == "base_seed") cfg.base_seed = static_cast<std::uint64_t>(detail::as_integer(value, key));
                else if (key == "output_dir") cfg.output_dir = value.as_string(key);
                else if (key == "trace_stride") cfg.trace_stride = detail::as_integer(value, key);
                else if (key == "grid_resolution") cfg.grid_resolution = static_cast<int>(detail::as_integer(value, key));
                else if (key == "parallel") cfg.parallel = static_cast<int>(detail::as_integer(value, key));
                else throw ConfigError("unknown key '" + key + "'");
            }
        } else if (section == "strategy") {
            for (const auto& [key, value] : entries) {
                if (key == "name") cfg.strategy.name = value.as_string(key);
                else if (key == "kappa") cfg.strategy.kappa = value.as_number(key);
                else if (key == "t0") cfg.strategy.t0 = detail::as_integer(value, key);
                else if (key == "delta") cfg.strategy.waypoint_delta = value.as_number(key);
                else if (key == "safe_action") cfg.strategy.safe_action = static_cast<std::size_t>(detail::as_integer(value, key));
                else if (key == "mix") cfg.strategy.mix = value.as_number_array(key);
                else throw ConfigError("unknown key 'strategy." + key + "'");
            }
        } else if (section == "adversary") {
            for (const auto& [key, value] : entries) {
                if (key == "name") cfg.adversary.name = value.as_string(key);
                else if (key == "weights") cfg.adversary.weights = value.as_number_array(key);
                else if (key == "script") {
                    std::vector<std::size_t> script;
                    for (const auto& e : value.as_array(key))
                        script.push_back(static_cast<std::size_t>(detail::as_integer(e, key)));
                    cfg.adversary.script = std::move(script);
                } else {
                    throw ConfigError("unknown key 'adversary." + key + "'");
                }
            }
        } else {
            throw ConfigError("unknown section '" + section + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline ConfigTree experiment_to_tree(const ExperimentConfig& cfg) {
    ConfigTree tree;
    auto& root = tree[""];
    root["scenario"] = ConfigValue{cfg.scenario};
    if (cfg.alpha) root["alpha"] = ConfigValue{*cfg.alpha};
    if (cfg.alpha_prime) root["alpha_prime"] = ConfigValue{*cfg.alpha_prime};
    root["horizon"] = ConfigValue{static_cast<double>(cfg.horizon)};
    root["runs"] = ConfigValue{static_cast<double>(cfg.runs)};
    root["base_seed"] = ConfigValue{static_cast<double>(cfg.base_seed)};
    root["output_dir"] = ConfigValue{cfg.output_dir};
    root["trace_stride"] = ConfigValue{static_cast<double>(cfg.trace_stride)};
    root["grid_resolution"] = ConfigValue{static_cast<double>(cfg.grid_resolution)};
    root["parallel"] = ConfigValue{static_cast<double>(cfg.parallel)};

    auto& strat = tree["strategy"];
    strat["name"] = ConfigValue{cfg.strategy.name};
    if (cfg.strategy.kappa) strat["kappa"] = ConfigValue{*cfg.strategy.kappa};
    if (cfg.strategy.t0) strat["t0"] = ConfigValue{static_cast<double>(*cfg.strategy.t0)};
    if (cfg.strategy.waypoint_delta) strat["delta"] = ConfigValue{*cfg.strategy.waypoint_delta};
    if (cfg.strategy.safe_action)
        strat["safe_action"] = ConfigValue{static_cast<double>(*cfg.strategy.safe_action)};
    if (cfg.strategy.mix) {
        std::vector<ConfigValue> arr;
        for (double w : *cfg.strategy.mix) arr.push_back(ConfigValue{w});
        strat["mix"] = ConfigValue{std::move(arr)};
    }

    auto& adv = tree["adversary"];
    adv["name"] = ConfigValue{cfg.adversary.name};
    if (cfg.adversary.weights) {
        std::vector<ConfigValue> arr;
        for (double w : *cfg.adversary.weights) arr.push_back(ConfigValue{w});
        adv["weights"] = ConfigValue{std::move(arr)};
    }
    if (cfg.adversary.script) {
        std::vector<ConfigValue> arr;
        for (std::size_t s : *cfg.adversary.script) arr.push_back(ConfigValue{static_cast<double>(s)});
        adv["script"] = ConfigValue{std::move(arr)};
    }
    return tree;
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    return experiment_from_tree(parse_config_text(text));
}


inline std::string serialize_experiment_config(const ExperimentConfig& cfg) {
    return serialize_config_tree(experiment_to_tree(cfg));
}

// ---------------------------------------------------------------------------
// Scenario serialization, so built-ins can be dumped, edited, and re-read.

inline ConfigTree scenario_to_tree(const Scenario& sc) {
    ConfigTree tree;
    auto& root = tree["scenario"];
    root["name"] = ConfigValue{sc.name};
    root["alpha"] = ConfigValue{sc.alpha};
    root["alpha_prime"] = ConfigValue{sc.alpha_prime};
    root["expectation"] = ConfigValue{to_string(sc.expectation)};

    auto& game = tree["scenario.game"];
    {
        std::vector<ConfigValue> rows, cols, tensor;
        for (const auto& n : sc.game.row_names) rows.push_back(ConfigValue{n});
        for (const auto& n : sc.game.col_names) cols.push_back(ConfigValue{n});
        for (std::size_t i = 0; i < sc.game.rows(); ++i) {
            std::vector<ConfigValue> row;
            for (std::size_t j = 0; j < sc.game.cols(); ++j) {
                std::vector<ConfigValue> entry;
                for (double x : sc.game.at(i, j)) entry.push_back(ConfigValue{x});
                row.push_back(ConfigValue{std::move(entry)});
            }
            tensor.push_back(ConfigValue{std::move(row)});
        }
        game["rows"] = ConfigValue{std::move(rows)};
        game["cols"] = ConfigValue{std::move(cols)};
        game["payoff"] = ConfigValue{std::move(tensor)};
    }

    auto& target = tree["scenario.target"];
    if (std::holds_alternative<SinglePoint>(sc.target)) {
        target["type"] = ConfigValue{std::string("point")};
        std::vector<ConfigValue> c;
        for (double x : std::get<SinglePoint>(sc.target).p) c.push_back(ConfigValue{x});
        target["center"] = ConfigValue{std::move(c)};
    } else if (std::holds_alternative<Ball>(sc.target)) {
        const auto& b = std::get<Ball>(sc.target);
        target["type"] = ConfigValue{std::string("ball")};
        std::vector<ConfigValue> c;
        for (double x : b.center) c.push_back(ConfigValue{x});
        target["center"] = ConfigValue{std::move(c)};
        target["radius"] = ConfigValue{b.radius};
    } else {
        throw ConfigError("scenario target type is not serializable");
    }

    auto& region = tree["scenario.region"];
    region["closed"] = ConfigValue{sc.region.closed_membership};
    if (std::holds_alternative<OpenHalfspaceIntersection>(sc.region.shape)) {
        region["type"] = ConfigValue{std::string("halfspaces")};
        std::vector<ConfigValue> normals, offsets;
        for (const auto& h : std::get<OpenHalfspaceIntersection>(sc.region.shape).strict_below) {
            std::vector<ConfigValue> n;
            for (double x : h.normal) n.push_back(ConfigValue{x});
            normals.push_back(ConfigValue{std::move(n)});
            offsets.push_back(ConfigValue{h.offset});
        }
        region["normals"] = ConfigValue{std::move(normals)};
        region["offsets"] = ConfigValue{std::move(offsets)};
    } else {
        region["type"] = ConfigValue{std::string("boxes")};
        std::vector<ConfigValue> lows, highs;
        for (const auto& b : std::get<OpenBoxUnion>(sc.region.shape).boxes) {
            std::vector<ConfigValue> lo, hi;
            for (double x : b.lo) lo.push_back(ConfigValue{x});
            for (double x : b.hi) hi.push_back(ConfigValue{x});
            lows.push_back(ConfigValue{std::move(lo)});
            highs.push_back(ConfigValue{std::move(hi)});
        }
        region["lo"] = ConfigValue{std::move(lows)};
        region["hi"] = ConfigValue{std::move(highs)};
    }

    auto& box = tree["scenario.bounding_box"];
    {
        std::vector<ConfigValue> lo, hi;
        for (double x : sc.bounding_box.lo) lo.push_back(ConfigValue{x});
        for (double x : sc.bounding_box.hi) hi.push_back(ConfigValue{x});
        box["lo"] = ConfigValue{std::move(lo)};
        box["hi"] = ConfigValue{std::move(hi)};
    }
    return tree;
}

inline Scenario scenario_from_tree(const ConfigTree& tree) {
    const auto section = [&](const std::string& name) -> const ConfigSection& {
        const auto it = tree.find(name);
        if (it == tree.end()) throw ConfigError("missing section '" + name + "'");
        return it->second;
    };
    const auto field = [](const ConfigSection& s, const std::string& key) -> const ConfigValue& {
        const auto it = s.find(key);
        if (it == s.end()) throw ConfigError("missing field '" + key + "'");
        return it->second;
    };

    Scenario sc;
    const auto& root = section("scenario");
    sc.name = field(root, "name").as_string("name");
    sc.alpha = field(root, "alpha").as_number("alpha");
    sc.alpha_prime = field(root, "alpha_prime").as_number("alpha_prime");

    const auto& game = section("scenario.game");
    std::vector<std::string> rows, cols;
    for (const auto& r : field(game, "rows").as_array("rows")) rows.push_back(r.as_string("rows"));
    for (const auto& c : field(game, "cols").as_array("cols")) cols.push_back(c.as_string("cols"));
    std::vector<std::vector<Point>> tensor;
    for (const auto& row : field(game, "payoff").as_array("payoff")) {
        std::vector<Point> out_row;
        for (const auto& entry : row.as_array("payoff")) out_row.push_back(entry.as_number_array("payoff"));
        tensor.push_back(std::move(out_row));
    }
    sc.game = VectorPayoffGame::from_tensor(std::move(tensor), std::move(rows), std::move(cols));

    const auto& target = section("scenario.target");
    const std::string ttype = field(target, "type").as_string("type");
    if (ttype == "point") {
        sc.target = SinglePoint{field(target, "center").as_number_array("center")};
    } else if (ttype == "ball") {
        sc.target = Ball{field(target, "center").as_number_array("center"),
                         field(target, "radius").as_number("radius")};
    } else {
        throw ConfigError("unknown target type '" + ttype + "'");
    }

    const auto& region = section("scenario.region");
    sc.region.closed_membership = field(region, "closed").as_bool("closed");
    const std::string rtype = field(region, "type").as_string("type");
    if (rtype == "halfspaces") {
        OpenHalfspaceIntersection shape;
        const auto& normals = field(region, "normals").as_array("normals");
        const auto& offsets = field(region, "offsets").as_array("offsets");
        if (normals.size() != offsets.size()) throw ConfigError("normals and offsets differ in length");
        for (std::size_t k = 0; k < normals.size(); ++k)
            shape.strict_below.push_back(
                Hyperplane{normals[k].as_number_array("normals"), offsets[k].as_number("offsets")});
        sc.region.shape = std::move(shape);
    } else if (rtype == "boxes") {
        OpenBoxUnion shape;
        const auto& lows = field(region, "lo").as_array("lo");
        const auto& highs = field(region, "hi").as_array("hi");
        if (lows.size() != highs.size()) throw ConfigError("lo and hi differ in length");
        for (std::size_t k = 0; k < lows.size(); ++k)
            shape.boxes.push_back(OpenBox{lows[k].as_number_array("lo"), highs[k].as_number_array("hi")});
        sc.region.shape = std::move(shape);
    } else {
        throw ConfigError("unknown region type '" + rtype + "'");
    }

    const auto& box = section("scenario.bounding_box");
    sc.bounding_box.lo = field(box, "lo").as_number_array("lo");
    sc.bounding_box.hi = field(box, "hi").as_number_array("hi");
    sc.game.validate();
    return sc;
}

// ---------------------------------------------------------------------------
// A config file holds either a built-in scenario name or an inline scenario
// definition ([scenario.*] sections in the same format `scenarios --dump`
// prints). Inline scenarios carry no waypoint plan.

struct LoadedExperiment {
    ExperimentConfig config;
    std::optional<Scenario> inline_scenario;
};

inline LoadedExperiment load_experiment_text(const std::string& text) {
    const ConfigTree tree = parse_config_text(text);
    ConfigTree scenario_tree, experiment_tree;
    for (const auto& [name, section] : tree) {
        if (name == "scenario" || name.rfind("scenario.", 0) == 0)
            scenario_tree[name] = section;
        else
            experiment_tree[name] = section;
    }
    LoadedExperiment out;
    if (!scenario_tree.empty()) out.inline_scenario = scenario_from_tree(scenario_tree);
    out.config = experiment_from_tree(experiment_tree);
    if (out.inline_scenario) out.config.scenario = out.inline_scenario->name;
    return out;
}

// ---------------------------------------------------------------------------
// Strategy and adversary construction from configuration.

inline Scenario build_configured_scenario(const ExperimentConfig& cfg) {
    ScenarioOverrides ov;
    ov.alpha = cfg.alpha;
    ov.alpha_prime = cfg.alpha_prime;
    ov.waypoint_t0 = cfg.strategy.t0;
    ov.waypoint_delta = cfg.strategy.waypoint_delta;
    return build_scenario(cfg.scenario, ov);
}

inline Scenario build_configured_scenario(const LoadedExperiment& loaded) {
    if (loaded.inline_scenario.has_value()) return *loaded.inline_scenario;
    return build_configured_scenario(loaded.config);
}

inline StrategyState build_strategy(const Scenario& sc, const StrategyConfig& cfg) {
    if (cfg.name == "sigma_star") {
        SigmaStarOptions opts;
        opts.kappa = cfg.kappa;
        opts.safe_action_index = cfg.safe_action;
        opts.delta = 0.0;
        return make_sigma_star_state(sc.game, sc.region, sc.target, opts);
    }
    if (cfg.name == "blackwell") return make_blackwell_state(sc.game, sc.target);
    if (cfg.name == "waypoint") {
        if (!sc.waypoint_plan.has_value())
            throw ConfigError("scenario '" + sc.name + "' has no waypoint plan");
        return make_waypoint_state(sc.game, *sc.waypoint_plan);
    }
    if (cfg.name == "block") return BlockState{};
    if (cfg.name == "stationary") {
        if (!cfg.mix.has_value()) throw ConfigError("stationary strategy needs 'mix'");
        MixedAction m{*cfg.mix};
        m.validate();
        return StationaryStrategyState{std::move(m)};
    }
    throw ConfigError("unknown strategy '" + cfg.name + "'");
}

inline AdversaryModel build_adversary(const Scenario& sc, const AdversaryConfig& cfg) {
    if (cfg.name == "stationary_uniform") return StationaryAdversary{MixedAction::uniform(sc.game.cols())};
    if (cfg.name == "stationary_skewed") {
        if (sc.game.cols() != 2) throw ConfigError("stationary_skewed expects a two-column game");
        return StationaryAdversary{MixedAction{{0.9, 0.1}}};
    }
    if (cfg.name == "stationary") {
        if (!cfg.weights.has_value()) throw ConfigError("stationary adversary needs 'weights'");
        MixedAction m{*cfg.weights};
        m.validate();
        return StationaryAdversary{std::move(m)};
    }
    if (cfg.name == "scripted_left") return ScriptedAdversary{{0}};
    if (cfg.name == "scripted_right") return ScriptedAdversary{{sc.game.cols() - 1}};
    if (cfg.name == "scripted_alternate") {
        std::vector<std::size_t> script;
        for (std::size_t j = 0; j < sc.game.cols(); ++j) script.push_back(j);
        return ScriptedAdversary{std::move(script)};
    }
    if (cfg.name == "scripted") {
        if (!cfg.script.has_value()) throw ConfigError("scripted adversary needs 'script'");
        for (std::size_t j : *cfg.script)
            if (j >= sc.game.cols()) throw ConfigError("script action out of range");
        return ScriptedAdversary{*cfg.script};
    }
    if (cfg.name == "adaptive_push") return AdaptivePushAdversary{};
    throw ConfigError("unknown adversary '" + cfg.name + "'");
}

}  // namespace approach
