#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "approach/game.hpp"
#include "approach/geometry.hpp"

namespace approach {

// ---------------------------------------------------------------------------
// Blackwell's approachability strategy toward a convex target.

struct SeparationCertificate {
    Point projection_point;  // y, nearest target point to the average
    Point direction;         // unit vector from y toward the average
    double scalar_value;     // min_p max_j direction.U(p, j)
    MixedAction chosen_mix;
};

// Worst violation of the separating half-space over the opponent's columns;
// nonpositive (up to solver tolerance) whenever the certificate is valid.
inline double certificate_violation(const SeparationCertificate& c, const VectorPayoffGame& game) {
    double worst = -std::numeric_limits<double>::infinity();
    const double bound = dot(c.direction, c.projection_point);
    for (std::size_t j = 0; j < game.cols(); ++j)
        worst = std::max(worst, dot(c.direction, expected_payoff_vs_column(game, c.chosen_mix, j)) - bound);
    return worst;
}

struct BlackwellState {
    long stage_count = 0;
    Point running_average;  // own-observed average payoff
    ConvexBody target;
    MixedAction fallback_action;  // replayed when the average is already in the target
};

inline BlackwellState make_blackwell_state(const VectorPayoffGame& game, ConvexBody target) {
    BlackwellState st;
    st.running_average.assign(game.dim(), 0.0);
    st.target = std::move(target);
    st.fallback_action = MixedAction::uniform(game.rows());
    return st;
}

struct StrategyDecision {
    MixedAction action;
    std::optional<SeparationCertificate> certificate;
};

inline StrategyDecision blackwell_step(const BlackwellState& st, const VectorPayoffGame& game) {
    if (st.stage_count == 0 || distance_to_body(st.running_average, st.target) <= 1e-12)
        return {st.fallback_action, std::nullopt};
    const Point y = project(st.running_average, st.target);
    const Point diff = sub(st.running_average, y);
    const double n = norm2(diff);
    if (n <= 1e-12) return {st.fallback_action, std::nullopt};
    const Point lambda = scale(diff, 1.0 / n);
    const auto sol = solve_matrix_game(scalarize(game, lambda), 1e-9);
    return {sol.optimal_row, SeparationCertificate{y, lambda, sol.value, sol.optimal_row}};
}

inline void blackwell_observe(BlackwellState& st, const Point& realized_payoff, const MixedAction& played) {
    const double t1 = static_cast<double>(st.stage_count + 1);
    for (std::size_t k = 0; k < st.running_average.size(); ++k)
        st.running_average[k] += (realized_payoff[k] - st.running_average[k]) / t1;
    ++st.stage_count;
    st.fallback_action = played;
}

// ---------------------------------------------------------------------------
// The constrained strategy: play the safe action on H*, otherwise follow the
// inner approachability strategy on the virtual history.

struct ConstrainedState {
    long stage_count = 0;   // t
    Point overall_average;  // g_t
    long safe_count = 0;    // f(h_t)
    Point safe_average;     // alpha_t, meaningful once safe_count >= 1
    BlackwellState inner;   // its running_average is beta_t over t - f stages
    MixedAction safe_action;
    double threshold_coefficient = 3.0;  // kappa; H* test is clearance <= kappa / t
    double delta = 0.0;                  // safety gap, diagnostic
};

struct SigmaStarOptions {
    std::optional<std::size_t> safe_action_index;  // default: lowest-index safe action
    std::optional<double> kappa;                   // default: 3 * payoff_bound
    double delta = 0.0;
};

inline ConstrainedState make_sigma_star_state(const VectorPayoffGame& game, const Region& D,
                                              ConvexBody target, const SigmaStarOptions& opts = {}) {
    ConstrainedState st;
    st.overall_average.assign(game.dim(), 0.0);
    st.safe_average.assign(game.dim(), 0.0);
    st.inner = make_blackwell_state(game, std::move(target));
    std::size_t safe_index;
    if (opts.safe_action_index.has_value()) {
        safe_index = *opts.safe_action_index;
    } else {
        const auto safe = find_safe_actions(game, D);
        if (safe.empty()) throw std::invalid_argument("sigma_star: no safe action (C2 fails)");
        safe_index = safe.front();
    }
    st.safe_action = MixedAction::pure(game.rows(), safe_index);
    st.threshold_coefficient = opts.kappa.value_or(3.0 * game.payoff_bound);
    st.delta = opts.delta;
    return st;
}

struct SigmaStarDecision {
    MixedAction action;
    bool safe_branch = false;  // pass back to sigma_star_observe
    std::optional<SeparationCertificate> certificate;
};

// The average payoff stays in F by construction, so the H* membership test
// uses the region clearance directly.
inline SigmaStarDecision sigma_star_step(const ConstrainedState& st, const VectorPayoffGame& game,
                                         const Region& D) {
    const bool in_hstar =
        st.stage_count == 0 ||
        region_clearance(st.overall_average, D) <= st.threshold_coefficient / static_cast<double>(st.stage_count);
    if (in_hstar) return {st.safe_action, true, std::nullopt};
    auto inner = blackwell_step(st.inner, game);
    return {std::move(inner.action), false, std::move(inner.certificate)};
}

inline void sigma_star_observe(ConstrainedState& st, const Point& realized_payoff, bool branch_was_safe,
                               const MixedAction& played) {
    const double t1 = static_cast<double>(st.stage_count + 1);
    for (std::size_t k = 0; k < st.overall_average.size(); ++k)
        st.overall_average[k] += (realized_payoff[k] - st.overall_average[k]) / t1;
    ++st.stage_count;
    if (branch_was_safe) {
        const double f1 = static_cast<double>(st.safe_count + 1);
        for (std::size_t k = 0; k < st.safe_average.size(); ++k)
            st.safe_average[k] += (realized_payoff[k] - st.safe_average[k]) / f1;
        ++st.safe_count;
    } else {
        blackwell_observe(st.inner, realized_payoff, played);
    }
}

// Residual of g = (f/t) alpha + ((t-f)/t) beta; zero up to rounding.
inline double decomposition_residual(const ConstrainedState& st) {
    if (st.stage_count == 0) return 0.0;
    const double t = static_cast<double>(st.stage_count);
    const double f = static_cast<double>(st.safe_count);
    double worst = 0.0;
    for (std::size_t k = 0; k < st.overall_average.size(); ++k) {
        const double mix = (f / t) * st.safe_average[k] + ((t - f) / t) * st.inner.running_average[k];
        worst = std::max(worst, std::abs(st.overall_average[k] - mix));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Waypoint strategy (intermediate goals through a nonconvex constraint set).

// A checkpoint is an open set: either a Region or a convex body whose strict
// interior is tested.
using OpenTarget = std::variant<Region, ConvexBody>;

inline bool open_target_contains(const OpenTarget& t, const Point& x) {
    if (std::holds_alternative<Region>(t)) return region_contains(std::get<Region>(t), x);
    const auto& body = std::get<ConvexBody>(t);
    if (std::holds_alternative<Ball>(body)) {
        const auto& b = std::get<Ball>(body);
        return dist2(x, b.center) < b.radius;
    }
    return body_contains(x, body, 0.0);
}

inline double open_target_support(const OpenTarget& t, const Point& dir) {
    if (std::holds_alternative<ConvexBody>(t)) return support(std::get<ConvexBody>(t), dir);
    const auto& region = std::get<Region>(t);
    if (!std::holds_alternative<OpenBoxUnion>(region.shape))
        throw std::invalid_argument("open_target_support: unbounded region");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& box : std::get<OpenBoxUnion>(region.shape).boxes) {
        double s = 0.0;
        for (std::size_t k = 0; k < dir.size(); ++k) s += dir[k] * (dir[k] >= 0.0 ? box.hi[k] : box.lo[k]);
        best = std::max(best, s);
    }
    return best;
}

inline ConvexBody open_target_closure_body(const OpenTarget& t) {
    if (std::holds_alternative<ConvexBody>(t)) return std::get<ConvexBody>(t);
    const auto& region = std::get<Region>(t);
    if (!std::holds_alternative<OpenBoxUnion>(region.shape))
        throw std::invalid_argument("open_target_closure_body: unbounded region");
    const auto& boxes = std::get<OpenBoxUnion>(region.shape).boxes;
    HullOfPoints hull;
    for (const auto& box : boxes) {
        const std::size_t n = box.lo.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Point corner(n);
            for (std::size_t k = 0; k < n; ++k) corner[k] = (mask >> k) & 1 ? box.hi[k] : box.lo[k];
            hull.vertices.push_back(std::move(corner));
        }
    }
    return hull;
}

struct WaypointPlan {
    MixedAction safe_mix;                   // x0
    std::vector<MixedAction> phase_mixes;   // x1..xm
    std::vector<OpenTarget> checkpoints;    // A1..Am, with Am inside A cap D
    long initial_duration = 1;              // tau0 = T
    ConvexBody final_target;                // closure(A cap D)
    double delta = 0.1;                     // the dilation radius of condition (D2)
    std::optional<double> min_crossing;     // Lambda, informational

    std::size_t phases() const { return phase_mixes.size(); }

    void validate(const VectorPayoffGame& game) const {
        safe_mix.validate();
        if (phase_mixes.empty() || phase_mixes.size() != checkpoints.size())
            throw std::invalid_argument("WaypointPlan: phase_mixes and checkpoints must have equal length m >= 1");
        if (initial_duration < 1) throw std::invalid_argument("WaypointPlan: initial_duration < 1");
        if (safe_mix.weights.size() != game.rows())
            throw std::invalid_argument("WaypointPlan: safe_mix does not match the game");
        for (const auto& m : phase_mixes) {
            m.validate();
            if (m.weights.size() != game.rows()) throw std::invalid_argument("WaypointPlan: mix size mismatch");
        }
    }
};

struct WaypointState {
    std::shared_ptr<const WaypointPlan> plan;
    std::size_t current_phase = 0;          // 0..m
    std::vector<long> phase_entry_stages;   // realized tau_0..tau_{phase-1}
    BlackwellState inner;                   // active once current_phase == m
    long stage_count = 0;
    Point overall_average;                  // g_t
};

inline WaypointState make_waypoint_state(const VectorPayoffGame& game, WaypointPlan plan) {
    plan.validate(game);
    WaypointState st;
    st.plan = std::make_shared<const WaypointPlan>(std::move(plan));
    st.overall_average.assign(game.dim(), 0.0);
    return st;
}

// Phase transitions fire on the realized overall average g_t; each stopping
// time is strictly later than the previous one.
inline void waypoint_advance(WaypointState& st, const VectorPayoffGame& game) {
    const auto& plan = *st.plan;
    const std::size_t m = plan.phases();
    if (st.current_phase == 0 && st.stage_count >= plan.initial_duration) {
        st.phase_entry_stages.push_back(plan.initial_duration);
        st.current_phase = 1;
    }
    while (st.current_phase >= 1 && st.current_phase < m &&
           st.phase_entry_stages.back() < st.stage_count &&
           open_target_contains(plan.checkpoints[st.current_phase - 1], st.overall_average)) {
        st.phase_entry_stages.push_back(st.stage_count);
        ++st.current_phase;
    }
    if (st.current_phase == m && st.inner.running_average.empty()) {
        // The final phase continues on the realized average, so the inner
        // strategy drives the true g_t toward the target.
        st.inner = make_blackwell_state(game, plan.final_target);
        st.inner.stage_count = st.stage_count;
        st.inner.running_average = st.overall_average;
        st.inner.fallback_action = plan.phase_mixes.back();
    }
}

inline StrategyDecision waypoint_step(WaypointState& st, const VectorPayoffGame& game) {
    waypoint_advance(st, game);
    const auto& plan = *st.plan;
    if (st.current_phase == 0) return {plan.safe_mix, std::nullopt};
    if (st.current_phase < plan.phases()) return {plan.phase_mixes[st.current_phase - 1], std::nullopt};
    return blackwell_step(st.inner, game);
}

inline void waypoint_observe(WaypointState& st, const Point& realized_payoff, const MixedAction& played) {
    const double t1 = static_cast<double>(st.stage_count + 1);
    for (std::size_t k = 0; k < st.overall_average.size(); ++k)
        st.overall_average[k] += (realized_payoff[k] - st.overall_average[k]) / t1;
    ++st.stage_count;
    if (st.current_phase == st.plan->phases() && !st.inner.running_average.empty())
        blackwell_observe(st.inner, realized_payoff, played);
}

// ---------------------------------------------------------------------------
// Waypoint plan sufficient conditions: per-leg path-blocking and containment.

struct WaypointLegCheck {
    bool c2a = false;         // conv[cl(A_l) u B(R1(x_{l+1}), delta)] \ A_{l+1} disconnected
    bool c2a_checked = true;  // false when the scenario is not 2D
    bool c2a_absorbed = false;  // degenerate pass: B(R1(x_{l+1}), delta) inside A_{l+1}
    bool c2b = false;         // conv[A_l u B(A_{l+1}, delta)] inside D
};

struct WaypointConditionReport {
    std::vector<WaypointLegCheck> legs;
    std::optional<bool> d1;  // A cap D approachable; nullopt when unchecked

    bool all_pass() const {
        for (const auto& l : legs)
            if ((l.c2a_checked && !l.c2a) || !l.c2b) return false;
        return !d1.has_value() || *d1;
    }
};

struct WaypointCheckOptions {
    int support_directions = 512;
    int approachability_directions = 0;  // 0: by dimension
    double tolerance = 1e-7;
};

inline WaypointConditionReport check_waypoint_conditions(const WaypointPlan& plan,
                                                         const VectorPayoffGame& game,
                                                         const ConvexBody& target, const Region& D,
                                                         const GridOracle& oracle,
                                                         const WaypointCheckOptions& opts = {}) {
    plan.validate(game);
    WaypointConditionReport report;
    const std::size_t m = plan.phases();
    const bool planar = game.dim() == 2;

    const auto body_of_leg = [&](std::size_t ell) -> ConvexBody {
        if (ell == 0) return response_set(game, plan.safe_mix);  // A_0 = R1(x_0)
        return open_target_closure_body(plan.checkpoints[ell - 1]);
    };

    for (std::size_t ell = 0; ell < m; ++ell) {
        WaypointLegCheck leg;
        const ConvexBody a_ell = body_of_leg(ell);
        const ConvexBody r_next = response_set(game, plan.phase_mixes[ell]);
        const OpenTarget& a_next = plan.checkpoints[ell];

        if (planar) {
            // Degenerate absorption: the dilated response set already lies in
            // the next checkpoint, so every path into it ends inside A_{l+1}.
            bool absorbed = true;
            for (const auto& v : body_extreme_points(r_next)) {
                for (int k = 0; k < 64 && absorbed; ++k) {
                    const double th = 2.0 * 3.14159265358979323846 * k / 64;
                    const Point z{v[0] + plan.delta * std::cos(th), v[1] + plan.delta * std::sin(th)};
                    absorbed = open_target_contains(a_next, z);
                }
                if (!absorbed) break;
            }
            if (absorbed) {
                leg.c2a = true;
                leg.c2a_absorbed = true;
            } else {
                const SampledConvexUnion hull({{a_ell, 0.0}, {r_next, plan.delta}}, opts.support_directions);
                const auto pred = [&](const Point& z) {
                    return hull.contains(z) && !open_target_contains(a_next, z);
                };
                leg.c2a = !grid_path_connected(pred, oracle);
            }
        } else {
            leg.c2a_checked = false;
        }

        {
            const SampledConvexUnion hull(
                {{a_ell, 0.0}, {open_target_closure_body(a_next), plan.delta}}, opts.support_directions);
            bool inside = true;
            oracle.for_each_node([&](const Point& z) {
                if (inside && hull.contains(z) && !region_contains(D, z)) inside = false;
            });
            leg.c2b = inside;
        }
        report.legs.push_back(leg);
    }

    // (D1) when the target visibly sits inside the closure of D.
    bool target_in_closure = true;
    if (std::holds_alternative<Ball>(target)) {
        const auto& b = std::get<Ball>(target);
        for (int k = 0; k < 32 && target_in_closure; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k / 32;
            Point z = b.center;
            z[0] += b.radius * std::cos(th);
            if (z.size() > 1) z[1] += b.radius * std::sin(th);
            target_in_closure = distance_to_region(z, D) <= 1e-9;
        }
    } else {
        try {
            for (const auto& v : body_extreme_points(target))
                if (distance_to_region(v, D) > 1e-9) target_in_closure = false;
        } catch (const std::invalid_argument&) {
            target_in_closure = false;
        }
    }
    if (target_in_closure) {
        const int dirs = opts.approachability_directions > 0 ? opts.approachability_directions
                                                             : default_direction_count(game.dim());
        report.d1 = check_convex_approachable(game, target, dirs, opts.tolerance);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Reactive two-stage block strategy for the example where (c2b) fails at l=0.

struct BlockState {
    long stage_count = 0;
    int last_opponent_action = -1;
};

// Rows 0 and 1 must be column-independent and the two possible blocks must
// average to the same point.
inline bool block_compatible(const VectorPayoffGame& game) {
    if (game.rows() != 3 || game.cols() != 2) return false;
    for (std::size_t i = 0; i < 2; ++i)
        if (dist2(game.at(i, 0), game.at(i, 1)) > 0.0) return false;
    const Point left = add(game.at(2, 0), game.at(1, 0));
    const Point right = add(game.at(2, 1), game.at(0, 1));
    return dist2(left, right) == 0.0;
}

inline Point block_target(const VectorPayoffGame& game) {
    return scale(add(game.at(2, 0), game.at(1, 0)), 0.5);
}

inline std::size_t block_strategy_step(const BlockState& st, const VectorPayoffGame& game) {
    if (!block_compatible(game)) throw std::invalid_argument("block_strategy_step: game is not block-compatible");
    if (st.stage_count % 2 == 0) return 2;               // odd stages (1-indexed) play B
    return st.last_opponent_action == 0 ? 1 : 0;         // T2 after L, T1 after R
}

inline void block_observe(BlockState& st, std::size_t opponent_action) {
    st.last_opponent_action = static_cast<int>(opponent_action);
    ++st.stage_count;
}

// ---------------------------------------------------------------------------
// Player-2 models. Each sees only the public history (past action pairs).

struct StationaryAdversary {
    MixedAction mix;
};
struct ScriptedAdversary {
    std::vector<std::size_t> script;  // cycled
};
struct AdaptivePushAdversary {};  // drives g_t toward F \ D under a uniform guess of player 1

using AdversaryModel = std::variant<StationaryAdversary, ScriptedAdversary, AdaptivePushAdversary>;

struct PublicHistorySummary {
    long stage_count = 0;
    Point overall_average;  // g_t reconstructed from observed pairs
};

inline MixedAction adversary_step(const AdversaryModel& model, const VectorPayoffGame& game,
                                  const PublicHistorySummary& summary, const Region& D) {
    if (std::holds_alternative<StationaryAdversary>(model)) {
        return std::get<StationaryAdversary>(model).mix;
    }
    if (std::holds_alternative<ScriptedAdversary>(model)) {
        const auto& script = std::get<ScriptedAdversary>(model).script;
        if (script.empty()) throw std::invalid_argument("adversary_step: empty script");
        return MixedAction::pure(game.cols(), script[static_cast<std::size_t>(summary.stage_count) % script.size()]);
    }
    // AdaptivePush: pick the column whose uniform-guess continuation has the
    // least clearance from the complement; ties to the lowest index.
    std::size_t best_j = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < game.cols(); ++j) {
        Point mean(game.dim(), 0.0);
        for (std::size_t i = 0; i < game.rows(); ++i) {
            const Point& u = game.at(i, j);
            for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += u[k] / static_cast<double>(game.rows());
        }
        Point next = mean;
        if (summary.stage_count > 0) {
            const double t1 = static_cast<double>(summary.stage_count + 1);
            next = summary.overall_average;
            for (std::size_t k = 0; k < next.size(); ++k) next[k] += (mean[k] - next[k]) / t1;
        }
        const double score = region_clearance(next, D);
        if (score < best_score - 1e-12) {
            best_score = score;
            best_j = j;
        }
    }
    return MixedAction::pure(game.cols(), best_j);
}

}  // namespace approach
