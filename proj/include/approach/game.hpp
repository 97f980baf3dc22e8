#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "approach/geometry.hpp"
#include "approach/rng.hpp"
#include "approach/vec.hpp"

namespace approach {

struct MixedAction {
    std::vector<double> weights;

    static MixedAction uniform(std::size_t n) {
        MixedAction m;
        m.weights.assign(n, 1.0 / static_cast<double>(n));
        return m;
    }
    static MixedAction pure(std::size_t n, std::size_t index) {
        MixedAction m;
        m.weights.assign(n, 0.0);
        m.weights.at(index) = 1.0;
        return m;
    }

    void validate() const {
        double s = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("MixedAction: negative weight");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("MixedAction: weights sum to " + std::to_string(s));
    }

    std::vector<std::size_t> support(double tol = 1e-15) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > tol) out.push_back(i);
        return out;
    }
};

struct VectorPayoffGame {
    // payoff[i][j] is the n-dimensional outcome of the action pair (i, j).
    std::vector<std::vector<Point>> payoff;
    double payoff_bound = 0.0;  // max componentwise |U|
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;

    std::size_t rows() const { return payoff.size(); }
    std::size_t cols() const { return payoff.empty() ? 0 : payoff.front().size(); }
    std::size_t dim() const { return payoff.empty() || payoff.front().empty() ? 0 : payoff.front().front().size(); }
    const Point& at(std::size_t i, std::size_t j) const { return payoff.at(i).at(j); }

    static VectorPayoffGame from_tensor(std::vector<std::vector<Point>> tensor,
                                        std::vector<std::string> row_names = {},
                                        std::vector<std::string> col_names = {}) {
        VectorPayoffGame g;
        g.payoff = std::move(tensor);
        if (g.payoff.empty() || g.payoff.front().empty()) throw std::invalid_argument("game: empty payoff tensor");
        const std::size_t c = g.payoff.front().size();
        const std::size_t n = g.payoff.front().front().size();
        for (const auto& row : g.payoff) {
            if (row.size() != c) throw std::invalid_argument("game: ragged payoff tensor");
            for (const auto& u : row) {
                if (u.size() != n) throw std::invalid_argument("game: inconsistent payoff dimension");
                for (double v : u) g.payoff_bound = std::max(g.payoff_bound, std::abs(v));
            }
        }
        g.row_names = std::move(row_names);
        g.col_names = std::move(col_names);
        if (g.row_names.empty())
            for (std::size_t i = 0; i < g.rows(); ++i) g.row_names.push_back("r" + std::to_string(i));
        if (g.col_names.empty())
            for (std::size_t j = 0; j < g.cols(); ++j) g.col_names.push_back("c" + std::to_string(j));
        return g;
    }

    // Both players need at least two actions in a real scenario.
    void validate() const {
        if (rows() < 2 || cols() < 2) throw std::invalid_argument("game: both players need at least two actions");
    }
};

inline Point expected_payoff(const VectorPayoffGame& game, const MixedAction& p, const MixedAction& q) {
    if (p.weights.size() != game.rows() || q.weights.size() != game.cols())
        throw std::invalid_argument("expected_payoff: dimension mismatch");
    Point out(game.dim(), 0.0);
    for (std::size_t i = 0; i < game.rows(); ++i) {
        if (p.weights[i] == 0.0) continue;
        for (std::size_t j = 0; j < game.cols(); ++j) {
            const double w = p.weights[i] * q.weights[j];
            if (w == 0.0) continue;
            const Point& u = game.at(i, j);
            for (std::size_t k = 0; k < u.size(); ++k) out[k] += w * u[k];
        }
    }
    return out;
}

// U(p, j) for a fixed column.
inline Point expected_payoff_vs_column(const VectorPayoffGame& game, const MixedAction& p, std::size_t j) {
    Point out(game.dim(), 0.0);
    for (std::size_t i = 0; i < game.rows(); ++i) {
        if (p.weights[i] == 0.0) continue;
        const Point& u = game.at(i, j);
        for (std::size_t k = 0; k < u.size(); ++k) out[k] += p.weights[i] * u[k];
    }
    return out;
}

// R1(p) = conv{U(p, j) : j}
inline ConvexBody response_set(const VectorPayoffGame& game, const MixedAction& p) {
    if (p.weights.size() != game.rows()) throw std::invalid_argument("response_set: dimension mismatch");
    HullOfPoints hull;
    hull.vertices.reserve(game.cols());
    for (std::size_t j = 0; j < game.cols(); ++j) hull.vertices.push_back(expected_payoff_vs_column(game, p, j));
    return hull;
}

// F = conv{U(i, j) : all pairs}
inline ConvexBody feasible_set(const VectorPayoffGame& game) {
    HullOfPoints hull;
    hull.vertices.reserve(game.rows() * game.cols());
    for (std::size_t i = 0; i < game.rows(); ++i)
        for (std::size_t j = 0; j < game.cols(); ++j) hull.vertices.push_back(game.at(i, j));
    return hull;
}

// ---------------------------------------------------------------------------
// Zero-sum scalar matrix game, row player minimizing.

struct GameValueSolution {
    double value = 0.0;
    MixedAction optimal_row;
    MixedAction optimal_col;
    double duality_gap = 0.0;
    int pivots = 0;
};

struct SolverError : std::runtime_error {
    SolverError(std::string what, GameValueSolution incumbent)
        : std::runtime_error(std::move(what)), best(std::move(incumbent)) {}
    GameValueSolution best;
};

namespace detail {

inline double row_play_value(const std::vector<std::vector<double>>& m, const MixedAction& p) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m.front().size(); ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) v += p.weights[i] * m[i][j];
        worst = std::max(worst, v);
    }
    return worst;
}

inline double col_play_value(const std::vector<std::vector<double>>& m, const MixedAction& q) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.size(); ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < m.front().size(); ++j) v += q.weights[j] * m[i][j];
        best = std::min(best, v);
    }
    return best;
}

}  // namespace detail

// v = min_p max_j (p^T M)_j via the classic normalization to an LP, solved by
// a dense primal simplex with Bland's rule. Deterministic for fixed input.
inline GameValueSolution solve_matrix_game(const std::vector<std::vector<double>>& matrix,
                                           double tolerance = 1e-9) {
    if (matrix.empty() || matrix.front().empty()) throw std::invalid_argument("solve_matrix_game: empty matrix");
    if (tolerance <= 0.0) throw std::invalid_argument("solve_matrix_game: tolerance must be positive");
    const std::size_t R = matrix.size();
    const std::size_t C = matrix.front().size();
    for (const auto& row : matrix)
        if (row.size() != C) throw std::invalid_argument("solve_matrix_game: ragged matrix");

    double lo = std::numeric_limits<double>::infinity();
    for (const auto& row : matrix)
        for (double v : row) lo = std::min(lo, v);
    const double shift = 1.0 - lo;  // shifted entries >= 1, value > 0

    // max sum(u) s.t. N^T u <= 1, u >= 0, where N = M + shift.
    // Then v_shifted = 1 / sum(u), p = u * v_shifted, and the dual gives q.
    std::vector<std::vector<double>> T(C, std::vector<double>(R + C + 1, 0.0));
    for (std::size_t j = 0; j < C; ++j) {
        for (std::size_t i = 0; i < R; ++i) T[j][i] = matrix[i][j] + shift;
        T[j][R + j] = 1.0;
        T[j][R + C] = 1.0;
    }
    std::vector<double> obj(R + C, 0.0);
    for (std::size_t i = 0; i < R; ++i) obj[i] = 1.0;
    std::vector<std::size_t> basis(C);
    for (std::size_t j = 0; j < C; ++j) basis[j] = R + j;

    const int pivot_cap = 50000;
    int pivots = 0;
    while (true) {
        std::size_t enter = R + C;
        for (std::size_t k = 0; k < R + C; ++k) {
            if (obj[k] > 1e-12) {
                enter = k;
                break;
            }
        }
        if (enter == R + C) break;  // optimal

        std::size_t leave = C;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < C; ++r) {
            const double a = T[r][enter];
            if (a <= 1e-12) continue;
            const double ratio = T[r][R + C] / a;
            if (ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == C) throw std::runtime_error("solve_matrix_game: LP unbounded (bad input)");

        if (++pivots > pivot_cap) {
            GameValueSolution incumbent;
            incumbent.optimal_row = MixedAction::uniform(R);
            incumbent.optimal_col = MixedAction::uniform(C);
            incumbent.value = detail::row_play_value(matrix, incumbent.optimal_row);
            incumbent.duality_gap =
                incumbent.value - detail::col_play_value(matrix, incumbent.optimal_col);
            incumbent.pivots = pivots;
            throw SolverError("solve_matrix_game: pivot cap exceeded", std::move(incumbent));
        }

        const double piv = T[leave][enter];
        for (double& v : T[leave]) v /= piv;
        for (std::size_t r = 0; r < C; ++r) {
            if (r == leave) continue;
            const double f = T[r][enter];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k <= R + C; ++k) T[r][k] -= f * T[leave][k];
        }
        const double f = obj[enter];
        for (std::size_t k = 0; k < R + C; ++k) obj[k] -= f * T[leave][k];
        basis[leave] = enter;
    }

    std::vector<double> u(R, 0.0);
    for (std::size_t r = 0; r < C; ++r)
        if (basis[r] < R) u[basis[r]] = T[r][R + C];
    const double usum = std::accumulate(u.begin(), u.end(), 0.0);
    if (usum <= 0.0) throw std::runtime_error("solve_matrix_game: degenerate optimum");
    const double shifted_value = 1.0 / usum;

    GameValueSolution sol;
    sol.value = shifted_value - shift;
    sol.pivots = pivots;
    sol.optimal_row.weights.resize(R);
    for (std::size_t i = 0; i < R; ++i) sol.optimal_row.weights[i] = u[i] / usum;

    std::vector<double> y(C, 0.0);
    double ysum = 0.0;
    for (std::size_t j = 0; j < C; ++j) {
        y[j] = std::max(0.0, -obj[R + j]);
        ysum += y[j];
    }
    sol.optimal_col.weights.resize(C);
    if (ysum > 0.0) {
        for (std::size_t j = 0; j < C; ++j) sol.optimal_col.weights[j] = y[j] / ysum;
    } else {
        sol.optimal_col = MixedAction::uniform(C);
    }

    sol.duality_gap = detail::row_play_value(matrix, sol.optimal_row) -
                      detail::col_play_value(matrix, sol.optimal_col);
    if (!(sol.duality_gap <= tolerance && sol.duality_gap >= -1e-9))
        throw SolverError("solve_matrix_game: duality gap above tolerance", sol);
    return sol;
}

// ---------------------------------------------------------------------------
// Safety (condition C2) and the safety gap delta.

// All i with U(i, j) in D for every j, ascending.
inline std::vector<std::size_t> find_safe_actions(const VectorPayoffGame& game, const Region& D) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < game.rows(); ++i) {
        bool safe = true;
        for (std::size_t j = 0; j < game.cols() && safe; ++j) safe = region_contains(D, game.at(i, j));
        if (safe) out.push_back(i);
    }
    return out;
}

struct SafetyGapOptions {
    std::optional<GridOracle> oracle;  // required for box-union regions
    int hull_samples = 128;
};

// Lower bound on delta = d(F \ D, R1(s)). Exact vertex minimization for
// convex D; grid-oracle sampling for box unions.
inline double safety_gap(const VectorPayoffGame& game, const Region& D, const MixedAction& s,
                         const SafetyGapOptions& opts = {}) {
    s.validate();
    const auto safe = find_safe_actions(game, D);
    for (std::size_t i : s.support()) {
        if (std::find(safe.begin(), safe.end(), i) == safe.end())
            throw std::invalid_argument("safety_gap: mixed action supported on an unsafe action");
    }
    std::vector<Point> verts;
    for (std::size_t j = 0; j < game.cols(); ++j) verts.push_back(expected_payoff_vs_column(game, s, j));

    if (std::holds_alternative<OpenHalfspaceIntersection>(D.shape)) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : verts) best = std::min(best, region_clearance(v, D));
        return best;
    }

    if (!opts.oracle.has_value())
        throw std::invalid_argument("safety_gap: box-union region needs a grid oracle");
    const GridOracle& oracle = *opts.oracle;
    const ConvexBody F = feasible_set(game);
    // One pass over the grid; the sample loop then only scans complement nodes.
    std::vector<Point> complement_nodes;
    oracle.for_each_node([&](const Point& z) {
        if (body_contains(z, F, oracle.diagonal()) && !region_contains(D, z)) complement_nodes.push_back(z);
    });
    if (complement_nodes.empty()) return std::numeric_limits<double>::infinity();

    std::vector<Point> samples = verts;
    if (verts.size() == 2) {
        for (int k = 1; k < opts.hull_samples; ++k)
            samples.push_back(lerp(verts[0], verts[1], static_cast<double>(k) / opts.hull_samples));
    } else if (verts.size() > 2) {
        SplitMix rng(0x5afe5afeULL);
        for (int k = 0; k < opts.hull_samples; ++k) {
            std::vector<double> w(verts.size());
            double sum = 0.0;
            for (auto& wi : w) {
                wi = -std::log(1.0 - rng.next_unit());
                sum += wi;
            }
            Point z(verts.front().size(), 0.0);
            for (std::size_t i = 0; i < verts.size(); ++i)
                for (std::size_t k2 = 0; k2 < z.size(); ++k2) z[k2] += (w[i] / sum) * verts[i][k2];
            samples.push_back(z);
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : samples)
        for (const auto& node : complement_nodes) best = std::min(best, dist2(z, node));
    return best;
}

// ---------------------------------------------------------------------------
// Condition C1 for convex targets: for every direction lambda the scalarized
// game value must not exceed the target's support value. Sampled over unit
// directions with local refinement; "false" answers are sound, "true" answers
// are grid-limited.

inline std::vector<std::vector<double>> scalarize(const VectorPayoffGame& game, const Point& lambda) {
    std::vector<std::vector<double>> m(game.rows(), std::vector<double>(game.cols()));
    for (std::size_t i = 0; i < game.rows(); ++i)
        for (std::size_t j = 0; j < game.cols(); ++j) m[i][j] = dot(lambda, game.at(i, j));
    return m;
}

inline int default_direction_count(std::size_t dim) { return dim == 2 ? 512 : 4096; }

inline bool check_convex_approachable(const VectorPayoffGame& game, const ConvexBody& target,
                                      int directions, double tolerance) {
    if (directions < 8) throw std::invalid_argument("check_convex_approachable: directions < 8");
    const std::size_t n = game.dim();
    if (body_dimension(target) != n) throw std::invalid_argument("check_convex_approachable: dimension mismatch");

    std::vector<Point> dirs;
    dirs.reserve(static_cast<std::size_t>(directions));
    if (n == 2) {
        for (int k = 0; k < directions; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k / directions;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    } else {
        SplitMix rng(0xd1ec7d1ecULL);
        while (dirs.size() < static_cast<std::size_t>(directions)) {
            Point d(n);
            double nn = 0.0;
            for (auto& c : d) {
                // Box-Muller from the deterministic stream.
                const double u1 = std::max(1e-12, rng.next_unit());
                const double u2 = rng.next_unit();
                c = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
                nn += c * c;
            }
            if (nn <= 1e-12) continue;
            dirs.push_back(scale(d, 1.0 / std::sqrt(nn)));
        }
    }

    const auto violation = [&](const Point& lambda) {
        const auto sol = solve_matrix_game(scalarize(game, lambda), 1e-9);
        return sol.value - support(target, lambda);
    };

    double worst = -std::numeric_limits<double>::infinity();
    Point worst_dir;
    for (const auto& d : dirs) {
        const double v = violation(d);
        if (v > worst) {
            worst = v;
            worst_dir = d;
        }
        if (v > tolerance) return false;
    }

    // Refine around the worst sampled direction.
    SplitMix rng(0x0f1e2d3cULL);
    double radius = n == 2 ? 3.14159265358979323846 / directions : 0.2;
    Point center = worst_dir;
    for (int round = 0; round < 3; ++round) {
        for (int k = 0; k < 32; ++k) {
            Point d = center;
            for (auto& c : d) c += radius * (2.0 * rng.next_unit() - 1.0);
            const double nn = norm2(d);
            if (nn <= 1e-12) continue;
            d = scale(d, 1.0 / nn);
            const double v = violation(d);
            if (v > tolerance) return false;
            if (v > worst) {
                worst = v;
                center = d;
            }
        }
        radius *= 0.25;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Scenario-level feasibility report: the "safe action exists" and "target
// approachable" conditions together with the safety gap.

struct ScenarioCheck {
    std::vector<std::size_t> safe_actions;
    double safe_gap = 0.0;
    bool c1_holds = false;
    bool c2_holds = false;
    bool safe_response_in_region = false;  // R1(s) subset of D (sampled)
};

struct ScenarioCheckOptions {
    int directions = 0;  // 0: pick by dimension
    double tolerance = 1e-7;
    std::optional<GridOracle> oracle;
};

inline ScenarioCheck check_scenario(const VectorPayoffGame& game, const ConvexBody& target,
                                    const Region& D, const ScenarioCheckOptions& opts = {}) {
    ScenarioCheck out;
    out.safe_actions = find_safe_actions(game, D);
    out.c2_holds = !out.safe_actions.empty();
    if (out.c2_holds) {
        const auto s = MixedAction::pure(game.rows(), out.safe_actions.front());
        SafetyGapOptions gap_opts;
        gap_opts.oracle = opts.oracle;
        out.safe_gap = safety_gap(game, D, s, gap_opts);

        out.safe_response_in_region = true;
        std::vector<Point> verts;
        for (std::size_t j = 0; j < game.cols(); ++j) verts.push_back(expected_payoff_vs_column(game, s, j));
        for (const auto& v : verts)
            if (!region_contains(D, v)) out.safe_response_in_region = false;
        for (std::size_t a = 0; a < verts.size() && out.safe_response_in_region; ++a)
            for (std::size_t b = a + 1; b < verts.size() && out.safe_response_in_region; ++b)
                for (int k = 1; k < 16; ++k)
                    if (!region_contains(D, lerp(verts[a], verts[b], k / 16.0))) {
                        out.safe_response_in_region = false;
                        break;
                    }
    }
    const int dirs = opts.directions > 0 ? opts.directions : default_direction_count(game.dim());
    out.c1_holds = check_convex_approachable(game, target, dirs, opts.tolerance);
    return out;
}

}  // namespace approach
