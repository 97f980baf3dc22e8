#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "approach/game.hpp"
#include "approach/geometry.hpp"
#include "approach/rng.hpp"
#include "approach/strategies.hpp"

namespace approach {

// Player-1 strategies the engine can drive.
struct StationaryStrategyState {
    MixedAction mix;
};

using StrategyState =
    std::variant<StationaryStrategyState, BlackwellState, ConstrainedState, WaypointState, BlockState>;

struct RunOptions {
    long horizon = 1;
    std::uint64_t seed = 0;
    long trace_stride = 0;  // 0: stride 1 up to 1e4 stages, else 10
    bool verify_certificates = false;
    double certificate_tolerance = 1e-6;
    bool verify_decomposition = false;
    bool verify_safe_branch = false;  // sigma*: non-safe branch must keep g in D
};

inline long effective_stride(const RunOptions& opts) {
    if (opts.trace_stride > 0) return opts.trace_stride;
    return opts.horizon <= 10000 ? 1 : 10;
}

// Per-stage view handed to the observer. Pointers are valid during the call.
struct StageView {
    long stage = 0;  // t >= 1
    std::size_t i = 0, j = 0;
    const Point* average = nullptr;  // g_t
    bool in_region = false;
    const SeparationCertificate* certificate = nullptr;  // when the step produced one
    double certificate_violation = 0.0;
    bool safe_branch = false;
    bool has_safe_count = false;
    long safe_count = 0;
    double decomposition_residual = 0.0;
};

namespace detail {

struct EngineContext {
    const VectorPayoffGame* game;
    const Region* region;
    const ConvexBody* target;
};

}  // namespace detail

// Drives one play of `horizon` stages. Deterministic given the seed; all
// randomness comes from the counter-based generator.
template <class Observer>
void run_engine(const VectorPayoffGame& game, StrategyState strategy, const AdversaryModel& adversary,
                const Region& D, const ConvexBody& target, const RunOptions& opts, Observer& observer) {
    if (opts.horizon < 1) throw std::invalid_argument("run: horizon must be >= 1");
    const std::size_t n = game.dim();
    const std::size_t expected_rows = game.rows();
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, StationaryStrategyState>) {
                if (st.mix.weights.size() != expected_rows)
                    throw std::invalid_argument("run: strategy does not match the game");
            } else if constexpr (std::is_same_v<T, BlackwellState>) {
                if (st.running_average.size() != n)
                    throw std::invalid_argument("run: strategy does not match the game");
            } else if constexpr (std::is_same_v<T, ConstrainedState>) {
                if (st.safe_action.weights.size() != expected_rows)
                    throw std::invalid_argument("run: strategy does not match the game");
            } else if constexpr (std::is_same_v<T, WaypointState>) {
                if (st.plan->safe_mix.weights.size() != expected_rows)
                    throw std::invalid_argument("run: strategy does not match the game");
            } else if constexpr (std::is_same_v<T, BlockState>) {
                if (!block_compatible(game)) throw std::invalid_argument("run: game is not block-compatible");
            }
        },
        strategy);

    Point payoff_sum(n, 0.0);
    Point average(n, 0.0);
    PublicHistorySummary summary;
    summary.overall_average.assign(n, 0.0);

    for (long k = 0; k < opts.horizon; ++k) {
        StageView view;
        view.stage = k + 1;

        MixedAction p;
        std::optional<SeparationCertificate> certificate;
        bool safe_branch = false;
        std::visit(
            [&](auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, StationaryStrategyState>) {
                    p = st.mix;
                } else if constexpr (std::is_same_v<T, BlackwellState>) {
                    auto d = blackwell_step(st, game);
                    p = std::move(d.action);
                    certificate = std::move(d.certificate);
                } else if constexpr (std::is_same_v<T, ConstrainedState>) {
                    auto d = sigma_star_step(st, game, D);
                    p = std::move(d.action);
                    certificate = std::move(d.certificate);
                    safe_branch = d.safe_branch;
                } else if constexpr (std::is_same_v<T, WaypointState>) {
                    auto d = waypoint_step(st, game);
                    p = std::move(d.action);
                    certificate = std::move(d.certificate);
                } else {
                    p = MixedAction::pure(game.rows(), block_strategy_step(st, game));
                }
            },
            strategy);

        summary.stage_count = k;
        const MixedAction q = adversary_step(adversary, game, summary, D);

        const std::size_t i = sample_index(p.weights, uniform_unit(opts.seed, static_cast<std::uint64_t>(k), Stream::kPlayer1));
        const std::size_t j = sample_index(q.weights, uniform_unit(opts.seed, static_cast<std::uint64_t>(k), Stream::kPlayer2));
        const Point& u = game.at(i, j);

        for (std::size_t c = 0; c < n; ++c) {
            payoff_sum[c] += u[c];
            average[c] = payoff_sum[c] / static_cast<double>(k + 1);
        }
        summary.overall_average = average;

        std::visit(
            [&](auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, BlackwellState>) {
                    blackwell_observe(st, u, p);
                } else if constexpr (std::is_same_v<T, ConstrainedState>) {
                    sigma_star_observe(st, u, safe_branch, p);
                } else if constexpr (std::is_same_v<T, WaypointState>) {
                    waypoint_observe(st, u, p);
                } else if constexpr (std::is_same_v<T, BlockState>) {
                    block_observe(st, j);
                }
            },
            strategy);

        view.i = i;
        view.j = j;
        view.average = &average;
        view.in_region = region_contains(D, average);
        view.safe_branch = safe_branch;
        if (certificate.has_value()) {
            view.certificate = &*certificate;
            if (opts.verify_certificates) view.certificate_violation = certificate_violation(*certificate, game);
        }
        if (const auto* cs = std::get_if<ConstrainedState>(&strategy)) {
            view.has_safe_count = true;
            view.safe_count = cs->safe_count;
            if (opts.verify_decomposition) view.decomposition_residual = decomposition_residual(*cs);
        }
        observer.on_stage(view, target);
    }
}

// ---------------------------------------------------------------------------
// Full per-run trajectory.

struct RunTrace {
    std::uint64_t seed = 0;
    long stages = 0;
    long stride = 1;
    std::vector<std::pair<std::uint16_t, std::uint16_t>> actions;  // exact, per stage
    std::vector<long> recorded_stages;                             // strided
    std::vector<Point> averages;                                   // strided
    std::vector<double> dist_to_target;                            // strided
    std::vector<char> in_region_flags;                             // exact, per stage
    std::vector<long> safe_count_curve;                            // exact, sigma* only

    long first_exit_stage = -1;
    Point final_average;
    double final_distance = 0.0;

    long certificate_count = 0;
    double max_certificate_violation = -std::numeric_limits<double>::infinity();
    double max_decomposition_residual = 0.0;
    long safe_branch_violations = 0;

    bool stayed_in_region() const { return first_exit_stage < 0; }
};

namespace detail {

struct TraceObserver {
    RunTrace trace;
    long stride = 1;
    long horizon = 0;

    void on_stage(const StageView& v, const ConvexBody& target) {
        trace.actions.emplace_back(static_cast<std::uint16_t>(v.i), static_cast<std::uint16_t>(v.j));
        trace.in_region_flags.push_back(v.in_region ? 1 : 0);
        if (!v.in_region && trace.first_exit_stage < 0) trace.first_exit_stage = v.stage;
        if (v.has_safe_count) trace.safe_count_curve.push_back(v.safe_count);
        if (v.certificate != nullptr) {
            ++trace.certificate_count;
            trace.max_certificate_violation = std::max(trace.max_certificate_violation, v.certificate_violation);
        }
        trace.max_decomposition_residual = std::max(trace.max_decomposition_residual, v.decomposition_residual);
        // A non-safe branch promises the new average still lands inside D.
        if (v.has_safe_count && !v.safe_branch && !v.in_region) ++trace.safe_branch_violations;
        if (v.stage % stride == 0 || v.stage == horizon) {
            trace.recorded_stages.push_back(v.stage);
            trace.averages.push_back(*v.average);
            trace.dist_to_target.push_back(distance_to_body(*v.average, target));
        }
        if (v.stage == horizon) {
            trace.final_average = *v.average;
            trace.final_distance = trace.dist_to_target.back();
        }
    }
};

}  // namespace detail

inline RunTrace run(const VectorPayoffGame& game, const StrategyState& strategy,
                    const AdversaryModel& adversary, const Region& D, const ConvexBody& target,
                    const RunOptions& opts) {
    detail::TraceObserver obs;
    obs.stride = effective_stride(opts);
    obs.horizon = opts.horizon;
    obs.trace.seed = opts.seed;
    obs.trace.stages = opts.horizon;
    obs.trace.stride = obs.stride;
    run_engine(game, strategy, adversary, D, target, opts, obs);
    return std::move(obs.trace);
}

// ---------------------------------------------------------------------------
// Rate fitting: least squares on (log t, log q_t) for the cross-run quantile
// q_t of d(g_t, target).

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    long points = 0;
    long zeros_excluded = 0;
};

namespace detail {

inline RateFit fit_rate_from_curves(const std::vector<long>& stages,
                                    const std::vector<const std::vector<double>*>& curves, long t_min,
                                    double quantile) {
    if (quantile <= 0.0 || quantile >= 1.0) throw std::invalid_argument("fit_rate: quantile must be in (0,1)");
    if (t_min < 1) throw std::invalid_argument("fit_rate: t_min must be >= 1");
    std::vector<double> xs, ys;
    long zeros = 0;
    std::vector<double> column(curves.size());
    for (std::size_t s = 0; s < stages.size(); ++s) {
        if (stages[s] < t_min) continue;
        for (std::size_t r = 0; r < curves.size(); ++r) column[r] = (*curves[r])[s];
        std::sort(column.begin(), column.end());
        const std::size_t rank =
            std::min(column.size() - 1,
                     static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(column.size()))) - 1);
        const double q = column[rank];
        if (q <= 0.0) {
            ++zeros;
            continue;
        }
        xs.push_back(std::log(static_cast<double>(stages[s])));
        ys.push_back(std::log(q));
    }
    if (xs.size() < 10) throw std::invalid_argument("fit_rate: fewer than 10 fit points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mx, dy = ys[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.points = static_cast<long>(xs.size());
    fit.zeros_excluded = zeros;
    return fit;
}

}  // namespace detail

inline RateFit fit_rate(const std::vector<RunTrace>& traces, long t_min, double quantile) {
    if (traces.empty()) throw std::invalid_argument("fit_rate: no traces");
    std::vector<const std::vector<double>*> curves;
    curves.reserve(traces.size());
    for (const auto& t : traces) {
        if (t.recorded_stages != traces.front().recorded_stages)
            throw std::invalid_argument("fit_rate: traces have mismatched recording grids");
        curves.push_back(&t.dist_to_target);
    }
    return detail::fit_rate_from_curves(traces.front().recorded_stages, curves, t_min, quantile);
}

// ---------------------------------------------------------------------------
// Growth of the safe-stage count f(h_t).

struct SafeFrequencyStats {
    std::vector<long> checkpoints;
    // ratios[c][r] = f(h_t) / sqrt(t) for checkpoint c, run r
    std::vector<std::vector<double>> ratios;
    // doubling[c][r] = f(h_{2t}) / max(f(h_t), 1)
    std::vector<std::vector<double>> doubling;
};

inline SafeFrequencyStats safe_frequency_growth(const std::vector<RunTrace>& traces,
                                                const std::vector<long>& checkpoints) {
    SafeFrequencyStats stats;
    stats.checkpoints = checkpoints;
    stats.ratios.resize(checkpoints.size());
    stats.doubling.resize(checkpoints.size());
    for (const auto& t : traces) {
        if (t.safe_count_curve.empty())
            throw std::invalid_argument("safe_frequency_growth: trace has no safe-count curve (not sigma*)");
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            const long tc = checkpoints[c];
            if (tc < 1 || tc > t.stages) throw std::invalid_argument("safe_frequency_growth: checkpoint out of range");
            const double f_t = static_cast<double>(t.safe_count_curve[tc - 1]);
            stats.ratios[c].push_back(f_t / std::sqrt(static_cast<double>(tc)));
            if (2 * tc <= t.stages) {
                const double f_2t = static_cast<double>(t.safe_count_curve[2 * tc - 1]);
                stats.doubling[c].push_back(f_2t / std::max(f_t, 1.0));
            }
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Monte Carlo aggregation over seeded runs.

struct MonteCarloOptions {
    long horizon = 1;
    long runs = 1;
    std::uint64_t base_seed = 0;
    int parallelism = 0;  // 0: hardware concurrency
    long trace_stride = 0;
    long fit_t_min = 100;
    double fit_quantile = 0.95;
    std::vector<long> safe_checkpoints;
    std::vector<double> epsilon_levels{0.5, 0.25, 0.1, 0.05};
    bool verify_certificates = false;
    bool verify_decomposition = false;
    bool verify_safe_branch = false;
};

struct MonteCarloReport {
    long runs = 0;
    double stay_in_region_rate = 0.0;
    std::map<long, long> exit_stage_histogram;
    std::optional<RateFit> rate_fit;
    SafeFrequencyStats safe_freq;
    // epsilon -> earliest recorded stage T with empirical
    // P[d(g_t, A) < eps for all recorded t >= T] > 1 - eps; -1 if unattained.
    std::vector<std::pair<double, long>> epsilon_attainment;
    std::vector<double> final_distances;  // per run, by run index
    std::vector<char> run_stayed;         // per run, by run index
    long certificate_count = 0;
    double max_certificate_violation = -std::numeric_limits<double>::infinity();
    double max_decomposition_residual = 0.0;
    long safe_branch_violations = 0;
    std::vector<long> recorded_stages;
    std::string rate_fit_error;
};

namespace detail {

struct CompactObserver {
    long stride = 1;
    long horizon = 0;
    std::vector<long> safe_checkpoints;  // sorted stages needing f values (incl. doubled)

    long first_exit_stage = -1;
    std::vector<double> dist_curve;
    std::vector<long> recorded_stages;
    std::vector<long> f_values;  // aligned with safe_checkpoints
    double final_distance = 0.0;
    long certificate_count = 0;
    double max_certificate_violation = -std::numeric_limits<double>::infinity();
    double max_decomposition_residual = 0.0;
    long safe_branch_violations = 0;

    void on_stage(const StageView& v, const ConvexBody& target) {
        if (!v.in_region && first_exit_stage < 0) first_exit_stage = v.stage;
        if (v.certificate != nullptr) {
            ++certificate_count;
            max_certificate_violation = std::max(max_certificate_violation, v.certificate_violation);
        }
        max_decomposition_residual = std::max(max_decomposition_residual, v.decomposition_residual);
        if (v.has_safe_count && !v.safe_branch && !v.in_region) ++safe_branch_violations;
        if (v.has_safe_count) {
            for (std::size_t c = 0; c < safe_checkpoints.size(); ++c)
                if (safe_checkpoints[c] == v.stage) f_values[c] = v.safe_count;
        }
        if (v.stage % stride == 0 || v.stage == horizon) {
            recorded_stages.push_back(v.stage);
            dist_curve.push_back(distance_to_body(*v.average, target));
            if (v.stage == horizon) final_distance = dist_curve.back();
        }
    }
};

}  // namespace detail

inline MonteCarloReport monte_carlo(const VectorPayoffGame& game,
                                    const std::function<StrategyState(std::size_t)>& strategy_factory,
                                    const std::function<AdversaryModel(std::size_t)>& adversary_factory,
                                    const Region& D, const ConvexBody& target,
                                    const MonteCarloOptions& opts) {
    if (opts.runs < 1) throw std::invalid_argument("monte_carlo: runs must be >= 1");
    const std::size_t n_runs = static_cast<std::size_t>(opts.runs);

    std::vector<long> f_stages = opts.safe_checkpoints;
    for (long c : opts.safe_checkpoints)
        if (2 * c <= opts.horizon) f_stages.push_back(2 * c);
    std::sort(f_stages.begin(), f_stages.end());
    f_stages.erase(std::unique(f_stages.begin(), f_stages.end()), f_stages.end());

    std::vector<detail::CompactObserver> slots(n_runs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        while (true) {
            const std::size_t r = next.fetch_add(1);
            if (r >= n_runs || failed.load()) return;
            try {
                RunOptions ro;
                ro.horizon = opts.horizon;
                ro.seed = opts.base_seed + r;
                ro.trace_stride = opts.trace_stride;
                ro.verify_certificates = opts.verify_certificates;
                ro.verify_decomposition = opts.verify_decomposition;
                ro.verify_safe_branch = opts.verify_safe_branch;
                auto& obs = slots[r];
                obs.stride = effective_stride(ro);
                obs.horizon = opts.horizon;
                obs.safe_checkpoints = f_stages;
                obs.f_values.assign(f_stages.size(), -1);
                run_engine(game, strategy_factory(r), adversary_factory(r), D, target, ro, obs);
            } catch (const std::exception& e) {
                failed.store(true);
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (failure.empty())
                    failure = "monte_carlo: run with seed " + std::to_string(opts.base_seed + r) +
                              " failed: " + e.what();
            }
        }
    };

    int threads = opts.parallelism > 0 ? opts.parallelism
                                       : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n_runs));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error(failure);

    // Aggregation is indexed by run, so execution order cannot matter.
    MonteCarloReport rep;
    rep.runs = opts.runs;
    long stayed = 0;
    for (const auto& s : slots) {
        if (s.first_exit_stage < 0) {
            ++stayed;
        } else {
            ++rep.exit_stage_histogram[s.first_exit_stage];
        }
        rep.run_stayed.push_back(s.first_exit_stage < 0 ? 1 : 0);
        rep.final_distances.push_back(s.final_distance);
        rep.certificate_count += s.certificate_count;
        rep.max_certificate_violation = std::max(rep.max_certificate_violation, s.max_certificate_violation);
        rep.max_decomposition_residual = std::max(rep.max_decomposition_residual, s.max_decomposition_residual);
        rep.safe_branch_violations += s.safe_branch_violations;
    }
    rep.stay_in_region_rate = static_cast<double>(stayed) / static_cast<double>(opts.runs);
    rep.recorded_stages = slots.front().recorded_stages;

    {
        std::vector<const std::vector<double>*> curves;
        curves.reserve(n_runs);
        for (const auto& s : slots) curves.push_back(&s.dist_curve);
        try {
            rep.rate_fit = detail::fit_rate_from_curves(slots.front().recorded_stages, curves,
                                                        opts.fit_t_min, opts.fit_quantile);
        } catch (const std::exception& e) {
            rep.rate_fit_error = e.what();
        }
    }

    if (!opts.safe_checkpoints.empty() && slots.front().f_values.size() == f_stages.size() &&
        !slots.front().f_values.empty() && slots.front().f_values.front() >= 0) {
        rep.safe_freq.checkpoints = opts.safe_checkpoints;
        rep.safe_freq.ratios.resize(opts.safe_checkpoints.size());
        rep.safe_freq.doubling.resize(opts.safe_checkpoints.size());
        for (std::size_t c = 0; c < opts.safe_checkpoints.size(); ++c) {
            const long tc = opts.safe_checkpoints[c];
            const auto idx_of = [&](long stage) {
                return static_cast<std::size_t>(
                    std::lower_bound(f_stages.begin(), f_stages.end(), stage) - f_stages.begin());
            };
            for (const auto& s : slots) {
                const double f_t = static_cast<double>(s.f_values[idx_of(tc)]);
                rep.safe_freq.ratios[c].push_back(f_t / std::sqrt(static_cast<double>(tc)));
                if (2 * tc <= opts.horizon) {
                    const double f_2t = static_cast<double>(s.f_values[idx_of(2 * tc)]);
                    rep.safe_freq.doubling[c].push_back(f_2t / std::max(f_t, 1.0));
                }
            }
        }
    }

    for (double eps : opts.epsilon_levels) {
        // Last recorded stage at which a run was at distance >= eps.
        std::vector<long> last_bad(n_runs, -1);
        const auto& stages = slots.front().recorded_stages;
        for (std::size_t r = 0; r < n_runs; ++r) {
            const auto& curve = slots[r].dist_curve;
            for (std::size_t s = curve.size(); s-- > 0;) {
                if (curve[s] >= eps) {
                    last_bad[r] = stages[s];
                    break;
                }
            }
        }
        long attained = -1;
        for (const long T : stages) {
            long good = 0;
            for (std::size_t r = 0; r < n_runs; ++r)
                if (last_bad[r] < T) ++good;
            if (static_cast<double>(good) > (1.0 - eps) * static_cast<double>(opts.runs)) {
                attained = T;
                break;
            }
        }
        rep.epsilon_attainment.emplace_back(eps, attained);
    }
    return rep;
}

}  // namespace approach
