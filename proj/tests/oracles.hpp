#pragma once

// Test-only oracles, independent of the production solver path.

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace test_oracles {

// min over the step-1/steps simplex lattice of max_j (p^T M)_j, by full
// enumeration. Cost grows as steps^(R-1); callers keep R <= 3.
inline double grid_min_of_max(const std::vector<std::vector<double>>& m, int steps) {
    const std::size_t R = m.size();
    const std::size_t C = m.front().size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> partial(C, 0.0);
    const double unit = 1.0 / static_cast<double>(steps);
    std::function<void(std::size_t, int)> rec = [&](std::size_t row, int remaining) {
        if (row + 1 == R) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < C; ++j)
                worst = std::max(worst, partial[j] + remaining * unit * m[row][j]);
            best = std::min(best, worst);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            for (std::size_t j = 0; j < C; ++j) partial[j] += k * unit * m[row][j];
            rec(row + 1, remaining - k);
            for (std::size_t j = 0; j < C; ++j) partial[j] -= k * unit * m[row][j];
        }
    };
    rec(0, steps);
    return best;
}

// Simplex-grid estimate of the game value min_p max_j (p^T M)_j, gridding
// whichever side is smaller (via minimax duality when the column side is
// gridded). Within max|entry| * step * dim of the true value.
inline double grid_game_value(const std::vector<std::vector<double>>& m, int steps) {
    const std::size_t R = m.size();
    const std::size_t C = m.front().size();
    if (R <= C) return grid_min_of_max(m, steps);
    // max_q min_i (M q)_i = -min_q max_i ((-M^T) q)_i
    std::vector<std::vector<double>> neg_t(C, std::vector<double>(R));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) neg_t[j][i] = -m[i][j];
    return -grid_min_of_max(neg_t, steps);
}

namespace detail {

inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) return false;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return true;
}

}  // namespace detail

// Exact value by Shapley-Snow kernel enumeration: every square subgame is
// solved for equalizing strategies; a candidate is the value when its pair
// (p, q) is feasible and forms a saddle over the full matrix.
inline double support_enumeration_value(const std::vector<std::vector<double>>& m, double tol = 1e-9) {
    const std::size_t R = m.size();
    const std::size_t C = m.front().size();

    std::vector<std::vector<std::size_t>> row_subsets, col_subsets;
    const auto enumerate = [](std::size_t n) {
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t k = 0; k < n; ++k)
                if ((mask >> k) & 1) s.push_back(k);
            out.push_back(std::move(s));
        }
        return out;
    };
    row_subsets = enumerate(R);
    col_subsets = enumerate(C);

    for (const auto& S : row_subsets) {
        for (const auto& T : col_subsets) {
            if (S.size() != T.size()) continue;
            const std::size_t k = S.size();

            // Equalizing p over S against columns T, with the value v:
            //   sum_{i in S} p_i M[i][j] - v = 0 for j in T, sum p_i = 1.
            std::vector<std::vector<double>> a(k + 1, std::vector<double>(k + 1, 0.0));
            std::vector<double> b(k + 1, 0.0);
            for (std::size_t jj = 0; jj < k; ++jj) {
                for (std::size_t ii = 0; ii < k; ++ii) a[jj][ii] = m[S[ii]][T[jj]];
                a[jj][k] = -1.0;
            }
            for (std::size_t ii = 0; ii < k; ++ii) a[k][ii] = 1.0;
            b[k] = 1.0;
            if (!detail::solve_square(a, b)) continue;
            const double v = b[k];
            std::vector<double> p(R, 0.0);
            bool ok = true;
            for (std::size_t ii = 0; ii < k && ok; ++ii) {
                if (b[ii] < -tol) ok = false;
                p[S[ii]] = std::max(0.0, b[ii]);
            }
            if (!ok) continue;
            for (std::size_t j = 0; j < C && ok; ++j) {
                double col = 0.0;
                for (std::size_t i = 0; i < R; ++i) col += p[i] * m[i][j];
                if (col > v + tol) ok = false;
            }
            if (!ok) continue;

            // Equalizing q over T against rows S.
            std::vector<std::vector<double>> a2(k + 1, std::vector<double>(k + 1, 0.0));
            std::vector<double> b2(k + 1, 0.0);
            for (std::size_t ii = 0; ii < k; ++ii) {
                for (std::size_t jj = 0; jj < k; ++jj) a2[ii][jj] = m[S[ii]][T[jj]];
                a2[ii][k] = -1.0;
            }
            for (std::size_t jj = 0; jj < k; ++jj) a2[k][jj] = 1.0;
            b2[k] = 1.0;
            if (!detail::solve_square(a2, b2)) continue;
            std::vector<double> q(C, 0.0);
            ok = std::abs(b2[k] - v) <= 1e-7;
            for (std::size_t jj = 0; jj < k && ok; ++jj) {
                if (b2[jj] < -tol) ok = false;
                q[T[jj]] = std::max(0.0, b2[jj]);
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < R && ok; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < C; ++j) row += q[j] * m[i][j];
                if (row < v - tol) ok = false;
            }
            if (ok) return v;
        }
    }
    throw std::runtime_error("support_enumeration_value: no saddle kernel found");
}

}  // namespace test_oracles
