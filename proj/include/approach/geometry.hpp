#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "approach/vec.hpp"

namespace approach {

constexpr double kProjectionTolerance = 1e-9;
constexpr int kProjectionIterationCap = 10000;

// {x : normal.x = offset}; the two closed half-spaces it induces are
// {normal.x <= offset} and {normal.x >= offset}.
struct Hyperplane {
    Point normal;
    double offset = 0.0;

    double eval(const Point& x) const { return dot(normal, x) - offset; }
    bool in_minus(const Point& x) const { return eval(x) <= 0.0; }
    bool in_plus(const Point& x) const { return eval(x) >= 0.0; }
};

// One face of a polytope, marked with the side that is kept.
struct HalfspaceConstraint {
    Hyperplane plane;
    bool keep_below = true;  // true: normal.x <= offset

    // Canonical form normal.x <= offset regardless of marker.
    Hyperplane canonical() const {
        if (keep_below) return plane;
        return Hyperplane{scale(plane.normal, -1.0), -plane.offset};
    }
};

struct SinglePoint {
    Point p;
};
struct Ball {
    Point center;
    double radius = 0.0;
};
struct HullOfPoints {
    std::vector<Point> vertices;
};
struct HalfspacePolytope {
    std::vector<HalfspaceConstraint> faces;
};

using ConvexBody = std::variant<SinglePoint, Ball, HullOfPoints, HalfspacePolytope>;

struct ProjectionError : std::runtime_error {
    ProjectionError(std::string what, Point best, double residual)
        : std::runtime_error(std::move(what)), best_iterate(std::move(best)), residual(residual) {}
    Point best_iterate;
    double residual;
};

inline std::size_t body_dimension(const ConvexBody& body) {
    return std::visit(
        [](const auto& b) -> std::size_t {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SinglePoint>) return b.p.size();
            if constexpr (std::is_same_v<T, Ball>) return b.center.size();
            if constexpr (std::is_same_v<T, HullOfPoints>) {
                if (b.vertices.empty()) throw std::invalid_argument("empty hull");
                return b.vertices.front().size();
            }
            if constexpr (std::is_same_v<T, HalfspacePolytope>) {
                if (b.faces.empty()) throw std::invalid_argument("empty polytope");
                return b.faces.front().plane.normal.size();
            }
        },
        body);
}

namespace detail {

// Solves the symmetric bordered system for the min-norm point of the affine
// hull of the atoms indexed by S: minimize ||sum a_i w_i|| with sum a_i = 1.
inline std::vector<double> affine_min_weights(const std::vector<Point>& atoms,
                                              const std::vector<std::size_t>& S) {
    const std::size_t m = S.size();
    const std::size_t dim = m + 1;
    std::vector<std::vector<double>> A(dim, std::vector<double>(dim + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) A[i][j] = dot(atoms[S[i]], atoms[S[j]]);
        A[i][m] = 1.0;
        A[i][dim] = 0.0;
    }
    for (std::size_t j = 0; j < m; ++j) A[m][j] = 1.0;
    A[m][m] = 0.0;
    A[m][dim] = 1.0;

    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-300) throw std::runtime_error("affine_min_weights: singular system");
        std::swap(A[col], A[piv]);
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= dim; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = A[i][dim] / A[i][i];
    return w;
}

// Wolfe's min-norm-point algorithm over conv(atoms).
inline Point min_norm_point(const std::vector<Point>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("min_norm_point: empty atom set");
    double sq_scale = 1.0;
    for (const auto& a : atoms) sq_scale = std::max(sq_scale, dot(a, a));
    const double stop_tol = 1e-14 * sq_scale;
    const double drop_tol = 1e-13;

    std::size_t first = 0;
    for (std::size_t i = 1; i < atoms.size(); ++i)
        if (dot(atoms[i], atoms[i]) < dot(atoms[first], atoms[first])) first = i;

    std::vector<std::size_t> S{first};
    std::vector<double> alpha{1.0};
    Point x = atoms[first];

    for (int iter = 0; iter < kProjectionIterationCap; ++iter) {
        // Major cycle: most improving atom.
        std::size_t j = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const double v = dot(x, atoms[i]);
            if (v < best - 1e-300) {
                best = v;
                j = i;
            }
        }
        if (best >= dot(x, x) - stop_tol) return x;
        if (std::find(S.begin(), S.end(), j) != S.end()) return x;
        S.push_back(j);
        alpha.push_back(0.0);

        // Minor cycles: restore a proper corral.
        for (int minor = 0; minor < kProjectionIterationCap; ++minor) {
            std::vector<double> beta;
            try {
                beta = affine_min_weights(atoms, S);
            } catch (const std::runtime_error&) {
                // Degenerate Gram system: keep the feasible iterate we have.
                return x;
            }
            bool interior = true;
            for (double b : beta)
                if (b <= drop_tol) {
                    interior = false;
                    break;
                }
            if (interior) {
                alpha = beta;
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < S.size(); ++i) {
                if (beta[i] <= drop_tol && alpha[i] - beta[i] > 1e-300)
                    theta = std::min(theta, alpha[i] / (alpha[i] - beta[i]));
            }
            for (std::size_t i = 0; i < S.size(); ++i) alpha[i] += theta * (beta[i] - alpha[i]);
            std::vector<std::size_t> keepS;
            std::vector<double> keepA;
            for (std::size_t i = 0; i < S.size(); ++i) {
                if (alpha[i] > drop_tol) {
                    keepS.push_back(S[i]);
                    keepA.push_back(alpha[i]);
                }
            }
            if (keepS.empty()) {
                keepS.push_back(S.front());
                keepA.push_back(1.0);
            }
            S = std::move(keepS);
            alpha = std::move(keepA);
        }
        x.assign(x.size(), 0.0);
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t k = 0; k < x.size(); ++k) x[k] += alpha[i] * atoms[S[i]][k];
    }
    double res = 0.0;
    for (const auto& a : atoms) res = std::max(res, dot(x, x) - dot(x, a));
    throw ProjectionError("min_norm_point: iteration cap exceeded", x, res);
}

inline Point project_onto_halfspace(const Point& y, const Hyperplane& h) {
    const double v = h.eval(y);
    if (v <= 0.0) return y;
    const double nn = dot(h.normal, h.normal);
    return sub(y, scale(h.normal, v / nn));
}

// Dykstra's alternating projections onto an intersection of closed half-spaces.
inline Point project_onto_halfspaces(const Point& x, const std::vector<Hyperplane>& faces) {
    if (faces.empty()) return x;
    double scale_hint = std::max(1.0, norm2(x));
    Point cur = x;
    std::vector<Point> corr(faces.size(), Point(x.size(), 0.0));
    for (int sweep = 0; sweep < kProjectionIterationCap; ++sweep) {
        double moved = 0.0;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            const Point y = add(cur, corr[i]);
            const Point next = project_onto_halfspace(y, faces[i]);
            corr[i] = sub(y, next);
            moved += dist2(cur, next);
            cur = next;
        }
        double viol = 0.0;
        for (const auto& f : faces) viol = std::max(viol, f.eval(cur) / norm2(f.normal));
        if (moved <= 1e-12 * scale_hint && viol <= kProjectionTolerance) return cur;
    }
    double viol = 0.0;
    for (const auto& f : faces) viol = std::max(viol, f.eval(cur) / norm2(f.normal));
    throw ProjectionError("project_onto_halfspaces: iteration cap exceeded", cur, viol);
}

inline void solve_square(std::vector<std::vector<double>>& A, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-12) throw std::runtime_error("singular");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= A[i][i];
}

}  // namespace detail

// Vertices of a bounded half-space polytope by face enumeration. Scenarios
// keep n <= 4, where this is cheap and exact.
inline std::vector<Point> polytope_vertices(const HalfspacePolytope& poly) {
    if (poly.faces.empty()) throw std::invalid_argument("polytope_vertices: empty polytope");
    const std::size_t n = poly.faces.front().plane.normal.size();
    std::vector<Hyperplane> planes;
    planes.reserve(poly.faces.size());
    for (const auto& f : poly.faces) planes.push_back(f.canonical());

    std::vector<Point> verts;
    std::vector<std::size_t> idx(n);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == n) {
            std::vector<std::vector<double>> A(n, std::vector<double>(n));
            std::vector<double> b(n);
            for (std::size_t r = 0; r < n; ++r) {
                A[r] = planes[idx[r]].normal;
                b[r] = planes[idx[r]].offset;
            }
            try {
                detail::solve_square(A, b);
            } catch (const std::runtime_error&) {
                return;
            }
            double worst = 0.0;
            for (const auto& pl : planes) worst = std::max(worst, pl.eval(b) / norm2(pl.normal));
            if (worst > 1e-9) return;
            for (const auto& v : verts)
                if (dist2(v, b) <= 1e-9) return;
            verts.push_back(b);
            return;
        }
        for (std::size_t i = start; i < planes.size(); ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return verts;
}

// Nearest point of the body; exact for points and balls, iterative quadratic
// minimization for hulls and polytopes (tolerance 1e-9, cap 10000).
inline Point project(const Point& x, const ConvexBody& body) {
    if (x.size() != body_dimension(body)) throw std::invalid_argument("project: dimension mismatch");
    return std::visit(
        [&](const auto& b) -> Point {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SinglePoint>) {
                return b.p;
            } else if constexpr (std::is_same_v<T, Ball>) {
                if (b.radius < 0.0) throw std::invalid_argument("project: negative ball radius");
                const Point d = sub(x, b.center);
                const double n = norm2(d);
                if (n <= b.radius) return x;
                return add(b.center, scale(d, b.radius / n));
            } else if constexpr (std::is_same_v<T, HullOfPoints>) {
                if (b.vertices.empty()) throw std::invalid_argument("project: empty hull");
                std::vector<Point> shifted;
                shifted.reserve(b.vertices.size());
                for (const auto& v : b.vertices) shifted.push_back(sub(v, x));
                return add(x, detail::min_norm_point(shifted));
            } else {
                if (b.faces.empty()) throw std::invalid_argument("project: empty polytope");
                std::vector<Hyperplane> planes;
                for (const auto& f : b.faces) planes.push_back(f.canonical());
                return detail::project_onto_halfspaces(x, planes);
            }
        },
        body);
}

inline double distance_to_body(const Point& x, const ConvexBody& body) {
    return dist2(x, project(x, body));
}

inline bool body_contains(const Point& x, const ConvexBody& body, double tol = kProjectionTolerance) {
    return distance_to_body(x, body) <= tol;
}

// sup over y in body of direction.y
inline double support(const ConvexBody& body, const Point& direction) {
    if (norm2(direction) <= 0.0) throw std::invalid_argument("support: zero direction");
    if (direction.size() != body_dimension(body)) throw std::invalid_argument("support: dimension mismatch");
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SinglePoint>) {
                return dot(direction, b.p);
            } else if constexpr (std::is_same_v<T, Ball>) {
                return dot(direction, b.center) + b.radius * norm2(direction);
            } else if constexpr (std::is_same_v<T, HullOfPoints>) {
                if (b.vertices.empty()) throw std::invalid_argument("support: empty hull");
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& v : b.vertices) best = std::max(best, dot(direction, v));
                return best;
            } else {
                const auto verts = polytope_vertices(b);
                if (verts.empty()) throw std::invalid_argument("support: polytope has no vertices");
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& v : verts) best = std::max(best, dot(direction, v));
                return best;
            }
        },
        body);
}

inline std::vector<Point> body_extreme_points(const ConvexBody& body) {
    return std::visit(
        [](const auto& b) -> std::vector<Point> {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, SinglePoint>) return {b.p};
            if constexpr (std::is_same_v<T, Ball>) throw std::invalid_argument("ball has no vertex list");
            if constexpr (std::is_same_v<T, HullOfPoints>) return b.vertices;
            if constexpr (std::is_same_v<T, HalfspacePolytope>) return polytope_vertices(b);
        },
        body);
}

// ---------------------------------------------------------------------------
// Constraint regions D.

struct OpenBox {
    Point lo, hi;  // lo < hi componentwise
};

struct OpenHalfspaceIntersection {
    std::vector<Hyperplane> strict_below;  // each: normal.x < offset
};

struct OpenBoxUnion {
    std::vector<OpenBox> boxes;
};

struct Region {
    std::variant<OpenHalfspaceIntersection, OpenBoxUnion> shape;
    // The impossibility example needs the literally closed set {x >= 0};
    // flipping this makes membership non-strict without changing geometry.
    bool closed_membership = false;
};

inline bool box_contains(const OpenBox& b, const Point& x, bool closed) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (closed) {
            if (x[k] < b.lo[k] || x[k] > b.hi[k]) return false;
        } else {
            if (x[k] <= b.lo[k] || x[k] >= b.hi[k]) return false;
        }
    }
    return true;
}

// Strict membership (interior) unless the region is flagged closed.
inline bool region_contains(const Region& D, const Point& x) {
    if (std::holds_alternative<OpenHalfspaceIntersection>(D.shape)) {
        const auto& H = std::get<OpenHalfspaceIntersection>(D.shape);
        for (const auto& h : H.strict_below) {
            if (h.normal.size() != x.size()) throw std::invalid_argument("region_contains: dimension mismatch");
            const double v = h.eval(x);
            if (D.closed_membership ? v > 0.0 : v >= 0.0) return false;
        }
        return true;
    }
    const auto& U = std::get<OpenBoxUnion>(D.shape);
    for (const auto& b : U.boxes)
        if (box_contains(b, x, D.closed_membership)) return true;
    return false;
}

// Exact distance from x to the complement of D in R^n for half-space
// intersections; for box unions, the max over containing boxes of the
// distance to that box's boundary, which lower-bounds d(x, F \ D).
inline double region_clearance(const Point& x, const Region& D) {
    if (std::holds_alternative<OpenHalfspaceIntersection>(D.shape)) {
        const auto& H = std::get<OpenHalfspaceIntersection>(D.shape);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& h : H.strict_below) best = std::min(best, -h.eval(x) / norm2(h.normal));
        return std::max(0.0, best);
    }
    const auto& U = std::get<OpenBoxUnion>(D.shape);
    double best = 0.0;
    for (const auto& b : U.boxes) {
        if (!box_contains(b, x, /*closed=*/false)) continue;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < x.size(); ++k) m = std::min({m, x[k] - b.lo[k], b.hi[k] - x[k]});
        best = std::max(best, m);
    }
    return best;
}

// d(x, F \ D) lower bound used by the H* test; requires x feasible.
inline double distance_to_complement(const Point& x, const Region& D, const ConvexBody& F) {
    if (distance_to_body(x, F) > kProjectionTolerance)
        throw std::invalid_argument("distance_to_complement: point outside the feasible set");
    return region_clearance(x, D);
}

// d(y, closure(D)); exact for both region variants.
inline double distance_to_region(const Point& y, const Region& D) {
    if (std::holds_alternative<OpenHalfspaceIntersection>(D.shape)) {
        const auto& H = std::get<OpenHalfspaceIntersection>(D.shape);
        if (H.strict_below.empty()) return 0.0;
        const Point p = detail::project_onto_halfspaces(y, H.strict_below);
        return dist2(y, p);
    }
    const auto& U = std::get<OpenBoxUnion>(D.shape);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : U.boxes) {
        double s = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double c = std::clamp(y[k], b.lo[k], b.hi[k]);
            s += (y[k] - c) * (y[k] - c);
        }
        best = std::min(best, std::sqrt(s));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Brute-force grid oracle for tests and the 2D connectivity check.

struct GridOracle {
    Point lo, hi;
    int resolution = 2;  // lattice nodes per axis

    double step(std::size_t axis) const { return (hi[axis] - lo[axis]) / (resolution - 1); }

    double diagonal() const {
        double s = 0.0;
        for (std::size_t k = 0; k < lo.size(); ++k) s += step(k) * step(k);
        return std::sqrt(s);
    }

    // Visits every lattice node.
    void for_each_node(const std::function<void(const Point&)>& fn) const {
        const std::size_t n = lo.size();
        std::vector<int> ix(n, 0);
        Point p(n);
        while (true) {
            for (std::size_t k = 0; k < n; ++k) p[k] = lo[k] + step(k) * ix[k];
            fn(p);
            std::size_t k = 0;
            while (k < n && ++ix[k] == resolution) {
                ix[k] = 0;
                ++k;
            }
            if (k == n) break;
        }
    }

    // min over nodes satisfying pred of ||x - node||; +inf if none qualify.
    double min_distance_to(const Point& x, const std::function<bool(const Point&)>& pred) const {
        double best = std::numeric_limits<double>::infinity();
        for_each_node([&](const Point& p) {
            if (pred(p)) best = std::min(best, dist2(x, p));
        });
        return best;
    }
};

// Membership test for conv(union of convex bodies) via sampled support
// directions (2D, equiangular). Inside answers are reliable up to the angular
// resolution; used by the waypoint condition checker.
class SampledConvexUnion {
  public:
    // Each part may carry a dilation radius r >= 0, standing for B(part, r).
    SampledConvexUnion(std::vector<std::pair<ConvexBody, double>> parts, int directions = 256) {
        if (parts.empty()) throw std::invalid_argument("SampledConvexUnion: no parts");
        if (body_dimension(parts.front().first) != 2)
            throw std::invalid_argument("SampledConvexUnion: 2D only");
        dirs_.reserve(directions);
        sup_.reserve(directions);
        for (int k = 0; k < directions; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k / directions;
            Point d{std::cos(th), std::sin(th)};
            double h = -std::numeric_limits<double>::infinity();
            for (const auto& [body, dilation] : parts) h = std::max(h, support(body, d) + dilation);
            dirs_.push_back(std::move(d));
            sup_.push_back(h);
        }
    }

    bool contains(const Point& z, double tol = 1e-9) const {
        for (std::size_t k = 0; k < dirs_.size(); ++k)
            if (dot(dirs_[k], z) > sup_[k] + tol) return false;
        return true;
    }

  private:
    std::vector<Point> dirs_;
    std::vector<double> sup_;
};

// True iff the grid nodes satisfying pred form exactly one 4-connected
// component. Resolution-dependent; 2D only.
inline bool grid_path_connected(const std::function<bool(const Point&)>& pred, const GridOracle& oracle) {
    if (oracle.resolution < 2) throw std::invalid_argument("grid_path_connected: resolution < 2");
    if (oracle.lo.size() != 2) throw std::invalid_argument("grid_path_connected: 2D only");
    const int R = oracle.resolution;
    std::vector<char> inside(static_cast<std::size_t>(R) * R, 0);
    Point p(2);
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            p[0] = oracle.lo[0] + oracle.step(0) * i;
            p[1] = oracle.lo[1] + oracle.step(1) * j;
            inside[static_cast<std::size_t>(i) * R + j] = pred(p) ? 1 : 0;
        }
    }
    int components = 0;
    std::vector<char> seen(inside.size(), 0);
    std::vector<int> stack;
    for (std::size_t start = 0; start < inside.size(); ++start) {
        if (!inside[start] || seen[start]) continue;
        if (++components > 1) return false;
        stack.assign(1, static_cast<int>(start));
        seen[start] = 1;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            const int i = cur / R, j = cur % R;
            const int ni[4] = {i - 1, i + 1, i, i};
            const int nj[4] = {j, j, j - 1, j + 1};
            for (int d = 0; d < 4; ++d) {
                if (ni[d] < 0 || ni[d] >= R || nj[d] < 0 || nj[d] >= R) continue;
                const int nx = ni[d] * R + nj[d];
                if (inside[nx] && !seen[nx]) {
                    seen[nx] = 1;
                    stack.push_back(nx);
                }
            }
        }
    }
    return components == 1;
}

}  // namespace approach
