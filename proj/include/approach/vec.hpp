#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace approach {

// Points and directions in payoff space are plain coordinate vectors.
using Point = std::vector<double>;

inline void require_same_dim(const Point& a, const Point& b, const char* where) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

inline double dot(const Point& a, const Point& b) {
    require_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm2(const Point& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Point& a, const Point& b) {
    require_same_dim(a, b, "dist2");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Point add(const Point& a, const Point& b) {
    require_same_dim(a, b, "add");
    Point r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
    return r;
}

inline Point sub(const Point& a, const Point& b) {
    require_same_dim(a, b, "sub");
    Point r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}

inline Point scale(const Point& a, double s) {
    Point r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = s * a[k];
    return r;
}

// a + s*(b - a)
inline Point lerp(const Point& a, const Point& b, double s) {
    require_same_dim(a, b, "lerp");
    Point r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + s * (b[k] - a[k]);
    return r;
}

inline Point normalized(const Point& a) {
    const double n = norm2(a);
    if (n <= 0.0) throw std::invalid_argument("normalized: zero vector");
    return scale(a, 1.0 / n);
}

}  // namespace approach
