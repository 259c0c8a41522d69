#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace sumsplit {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

// Lexicographic order (x first, then y); the tie-break used for every
// canonical choice in the library, so results never depend on input order.
inline bool lex_less(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Chebyshev distance, the plane metric everything is stated in.
inline double chebyshev(const Point& a, const Point& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// Dyadic grid refinement level; cells have side exactly 1/2^n.
struct Level {
    int n = 0;

    double cell_side() const { return std::ldexp(1.0, -n); }
    // Segments with a coordinate difference below 2/2^n count as
    // almost vertical / almost horizontal at this level.
    double near_threshold() const { return std::ldexp(2.0, -n); }

    friend auto operator<=>(const Level&, const Level&) = default;
};

struct CellIndex {
    std::int64_t col = 0;
    std::int64_t row = 0;

    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

// Index of the half-open cell [col/2^n,(col+1)/2^n) x [row/2^n,(row+1)/2^n)
// containing p. ldexp scaling is exact, so the convention is bit-stable.
inline CellIndex cell_index(const Point& p, Level n) {
    const double sx = std::floor(std::ldexp(p.x, n.n));
    const double sy = std::floor(std::ldexp(p.y, n.n));
    if (!(std::abs(sx) < 9.0e18) || !(std::abs(sy) < 9.0e18))
        throw std::overflow_error("cell_index: coordinate magnitude exceeds the indexable range");
    return {static_cast<std::int64_t>(sx), static_cast<std::int64_t>(sy)};
}

struct SegmentClass {
    bool almost_vertical = false;
    bool almost_horizontal = false;
    bool is_long = false;  // short <=> !is_long, split at Chebyshev distance delta
};

inline SegmentClass classify_segment(const Point& a, const Point& b, Level n, double delta) {
    const double near = n.near_threshold();
    SegmentClass c;
    c.almost_vertical = std::abs(a.x - b.x) < near;
    c.almost_horizontal = std::abs(a.y - b.y) < near;
    c.is_long = chebyshev(a, b) >= delta;
    return c;
}

}  // namespace sumsplit
