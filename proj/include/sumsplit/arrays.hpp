#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sumsplit/geometry.hpp"
#include "sumsplit/quantize.hpp"

namespace sumsplit {

enum class Axis { Vertical, Horizontal };

// A polyline of axis-parallel segments with consecutive segments orthogonal.
// length() is the segment count.
struct ArrayCertificate {
    std::vector<Point> points;
    std::vector<Axis> orientations;

    std::size_t length() const { return orientations.size(); }
};

// A sequence of distinct representatives whose consecutive pairs are near
// each other in one coordinate at the given level.
struct AlmostArrayPath {
    std::vector<Point> points;
    Level level{0};

    std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
};

namespace detail {

// Segment roles under a coordinate-equality tolerance. A pair may play both
// roles when all its coordinate gaps are within tol; consecutive points must
// still be distinct as points, mirroring the exact definition at tol = 0.
inline bool vertical_within(const Point& a, const Point& b, double tol) {
    return !(a == b) && std::abs(a.x - b.x) <= tol;
}

inline bool horizontal_within(const Point& a, const Point& b, double tol) {
    return !(a == b) && std::abs(a.y - b.y) <= tol;
}

inline bool extend_array(const std::vector<Point>& pts, std::vector<std::size_t>& path, Axis next,
                         std::size_t remaining, double tol) {
    if (remaining == 0) return true;
    const Point& tail = pts[path.back()];
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (std::find(path.begin(), path.end(), k) != path.end()) continue;
        const bool fits = next == Axis::Vertical ? vertical_within(tail, pts[k], tol)
                                                 : horizontal_within(tail, pts[k], tol);
        if (!fits) continue;
        path.push_back(k);
        if (extend_array(pts, path, next == Axis::Vertical ? Axis::Horizontal : Axis::Vertical,
                         remaining - 1, tol))
            return true;
        path.pop_back();
    }
    return false;
}

inline ArrayCertificate make_certificate(const std::vector<Point>& pts,
                                         const std::vector<std::size_t>& path, Axis first) {
    ArrayCertificate cert;
    Axis axis = first;
    for (std::size_t i = 0; i < path.size(); ++i) {
        cert.points.push_back(pts[path[i]]);
        if (i + 1 < path.size()) {
            cert.orientations.push_back(axis);
            axis = axis == Axis::Vertical ? Axis::Horizontal : Axis::Vertical;
        }
    }
    return cert;
}

}  // namespace detail

// Searches for an array of the requested length (segment count >= 1), in
// lexicographic order of the point sequence; vertical-first orientation is
// probed before horizontal-first, so the returned certificate is canonical.
inline std::optional<ArrayCertificate> find_array(std::span<const Point> points, std::size_t length,
                                                  double tol = 0.0) {
    if (length == 0 || points.size() < length + 1) return std::nullopt;
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<std::size_t> path;
    for (std::size_t start = 0; start < pts.size(); ++start) {
        for (Axis first : {Axis::Vertical, Axis::Horizontal}) {
            path.assign(1, start);
            if (detail::extend_array(pts, path, first, length, tol))
                return detail::make_certificate(pts, path, first);
        }
    }
    return std::nullopt;
}

// Sternfeld's condition (A) for m = 2: a triple forming a vertical and a
// horizontal segment. none means the sample admits the decomposition.
inline std::optional<ArrayCertificate> find_length2_array(std::span<const Point> points,
                                                          double tol = 0.0) {
    return find_array(points, 2, tol);
}

// Witness path realizing bridge_gap over the same graph; none when the gap
// is infinite.
inline std::optional<AlmostArrayPath> shortest_bridging_almost_array(const RepresentativeSet& V,
                                                                     double delta) {
    const detail::BridgeSearch s = detail::bridge_bfs(V, delta);
    if (s.best_target == kNoPath) return std::nullopt;

    AlmostArrayPath path;
    path.level = V.level;
    for (std::size_t v = s.best_target; v != kNoPath; v = s.parent[v])
        path.points.push_back(V.reps[v].pt);
    std::reverse(path.points.begin(), path.points.end());
    return path;
}

}  // namespace sumsplit
