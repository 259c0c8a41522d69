#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsplit/geometry.hpp"
#include "sumsplit/sample.hpp"

namespace sumsplit {

struct Representative {
    Point pt;
    double value = 0.0;
    std::size_t sample_index = 0;
    CellIndex cell;
};

// One sample point per occupied dyadic cell, the finite stand-in V^n for
// the compactum. reps are sorted by cell index, so iteration order is fixed.
struct RepresentativeSet {
    Level level;
    std::vector<Representative> reps;

    std::size_t size() const { return reps.size(); }
};

// Chooses the lexicographically smallest sample point of each occupied cell.
inline RepresentativeSet build_representatives(const SampledCompactum& sample, Level n) {
    std::map<CellIndex, std::size_t> chosen;
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        const CellIndex c = cell_index(sample.points[i], n);
        auto [it, inserted] = chosen.emplace(c, i);
        if (!inserted && lex_less(sample.points[i], sample.points[it->second]))
            it->second = i;
    }
    RepresentativeSet out;
    out.level = n;
    out.reps.reserve(chosen.size());
    for (const auto& [cell, idx] : chosen)
        out.reps.push_back({sample.points[idx], sample.values[idx], idx, cell});
    return out;
}

// Flags, aligned with V.reps, marking ends of long almost vertical segments.
inline std::vector<char> long_vertical_end_flags(const RepresentativeSet& V, double delta) {
    const std::size_t m = V.reps.size();
    std::vector<char> flag(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const SegmentClass c = classify_segment(V.reps[i].pt, V.reps[j].pt, V.level, delta);
            if (c.is_long && c.almost_vertical) flag[i] = flag[j] = 1;
        }
    }
    return flag;
}

inline std::vector<char> long_horizontal_end_flags(const RepresentativeSet& V, double delta) {
    const std::size_t m = V.reps.size();
    std::vector<char> flag(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const SegmentClass c = classify_segment(V.reps[i].pt, V.reps[j].pt, V.level, delta);
            if (c.is_long && c.almost_horizontal) flag[i] = flag[j] = 1;
        }
    }
    return flag;
}

namespace detail {

inline std::vector<Point> flagged_points(const RepresentativeSet& V, const std::vector<char>& flags) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(V.reps[i].pt);
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace detail

inline std::vector<Point> long_vertical_ends(const RepresentativeSet& V, double delta) {
    return detail::flagged_points(V, long_vertical_end_flags(V, delta));
}

inline std::vector<Point> long_horizontal_ends(const RepresentativeSet& V, double delta) {
    return detail::flagged_points(V, long_horizontal_end_flags(V, delta));
}

inline constexpr std::size_t kNoPath = std::numeric_limits<std::size_t>::max();

// Edge relation of the bridge graph: short segments plus all almost vertical
// or almost horizontal segments, the conservative union (more edges can only
// shorten paths, so a gap certified here holds under any narrower reading).
inline bool bridge_edge(const Point& a, const Point& b, Level n, double delta) {
    const SegmentClass c = classify_segment(a, b, n, delta);
    return !c.is_long || c.almost_vertical || c.almost_horizontal;
}

namespace detail {

struct BridgeSearch {
    std::vector<std::size_t> dist;    // edge count from the nearest long-vertical end
    std::vector<std::size_t> parent;  // BFS tree towards the sources, kNoPath at roots
    std::size_t best_target = kNoPath;
    std::size_t gap = kNoPath;
};

// Multi-source BFS from the long-vertical ends over the bridge graph,
// stopping distances at the long-horizontal ends.
inline BridgeSearch bridge_bfs(const RepresentativeSet& V, double delta) {
    const std::size_t m = V.reps.size();
    const std::vector<char> src = long_vertical_end_flags(V, delta);
    const std::vector<char> dst = long_horizontal_end_flags(V, delta);

    BridgeSearch s;
    s.dist.assign(m, kNoPath);
    s.parent.assign(m, kNoPath);

    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i) {
        if (src[i]) {
            s.dist[i] = 0;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        if (dst[u]) {
            if (s.best_target == kNoPath) {
                s.best_target = u;
                s.gap = s.dist[u];
            }
            continue;  // no need to expand past a target on a shortest search
        }
        for (std::size_t v = 0; v < m; ++v) {
            if (s.dist[v] != kNoPath || v == u) continue;
            if (bridge_edge(V.reps[u].pt, V.reps[v].pt, V.level, delta)) {
                s.dist[v] = s.dist[u] + 1;
                s.parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    return s;
}

}  // namespace detail

// Shortest almost-array path length from any long-vertical end to any
// long-horizontal end, the constructive stand-in for the compactness lemma;
// kNoPath when either end set is empty or no path exists.
inline std::size_t bridge_gap(const RepresentativeSet& V, double delta) {
    return detail::bridge_bfs(V, delta).gap;
}

struct LevelNotFound : std::runtime_error {
    Level last_tried{0};
    std::size_t best_gap = 0;      // largest finite gap seen during the search
    Level best_gap_level{0};
    long required_gap = 0;

    LevelNotFound(const std::string& msg, Level last, std::size_t gap, Level gap_level, long required)
        : std::runtime_error(msg), last_tried(last), best_gap(gap), best_gap_level(gap_level),
          required_gap(required) {}
};

// Smallest n >= 0 with 1/2^n <= delta. Exact dyadic comparison, no logs.
inline Level min_level_for_delta(double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("min_level_for_delta: delta must be positive");
    int n = 0;
    while (std::ldexp(1.0, -n) > delta) {
        ++n;
        if (n > 1100)
            throw std::invalid_argument("min_level_for_delta: delta too small to represent");
    }
    return Level{n};
}

// Upward level search: the first n with cell side <= delta whose bridge gap
// reaches required_gap ( = F). Fails with LevelNotFound when every level up
// to n_max is obstructed, which is what a length-two array in the sample
// produces.
inline Level select_level(const SampledCompactum& sample, double delta, long required_gap,
                          Level n_max = Level{32}) {
    if (!(delta > 0.0))
        throw std::invalid_argument("select_level: delta must be positive");
    if (required_gap < 0)
        throw std::invalid_argument("select_level: required gap must be nonnegative");

    std::size_t best_gap = 0;
    Level best_level = min_level_for_delta(delta);
    Level n = best_level;
    for (; n.n <= n_max.n; ++n.n) {
        const RepresentativeSet V = build_representatives(sample, n);
        const std::size_t gap = bridge_gap(V, delta);
        if (gap == kNoPath || gap >= static_cast<std::size_t>(required_gap))
            return n;
        if (gap > best_gap) {
            best_gap = gap;
            best_level = n;
        }
    }
    throw LevelNotFound("select_level: no level up to n=" + std::to_string(n_max.n) +
                            " reaches bridge gap " + std::to_string(required_gap) +
                            " (best gap " + std::to_string(best_gap) + " at n=" +
                            std::to_string(best_level.n) +
                            "); the sample is obstructed by an almost array or too sparse",
                        n_max, best_gap, best_level, required_gap);
}

}  // namespace sumsplit
