#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "sumsplit/geometry.hpp"
#include "sumsplit/quantize.hpp"

namespace sumsplit {

enum class GraphSign { Plus, Minus };

// Band index of a function value: number of whole epsilon-steps between the
// value and zero, truncated toward zero. The minus side mirrors the plus
// side, so band(-v) == -band(v); this keeps the minus sentinel reachable
// from the vertex attaining -||f|| and the gamma sandwich symmetric.
inline long band_index(double value, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("band_index: epsilon must be positive");
    return static_cast<long>(std::trunc(value / epsilon));
}

struct AugmentedVertex {
    enum class Kind { Real, Artificial, Sentinel };

    Kind kind = Kind::Real;
    std::size_t rep_index = 0;  // valid for Real vertices only
    Point pt;                   // valid for Real vertices only
    double value = 0.0;         // f at the vertex
    long band = 0;              // band_index(value, epsilon), stored to avoid re-rounding
    bool long_vertical_end = false;
    bool long_horizontal_end = false;
};

// Real vertices for all of V plus one artificial horizontal-end vertex per
// band in [-F, F] that no horizontal-end vertex occupies. The artificial
// vertices form the rungs of the sentinel ladder; they carry no plane
// coordinates and therefore join no short-segment edges.
inline std::vector<AugmentedVertex> pad_levels(const RepresentativeSet& V, double delta,
                                               double epsilon, long F) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("pad_levels: epsilon must be positive");

    const std::vector<char> lv = long_vertical_end_flags(V, delta);
    const std::vector<char> lh = long_horizontal_end_flags(V, delta);

    std::vector<AugmentedVertex> out;
    out.reserve(V.reps.size());
    std::map<long, bool> band_has_horizontal_end;
    for (std::size_t i = 0; i < V.reps.size(); ++i) {
        AugmentedVertex v;
        v.kind = AugmentedVertex::Kind::Real;
        v.rep_index = i;
        v.pt = V.reps[i].pt;
        v.value = V.reps[i].value;
        v.band = band_index(v.value, epsilon);
        v.long_vertical_end = lv[i] != 0;
        v.long_horizontal_end = lh[i] != 0;
        if (v.long_horizontal_end) band_has_horizontal_end[v.band] = true;
        out.push_back(v);
    }
    for (long i = -F; i <= F; ++i) {
        if (band_has_horizontal_end.count(i)) continue;
        AugmentedVertex v;
        v.kind = AugmentedVertex::Kind::Artificial;
        v.value = static_cast<double>(i) * epsilon;
        v.band = i;
        v.long_horizontal_end = true;
        out.push_back(v);
    }
    return out;
}

// One sign side of the construction: the vertices of that sign plus the
// sentinel (always at index 0), with the three edge kinds of the paper
// construction: short segments, horizontal-end pairs at adjacent bands,
// and sentinel edges to horizontal ends at the outermost band.
struct LevelGraph {
    GraphSign sign = GraphSign::Plus;
    double epsilon = 0.0;
    long F = 0;
    std::vector<AugmentedVertex> vertices;
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t size() const { return vertices.size(); }
};

inline LevelGraph build_sign_graph(const std::vector<AugmentedVertex>& padded, GraphSign sign,
                                   double delta, double epsilon, long F) {
    LevelGraph g;
    g.sign = sign;
    g.epsilon = epsilon;
    g.F = F;

    AugmentedVertex sentinel;
    sentinel.kind = AugmentedVertex::Kind::Sentinel;
    sentinel.value = sign == GraphSign::Plus ? static_cast<double>(F + 1) * epsilon
                                             : static_cast<double>(-F - 1) * epsilon;
    sentinel.band = sign == GraphSign::Plus ? F + 1 : -F - 1;
    g.vertices.push_back(sentinel);
    for (const AugmentedVertex& v : padded) {
        const bool plus_side = v.value >= 0.0;
        if ((sign == GraphSign::Plus) == plus_side) g.vertices.push_back(v);
    }

    const std::size_t m = g.vertices.size();
    g.adjacency.assign(m, {});
    auto connect = [&](std::size_t a, std::size_t b) {
        g.adjacency[a].push_back(b);
        g.adjacency[b].push_back(a);
    };
    for (std::size_t i = 1; i < m; ++i) {
        const AugmentedVertex& a = g.vertices[i];
        if (a.long_horizontal_end && std::labs(a.band) == F) connect(0, i);
        for (std::size_t j = i + 1; j < m; ++j) {
            const AugmentedVertex& b = g.vertices[j];
            const bool both_real = a.kind == AugmentedVertex::Kind::Real &&
                                   b.kind == AugmentedVertex::Kind::Real;
            if (both_real && chebyshev(a.pt, b.pt) < delta) {
                connect(i, j);
                continue;
            }
            if (a.long_horizontal_end && b.long_horizontal_end && std::labs(a.band - b.band) == 1)
                connect(i, j);
        }
    }
    for (auto& neighbors : g.adjacency) std::sort(neighbors.begin(), neighbors.end());
    return g;
}

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Edge-count distance from the sentinel; kUnreachable off its component.
inline std::vector<std::size_t> bfs_depth(const LevelGraph& g) {
    std::vector<std::size_t> dist(g.size(), kUnreachable);
    if (g.size() == 0) return dist;
    std::deque<std::size_t> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : g.adjacency[u]) {
            if (dist[v] != kUnreachable) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

// The staircase potential: on the plus side max{(F - d + 1) eps, 0} for
// reachable vertices and 0 elsewhere; the minus side is the sign mirror.
// Every value is an exact integer multiple of epsilon.
inline std::vector<double> gamma_values(const LevelGraph& g, const std::vector<std::size_t>& depth) {
    if (depth.size() != g.size())
        throw std::invalid_argument("gamma_values: depth map does not match the graph");
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (depth[i] == kUnreachable) continue;
        const long d = static_cast<long>(depth[i]);
        if (g.sign == GraphSign::Plus) {
            const long steps = std::max(g.F - d + 1, 0L);
            out[i] = static_cast<double>(steps) * g.epsilon;
        } else {
            const long steps = std::min(-g.F + d - 1, 0L);
            out[i] = static_cast<double>(steps) * g.epsilon;
        }
    }
    return out;
}

// Merges the per-graph gamma values back onto the representatives; every
// representative lives in exactly one sign graph.
inline std::vector<double> gamma_by_representative(const RepresentativeSet& V,
                                                   const LevelGraph& plus,
                                                   const std::vector<double>& gamma_plus,
                                                   const LevelGraph& minus,
                                                   const std::vector<double>& gamma_minus) {
    std::vector<double> out(V.reps.size(), 0.0);
    auto scatter = [&](const LevelGraph& g, const std::vector<double>& gamma) {
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.vertices[i].kind == AugmentedVertex::Kind::Real)
                out[g.vertices[i].rep_index] = gamma[i];
    };
    scatter(plus, gamma_plus);
    scatter(minus, gamma_minus);
    return out;
}

// A finite function on a projection of V: strictly increasing arguments with
// aligned values.
struct TableFunction {
    std::vector<double> args;
    std::vector<double> values;

    std::size_t size() const { return args.size(); }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    double at(double arg) const {
        const auto it = std::lower_bound(args.begin(), args.end(), arg);
        if (it == args.end() || *it != arg)
            throw std::invalid_argument("TableFunction: argument not in the domain");
        return values[static_cast<std::size_t>(it - args.begin())];
    }
};

// G on p(V): gamma at the minimum-y representative of each column.
inline TableFunction build_g_table(const RepresentativeSet& V,
                                   const std::vector<double>& gamma_by_rep) {
    if (gamma_by_rep.size() != V.reps.size())
        throw std::invalid_argument("build_g_table: gamma map does not match V");
    std::map<double, std::size_t> column_rep;  // x -> rep index with minimal y
    for (std::size_t i = 0; i < V.reps.size(); ++i) {
        auto [it, inserted] = column_rep.emplace(V.reps[i].pt.x, i);
        if (!inserted && V.reps[i].pt.y < V.reps[it->second].pt.y) it->second = i;
    }
    TableFunction t;
    t.args.reserve(column_rep.size());
    t.values.reserve(column_rep.size());
    for (const auto& [x, rep] : column_rep) {
        t.args.push_back(x);
        t.values.push_back(gamma_by_rep[rep]);
    }
    return t;
}

// H on q(V): H(v) = f(u*, v) - G(u*) at the minimum-x representative of
// each row.
inline TableFunction build_h_table(const RepresentativeSet& V, const TableFunction& g_table) {
    std::map<double, std::size_t> row_rep;  // y -> rep index with minimal x
    for (std::size_t i = 0; i < V.reps.size(); ++i) {
        auto [it, inserted] = row_rep.emplace(V.reps[i].pt.y, i);
        if (!inserted && V.reps[i].pt.x < V.reps[it->second].pt.x) it->second = i;
    }
    TableFunction t;
    t.args.reserve(row_rep.size());
    t.values.reserve(row_rep.size());
    for (const auto& [y, rep] : row_rep) {
        t.args.push_back(y);
        t.values.push_back(V.reps[rep].value - g_table.at(V.reps[rep].pt.x));
    }
    return t;
}

}  // namespace sumsplit
