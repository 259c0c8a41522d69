#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <queue>
#include <random>

#include "sumsplit/gamma.hpp"
#include "sumsplit/pipeline.hpp"

using namespace sumsplit;

namespace {

SampledCompactum make_sample(std::vector<Point> pts, std::vector<double> vals) {
    SampledCompactum s;
    s.points = std::move(pts);
    s.values = std::move(vals);
    return s;
}

// Unit-weight Dijkstra, deliberately different from the BFS under test.
std::vector<std::size_t> dijkstra_oracle(const LevelGraph& g) {
    std::vector<std::size_t> dist(g.size(), kUnreachable);
    using Entry = std::pair<std::size_t, std::size_t>;  // (distance, vertex)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[0] = 0;
    heap.push({0, 0});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (std::size_t v : g.adjacency[u]) {
            if (d + 1 < dist[v]) {
                dist[v] = d + 1;
                heap.push({d + 1, v});
            }
        }
    }
    return dist;
}

LevelGraph random_graph(std::mt19937_64& rng, std::size_t vertices, double edge_prob) {
    LevelGraph g;
    g.sign = GraphSign::Plus;
    g.epsilon = 1.0;
    g.F = 3;
    g.vertices.assign(vertices, AugmentedVertex{});
    g.adjacency.assign(vertices, {});
    for (std::size_t i = 0; i < vertices; ++i)
        for (std::size_t j = i + 1; j < vertices; ++j)
            if (std::ldexp(static_cast<double>(rng() >> 11), -53) < edge_prob) {
                g.adjacency[i].push_back(j);
                g.adjacency[j].push_back(i);
            }
    return g;
}

}  // namespace

TEST_CASE("band_index truncates toward zero", "[gamma]") {
    CHECK(band_index(2.0, 1.0) == 2);
    CHECK(band_index(0.99, 1.0) == 0);
    CHECK(band_index(-0.5, 1.0) == 0);
    CHECK(band_index(-1.0, 1.0) == -1);
    CHECK(band_index(-1.5, 1.0) == -1);
    CHECK(band_index(2.5, 0.5) == 5);
}

TEST_CASE("pad_levels adds rungs exactly where horizontal ends are missing", "[gamma]") {
    {
        // f == 0 on a genuine horizontal pair: band 0 already has its
        // horizontal ends, so nothing is added.
        const auto sample = make_sample({{0, 0}, {0.9, 0.01}}, {0.0, 0.0});
        const auto V = build_representatives(sample, Level{4});
        const auto padded = pad_levels(V, 0.5, 1.0, 0);
        REQUIRE(padded.size() == 2);
        CHECK(padded[0].kind == AugmentedVertex::Kind::Real);
        CHECK(padded[1].kind == AugmentedVertex::Kind::Real);
        CHECK(padded[0].long_horizontal_end);
    }
    {
        // A lone point ends no segment, so every band needs an artificial rung.
        const auto sample = make_sample({{0.5, 0.5}}, {2.0});
        const auto V = build_representatives(sample, Level{4});
        const auto padded = pad_levels(V, 0.5, 1.0, 2);
        REQUIRE(padded.size() == 6);  // 1 real + rungs at -2..2
        std::vector<long> artificial_bands;
        for (const auto& v : padded)
            if (v.kind == AugmentedVertex::Kind::Artificial) {
                artificial_bands.push_back(v.band);
                CHECK(v.long_horizontal_end);
                CHECK_FALSE(v.long_vertical_end);
                CHECK(v.value == static_cast<double>(v.band) * 1.0);
            }
        CHECK(artificial_bands == std::vector<long>{-2, -1, 0, 1, 2});
    }
    {
        // A horizontal-end pair occupying band 2 suppresses its rung.
        const auto sample = make_sample({{0, 0}, {0.9, 0.01}}, {2.0, 2.0});
        const auto V = build_representatives(sample, Level{4});
        const auto padded = pad_levels(V, 0.5, 1.0, 2);
        std::vector<long> artificial_bands;
        for (const auto& v : padded)
            if (v.kind == AugmentedVertex::Kind::Artificial) artificial_bands.push_back(v.band);
        CHECK(artificial_bands == std::vector<long>{-2, -1, 0, 1});
    }
}

TEST_CASE("pad_levels occupancy matches the value histogram", "[gamma][property]") {
    std::mt19937_64 rng(41);
    auto coin = [&] { return std::ldexp(static_cast<double>(rng() >> 11), -53); };
    std::vector<Point> pts;
    std::vector<double> vals;
    for (int i = 0; i < 8; ++i) {
        pts.push_back({coin() * 2, coin() * 2});
        vals.push_back(coin() * 6 - 3);
    }
    const double eps = 1.0;
    const auto sample = make_sample(pts, vals);
    const auto V = build_representatives(sample, Level{4});
    const long F = static_cast<long>(std::floor(sample.sup_norm() / eps));
    const auto padded = pad_levels(V, 0.4, eps, F);

    std::map<long, int> real_hist;
    for (const auto& r : V.reps) real_hist[band_index(r.value, eps)] += 1;
    std::map<long, int> padded_real_hist;
    std::map<long, bool> lh_bands;
    for (const auto& v : padded) {
        if (v.kind == AugmentedVertex::Kind::Real) {
            padded_real_hist[v.band] += 1;
            if (v.long_horizontal_end) lh_bands[v.band] = true;
        }
    }
    CHECK(padded_real_hist == real_hist);
    for (const auto& v : padded)
        if (v.kind == AugmentedVertex::Kind::Artificial) {
            CHECK(v.band >= -F);
            CHECK(v.band <= F);
            CHECK_FALSE(lh_bands.count(v.band));
        }
}

TEST_CASE("build_sign_graph wires the ladder", "[gamma]") {
    const auto sample = make_sample({{0, 0}, {0.9, 0.01}}, {2.0, 2.0});
    const auto V = build_representatives(sample, Level{4});
    const auto padded = pad_levels(V, 0.5, 1.0, 2);
    const auto plus = build_sign_graph(padded, GraphSign::Plus, 0.5, 1.0, 2);
    const auto minus = build_sign_graph(padded, GraphSign::Minus, 0.5, 1.0, 2);

    // Plus side: sentinel, two reals at band 2, artificials at bands 0 and 1.
    REQUIRE(plus.size() == 5);
    CHECK(plus.vertices[0].kind == AugmentedVertex::Kind::Sentinel);
    CHECK(plus.vertices[0].value == 3.0);
    // Sentinel connects exactly to the band-2 horizontal ends.
    CHECK(plus.adjacency[0] == std::vector<std::size_t>{1, 2});
    const auto depth_plus = bfs_depth(plus);
    CHECK(depth_plus[1] == 1);
    CHECK(depth_plus[2] == 1);

    // Chain through the artificial rungs: bands 2 -> 1 -> 0.
    std::map<long, std::size_t> art;
    for (std::size_t i = 0; i < plus.size(); ++i)
        if (plus.vertices[i].kind == AugmentedVertex::Kind::Artificial)
            art[plus.vertices[i].band] = i;
    REQUIRE(art.size() == 2);
    CHECK(depth_plus[art[1]] == 2);
    CHECK(depth_plus[art[0]] == 3);

    // Minus side mirrors with artificials at -1 and -2.
    REQUIRE(minus.size() == 3);
    CHECK(minus.vertices[0].value == -3.0);
    const auto depth_minus = bfs_depth(minus);
    std::map<long, std::size_t> mart;
    for (std::size_t i = 0; i < minus.size(); ++i)
        if (minus.vertices[i].kind == AugmentedVertex::Kind::Artificial)
            mart[minus.vertices[i].band] = i;
    CHECK(depth_minus[mart[-2]] == 1);
    CHECK(depth_minus[mart[-1]] == 2);

    const auto gamma_plus = gamma_values(plus, depth_plus);
    CHECK(gamma_plus[1] == 2.0);
    CHECK(gamma_plus[art[1]] == 1.0);
    CHECK(gamma_plus[art[0]] == 0.0);
    const auto gamma_minus = gamma_values(minus, depth_minus);
    CHECK(gamma_minus[mart[-2]] == -2.0);
    CHECK(gamma_minus[mart[-1]] == -1.0);
}

TEST_CASE("two nearby reals of the same sign get a short edge", "[gamma]") {
    const auto sample = make_sample({{0, 0}, {0.05, 0.02}}, {0.4, 0.5});
    const auto V = build_representatives(sample, Level{5});
    const auto padded = pad_levels(V, 0.1, 1.0, 0);
    const auto plus = build_sign_graph(padded, GraphSign::Plus, 0.1, 1.0, 0);
    // Sentinel, the two reals, and the band-0 rung (neither real ends a
    // long segment, so the rung is added).
    REQUIRE(plus.size() == 4);
    std::vector<std::size_t> reals;
    for (std::size_t i = 0; i < plus.size(); ++i)
        if (plus.vertices[i].kind == AugmentedVertex::Kind::Real) reals.push_back(i);
    REQUIRE(reals.size() == 2);
    bool edge_between_reals = false;
    for (std::size_t v : plus.adjacency[reals[0]])
        edge_between_reals = edge_between_reals || v == reals[1];
    CHECK(edge_between_reals);
}

TEST_CASE("bfs_depth basics and oracle", "[gamma]") {
    {
        LevelGraph g;
        g.vertices.assign(4, AugmentedVertex{});
        g.adjacency.assign(4, {});
        const auto d = bfs_depth(g);
        CHECK(d[0] == 0);
        for (int i = 1; i < 4; ++i) CHECK(d[i] == kUnreachable);
    }
    {
        LevelGraph g;
        g.vertices.assign(3, AugmentedVertex{});
        g.adjacency = {{1}, {0, 2}, {1}};
        const auto d = bfs_depth(g);
        CHECK(d[0] == 0);
        CHECK(d[1] == 1);
        CHECK(d[2] == 2);
    }
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_graph(rng, 30, 0.08);
        CHECK(bfs_depth(g) == dijkstra_oracle(g));
    }
}

TEST_CASE("gamma formula and clamp", "[gamma]") {
    LevelGraph g;
    g.sign = GraphSign::Plus;
    g.epsilon = 1.0;
    g.F = 2;
    g.vertices.assign(4, AugmentedVertex{});
    g.adjacency.assign(4, {});
    const std::vector<std::size_t> depth{0, 1, 2, 4};
    const auto gamma = gamma_values(g, depth);
    CHECK(gamma[1] == 2.0);
    CHECK(gamma[2] == 1.0);
    CHECK(gamma[3] == 0.0);

    const std::vector<std::size_t> unreachable{0, kUnreachable, kUnreachable, kUnreachable};
    const auto gamma0 = gamma_values(g, unreachable);
    CHECK(gamma0[1] == 0.0);

    g.sign = GraphSign::Minus;
    const auto gm = gamma_values(g, depth);
    CHECK(gm[1] == -2.0);
    CHECK(gm[2] == -1.0);
    CHECK(gm[3] == 0.0);
}

TEST_CASE("build_g_table and build_h_table canonical choices", "[gamma]") {
    {
        // Single column: G(u) takes gamma at the minimum-y point.
        const auto sample = make_sample({{0.5, 0.9}, {0.5, 0.1}}, {1.0, 2.0});
        const auto V = build_representatives(sample, Level{1});
        const std::vector<double> gamma{0.25, 0.75};  // aligned with cell order
        const auto g = build_g_table(V, gamma);
        REQUIRE(g.size() == 1);
        // V.reps is sorted by cell, row 0 first: (0.5,0.1) then (0.5,0.9).
        CHECK(V.reps[0].pt.y == 0.1);
        CHECK(g.values[0] == 0.25);
    }
    {
        // With G == 0, H(v) is f at the minimum-x point of the row.
        const auto sample = make_sample({{0.2, 0.5}, {0.9, 0.5}, {0.3, 0.1}}, {3.0, 4.0, 5.0});
        const auto V = build_representatives(sample, Level{2});
        const std::vector<double> zero(V.size(), 0.0);
        const auto g = build_g_table(V, zero);
        const auto h = build_h_table(V, g);
        REQUIRE(h.size() == 2);
        CHECK(h.args[0] == 0.1);
        CHECK(h.values[0] == 5.0);
        CHECK(h.args[1] == 0.5);
        CHECK(h.values[1] == 3.0);  // x = 0.2 beats x = 0.9
    }
    {
        // Diagonal curve: nothing is reachable, so G vanishes identically.
        std::vector<Point> pts;
        std::vector<double> vals;
        for (int i = 0; i < 12; ++i) {
            pts.push_back({0.08 * i, 0.08 * i});
            vals.push_back(1.0 + 0.1 * i);
        }
        const auto sample = make_sample(pts, vals);
        const double eps = 0.5;
        const long F = static_cast<long>(std::floor(sample.sup_norm() / eps));
        const auto V = build_representatives(sample, Level{6});
        const auto padded = pad_levels(V, 0.04, eps, F);
        const auto plus = build_sign_graph(padded, GraphSign::Plus, 0.04, eps, F);
        const auto depth = bfs_depth(plus);
        for (std::size_t i = 0; i < plus.size(); ++i)
            if (plus.vertices[i].kind == AugmentedVertex::Kind::Real)
                CHECK(depth[i] == kUnreachable);
        const auto gp = gamma_values(plus, depth);
        const auto minus = build_sign_graph(padded, GraphSign::Minus, 0.04, eps, F);
        const auto gm = gamma_values(minus, bfs_depth(minus));
        const auto gamma = gamma_by_representative(V, plus, gp, minus, gm);
        const auto g = build_g_table(V, gamma);
        for (double v : g.values) CHECK(v == 0.0);
    }
}

TEST_CASE("graph edges respect the band Lipschitz property", "[gamma][property]") {
    std::mt19937_64 rng(71);
    auto coin = [&] { return std::ldexp(static_cast<double>(rng() >> 11), -53); };
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point> pts;
        std::vector<double> vals;
        for (int i = 0; i < 14; ++i) {
            pts.push_back({coin() * 2, coin() * 2});
            vals.push_back(coin() * 4 - 2);
        }
        SampledCompactum sample = make_sample(pts, vals);
        const double eps = 0.5;
        const double delta = estimate_delta(sample, eps);
        const long F = static_cast<long>(std::floor(sample.sup_norm() / eps));
        const auto V = build_representatives(sample, Level{5});
        const auto padded = pad_levels(V, delta, eps, F);
        for (GraphSign sign : {GraphSign::Plus, GraphSign::Minus}) {
            const auto g = build_sign_graph(padded, sign, delta, eps, F);
            for (std::size_t u = 0; u < g.size(); ++u) {
                for (std::size_t v : g.adjacency[u]) {
                    CHECK(std::labs(g.vertices[u].band - g.vertices[v].band) <= 1);
                    const bool both_real =
                        g.vertices[u].kind == AugmentedVertex::Kind::Real &&
                        g.vertices[v].kind == AugmentedVertex::Kind::Real;
                    if (both_real && chebyshev(g.vertices[u].pt, g.vertices[v].pt) < delta)
                        CHECK(std::abs(g.vertices[u].value - g.vertices[v].value) < eps);
                }
            }
        }
    }
}

TEST_CASE("staircase bounds hold when an occupied band has no horizontal end",
          "[gamma][regression]") {
    // Vertical segment carrying the top of the range (no horizontal ends)
    // above horizontal-segment values: the rungs must come from artificial
    // vertices even though those bands are occupied.
    std::vector<Point> pts;
    std::vector<double> vals;
    for (int i = 0; i < 60; ++i) {
        const double y = (i + 0.5) / 60.0;
        pts.push_back({0.0, y});
        vals.push_back(20.0 * y);
    }
    for (int i = 0; i < 60; ++i) {
        const double x = 2.0 + (i + 0.5) / 60.0;
        pts.push_back({x, 2.0});
        vals.push_back(40.0 - 15.0 * x);
    }
    SampledCompactum sample;
    sample.points = pts;
    sample.values = vals;

    DecomposeOptions opts;
    opts.epsilon = 1.0;
    const auto d = approximate_decompose(sample, opts);
    const auto report = residual_report(sample, d);
    for (const auto& check : report.checks) {
        INFO(check.name << " worst " << check.worst << " bound " << check.bound);
        CHECK(check.ok);
    }
}
