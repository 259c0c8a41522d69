#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsplit/sample.hpp"

namespace sumsplit {

struct UnknownFunction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Seeded uniform in [0,1) drawn directly from the engine words, so outputs
// do not depend on the standard library's distribution implementation.
struct SeededUniform {
    std::mt19937_64 engine;

    explicit SeededUniform(std::uint64_t seed) : engine(seed) {}

    double next() { return std::ldexp(static_cast<double>(engine() >> 11), -53); }
};

}  // namespace detail

// Strictly increasing curve through [0,1]^2: cumulative sums of strictly
// positive increments. Pairwise distinct coordinates in both axes, hence no
// axis-parallel segment and no array of any length. Values are left at zero.
inline SampledCompactum gen_monotone_curve(std::size_t count, std::uint64_t seed) {
    if (count < 2)
        throw std::invalid_argument("gen_monotone_curve: need at least two points");
    detail::SeededUniform rng(seed);
    SampledCompactum s;
    s.points.reserve(count);
    double x = 0.1 * rng.next();
    double y = 0.1 * rng.next();
    const double step = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        s.points.push_back({x, y});
        x += step * (0.25 + 0.75 * rng.next());
        y += step * (0.25 + 0.75 * rng.next());
    }
    s.values.assign(count, 0.0);
    s.declared_spacing = step;
    return s;
}

// A vertical segment and a horizontal segment with disjoint projections in
// both axes: {0} x [0,1] together with [2,3] x {2}. Contains arrays of
// length one but none of length two, while still producing long almost
// vertical and long almost horizontal ends.
inline SampledCompactum gen_disjoint_cross_free(std::uint64_t seed, std::size_t per_segment = 60) {
    if (per_segment < 2)
        throw std::invalid_argument("gen_disjoint_cross_free: need at least two points per segment");
    detail::SeededUniform rng(seed);
    SampledCompactum s;
    const double step = 1.0 / static_cast<double>(per_segment);
    for (std::size_t i = 0; i < per_segment; ++i)
        s.points.push_back({0.0, (static_cast<double>(i) + 0.05 + 0.9 * rng.next()) * step});
    for (std::size_t i = 0; i < per_segment; ++i)
        s.points.push_back({2.0 + (static_cast<double>(i) + 0.05 + 0.9 * rng.next()) * step, 2.0});
    s.values.assign(s.points.size(), 0.0);
    s.declared_spacing = step;
    return s;
}

// An L-shape (0,0)-(0,1)-(1,1), a genuine array of length two with both
// segments long, plus a detached monotone tail. Pipelines must reject this.
inline SampledCompactum gen_with_array(std::uint64_t seed, std::size_t extra = 17) {
    SampledCompactum s;
    s.points = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    detail::SeededUniform rng(seed);
    double x = 2.0, y = 2.0;
    for (std::size_t i = 0; i < extra; ++i) {
        x += 0.02 + 0.05 * rng.next();
        y += 0.02 + 0.05 * rng.next();
        s.points.push_back({x, y});
    }
    s.values.assign(s.points.size(), 0.0);
    return s;
}

enum class GeneratorKind { MonotoneCurve, DisjointCrossFree, WithArray };

// A reproducible description of a test sample: generation is a pure function
// of these fields.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::MonotoneCurve;
    std::size_t count = 200;
    std::uint64_t seed = 1;
};

inline SampledCompactum generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorKind::MonotoneCurve:
            return gen_monotone_curve(spec.count, spec.seed);
        case GeneratorKind::DisjointCrossFree:
            return gen_disjoint_cross_free(spec.seed);
        case GeneratorKind::WithArray:
            return gen_with_array(spec.seed);
    }
    throw std::invalid_argument("generate: unknown generator kind");
}

using PointFunction = std::function<double(double, double)>;

inline SampledCompactum attach_custom(SampledCompactum s, const PointFunction& f) {
    s.values.clear();
    s.values.reserve(s.points.size());
    for (const Point& p : s.points) s.values.push_back(f(p.x, p.y));
    return s;
}

// Named test functions; sin_poly(a,b) is f(x,y) = sin(a x) + y^b.
inline SampledCompactum attach_function(SampledCompactum s, const std::string& name,
                                        std::span<const double> params = {}) {
    if (name == "zero") return attach_custom(std::move(s), [](double, double) { return 0.0; });
    if (name == "constant") {
        const double c = params.empty() ? 1.0 : params[0];
        return attach_custom(std::move(s), [c](double, double) { return c; });
    }
    if (name == "coordinate_sum")
        return attach_custom(std::move(s), [](double x, double y) { return x + y; });
    if (name == "sin_poly") {
        const double a = params.size() > 0 ? params[0] : 3.0;
        const double b = params.size() > 1 ? params[1] : 2.0;
        return attach_custom(std::move(s),
                             [a, b](double x, double y) { return std::sin(a * x) + std::pow(y, b); });
    }
    throw UnknownFunction("attach_function: unknown function '" + name + "'");
}

}  // namespace sumsplit
