#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsplit/geometry.hpp"

namespace sumsplit {

// A finite sample of the compactum with f-values attached. This is the
// ground-truth object: norms, residuals and certificates are all taken
// over the sample.
struct SampledCompactum {
    std::vector<Point> points;
    std::vector<double> values;
    // Density claim made by the producer; echoed in reports, never verified.
    std::optional<double> declared_spacing;

    std::size_t size() const { return points.size(); }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    void validate() const {
        if (points.empty())
            throw std::invalid_argument("sample: no points");
        if (points.size() != values.size())
            throw std::invalid_argument("sample: " + std::to_string(points.size()) + " points but " +
                                        std::to_string(values.size()) + " values");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
                throw std::invalid_argument("sample: non-finite coordinate at index " + std::to_string(i));
            if (!std::isfinite(values[i]))
                throw std::invalid_argument("sample: non-finite value at index " + std::to_string(i));
        }
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return lex_less(points[a], points[b]) || (points[a] == points[b] && a < b);
        });
        for (std::size_t k = 1; k < order.size(); ++k) {
            if (points[order[k - 1]] == points[order[k]])
                throw std::invalid_argument("sample: duplicate point at indices " + std::to_string(order[k - 1]) +
                                            " and " + std::to_string(order[k]));
        }
    }
};

}  // namespace sumsplit
