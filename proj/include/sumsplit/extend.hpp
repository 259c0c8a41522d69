#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "sumsplit/gamma.hpp"
#include "sumsplit/geometry.hpp"

namespace sumsplit {

struct EmptyColumnNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Continuous piecewise-linear function on the whole line: linear between
// consecutive breakpoints, constant on both tails.
struct PWLinear {
    std::vector<double> breakpoints;  // strictly increasing
    std::vector<double> values;

    double eval(double x) const {
        if (breakpoints.empty())
            throw std::invalid_argument("PWLinear: empty function");
        if (x <= breakpoints.front()) return values.front();
        if (x >= breakpoints.back()) return values.back();
        // x lies strictly inside; pick the segment [b[i], b[i+1]) with b[i] <= x.
        const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
        const double t = (x - breakpoints[i]) / (breakpoints[i + 1] - breakpoints[i]);
        return values[i] + t * (values[i + 1] - values[i]);
    }

    // Linear pieces attain their extremes at breakpoints and the tails are
    // constant, so the sup over the line is the max over breakpoint values.
    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline double eval_pwl(const PWLinear& g, double x) { return g.eval(x); }

// Extends a table function to the line. Narrow gaps (< 1/2^(n-1)) are
// bridged linearly. A wider gap spans at least two whole dyadic columns, of
// which at least one is free of sample projections; the values are held
// constant up to that column and joined linearly across it, so the extension
// never moves inside columns the sample occupies.
inline PWLinear extend_pwl(const TableFunction& table, Level n,
                           const std::set<std::int64_t>& projected_cells) {
    if (table.args.empty())
        throw std::invalid_argument("extend_pwl: empty table");

    PWLinear g;
    g.breakpoints.push_back(table.args.front());
    g.values.push_back(table.values.front());

    const double narrow = std::ldexp(1.0, 1 - n.n);  // 1/2^(n-1)
    const double side = std::ldexp(1.0, -n.n);
    for (std::size_t i = 1; i < table.args.size(); ++i) {
        const double x0 = table.args[i - 1];
        const double x1 = table.args[i];
        if (x1 - x0 >= narrow) {
            // The first free column after x0; its right edge may touch x1
            // when x1 is itself dyadic, in which case the trailing constant
            // region is empty and the column joins the endpoints directly.
            std::int64_t j = static_cast<std::int64_t>(std::floor(std::ldexp(x0, n.n))) + 1;
            while (static_cast<double>(j + 1) * side <= x1 && projected_cells.count(j) != 0) ++j;
            if (!(static_cast<double>(j + 1) * side <= x1))
                throw EmptyColumnNotFound(
                    "extend_pwl: no unoccupied dyadic column inside a wide gap; "
                    "projected_cells is inconsistent with the table");
            g.breakpoints.push_back(static_cast<double>(j) * side);
            g.values.push_back(table.values[i - 1]);
            if (static_cast<double>(j + 1) * side < x1) {
                g.breakpoints.push_back(static_cast<double>(j + 1) * side);
                g.values.push_back(table.values[i]);
            }
        }
        g.breakpoints.push_back(x1);
        g.values.push_back(table.values[i]);
    }
    return g;
}

// Sum of two piecewise-linear functions over the union of breakpoints;
// exact at every breakpoint of either operand.
inline PWLinear pwl_add(const PWLinear& a, const PWLinear& b) {
    PWLinear out;
    out.breakpoints.reserve(a.breakpoints.size() + b.breakpoints.size());
    std::merge(a.breakpoints.begin(), a.breakpoints.end(), b.breakpoints.begin(),
               b.breakpoints.end(), std::back_inserter(out.breakpoints));
    out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end()),
                          out.breakpoints.end());
    out.values.reserve(out.breakpoints.size());
    for (double x : out.breakpoints) out.values.push_back(a.eval(x) + b.eval(x));
    return out;
}

}  // namespace sumsplit
