#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sumsplit/arrays.hpp"
#include "sumsplit/pipeline.hpp"
#include "sumsplit/sample.hpp"

namespace sumsplit {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal representation that parses back to the same double;
// keeps every emitted file byte-deterministic and lossless.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(context + ": not a number: '" + std::string(text) + "'");
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace detail

// CSV sample file: one "x,y,f" row per point, optional header row.
inline SampledCompactum read_sample_csv(std::istream& in) {
    SampledCompactum s;
    std::vector<std::size_t> rows;
    std::string line;
    std::size_t row = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto fields = detail::split_csv_row(stripped);
        if (fields.size() != 3)
            throw ParseError("row " + std::to_string(row) + ": expected 3 comma-separated fields, got " +
                             std::to_string(fields.size()));
        if (first_data_row) {
            first_data_row = false;
            double probe;
            const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), probe);
            if (res.ec != std::errc{} || res.ptr != fields[0].data() + fields[0].size())
                continue;  // header row
        }
        const std::string ctx = "row " + std::to_string(row);
        s.points.push_back({parse_double(fields[0], ctx), parse_double(fields[1], ctx)});
        s.values.push_back(parse_double(fields[2], ctx));
        rows.push_back(row);
    }
    if (s.points.empty()) throw ParseError("no data rows");
    for (std::size_t i = 0; i < s.points.size(); ++i)
        for (std::size_t j = i + 1; j < s.points.size(); ++j)
            if (s.points[i] == s.points[j])
                throw ParseError("duplicate point in rows " + std::to_string(rows[i]) + " and " +
                                 std::to_string(rows[j]));
    return s;
}

inline SampledCompactum read_sample_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sample file: " + path);
    try {
        return read_sample_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_sample_csv(std::ostream& out, const SampledCompactum& s) {
    out << "x,y,f\n";
    for (std::size_t i = 0; i < s.points.size(); ++i)
        out << format_double(s.points[i].x) << ',' << format_double(s.points[i].y) << ','
            << format_double(s.values[i]) << '\n';
}

inline void write_sample_csv_file(const std::string& path, const SampledCompactum& s) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    write_sample_csv(out, s);
}

inline nlohmann::ordered_json decomposition_to_json(const Decomposition& d) {
    nlohmann::ordered_json j;
    j["meta"] = {{"n", d.meta.n.n},
                 {"epsilon", d.meta.epsilon},
                 {"delta", d.meta.delta},
                 {"F", d.meta.F},
                 {"iterations", d.meta.iterations},
                 {"sup_residual", d.meta.sup_residual}};
    j["g"] = {{"breakpoints", d.g.breakpoints}, {"values", d.g.values}};
    j["h"] = {{"breakpoints", d.h.breakpoints}, {"values", d.h.values}};
    return j;
}

inline Decomposition decomposition_from_json(const nlohmann::ordered_json& j) {
    try {
        Decomposition d;
        d.meta.n = Level{j.at("meta").at("n").get<int>()};
        d.meta.epsilon = j.at("meta").at("epsilon").get<double>();
        d.meta.delta = j.at("meta").at("delta").get<double>();
        d.meta.F = j.at("meta").at("F").get<long>();
        d.meta.iterations = j.at("meta").at("iterations").get<int>();
        d.meta.sup_residual = j.at("meta").at("sup_residual").get<double>();
        d.g.breakpoints = j.at("g").at("breakpoints").get<std::vector<double>>();
        d.g.values = j.at("g").at("values").get<std::vector<double>>();
        d.h.breakpoints = j.at("h").at("breakpoints").get<std::vector<double>>();
        d.h.values = j.at("h").at("values").get<std::vector<double>>();
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("decomposition file: ") + e.what());
    }
}

inline std::string decomposition_to_string(const Decomposition& d) {
    return decomposition_to_json(d).dump(2) + "\n";
}

inline void write_decomposition_file(const std::string& path, const Decomposition& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << decomposition_to_string(d);
}

inline Decomposition read_decomposition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open decomposition file: " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return decomposition_from_json(j);
}

inline nlohmann::ordered_json certificate_to_json(const ArrayCertificate& cert) {
    nlohmann::ordered_json j;
    j["length"] = cert.length();
    j["points"] = nlohmann::ordered_json::array();
    for (const Point& p : cert.points) j["points"].push_back({p.x, p.y});
    j["orientations"] = nlohmann::ordered_json::array();
    for (Axis a : cert.orientations)
        j["orientations"].push_back(a == Axis::Vertical ? "vertical" : "horizontal");
    return j;
}

// Columnar plot data: three '#'-headed blocks separated by blank lines,
// suitable for gnuplot-style consumers. No rendering happens here.
inline void write_plotdata(std::ostream& out, const SampledCompactum& s, const Decomposition& d) {
    out << "# g: x value\n";
    for (std::size_t i = 0; i < d.g.breakpoints.size(); ++i)
        out << format_double(d.g.breakpoints[i]) << ' ' << format_double(d.g.values[i]) << '\n';
    out << "\n# h: y value\n";
    for (std::size_t i = 0; i < d.h.breakpoints.size(); ++i)
        out << format_double(d.h.breakpoints[i]) << ' ' << format_double(d.h.values[i]) << '\n';
    out << "\n# residual: x y f-g-h\n";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const double r = s.values[i] - d.g.eval(s.points[i].x) - d.h.eval(s.points[i].y);
        out << format_double(s.points[i].x) << ' ' << format_double(s.points[i].y) << ' '
            << format_double(r) << '\n';
    }
}

inline void print_report(std::ostream& out, const Report& r) {
    out << "norm_f       " << format_double(r.norm_f) << '\n';
    out << "norm_g       " << format_double(r.norm_g) << '\n';
    out << "norm_h       " << format_double(r.norm_h) << '\n';
    out << "sup_residual " << format_double(r.sup_residual) << '\n';
    if (r.declared_spacing)
        out << "declared_spacing " << format_double(*r.declared_spacing) << " (not verified)\n";
    for (const BoundCheck& c : r.checks)
        out << (c.ok ? "  ok   " : "  FAIL ") << c.name << "  worst " << format_double(c.worst)
            << "  bound " << format_double(c.bound) << '\n';
    out << "residual histogram:";
    for (std::size_t count : r.residual_histogram) out << ' ' << count;
    out << '\n';
}

}  // namespace sumsplit
