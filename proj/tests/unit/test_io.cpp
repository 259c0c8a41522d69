#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "sumsplit/generators.hpp"
#include "sumsplit/io.hpp"

using namespace sumsplit;

TEST_CASE("sample csv parsing", "[io]") {
    {
        std::istringstream in("x,y,f\n0.5,1.5,2.5\n-1,0.25,3\n");
        const auto s = read_sample_csv(in);
        REQUIRE(s.size() == 2);
        CHECK(s.points[0] == Point{0.5, 1.5});
        CHECK(s.values[1] == 3.0);
    }
    {
        // No header, CRLF line endings, stray spaces.
        std::istringstream in("0.5 , 1.5 ,2.5\r\n1,2,3\r\n");
        const auto s = read_sample_csv(in);
        REQUIRE(s.size() == 2);
        CHECK(s.points[1] == Point{1.0, 2.0});
    }
    {
        std::istringstream in("x,y,f\n1,2\n");
        CHECK_THROWS_AS(read_sample_csv(in), ParseError);
    }
    {
        std::istringstream in("x,y,f\n1,2,oops\n");
        CHECK_THROWS_AS(read_sample_csv(in), ParseError);
    }
    {
        std::istringstream in("x,y,f\n");
        CHECK_THROWS_AS(read_sample_csv(in), ParseError);
    }
    {
        std::istringstream in("x,y,f\n1,2,3\n4,5,6\n1,2,9\n");
        try {
            read_sample_csv(in);
            FAIL("expected duplicate-point rejection");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("rows 2 and 4") != std::string::npos);
        }
    }
}

TEST_CASE("sample csv round trip", "[io]") {
    auto s = attach_function(gen_monotone_curve(50, 19), "sin_poly", std::vector<double>{3.0, 2.0});
    std::ostringstream out;
    write_sample_csv(out, s);
    std::istringstream in(out.str());
    const auto back = read_sample_csv(in);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.points[i] == s.points[i]);
        CHECK(back.values[i] == s.values[i]);
    }
}

TEST_CASE("format_double round trips", "[io][property]") {
    std::mt19937_64 rng(401);
    std::vector<double> specials{0.0, 1.0, -1.0, 0.1, 1e-300, 1e300, 3.141592653589793};
    for (double v : specials) CHECK(parse_double(format_double(v), "t") == v);
    for (int trial = 0; trial < 200; ++trial) {
        const double v = std::ldexp(static_cast<double>(rng() >> 11), -53) * 2000 - 1000;
        CHECK(parse_double(format_double(v), "t") == v);
    }
}

TEST_CASE("decomposition file round trips byte for byte", "[io]") {
    auto s = attach_function(gen_monotone_curve(80, 23), "sin_poly", std::vector<double>{3.0, 2.0});
    DecomposeOptions opts;
    opts.epsilon = 0.1;
    const auto d = approximate_decompose(s, opts);

    const std::string text = decomposition_to_string(d);
    std::istringstream in(text);
    nlohmann::ordered_json j;
    in >> j;
    const auto back = decomposition_from_json(j);
    CHECK(decomposition_to_string(back) == text);
    CHECK(back.g.breakpoints == d.g.breakpoints);
    CHECK(back.g.values == d.g.values);
    CHECK(back.h.breakpoints == d.h.breakpoints);
    CHECK(back.h.values == d.h.values);
    CHECK(back.meta.n == d.meta.n);
    CHECK(back.meta.epsilon == d.meta.epsilon);
}

TEST_CASE("plotdata emission", "[io]") {
    auto s = attach_function(gen_monotone_curve(30, 3), "coordinate_sum");
    DecomposeOptions opts;
    opts.epsilon = 0.2;
    const auto d = approximate_decompose(s, opts);
    std::ostringstream out;
    write_plotdata(out, s, d);
    const std::string text = out.str();

    std::istringstream in(text);
    std::string line;
    std::size_t residual_rows = 0;
    bool in_residual_block = false;
    while (std::getline(in, line)) {
        if (line.rfind("# residual", 0) == 0) {
            in_residual_block = true;
            continue;
        }
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        if (in_residual_block) ++residual_rows;
    }
    CHECK(residual_rows == s.size());
}
