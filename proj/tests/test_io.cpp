#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "minimax/io.hpp"
#include "test_support.hpp"

using namespace minimax;
namespace ts = testing_support;

namespace {

io::parse_error capture(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const io::parse_error& e) {
        return e;
    }
    FAIL("expected a parse error");
    return io::parse_error("", 0, 0, "");
}

}  // namespace

TEST_CASE("matrix CSV with and without header") {
    const auto f = io::parse_matrix_csv("# p=2 n=3\n1,-1,0.5\n-0.25, 1 ,0\n");
    CHECK(f.p() == 2);
    CHECK(f.n() == 3);
    CHECK(f(0, 2) == 0.5);
    CHECK(f(1, 0) == -0.25);
    CHECK(io::parse_matrix_csv("1,1\r\n1,-1\r\n") == PredictionMatrix({{1, 1}, {1, -1}}));
}

TEST_CASE("matrix CSV errors carry line and column") {
    auto e = capture([] { io::parse_matrix_csv("1,1\n1,x\n"); });
    CHECK(e.line == 2);
    CHECK(e.column == 2);

    e = capture([] { io::parse_matrix_csv("# p=3 n=2\n1,1\n1,-1\n"); });
    CHECK(e.line == 1);

    e = capture([] { io::parse_matrix_csv("1,1\n\n1,1,1\n"); });
    CHECK(e.line == 3);

    e = capture([] { io::parse_matrix_csv("1,,1\n"); });
    CHECK(e.line == 1);
    CHECK(e.column == 2);

    capture([] { io::parse_matrix_csv("\n\n"); });
    capture([] { io::parse_matrix_csv("# q=1\n1\n"); });
    CHECK_THROWS_AS(io::parse_matrix_csv("2,0\n"), domain_error);
}

TEST_CASE("labeled CSV") {
    const auto s = io::parse_labeled_csv("# p=1 m=4\n1,-1,1,1\n1,1,1,1\n");
    CHECK(s.p() == 1);
    CHECK(s.m() == 4);
    CHECK(train_correlations(s)[0] == 0.5);
    capture([] { io::parse_labeled_csv("1,1\n"); });
    CHECK_THROWS_AS(io::parse_labeled_csv("1,1\n1,0\n"), domain_error);
}

TEST_CASE("vector and noise JSON") {
    CHECK(io::parse_vector_json("[0.5, 0.25]") == Vector{0.5, 0.25});
    CHECK(io::parse_vector_json(R"({"b": [1, 0]})") == Vector{1, 0});
    const auto e = capture([] { io::parse_vector_json("[1,\n 2,\n oops]"); });
    CHECK(e.line == 3);
    capture([] { io::parse_vector_json(R"(["a"])"); });
    capture([] { io::parse_vector_json(R"({"x": 1})"); });

    const auto sym = io::parse_noise_json("[0.5, 1]");
    CHECK(sym.lower() == Vector{0.5, 1});
    CHECK(sym.upper() == Vector{0.5, 1});
    const auto asym = io::parse_noise_json(R"({"lower": [0.1], "upper": [0.9]})");
    CHECK(asym.lower() == Vector{0.1});
    CHECK(asym.upper() == Vector{0.9});
    capture([] { io::parse_noise_json(R"({"lower": [0.1]})"); });
}

TEST_CASE("matrix CSV round trip is exact") {
    std::mt19937_64 rng(60);
    for (int k = 0; k < 50; ++k) {
        const auto inst = ts::random_instance(rng, 1 + ts::uniform_index(rng, 5),
                                              1 + ts::uniform_index(rng, 20), true);
        CHECK(io::parse_matrix_csv(io::format_matrix_csv(inst.f)) == inst.f);
        CHECK(io::parse_vector_json(io::format_vector_json(inst.b.values())) == inst.b.values());
    }
}

TEST_CASE("report round trip") {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 50; ++k) {
        io::RunReport r;
        r.status = k % 3 == 0 ? "infeasible" : "optimal";
        if (k % 3 != 0) r.value = ts::uniform01(rng);
        const std::size_t n = 1 + ts::uniform_index(rng, 8);
        r.b = ts::random_box_point(rng, 3);
        r.sigma = ts::random_sigma(rng, 3).values();
        r.g = ts::random_box_point(rng, n);
        r.z = ts::random_box_point(rng, n);
        r.partition = std::string(n, 'H');
        r.zbr = k % 2 == 0;
        if (k % 4 == 1) r.zbr_value = ts::uniform01(rng);
        if (k % 5 == 1) r.duality_gap = 1e-17 * ts::uniform01(rng);
        if (k % 2 == 1) r.worst_case_correlation = -ts::uniform01(rng);
        r.borderline_coeffs = {ts::uniform01(rng)};
        r.residual = ts::uniform01(rng) * 1e-9;
        r.iterations = ts::uniform_index(rng, 100000);
        r.config = {{"method", "lp"}, {"seed", k}};
        if (k % 7 == 0) r.timing_ms = 12.5;
        const auto text = io::format_report(r);
        CHECK(io::parse_report(text) == r);
        CHECK(io::format_report(io::parse_report(text)) == text);
    }
}

TEST_CASE("report fields are stable") {
    io::RunReport r;
    r.status = "optimal";
    r.value = 1.0;
    const auto j = io::json::parse(io::format_report(r));
    for (const char* key : {"status", "value", "b", "sigma", "g", "z", "partition", "zbr",
                            "zbr_value", "duality_gap", "worst_case_correlation",
                            "borderline_coeffs", "residual", "iterations", "config"})
        CHECK(j.contains(key));
    CHECK_FALSE(j.contains("timing_ms"));
}

TEST_CASE("double formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.0})
        CHECK(std::stod(io::format_double(v)) == v);
}
