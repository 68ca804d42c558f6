#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace minimax;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("validate_inputs accepts an in-range pair") {
    auto [f, b] = validate_inputs({{1, -1}}, {0.5});
    CHECK(f.p() == 1);
    CHECK(f.n() == 2);
    CHECK(b[0] == 0.5);
}

TEST_CASE("validate_inputs reports the offending entry") {
    CHECK_THROWS_WITH(validate_inputs({{2, 0}}, {0.5}),
                      ContainsSubstring("entry out of range at (0,0)"));
    CHECK_THROWS_AS(PredictionMatrix({{0, 0}, {0, -1.5}}), domain_error);
    CHECK_THROWS_WITH(PredictionMatrix({{0, 0}, {0, -1.5}}), ContainsSubstring("(1,1)"));
}

TEST_CASE("validate_inputs rejects a length mismatch") {
    PredictionMatrix f({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK_THROWS_AS(validate_inputs(f, CorrelationVector({0.1, 0.2})), dimension_error);
}

TEST_CASE("type invariants are enforced at construction") {
    CHECK_THROWS_AS(PredictionMatrix(std::vector<Vector>{}), dimension_error);
    CHECK_THROWS_AS(PredictionMatrix({{1, 1}, {1}}), dimension_error);
    CHECK_THROWS_AS(CorrelationVector({-0.1}), domain_error);
    CHECK_THROWS_AS(CorrelationVector({1.5}), domain_error);
    CHECK_THROWS_AS(WeightVector({-1e-3}), domain_error);
    CHECK_THROWS_AS(LabelVector({1.01}), domain_error);
    CHECK_THROWS_AS(PredictionMatrix({{std::nan("")}}), domain_error);
}

TEST_CASE("ensemble predictions") {
    PredictionMatrix a({{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}});
    CHECK(ensemble_predictions(a, WeightVector({1, 1, 1})) == Vector{1, 1, 1});
    CHECK(ensemble_predictions(a, WeightVector::zeros(3)) == Vector{0, 0, 0});
    CHECK(ensemble_predictions(PredictionMatrix({{1, -1}}), WeightVector({2})) == Vector{2, -2});
    CHECK_THROWS_AS(ensemble_predictions(a, WeightVector({1, 1})), dimension_error);
}

TEST_CASE("partition of explicit margins") {
    const auto part = partition_margins({0.5, 1.0, 1.7}, 1e-7);
    CHECK(part.hedged == std::vector<std::size_t>{0});
    CHECK(part.borderline == std::vector<std::size_t>{1});
    CHECK(part.clipped == std::vector<std::size_t>{2});
}

TEST_CASE("partition uses the absolute band around 1") {
    const auto part = partition_margins({1 - 2e-7, 1 - 5e-8, -1 + 5e-8, -1 - 5e-8, 1 + 2e-7, -3.0});
    CHECK(part.hedged == std::vector<std::size_t>{0});
    CHECK(part.borderline == std::vector<std::size_t>{1, 2, 3});
    CHECK(part.clipped == std::vector<std::size_t>{4, 5});
}

TEST_CASE("partition at sigma = 0 is all hedged") {
    const auto t = gen_table1();
    const auto part = partition(t.f, WeightVector::zeros(6));
    CHECK(part.hedged.size() == 6);
    CHECK(part.clipped.empty());
    CHECK(part.borderline.empty());
}

TEST_CASE("two-bloc instance with the A bloc weighting is all borderline") {
    const auto t = gen_table1();
    const auto part = partition(t.f, WeightVector({1, 1, 1, 0, 0, 0}));
    CHECK(part.borderline.size() == 6);
    for (double m : part.margins) CHECK(m == 1.0);
}

TEST_CASE("margin properties on random inputs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = 1 + testing_support::uniform_index(rng, 6);
        const std::size_t n = 1 + testing_support::uniform_index(rng, 12);
        const auto inst = testing_support::random_instance(rng, p, n, trial % 2 == 0);
        const auto sigma = testing_support::random_sigma(rng, p);
        const double a = 3.0 * testing_support::uniform01(rng);
        Vector scaled = sigma.values();
        for (double& v : scaled) v *= a;

        const auto m = ensemble_predictions(inst.f, sigma);
        const auto ma = ensemble_predictions(inst.f, WeightVector(scaled));
        for (std::size_t j = 0; j < n; ++j) {
            CHECK_THAT(ma[j], WithinAbs(a * m[j], 1e-12 * std::max(1.0, std::abs(a * m[j]))));
            CHECK(std::abs(m[j]) <= sigma.l1_norm() + 1e-12);
        }

        const auto part = partition(inst.f, sigma, 0.05);
        std::vector<int> seen(n, 0);
        for (auto j : part.hedged) ++seen[j];
        for (auto j : part.clipped) ++seen[j];
        for (auto j : part.borderline) ++seen[j];
        for (int c : seen) CHECK(c == 1);
        for (auto j : part.hedged) CHECK(std::abs(m[j]) < 0.95);
        for (auto j : part.clipped) CHECK(std::abs(m[j]) > 1.05);
    }
}
