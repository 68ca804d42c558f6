#pragma once

// Worked instances of the aggregation game, a seeded random ensemble
// generator, and the two classical baselines (best single rule, majority).

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "bounds.hpp"
#include "core.hpp"

namespace minimax {

struct GeneratedInstance {
    PredictionMatrix f;
    CorrelationVector b;
    LabelVector z_true;
    std::string description;
    std::optional<double> expected_value;
};

enum class IntroCase { A, B };

/// Three classifiers, three examples, b = (1/3, 1/3, 1/3).  In case A each
/// example gets two votes of one sign and one of the other; in case B the
/// three classifiers agree everywhere.
inline GeneratedInstance gen_intro_case(IntroCase which) {
    std::vector<Vector> rows;
    if (which == IntroCase::A)
        rows = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
    else
        rows = {{1, 1, -1}, {1, 1, -1}, {1, 1, -1}};
    const double third = 1.0 / 3.0;
    return {PredictionMatrix(rows), CorrelationVector({third, third, third}),
            LabelVector({1, 1, 1}),
            which == IntroCase::A ? "intro case A: diverse ensemble" : "intro case B: identical rules",
            which == IntroCase::A ? 1.0 : third};
}

/// p x p circulant sign matrix with (p+1)/2 entries of +1 in every row and
/// every column; the listed columns are then negated and labeled -1.
inline GeneratedInstance gen_cyclic(std::size_t p, const std::vector<std::size_t>& flips = {}) {
    if (p == 0 || p % 2 == 0) throw domain_error("cyclic instance needs an odd p");
    const std::size_t plus = (p + 1) / 2;
    std::vector<Vector> rows(p, Vector(p, -1.0));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if ((j + p - i) % p < plus) rows[i][j] = 1.0;
    Vector z(p, 1.0);
    for (std::size_t j : flips) {
        if (j >= p) throw domain_error("flip index " + std::to_string(j) + " out of range");
        if (z[j] < 0.0) continue;
        z[j] = -1.0;
        for (std::size_t i = 0; i < p; ++i) rows[i][j] = -rows[i][j];
    }
    return {PredictionMatrix(rows), CorrelationVector(Vector(p, 1.0 / static_cast<double>(p))),
            LabelVector(std::move(z)), "cyclic p=" + std::to_string(p), 1.0};
}

/// Six classifiers in two blocs (A = h1..h3, B = h4..h6) on six examples.
inline GeneratedInstance gen_table1() {
    std::vector<Vector> rows = {
        {-1, -1, +1, +1, +1, +1},
        {+1, +1, -1, -1, +1, +1},
        {+1, +1, +1, +1, -1, -1},
        {+1, +1, +1, +1, +1, -1},
        {+1, +1, +1, +1, +1, -1},
        {+1, +1, +1, +1, +1, -1},
    };
    const double a = 1.0 / 3.0;
    const double bb = 2.0 / 3.0;
    return {PredictionMatrix(rows), CorrelationVector({a, a, a, bb, bb, bb}),
            LabelVector(Vector(6, 1.0)), "two classifier blocs", 1.0};
}

/// z_true uniform in {-1,+1}^n; classifier i agrees with z_true on each
/// example independently with probability accuracies[i].  A row whose realized
/// correlation comes out negative is replaced by its negation.  b is the
/// realized test correlation minus `margin`, floored at 0, so z_true is
/// always a feasible labeling.
inline GeneratedInstance gen_random(std::size_t p, std::size_t n, const Vector& accuracies,
                                    std::uint64_t seed, double margin = 0.0) {
    if (p < 1 || n < 1) throw domain_error("p and n must be >= 1");
    if (accuracies.size() != p) throw dimension_error("need one accuracy per classifier");
    for (double a : accuracies)
        if (!(a > 0.0 && a <= 1.0)) throw domain_error("accuracies must lie in (0,1]");
    if (!(margin >= 0.0)) throw domain_error("margin must be nonnegative");

    std::mt19937_64 rng(seed);
    Vector z(n);
    for (double& v : z) v = detail::uniform01(rng) < 0.5 ? -1.0 : 1.0;
    std::vector<Vector> rows(p, Vector(n));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rows[i][j] = detail::uniform01(rng) < accuracies[i] ? z[j] : -z[j];

    for (auto& row : rows) {
        double agree = 0.0;
        for (std::size_t j = 0; j < n; ++j) agree += row[j] * z[j];
        if (agree < 0.0)
            for (double& v : row) v = -v;
    }

    PredictionMatrix f(rows);
    LabelVector zt(std::move(z));
    Vector b = test_correlations(f, zt);
    for (double& v : b) v = std::max(v - margin, 0.0);
    return {std::move(f), CorrelationVector(std::move(b)), std::move(zt),
            "random p=" + std::to_string(p) + " n=" + std::to_string(n) +
                " seed=" + std::to_string(seed),
            std::nullopt};
}

/// Best single rule: the row with the largest b (lowest index on ties).
inline LabelVector baseline_erm(const PredictionMatrix& f, const CorrelationVector& b) {
    validate_inputs(f, b);
    std::size_t best = 0;
    for (std::size_t i = 1; i < b.size(); ++i)
        if (b[i] > b[best]) best = i;
    return LabelVector(f.row(best));
}

/// Unweighted vote over a subset of classifiers; a tied vote predicts +1.
inline LabelVector baseline_majority(const PredictionMatrix& f,
                                     const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw domain_error("majority vote needs a nonempty subset");
    for (std::size_t i : subset)
        if (i >= f.p()) throw domain_error("classifier index " + std::to_string(i) + " out of range");
    Vector g(f.n());
    for (std::size_t j = 0; j < f.n(); ++j) {
        double s = 0.0;
        for (std::size_t i : subset) s += f(i, j);
        g[j] = s < 0.0 ? -1.0 : 1.0;
    }
    return LabelVector(std::move(g));
}

}  // namespace minimax
