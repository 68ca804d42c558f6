#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "minimax/minimax.hpp"

namespace testing_support {

using minimax::CorrelationVector;
using minimax::LabelVector;
using minimax::PredictionMatrix;
using minimax::Vector;
using minimax::WeightVector;
using minimax::detail::uniform01;
using minimax::detail::uniform_index;

struct Instance {
    PredictionMatrix f;
    CorrelationVector b;
    LabelVector z;  // a labeling that satisfies the constraints
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Feasible by construction: b_i is a fraction of the correlation of row i
/// with a random labeling z in the box.  Rows with negative correlation are
/// flipped first.  Entries are +-1 or uniform in [-1,1].
inline Instance random_instance(std::mt19937_64& rng, std::size_t p, std::size_t n,
                                bool fractional = false, double b_scale = 0.9) {
    Vector z(n);
    for (double& v : z) v = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    std::vector<Vector> rows(p, Vector(n));
    for (std::size_t i = 0; i < p; ++i) {
        const double acc = uniform(rng, 0.5, 0.95);
        double corr = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = uniform01(rng) < acc ? z[j] : -z[j];
            if (fractional) v *= uniform(rng, 0.2, 1.0);
            rows[i][j] = v;
            corr += v * z[j];
        }
        if (corr < 0.0)
            for (double& v : rows[i]) v = -v;
    }
    PredictionMatrix f(rows);
    Vector b(p);
    for (std::size_t i = 0; i < p; ++i) {
        double corr = 0.0;
        for (std::size_t j = 0; j < n; ++j) corr += f(i, j) * z[j];
        b[i] = std::max(0.0, b_scale * uniform01(rng) * corr / static_cast<double>(n));
    }
    return {std::move(f), CorrelationVector(std::move(b)), LabelVector(std::move(z))};
}

inline WeightVector random_sigma(std::mt19937_64& rng, std::size_t p, double scale = 2.0) {
    Vector s(p);
    for (double& v : s) v = scale * uniform01(rng);
    return WeightVector(std::move(s));
}

inline Vector random_box_point(std::mt19937_64& rng, std::size_t n) {
    Vector v(n);
    for (double& x : v) x = uniform(rng, -1.0, 1.0);
    return v;
}

/// Central finite-difference gradient of a function of sigma.
template <class Fn>
Vector finite_difference(Fn&& fn, const Vector& sigma, double h) {
    Vector g(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        Vector up = sigma;
        Vector down = sigma;
        up[i] += h;
        down[i] -= h;
        g[i] = (fn(up) - fn(down)) / (2.0 * h);
    }
    return g;
}

inline bool has_borderline(const PredictionMatrix& f, const WeightVector& sigma, double band) {
    for (double m : minimax::ensemble_predictions(f, sigma))
        if (std::abs(std::abs(m) - 1.0) < band) return true;
    return false;
}

/// Mean correlation of every row of F with z, as a plain vector.
inline Vector row_correlations(const PredictionMatrix& f, const Vector& z) {
    Vector out(f.p(), 0.0);
    for (std::size_t i = 0; i < f.p(); ++i) {
        for (std::size_t j = 0; j < f.n(); ++j) out[i] += f(i, j) * z[j];
        out[i] /= static_cast<double>(f.n());
    }
    return out;
}

inline double payoff(const Vector& g, const Vector& z) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * z[j];
    return s / static_cast<double>(g.size());
}

}  // namespace testing_support
