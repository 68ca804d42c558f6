#pragma once

// Correlation lower bounds from labeled data.  Hoeffding on each classifier's
// training and test correlation, with the failure probability split evenly
// over the 2p one-sided events.

#include <algorithm>
#include <cmath>

#include "core.hpp"

namespace minimax {

/// Classifier outputs on m labeled points (p x m) and the +-1 labels.
class LabeledSet {
public:
    LabeledSet(const std::vector<Vector>& predictions, Vector labels)
        : predictions_(predictions), labels_(std::move(labels)) {
        if (labels_.size() != predictions_.n())
            throw dimension_error("label count " + std::to_string(labels_.size()) +
                                  " does not match prediction columns " +
                                  std::to_string(predictions_.n()));
        for (std::size_t k = 0; k < labels_.size(); ++k)
            if (labels_[k] != 1.0 && labels_[k] != -1.0)
                throw domain_error("training label at " + detail::fmt_index(k) + " is not +-1");
    }

    std::size_t p() const noexcept { return predictions_.p(); }
    std::size_t m() const noexcept { return predictions_.n(); }
    const PredictionMatrix& predictions() const noexcept { return predictions_; }
    const Vector& labels() const noexcept { return labels_; }

private:
    PredictionMatrix predictions_;
    Vector labels_;
};

struct BoundConfig {
    double delta = 0.05;
    std::size_t n = 1;  // number of unlabeled examples
    bool clamp_negative = true;
};

struct Penalties {
    double train = 0.0;  // eps_S
    double test = 0.0;   // eps_U
};

/// corr_S(h_i) = (1/m) sum_k h_i(x'_k) y'_k.
inline Vector train_correlations(const LabeledSet& s) {
    Vector out(s.p(), 0.0);
    for (std::size_t i = 0; i < s.p(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < s.m(); ++k) acc += s.predictions()(i, k) * s.labels()[k];
        out[i] = acc / static_cast<double>(s.m());
    }
    return out;
}

/// eps_S = sqrt(ln(2p/delta) / 2m),  eps_U = sqrt(ln(2p/delta) / 2n).
inline Penalties penalties(std::size_t p, std::size_t m, std::size_t n, double delta) {
    if (p < 1 || m < 1 || n < 1) throw domain_error("p, m and n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw domain_error("delta must lie in (0,1)");
    const double log_term = std::log(2.0 * static_cast<double>(p) / delta);
    return {std::sqrt(log_term / (2.0 * static_cast<double>(m))),
            std::sqrt(log_term / (2.0 * static_cast<double>(n)))};
}

/// Raw bound b_i = corr_S(h_i) - eps_S - eps_U; may be negative.
inline Vector estimate_b_raw(const LabeledSet& s, const BoundConfig& cfg) {
    const auto eps = penalties(s.p(), s.m(), cfg.n, cfg.delta);
    Vector b = train_correlations(s);
    for (double& v : b) v -= eps.train + eps.test;
    return b;
}

/// Correlation vector for the game.  With clamp_negative unset a negative
/// bound is a domain error, since the game requires b >= 0.
inline CorrelationVector estimate_b(const LabeledSet& s, const BoundConfig& cfg) {
    Vector b = estimate_b_raw(s, cfg);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] < 0.0) {
            if (!cfg.clamp_negative)
                throw domain_error("estimated bound for classifier " + detail::fmt_index(i) +
                                   " is negative; enable clamping");
            b[i] = 0.0;
        }
    }
    return CorrelationVector(std::move(b));
}

/// corr_U(h_i) = (1/n) sum_j F_ij z_j.
inline Vector test_correlations(const PredictionMatrix& f, const LabelVector& z) {
    if (z.size() != f.n())
        throw dimension_error("label vector has length " + std::to_string(z.size()) +
                              ", expected n = " + std::to_string(f.n()));
    Vector out(f.p(), 0.0);
    for (std::size_t j = 0; j < f.n(); ++j) {
        const auto x = f.column(j);
        for (std::size_t i = 0; i < f.p(); ++i) out[i] += x[i] * z[j];
    }
    for (double& v : out) v /= static_cast<double>(f.n());
    return out;
}

}  // namespace minimax
