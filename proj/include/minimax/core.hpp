#pragma once

// Core data types for the transductive aggregation game: the ensemble's
// prediction matrix on unlabeled points, correlation lower bounds, weightings
// over classifiers, and the hedged / clipped / borderline split of examples
// induced by a weighting.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace minimax {

using Vector = std::vector<double>;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_error : error {
    using error::error;
};

struct domain_error : error {
    using error::error;
};

// Raised when no labeling satisfies the correlation constraints, i.e. the
// bounds b are more optimistic than any labeling allows.
struct infeasible_error : error {
    using error::error;
};

namespace detail {

inline bool in_unit_box(double v) { return std::isfinite(v) && v >= -1.0 && v <= 1.0; }

inline std::string fmt_index(std::size_t i) { return std::to_string(i); }

// Portable mappings of the 64-bit engine output; the standard distributions
// are implementation-defined and would break cross-platform reproducibility.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace detail

/// Predictions of p classifiers on n unlabeled examples.  Entries lie in
/// [-1, 1].  Stored column-major by example so that x_j is contiguous.
class PredictionMatrix {
public:
    PredictionMatrix() = default;

    /// Builds from classifier rows (p rows of length n).
    explicit PredictionMatrix(const std::vector<Vector>& rows) {
        if (rows.empty() || rows.front().empty())
            throw dimension_error("prediction matrix must have p >= 1 and n >= 1");
        p_ = rows.size();
        n_ = rows.front().size();
        data_.assign(p_ * n_, 0.0);
        for (std::size_t i = 0; i < p_; ++i) {
            if (rows[i].size() != n_)
                throw dimension_error("row " + detail::fmt_index(i) + " has length " +
                                      std::to_string(rows[i].size()) + ", expected " +
                                      std::to_string(n_));
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = rows[i][j];
                if (!detail::in_unit_box(v))
                    throw domain_error("entry out of range at (" + detail::fmt_index(i) + "," +
                                       detail::fmt_index(j) + ")");
                data_[j * p_ + i] = v;
            }
        }
    }

    PredictionMatrix(std::initializer_list<std::initializer_list<double>> rows)
        : PredictionMatrix(std::vector<Vector>(rows.begin(), rows.end())) {}

    std::size_t p() const noexcept { return p_; }
    std::size_t n() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * p_ + i]; }

    /// Predictions of all classifiers on example j.
    std::span<const double> column(std::size_t j) const noexcept {
        return {data_.data() + j * p_, p_};
    }

    Vector row(std::size_t i) const {
        Vector r(n_);
        for (std::size_t j = 0; j < n_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    std::vector<Vector> rows() const {
        std::vector<Vector> out;
        out.reserve(p_);
        for (std::size_t i = 0; i < p_; ++i) out.push_back(row(i));
        return out;
    }

    friend bool operator==(const PredictionMatrix&, const PredictionMatrix&) = default;

private:
    std::size_t p_ = 0;
    std::size_t n_ = 0;
    Vector data_;
};

/// Lower bounds b on the test correlation of each classifier, b in [0,1]^p.
class CorrelationVector {
public:
    CorrelationVector() = default;

    explicit CorrelationVector(Vector values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw domain_error("correlation bound out of range at " + detail::fmt_index(i));
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    const Vector& values() const noexcept { return values_; }

    friend bool operator==(const CorrelationVector&, const CorrelationVector&) = default;

private:
    Vector values_;
};

/// Nonnegative weighting over the classifiers.
class WeightVector {
public:
    WeightVector() = default;

    explicit WeightVector(Vector weights) : weights_(std::move(weights)) {
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
                throw domain_error("negative or non-finite weight at " + detail::fmt_index(i));
        }
    }

    static WeightVector zeros(std::size_t p) { return WeightVector(Vector(p, 0.0)); }

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const noexcept { return weights_[i]; }
    const Vector& values() const noexcept { return weights_; }

    double l1_norm() const noexcept {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    Vector weights_;
};

/// A labeling (or prediction vector) in [-1,1]^n.
class LabelVector {
public:
    LabelVector() = default;

    explicit LabelVector(Vector labels) : labels_(std::move(labels)) {
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            if (!detail::in_unit_box(labels_[j]))
                throw domain_error("label out of range at " + detail::fmt_index(j));
        }
    }

    std::size_t size() const noexcept { return labels_.size(); }
    double operator[](std::size_t j) const noexcept { return labels_[j]; }
    const Vector& values() const noexcept { return labels_; }

    friend bool operator==(const LabelVector&, const LabelVector&) = default;

private:
    Vector labels_;
};

/// Raw-data entry point: builds and checks (F, b) together.
inline std::pair<PredictionMatrix, CorrelationVector> validate_inputs(
    const std::vector<Vector>& rows, const Vector& b) {
    PredictionMatrix f(rows);
    CorrelationVector cv(b);
    if (cv.size() != f.p())
        throw dimension_error("correlation vector has length " + std::to_string(cv.size()) +
                              ", expected p = " + std::to_string(f.p()));
    return {std::move(f), std::move(cv)};
}

inline void validate_inputs(const PredictionMatrix& f, const CorrelationVector& b) {
    if (b.size() != f.p())
        throw dimension_error("correlation vector has length " + std::to_string(b.size()) +
                              ", expected p = " + std::to_string(f.p()));
}

inline void check_weights(const PredictionMatrix& f, const WeightVector& sigma) {
    if (sigma.size() != f.p())
        throw dimension_error("weight vector has length " + std::to_string(sigma.size()) +
                              ", expected p = " + std::to_string(f.p()));
}

/// Ensemble prediction x_j . sigma for every example, summed in ascending
/// classifier order.
inline Vector ensemble_predictions(const PredictionMatrix& f, const WeightVector& sigma) {
    check_weights(f, sigma);
    Vector out(f.n(), 0.0);
    for (std::size_t j = 0; j < f.n(); ++j) {
        const auto x = f.column(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < f.p(); ++i) acc += x[i] * sigma[i];
        out[j] = acc;
    }
    return out;
}

enum class Region { hedged, clipped, borderline };

inline constexpr double kDefaultTau = 1e-7;

struct MarginPartition {
    std::vector<std::size_t> hedged;
    std::vector<std::size_t> clipped;
    std::vector<std::size_t> borderline;
    Vector margins;            // signed ensemble predictions
    std::vector<Region> region;  // per example
    double tau = kDefaultTau;
};

inline Region classify_margin(double margin, double tau) noexcept {
    const double a = std::abs(margin);
    if (a < 1.0 - tau) return Region::hedged;
    if (a > 1.0 + tau) return Region::clipped;
    return Region::borderline;
}

inline MarginPartition partition_margins(Vector margins, double tau = kDefaultTau) {
    if (!(tau > 0.0)) throw domain_error("borderline tolerance must be positive");
    MarginPartition part;
    part.tau = tau;
    part.region.reserve(margins.size());
    for (std::size_t j = 0; j < margins.size(); ++j) {
        const Region r = classify_margin(margins[j], tau);
        part.region.push_back(r);
        switch (r) {
            case Region::hedged: part.hedged.push_back(j); break;
            case Region::clipped: part.clipped.push_back(j); break;
            case Region::borderline: part.borderline.push_back(j); break;
        }
    }
    part.margins = std::move(margins);
    return part;
}

inline MarginPartition partition(const PredictionMatrix& f, const WeightVector& sigma,
                                 double tau = kDefaultTau) {
    return partition_margins(ensemble_predictions(f, sigma), tau);
}

inline double sgn(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline char region_code(Region r) noexcept {
    switch (r) {
        case Region::hedged: return 'H';
        case Region::clipped: return 'C';
        case Region::borderline: return 'B';
    }
    return '?';
}

}  // namespace minimax
