#pragma once

// Prediction slack function
//
//   gamma(sigma) = (1/n) sum_j [ |x_j . sigma| - 1 ]_+  -  b . sigma
//
// its label-noise generalization, and elements of their subdifferentials.
// The minimum of gamma over sigma >= 0 is minus the game value.

#include <algorithm>
#include <optional>
#include <span>

#include "core.hpp"

namespace minimax {

/// Per-example adversary box z_j in [-lower_j, upper_j].  lower = upper = 1
/// is the noiseless game.
class NoiseProfile {
public:
    NoiseProfile() = default;

    NoiseProfile(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.size() != upper_.size())
            throw dimension_error("noise bounds have different lengths");
        for (std::size_t j = 0; j < lower_.size(); ++j) {
            auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
            if (!ok(lower_[j]) || !ok(upper_[j]))
                throw domain_error("noise bound out of [0,1] at " + detail::fmt_index(j));
        }
    }

    static NoiseProfile symmetric(Vector alpha) {
        Vector copy = alpha;
        return NoiseProfile(std::move(alpha), std::move(copy));
    }

    static NoiseProfile uniform(std::size_t n, double alpha) {
        return symmetric(Vector(n, alpha));
    }

    std::size_t size() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }

    /// Weight applied to the clipping penalty of an example with the given
    /// signed margin.
    double weight(std::size_t j, double margin) const noexcept {
        return margin >= 0.0 ? upper_[j] : lower_[j];
    }

private:
    Vector lower_;
    Vector upper_;
};

struct SlackValue {
    double value = 0.0;
    Vector per_example_penalty;
};

enum class Summation { naive, compensated };

namespace detail {

// Neumaier variant of Kahan summation.
inline double sum(std::span<const double> xs, Summation mode) {
    double s = 0.0;
    if (mode == Summation::naive) {
        for (double x : xs) s += x;
        return s;
    }
    double c = 0.0;
    for (double x : xs) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void check_noise(const PredictionMatrix& f, const NoiseProfile& noise) {
    if (noise.size() != f.n())
        throw dimension_error("noise profile has length " + std::to_string(noise.size()) +
                              ", expected n = " + std::to_string(f.n()));
}

inline SlackValue slack_from_margins(const Vector& margins, const CorrelationVector& b,
                                     const WeightVector& sigma, const NoiseProfile* noise,
                                     Summation mode) {
    SlackValue out;
    out.per_example_penalty.resize(margins.size());
    for (std::size_t j = 0; j < margins.size(); ++j) {
        const double m = margins[j];
        if (noise == nullptr) {
            out.per_example_penalty[j] = std::max(std::abs(m) - 1.0, 0.0);
        } else {
            out.per_example_penalty[j] = noise->upper()[j] * std::max(m - 1.0, 0.0) +
                                         noise->lower()[j] * std::max(-m - 1.0, 0.0);
        }
    }
    const double mean =
        sum(out.per_example_penalty, mode) / static_cast<double>(margins.size());
    out.value = mean - dot(b.values(), sigma.values());
    return out;
}

inline Vector subgradient_from_margins(const PredictionMatrix& f, const CorrelationVector& b,
                                       const Vector& margins, const NoiseProfile* noise,
                                       double tau, std::optional<std::span<const double>> coeffs) {
    const std::size_t p = f.p();
    const std::size_t n = f.n();
    std::size_t n_border = 0;
    for (double m : margins)
        if (classify_margin(m, tau) == Region::borderline) ++n_border;
    if (coeffs && coeffs->size() != n_border)
        throw dimension_error("expected " + std::to_string(n_border) +
                              " borderline coefficients, got " + std::to_string(coeffs->size()));
    if (coeffs) {
        for (std::size_t k = 0; k < coeffs->size(); ++k) {
            const double c = (*coeffs)[k];
            if (!std::isfinite(c) || c < 0.0 || c > 1.0)
                throw domain_error("borderline coefficient out of [0,1] at " + fmt_index(k));
        }
    }

    Vector acc(p, 0.0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double m = margins[j];
        const Region r = classify_margin(m, tau);
        if (r == Region::hedged) continue;
        double w = sgn(m);
        if (noise != nullptr) w *= noise->weight(j, m);
        if (r == Region::borderline) {
            w *= coeffs ? (*coeffs)[k] : 0.5;
            ++k;
        }
        if (w == 0.0) continue;
        const auto x = f.column(j);
        for (std::size_t i = 0; i < p; ++i) acc[i] += w * x[i];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < p; ++i) acc[i] = acc[i] * inv_n - b[i];
    return acc;
}

}  // namespace detail

inline SlackValue slack(const PredictionMatrix& f, const CorrelationVector& b,
                        const WeightVector& sigma, Summation mode = Summation::naive) {
    validate_inputs(f, b);
    return detail::slack_from_margins(ensemble_predictions(f, sigma), b, sigma, nullptr, mode);
}

/// Generalized slack under a noise box:
/// (1/n) sum_j ( u_j [m_j - 1]_+ + l_j [-m_j - 1]_+ ) - b . sigma.
inline SlackValue noisy_slack(const PredictionMatrix& f, const CorrelationVector& b,
                              const WeightVector& sigma, const NoiseProfile& noise,
                              Summation mode = Summation::naive) {
    validate_inputs(f, b);
    detail::check_noise(f, noise);
    return detail::slack_from_margins(ensemble_predictions(f, sigma), b, sigma, &noise, mode);
}

/// An element of the subdifferential of gamma at sigma.  Borderline examples
/// (in ascending index order) take coefficient coeffs[k]; 0.5 when omitted.
inline Vector subgradient(const PredictionMatrix& f, const CorrelationVector& b,
                          const WeightVector& sigma, double tau = kDefaultTau,
                          std::optional<std::span<const double>> coeffs = std::nullopt) {
    validate_inputs(f, b);
    return detail::subgradient_from_margins(f, b, ensemble_predictions(f, sigma), nullptr, tau,
                                            coeffs);
}

inline Vector noisy_subgradient(const PredictionMatrix& f, const CorrelationVector& b,
                                const WeightVector& sigma, const NoiseProfile& noise,
                                double tau = kDefaultTau,
                                std::optional<std::span<const double>> coeffs = std::nullopt) {
    validate_inputs(f, b);
    detail::check_noise(f, noise);
    return detail::subgradient_from_margins(f, b, ensemble_predictions(f, sigma), &noise, tau,
                                            coeffs);
}

}  // namespace minimax
