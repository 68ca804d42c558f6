#pragma once

// Minimax strategies of the prediction game built from a weighting sigma.
//
// Predictor:  g_j = clamp(x_j.sigma, -1, 1).
// Adversary:  z_j = 0 on hedged examples, sgn(x_j.sigma) on clipped ones, and
//             c_j sgn(x_j.sigma) on borderline ones, where the c_j in [0,1]
//             make the subgradient condition hold at sigma.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "core.hpp"
#include "simplex.hpp"
#include "slack.hpp"
#include "solver.hpp"

namespace minimax {

inline LabelVector predictor_strategy(const PredictionMatrix& f, const WeightVector& sigma) {
    Vector g = ensemble_predictions(f, sigma);
    for (double& v : g) v = std::clamp(v, -1.0, 1.0);
    return LabelVector(std::move(g));
}

struct AdversaryStrategy {
    LabelVector z;
    Vector coeffs;          // one per borderline example, ascending index order
    double residual = 0.0;  // KKT violation of the subgradient condition, scaled by n
    bool feasible = false;  // residual <= tolerance
    MarginPartition partition;
};

namespace detail {

inline double kkt_residual(const Vector& lhs, const Vector& rhs, const std::vector<bool>& support) {
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const double d = lhs[i] - rhs[i];
        worst = std::max(worst, support[i] ? std::abs(d) : std::max(-d, 0.0));
    }
    return worst;
}

}  // namespace detail

/// Completes the adversary's strategy at an (approximately) optimal sigma.
///
/// With w_j the noise weight (1 without noise) and s_j = sgn(x_j.sigma), the
/// coefficients solve
///
///   sum_{j in B} c_j w_j s_j x_j  =  n b - sum_{j in C} w_j s_j x_j
///
/// on classifiers with sigma_i > tau, and ">=" on the rest (sigma >= 0 makes
/// the optimality condition one-sided there).  The minimum-violation solution
/// is found by LP; among exact solutions the one with smallest sum(c) is kept.
/// A residual above `feasibility_tol` (default 1e-6 n) means sigma is not
/// optimal to that tolerance; the strategy is still returned.
inline AdversaryStrategy adversary_strategy(const PredictionMatrix& f, const CorrelationVector& b,
                                            const WeightVector& sigma, double tau = kDefaultTau,
                                            const std::optional<NoiseProfile>& noise = std::nullopt,
                                            std::optional<double> feasibility_tol = std::nullopt,
                                            const lp::Options& lp_opt = {}) {
    validate_inputs(f, b);
    if (noise) detail::check_noise(f, *noise);
    const std::size_t p = f.p();
    const std::size_t n = f.n();
    const double tol = feasibility_tol.value_or(1e-6 * static_cast<double>(n));

    AdversaryStrategy out;
    out.partition = partition(f, sigma, tau);
    const auto& part = out.partition;

    auto weight = [&](std::size_t j) {
        const double m = part.margins[j];
        return sgn(m) * (noise ? noise->weight(j, m) : 1.0);
    };

    Vector target(p);
    for (std::size_t i = 0; i < p; ++i) target[i] = static_cast<double>(n) * b[i];
    for (std::size_t j : part.clipped) {
        const double w = weight(j);
        const auto x = f.column(j);
        for (std::size_t i = 0; i < p; ++i) target[i] -= w * x[i];
    }
    std::vector<bool> support(p);
    for (std::size_t i = 0; i < p; ++i) support[i] = sigma[i] > tau;

    const std::size_t nb = part.borderline.size();
    Vector coeffs(nb, 0.0);
    if (nb > 0) {
        // Variables: c[0..nb), e+[0..p), e-[0..p).
        const std::size_t nv = nb + 2 * p;
        lp::LinearProgram prog(nv, lp::Sense::minimize);
        for (std::size_t i = 0; i < p; ++i) {
            Vector row(nv, 0.0);
            for (std::size_t k = 0; k < nb; ++k) {
                const std::size_t j = part.borderline[k];
                row[k] = weight(j) * f(i, j);
            }
            row[nb + i] = 1.0;
            row[nb + p + i] = -1.0;
            prog.add(std::move(row), support[i] ? lp::Relation::equal : lp::Relation::greater_equal,
                     target[i]);
        }
        for (std::size_t k = 0; k < nb; ++k) {
            Vector row(nv, 0.0);
            row[k] = 1.0;
            prog.add(std::move(row), lp::Relation::less_equal, 1.0);
        }
        for (std::size_t k = nb; k < nv; ++k) prog.objective[k] = 1.0;
        const auto stage1 = lp::solve(prog, lp_opt);
        if (stage1.status == lp::Status::optimal) {
            // Second stage: keep the violation at its minimum, shrink the
            // coefficients.
            Vector cap(nv, 0.0);
            for (std::size_t k = nb; k < nv; ++k) cap[k] = 1.0;
            const double slack_cap = stage1.objective + 1e-9 * std::max(1.0, stage1.objective);
            prog.add(std::move(cap), lp::Relation::less_equal, slack_cap);
            std::fill(prog.objective.begin(), prog.objective.end(), 0.0);
            for (std::size_t k = 0; k < nb; ++k) prog.objective[k] = 1.0;
            const auto stage2 = lp::solve(prog, lp_opt);
            const auto& x = stage2.status == lp::Status::optimal ? stage2.x : stage1.x;
            for (std::size_t k = 0; k < nb; ++k) coeffs[k] = std::clamp(x[k], 0.0, 1.0);
        }
    }

    Vector lhs(p, 0.0);
    for (std::size_t k = 0; k < nb; ++k) {
        const std::size_t j = part.borderline[k];
        const double w = weight(j) * coeffs[k];
        for (std::size_t i = 0; i < p; ++i) lhs[i] += w * f(i, j);
    }
    out.residual = detail::kkt_residual(lhs, target, support);
    out.feasible = out.residual <= tol;

    Vector z(n, 0.0);
    for (std::size_t j : part.clipped) z[j] = weight(j);
    for (std::size_t k = 0; k < nb; ++k) z[part.borderline[k]] = coeffs[k] * weight(part.borderline[k]);
    for (double& v : z) v = std::clamp(v, -1.0, 1.0);
    out.z = LabelVector(std::move(z));
    out.coeffs = std::move(coeffs);
    return out;
}

// ---------------------------------------------------------------------------

struct GameValue {
    double value = 0.0;
    bool converged = false;
    std::optional<LPCertificate> certificate;
};

/// V = -min gamma.  Throws infeasible_error when no labeling meets b.
inline GameValue game_value(const PredictionMatrix& f, const CorrelationVector& b,
                            const SolverConfig& cfg = {}) {
    const auto res = minimize_slack(f, b, cfg);
    if (res.status == SolveStatus::infeasible)
        throw infeasible_error("correlation bounds are infeasible for this prediction matrix");
    return {-res.objective, res.converged, res.certificate};
}

/// Value of the noisy game, max_sigma -noisy_gamma(sigma).
inline double noisy_game_value(const PredictionMatrix& f, const CorrelationVector& b,
                               const NoiseProfile& noise, const SolverConfig& cfg = {}) {
    const auto res = minimize_slack(f, b, cfg, noise);
    if (res.status == SolveStatus::infeasible)
        throw infeasible_error("correlation bounds are infeasible under the noise box");
    return -res.objective;
}

/// Worst-case correlation of a fixed prediction g, through the dual
///   max_{sigma >= 0} b.sigma - (1/n) ||F^T sigma - g||_1.
inline double worst_case_correlation(const PredictionMatrix& f, const CorrelationVector& b,
                                     const LabelVector& g, const SolverConfig& cfg = {}) {
    validate_inputs(f, b);
    if (g.size() != f.n()) throw dimension_error("prediction vector length differs from n");
    const std::size_t p = f.p();
    const std::size_t n = f.n();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Variables: sigma[0..p), t[0..n) with t_j >= |x_j.sigma - g_j|.
    lp::LinearProgram prog(p + n, lp::Sense::maximize);
    for (std::size_t i = 0; i < p; ++i) prog.objective[i] = b[i];
    for (std::size_t j = 0; j < n; ++j) prog.objective[p + j] = -inv_n;
    for (std::size_t j = 0; j < n; ++j) {
        const auto x = f.column(j);
        Vector up(p + n, 0.0);
        Vector down(p + n, 0.0);
        for (std::size_t i = 0; i < p; ++i) {
            up[i] = x[i];
            down[i] = -x[i];
        }
        up[p + j] = -1.0;
        down[p + j] = -1.0;
        prog.add(std::move(up), lp::Relation::less_equal, g[j]);
        prog.add(std::move(down), lp::Relation::less_equal, -g[j]);
    }
    const auto sol = lp::solve(prog, cfg.lp_options);
    if (sol.status != lp::Status::optimal)
        throw infeasible_error("correlation bounds are infeasible for this prediction matrix");
    return sol.objective;
}

/// Same quantity through the adversary's side: min (1/n) z.g over feasible z.
inline double worst_case_correlation_primal(const PredictionMatrix& f, const CorrelationVector& b,
                                            const LabelVector& g, const SolverConfig& cfg = {}) {
    validate_inputs(f, b);
    if (g.size() != f.n()) throw dimension_error("prediction vector length differs from n");
    const auto prog = detail::adversary_program(f, b, nullptr, &g.values());
    const auto sol = lp::solve(prog, cfg.lp_options);
    if (sol.status != lp::Status::optimal)
        throw infeasible_error("correlation bounds are infeasible for this prediction matrix");
    return sol.objective;
}

struct ZbrResult {
    bool in_zbr = false;
    double zbr_value = 0.0;  // max b.sigma over |F^T sigma| <= 1, sigma >= 0
    double value = 0.0;      // game value V
};

/// Whether the game's optimum lies in the zero box region, i.e. whether the
/// best non-clipping weighting already achieves V.
inline ZbrResult zbr_check(const PredictionMatrix& f, const CorrelationVector& b,
                           const SolverConfig& cfg = {}) {
    validate_inputs(f, b);
    const std::size_t p = f.p();
    lp::LinearProgram prog(p, lp::Sense::maximize);
    prog.objective = b.values();
    for (std::size_t j = 0; j < f.n(); ++j) {
        const auto x = f.column(j);
        Vector up(x.begin(), x.end());
        Vector down(p);
        for (std::size_t i = 0; i < p; ++i) down[i] = -x[i];
        prog.add(std::move(up), lp::Relation::less_equal, 1.0);
        prog.add(std::move(down), lp::Relation::less_equal, 1.0);
    }
    const auto box = lp::solve(prog, cfg.lp_options);
    if (box.status != lp::Status::optimal)
        throw infeasible_error("correlation bounds are infeasible for this prediction matrix");

    SolverConfig exact = cfg;
    exact.method = Method::exact_lp;
    const double v = game_value(f, b, exact).value;
    return {box.objective >= v - cfg.tolerance, box.objective, v};
}

struct Evaluation {
    double correlation = 0.0;
    double error = 0.0;
};

/// Correlation (1/n) z.g and expected error (1 - correlation) / 2.
inline Evaluation evaluate(const LabelVector& g, const LabelVector& z_true) {
    if (g.size() != z_true.size() || g.size() == 0)
        throw dimension_error("prediction and label vectors must have equal nonzero length");
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += g[j] * z_true[j];
    const double corr = acc / static_cast<double>(g.size());
    return {corr, 0.5 * (1.0 - corr)};
}

// ---------------------------------------------------------------------------

struct GameSolution {
    SolveStatus status = SolveStatus::not_converged;
    WeightVector sigma;
    LabelVector g;
    LabelVector z;
    double value = 0.0;
    MarginPartition partition;
    bool zbr = false;
    double zbr_value = std::numeric_limits<double>::quiet_NaN();
    Vector borderline_coeffs;
    double residual = 0.0;
    bool adversary_feasible = false;
    std::size_t iterations = 0;
    std::optional<LPCertificate> certificate;
    // Examples where both noise bounds are zero: g is not pinned down there.
    std::vector<std::size_t> unconstrained_examples;
};

/// Full pipeline: sigma*, both strategies, value, partition, ZBR diagnostic.
inline GameSolution solve_game(const PredictionMatrix& f, const CorrelationVector& b,
                               const SolverConfig& cfg = {},
                               const std::optional<NoiseProfile>& noise = std::nullopt) {
    GameSolution sol;
    const auto res = minimize_slack(f, b, cfg, noise);
    sol.status = res.status;
    sol.iterations = res.iterations_used;
    sol.certificate = res.certificate;
    if (res.status == SolveStatus::infeasible) return sol;

    sol.sigma = res.sigma;
    sol.value = -res.objective;
    sol.g = predictor_strategy(f, res.sigma);
    auto adv = adversary_strategy(f, b, res.sigma, cfg.tau, noise, std::nullopt, cfg.lp_options);
    sol.z = std::move(adv.z);
    sol.borderline_coeffs = std::move(adv.coeffs);
    sol.residual = adv.residual;
    sol.adversary_feasible = adv.feasible;
    sol.partition = std::move(adv.partition);

    if (noise) {
        sol.zbr = sol.partition.clipped.empty();
        for (std::size_t j = 0; j < f.n(); ++j)
            if (noise->lower()[j] == 0.0 && noise->upper()[j] == 0.0)
                sol.unconstrained_examples.push_back(j);
    } else {
        const auto z = zbr_check(f, b, cfg);
        sol.zbr = z.in_zbr;
        sol.zbr_value = z.zbr_value;
    }
    return sol;
}

}  // namespace minimax
