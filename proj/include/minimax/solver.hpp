#pragma once

// Minimization of the slack function over sigma >= 0.
//
// Two paths: an exact LP over the epigraph form
//
//   max  b.sigma - (1/n) sum_j (u_j s_j + l_j r_j)
//   s.t. s_j >=  x_j.sigma - 1,   r_j >= -x_j.sigma - 1,   sigma, s, r >= 0
//
// and projected (optionally stochastic) subgradient descent.  The adversary's
// LP over z is solved alongside to certify the value by strong duality.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "core.hpp"
#include "simplex.hpp"
#include "slack.hpp"

namespace minimax {

enum class Method { subgradient, stochastic_subgradient, exact_lp };

inline const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::subgradient: return "subgradient";
        case Method::stochastic_subgradient: return "sgd";
        case Method::exact_lp: return "lp";
    }
    return "unknown";
}

struct StepSchedule {
    enum class Kind { constant, inverse_sqrt };
    Kind kind = Kind::inverse_sqrt;
    // Base step; 0 selects 1 / max_j ||x_j||_2.
    double eta = 0.0;
};

struct SolverConfig {
    Method method = Method::exact_lp;
    std::size_t max_iters = 50000;
    StepSchedule step{};
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
    double tau = kDefaultTau;
    std::size_t batch_size = 1;
    // Iterations per convergence window of the subgradient paths.
    std::size_t check_interval = 1000;
    // Full-objective evaluation cadence in stochastic mode.
    std::size_t eval_interval = 100;
    double max_sigma_norm = 1e6;
    // Record best-so-far objective every this many iterations (0 = off).
    std::size_t trace_interval = 0;
    lp::Options lp_options{};

    void validate() const {
        if (max_iters < 1) throw domain_error("max_iters must be >= 1");
        if (!(tolerance > 0.0)) throw domain_error("tolerance must be positive");
        if (!(tau > 0.0)) throw domain_error("tau must be positive");
        if (batch_size < 1) throw domain_error("batch_size must be >= 1");
        if (check_interval < 1 || eval_interval < 1)
            throw domain_error("check and eval intervals must be >= 1");
        if (step.eta < 0.0) throw domain_error("step size must be nonnegative");
    }
};

struct LPCertificate {
    double primal_value = 0.0;  // adversary: min (1/n)||z||_1
    double dual_value = 0.0;    // epigraph: max -gamma(sigma)
    double gap = 0.0;
    LabelVector primal_z;
    lp::Status status = lp::Status::infeasible;
};

enum class SolveStatus { optimal, infeasible, not_converged };

inline const char* to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::not_converged: return "not_converged";
    }
    return "unknown";
}

struct SolveResult {
    WeightVector sigma;
    double objective = 0.0;  // gamma at sigma (noisy gamma when a noise profile is used)
    std::size_t iterations_used = 0;
    std::optional<LPCertificate> certificate;
    bool converged = false;
    SolveStatus status = SolveStatus::not_converged;
    Vector best_trace;
};

// ---------------------------------------------------------------------------
// LP formulations

/// Epigraph LP in variables (sigma[0..p), s[0..n), r[0..n)).
struct EpigraphProgram {
    lp::LinearProgram program;
    std::size_t p = 0;
    std::size_t n = 0;
};

inline EpigraphProgram lp_dual_epigraph(const PredictionMatrix& f, const CorrelationVector& b,
                                        const std::optional<NoiseProfile>& noise = std::nullopt) {
    validate_inputs(f, b);
    if (noise) detail::check_noise(f, *noise);
    const std::size_t p = f.p();
    const std::size_t n = f.n();
    const double inv_n = 1.0 / static_cast<double>(n);

    EpigraphProgram ep{lp::LinearProgram(p + 2 * n, lp::Sense::maximize), p, n};
    auto& obj = ep.program.objective;
    for (std::size_t i = 0; i < p; ++i) obj[i] = b[i];
    for (std::size_t j = 0; j < n; ++j) {
        obj[p + j] = -inv_n * (noise ? noise->upper()[j] : 1.0);
        obj[p + n + j] = -inv_n * (noise ? noise->lower()[j] : 1.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto x = f.column(j);
        Vector up(p + 2 * n, 0.0);
        Vector down(p + 2 * n, 0.0);
        for (std::size_t i = 0; i < p; ++i) {
            up[i] = x[i];
            down[i] = -x[i];
        }
        up[p + j] = -1.0;
        down[p + n + j] = -1.0;
        ep.program.add(std::move(up), lp::Relation::less_equal, 1.0);
        ep.program.add(std::move(down), lp::Relation::less_equal, 1.0);
    }
    return ep;
}

struct EpigraphSolution {
    lp::Status status = lp::Status::infeasible;
    WeightVector sigma;
    double value = 0.0;  // LP optimum, equal to -min gamma
    std::size_t pivots = 0;
};

inline EpigraphSolution solve_epigraph(const EpigraphProgram& ep, const lp::Options& opt = {}) {
    const auto sol = lp::solve(ep.program, opt);
    EpigraphSolution out;
    out.status = sol.status;
    out.pivots = sol.pivots;
    if (sol.status != lp::Status::optimal) return out;
    out.sigma = WeightVector(Vector(sol.x.begin(), sol.x.begin() + static_cast<long>(ep.p)));
    out.value = sol.objective;
    return out;
}

namespace detail {

// Adversary program over zeta = (z+, z-) in R^{2n}:
//   min  (1/n) w.(z+ - z-) or (1/n) sum(zeta)   s.t.  F (z+ - z-) >= n b,
//   0 <= z+ <= u,  0 <= z- <= l.
inline lp::LinearProgram adversary_program(const PredictionMatrix& f, const CorrelationVector& b,
                                           const NoiseProfile* noise, const Vector* payoff) {
    const std::size_t p = f.p();
    const std::size_t n = f.n();
    const double inv_n = 1.0 / static_cast<double>(n);
    lp::LinearProgram prog(2 * n, lp::Sense::minimize);
    for (std::size_t j = 0; j < n; ++j) {
        if (payoff != nullptr) {
            prog.objective[j] = inv_n * (*payoff)[j];
            prog.objective[n + j] = -inv_n * (*payoff)[j];
        } else {
            prog.objective[j] = inv_n;
            prog.objective[n + j] = inv_n;
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        Vector row(2 * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = f(i, j);
            row[n + j] = -f(i, j);
        }
        prog.add(std::move(row), lp::Relation::greater_equal, static_cast<double>(n) * b[i]);
    }
    for (std::size_t j = 0; j < 2 * n; ++j) {
        Vector row(2 * n, 0.0);
        row[j] = 1.0;
        double cap = 1.0;
        if (noise != nullptr) cap = j < n ? noise->upper()[j] : noise->lower()[j - n];
        prog.add(std::move(row), lp::Relation::less_equal, cap);
    }
    return prog;
}

inline Vector labels_from_zeta(const Vector& zeta, std::size_t n) {
    Vector z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = std::clamp(zeta[j] - zeta[n + j], -1.0, 1.0);
    return z;
}

}  // namespace detail

/// Solves the adversary's LP min (1/n)||z||_1 over the feasible labelings and
/// pairs it with the epigraph optimum.  status == infeasible iff no labeling
/// in the (noise) box meets F z >= n b.
inline LPCertificate lp_adversary(const PredictionMatrix& f, const CorrelationVector& b,
                                  const std::optional<NoiseProfile>& noise = std::nullopt,
                                  const lp::Options& opt = {}) {
    validate_inputs(f, b);
    if (noise) detail::check_noise(f, *noise);
    LPCertificate cert;
    const auto prog = detail::adversary_program(f, b, noise ? &*noise : nullptr, nullptr);
    const auto primal = lp::solve(prog, opt);
    cert.status = primal.status;
    if (primal.status != lp::Status::optimal) {
        cert.primal_value = std::numeric_limits<double>::infinity();
        cert.dual_value = std::numeric_limits<double>::infinity();
        cert.gap = std::numeric_limits<double>::infinity();
        return cert;
    }
    cert.primal_value = primal.objective;
    cert.primal_z = LabelVector(detail::labels_from_zeta(primal.x, f.n()));
    const auto dual = solve_epigraph(lp_dual_epigraph(f, b, noise), opt);
    cert.dual_value = dual.status == lp::Status::optimal ? dual.value
                                                         : std::numeric_limits<double>::infinity();
    cert.gap = std::abs(cert.primal_value - cert.dual_value);
    return cert;
}

// ---------------------------------------------------------------------------
// Subgradient paths

namespace detail {

inline double default_step(const PredictionMatrix& f) {
    double best = 0.0;
    for (std::size_t j = 0; j < f.n(); ++j) {
        double s = 0.0;
        for (double v : f.column(j)) s += v * v;
        best = std::max(best, s);
    }
    return best > 0.0 ? 1.0 / std::sqrt(best) : 1.0;
}

inline Vector margins_of(const PredictionMatrix& f, const Vector& sigma) {
    Vector m(f.n());
    for (std::size_t j = 0; j < f.n(); ++j) {
        const auto x = f.column(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < f.p(); ++i) acc += x[i] * sigma[i];
        m[j] = acc;
    }
    return m;
}

inline double objective_from_margins(const Vector& margins, const CorrelationVector& b,
                                     const Vector& sigma, const NoiseProfile* noise) {
    double pen = 0.0;
    for (std::size_t j = 0; j < margins.size(); ++j) {
        const double m = margins[j];
        pen += noise ? noise->upper()[j] * std::max(m - 1.0, 0.0) +
                           noise->lower()[j] * std::max(-m - 1.0, 0.0)
                     : std::max(std::abs(m) - 1.0, 0.0);
    }
    return pen / static_cast<double>(margins.size()) - dot(b.values(), sigma);
}

inline SolveResult subgradient_descent(const PredictionMatrix& f, const CorrelationVector& b,
                                       const SolverConfig& cfg, const NoiseProfile* noise) {
    const std::size_t p = f.p();
    const std::size_t n = f.n();
    const bool stochastic = cfg.method == Method::stochastic_subgradient;
    const double eta0 = cfg.step.eta > 0.0 ? cfg.step.eta : default_step(f);
    // For a feasible game -gamma(sigma) <= V <= 1, so anything below -1 proves
    // the constraints on z cannot be met.
    constexpr double kValueCeiling = 1.0;

    std::mt19937_64 rng(cfg.seed);
    Vector sigma(p, 0.0);
    Vector avg(p, 0.0);
    Vector grad(p, 0.0);

    SolveResult res;
    Vector best_sigma(p, 0.0);
    double best = 0.0;  // gamma(0)
    double window_best = best;
    bool infeasible = false;
    bool converged = false;
    std::size_t t = 0;

    auto consider = [&](const Vector& candidate, double value) {
        if (value < best) {
            best = value;
            best_sigma = candidate;
        }
    };

    while (t < cfg.max_iters) {
        ++t;
        std::fill(grad.begin(), grad.end(), 0.0);
        if (!stochastic) {
            const Vector m = margins_of(f, sigma);
            consider(sigma, objective_from_margins(m, b, sigma, noise));
            grad = subgradient_from_margins(f, b, m, noise, cfg.tau, std::nullopt);
        } else {
            for (std::size_t k = 0; k < cfg.batch_size; ++k) {
                const std::size_t j = uniform_index(rng, n);
                const auto x = f.column(j);
                const double m = dot(x, sigma);
                const Region r = classify_margin(m, cfg.tau);
                if (r == Region::hedged) continue;
                double w = sgn(m) * (noise ? noise->weight(j, m) : 1.0);
                if (r == Region::borderline) w *= 0.5;
                for (std::size_t i = 0; i < p; ++i) grad[i] += w * x[i];
            }
            const double inv_batch = 1.0 / static_cast<double>(cfg.batch_size);
            for (std::size_t i = 0; i < p; ++i) grad[i] = grad[i] * inv_batch - b[i];
        }

        const double step = cfg.step.kind == StepSchedule::Kind::constant
                                ? eta0
                                : eta0 / std::sqrt(static_cast<double>(t));
        double norm = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            sigma[i] = std::max(sigma[i] - step * grad[i], 0.0);
            avg[i] += (sigma[i] - avg[i]) / static_cast<double>(t);
            norm += sigma[i];
        }

        if (!stochastic || t % cfg.eval_interval == 0 || t == cfg.max_iters) {
            consider(avg, objective_from_margins(margins_of(f, avg), b, avg, noise));
            if (stochastic)
                consider(sigma, objective_from_margins(margins_of(f, sigma), b, sigma, noise));
        }
        if (cfg.trace_interval > 0 && t % cfg.trace_interval == 0) res.best_trace.push_back(best);

        if (best < -kValueCeiling - 1e-9 || norm > cfg.max_sigma_norm) {
            infeasible = true;
            break;
        }
        if (t % cfg.check_interval == 0) {
            if (window_best - best < cfg.tolerance) {
                converged = true;
                break;
            }
            window_best = best;
        }
    }
    if (!stochastic) {
        consider(sigma, objective_from_margins(margins_of(f, sigma), b, sigma, noise));
    }

    res.sigma = WeightVector(best_sigma);
    res.objective = best;
    res.iterations_used = t;
    if (infeasible) {
        res.status = SolveStatus::infeasible;
        res.converged = false;
    } else {
        res.converged = converged;
        res.status = converged ? SolveStatus::optimal : SolveStatus::not_converged;
    }
    return res;
}

}  // namespace detail

/// sigma* in argmin_{sigma >= 0} gamma(sigma), by the configured method.
/// Infeasible bounds and non-convergence are reported in the status, not thrown.
inline SolveResult minimize_slack(const PredictionMatrix& f, const CorrelationVector& b,
                                  const SolverConfig& cfg = {},
                                  const std::optional<NoiseProfile>& noise = std::nullopt) {
    validate_inputs(f, b);
    cfg.validate();
    if (noise) detail::check_noise(f, *noise);
    const NoiseProfile* np = noise ? &*noise : nullptr;

    if (cfg.method != Method::exact_lp) {
        SolveResult res = detail::subgradient_descent(f, b, cfg, np);
        if (res.status != SolveStatus::infeasible) {
            // Report the objective through the reference evaluation.
            res.objective = np ? noisy_slack(f, b, res.sigma, *np).value
                               : slack(f, b, res.sigma).value;
        }
        return res;
    }

    SolveResult res;
    const auto ep = solve_epigraph(lp_dual_epigraph(f, b, noise), cfg.lp_options);
    res.iterations_used = ep.pivots;
    if (ep.status != lp::Status::optimal) {
        res.status = SolveStatus::infeasible;
        res.sigma = WeightVector::zeros(f.p());
        res.objective = -std::numeric_limits<double>::infinity();
        res.certificate = lp_adversary(f, b, noise, cfg.lp_options);
        return res;
    }
    res.sigma = ep.sigma;
    res.objective = np ? noisy_slack(f, b, res.sigma, *np).value : slack(f, b, res.sigma).value;
    res.certificate = lp_adversary(f, b, noise, cfg.lp_options);
    res.converged = true;
    res.status = SolveStatus::optimal;
    if (res.certificate->status != lp::Status::optimal) {
        res.status = SolveStatus::infeasible;
        res.converged = false;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

inline constexpr double kOracleMaxSystems = 2e6;

/// Exact minimum of gamma on tiny instances by enumerating every vertex of
/// the hyperplane arrangement {x_j.sigma = +-1} U {sigma_i = 0} inside the
/// orthant.  A bounded-below piecewise-linear convex function on a pointed
/// polyhedron attains its minimum at such a vertex.  Test use only; refuses
/// instances needing more than kOracleMaxSystems square solves.
inline double oracle_minimize(const PredictionMatrix& f, const CorrelationVector& b,
                              const std::optional<NoiseProfile>& noise = std::nullopt) {
    validate_inputs(f, b);
    {
        // C(2n + p, p) candidate vertices.
        double systems = 1.0;
        const double total = static_cast<double>(2 * f.n() + f.p());
        for (std::size_t k = 0; k < f.p(); ++k)
            systems = systems * (total - static_cast<double>(k)) / static_cast<double>(k + 1);
        if (systems > kOracleMaxSystems) throw domain_error("instance too large for the oracle");
    }
    if (noise) detail::check_noise(f, *noise);
    const std::size_t p = f.p();
    const std::size_t n = f.n();

    struct Plane {
        Vector normal;
        double offset;
    };
    std::vector<Plane> planes;
    for (std::size_t j = 0; j < n; ++j) {
        Vector x(f.column(j).begin(), f.column(j).end());
        planes.push_back({x, 1.0});
        planes.push_back({x, -1.0});
    }
    for (std::size_t i = 0; i < p; ++i) {
        Vector e(p, 0.0);
        e[i] = 1.0;
        planes.push_back({e, 0.0});
    }

    auto evaluate = [&](const Vector& s) {
        double pen = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < p; ++i) m += f(i, j) * s[i];
            if (noise)
                pen += noise->upper()[j] * std::max(m - 1.0, 0.0) +
                       noise->lower()[j] * std::max(-m - 1.0, 0.0);
            else
                pen += std::max(std::abs(m) - 1.0, 0.0);
        }
        double lin = 0.0;
        for (std::size_t i = 0; i < p; ++i) lin += b[i] * s[i];
        return pen / static_cast<double>(n) - lin;
    };

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(p);
    for (std::size_t i = 0; i < p; ++i) pick[i] = i;
    const std::size_t total = planes.size();
    for (;;) {
        // Solve the p x p system by Gaussian elimination with partial pivoting.
        std::vector<Vector> a(p, Vector(p + 1));
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) a[r][c] = planes[pick[r]].normal[c];
            a[r][p] = planes[pick[r]].offset;
        }
        bool singular = false;
        for (std::size_t c = 0; c < p && !singular; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < p; ++r)
                if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
            if (std::abs(a[piv][c]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(a[c], a[piv]);
            for (std::size_t r = 0; r < p; ++r) {
                if (r == c) continue;
                const double factor = a[r][c] / a[c][c];
                for (std::size_t k = c; k <= p; ++k) a[r][k] -= factor * a[c][k];
            }
        }
        if (!singular) {
            Vector s(p);
            bool feasible = true;
            for (std::size_t i = 0; i < p; ++i) {
                s[i] = a[i][p] / a[i][i];
                if (s[i] < -1e-9) feasible = false;
                s[i] = std::max(s[i], 0.0);
            }
            if (feasible) best = std::min(best, evaluate(s));
        }

        // Next combination in lexicographic order.
        std::size_t k = p;
        while (k > 0 && pick[k - 1] == total - p + (k - 1)) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t r = k; r < p; ++r) pick[r] = pick[r - 1] + 1;
    }
    return best;
}

}  // namespace minimax
