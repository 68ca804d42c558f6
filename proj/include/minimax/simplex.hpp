#pragma once

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
//
// Solves   max/min  c . x   s.t.  a_k . x {<=, >=, =} rhs_k,  x >= 0.
//
// Intended for desk-scale problems (a few hundred rows and columns); every
// pivot touches the full tableau.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace minimax::lp {

using Vector = std::vector<double>;

enum class Relation { less_equal, greater_equal, equal };
enum class Sense { maximize, minimize };
enum class Status { optimal, infeasible, unbounded };

inline const char* to_string(Status s) noexcept {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
    }
    return "unknown";
}

struct Constraint {
    Vector coeffs;
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
};

struct LinearProgram {
    Sense sense = Sense::maximize;
    Vector objective;
    std::vector<Constraint> constraints;

    explicit LinearProgram(std::size_t num_vars = 0, Sense s = Sense::maximize)
        : sense(s), objective(num_vars, 0.0) {}

    std::size_t num_variables() const noexcept { return objective.size(); }

    void add(Vector coeffs, Relation rel, double rhs) {
        if (coeffs.size() != objective.size())
            throw std::invalid_argument("constraint width does not match variable count");
        constraints.push_back({std::move(coeffs), rel, rhs});
    }
};

struct Options {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-9;
    std::size_t max_pivots = 200000;
};

struct Solution {
    Status status = Status::infeasible;
    Vector x;
    double objective = 0.0;
    std::size_t pivots = 0;
};

namespace detail {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    // Objective row sits after the constraint rows and stores z_j - c_j.
    double& obj(std::size_t c) { return at(rows_, c); }
    double obj(std::size_t c) const { return at(rows_, c); }
    double& value() { return at(rows_, cols_); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::vector<std::size_t>& basis() noexcept { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const std::size_t width = cols_ + 1;
        double* prow = &data_[pr * width];
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            double* row = &data_[r * width];
            const double factor = row[pc];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < width; ++c) {
                if (prow[c] != 0.0) row[c] -= factor * prow[c];
            }
            row[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    // Makes the objective row consistent with the current basis.
    void price_out() {
        for (std::size_t r = 0; r < rows_; ++r) {
            const double factor = obj(basis_[r]);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(rows_, c) -= factor * at(r, c);
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    Vector data_;
    std::vector<std::size_t> basis_;
};

// Maximizes the objective row over columns with allowed[c] == true.
// Returns false on unboundedness.
inline bool run(Tableau& t, const std::vector<bool>& allowed, const Options& opt,
                std::size_t& pivots) {
    for (;;) {
        std::size_t enter = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (allowed[c] && t.obj(c) < -opt.pivot_tolerance) {
                enter = c;
                break;
            }
        }
        if (enter == t.cols()) return true;

        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, enter);
            if (a <= opt.pivot_tolerance) continue;
            const double ratio = std::max(t.rhs(r), 0.0) / a;
            if (leave == t.rows() || ratio < best - 1e-12 ||
                (ratio <= best + 1e-12 && t.basis()[r] < t.basis()[leave])) {
                best = std::min(best, ratio);
                leave = r;
            }
        }
        if (leave == t.rows()) return false;
        if (++pivots > opt.max_pivots)
            throw std::runtime_error("simplex pivot limit exceeded (" +
                                     std::to_string(opt.max_pivots) + ")");
        t.pivot(leave, enter);
    }
}

}  // namespace detail

inline Solution solve(const LinearProgram& lp, const Options& opt = {}) {
    const std::size_t nv = lp.num_variables();
    const std::size_t m = lp.constraints.size();

    // Normalize every row to a nonnegative right-hand side.
    std::vector<Constraint> rows = lp.constraints;
    for (auto& row : rows) {
        if (row.rhs < 0.0) {
            for (double& a : row.coeffs) a = -a;
            row.rhs = -row.rhs;
            if (row.relation == Relation::less_equal)
                row.relation = Relation::greater_equal;
            else if (row.relation == Relation::greater_equal)
                row.relation = Relation::less_equal;
        }
    }

    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    for (const auto& row : rows) {
        if (row.relation != Relation::equal) ++n_slack;
        if (row.relation != Relation::less_equal) ++n_art;
    }
    const std::size_t first_slack = nv;
    const std::size_t first_art = nv + n_slack;
    const std::size_t cols = nv + n_slack + n_art;

    detail::Tableau t(m, cols);
    {
        std::size_t s = first_slack;
        std::size_t a = first_art;
        for (std::size_t r = 0; r < m; ++r) {
            const auto& row = rows[r];
            for (std::size_t c = 0; c < nv; ++c) t.at(r, c) = row.coeffs[c];
            t.rhs(r) = row.rhs;
            switch (row.relation) {
                case Relation::less_equal:
                    t.at(r, s) = 1.0;
                    t.basis()[r] = s++;
                    break;
                case Relation::greater_equal:
                    t.at(r, s++) = -1.0;
                    t.at(r, a) = 1.0;
                    t.basis()[r] = a++;
                    break;
                case Relation::equal:
                    t.at(r, a) = 1.0;
                    t.basis()[r] = a++;
                    break;
            }
        }
    }

    Solution sol;
    std::vector<bool> allowed(cols, true);

    if (n_art > 0) {
        // Phase 1: maximize -sum(artificials).
        for (std::size_t c = first_art; c < cols; ++c) t.obj(c) = 1.0;
        t.price_out();
        detail::run(t, allowed, opt, sol.pivots);
        double scale = 1.0;
        for (const auto& row : rows) scale = std::max(scale, std::abs(row.rhs));
        if (t.value() < -opt.feasibility_tolerance * scale) {
            sol.status = Status::infeasible;
            return sol;
        }
        // Drive zero-level artificials out of the basis where possible.  Rows
        // with no usable column are redundant and keep their artificial at 0.
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis()[r] < first_art) continue;
            for (std::size_t c = 0; c < first_art; ++c) {
                if (std::abs(t.at(r, c)) > opt.pivot_tolerance) {
                    t.pivot(r, c);
                    ++sol.pivots;
                    break;
                }
            }
        }
        for (std::size_t c = first_art; c < cols; ++c) allowed[c] = false;
    }

    // Phase 2.
    const double sign = lp.sense == Sense::maximize ? 1.0 : -1.0;
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
    for (std::size_t c = 0; c < nv; ++c) t.obj(c) = -sign * lp.objective[c];
    t.price_out();
    if (!detail::run(t, allowed, opt, sol.pivots)) {
        sol.status = Status::unbounded;
        return sol;
    }

    sol.status = Status::optimal;
    sol.x.assign(nv, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = t.basis()[r];
        if (b < nv) sol.x[b] = std::max(t.rhs(r), 0.0);
    }
    double obj = 0.0;
    for (std::size_t c = 0; c < nv; ++c) obj += lp.objective[c] * sol.x[c];
    sol.objective = obj;
    return sol;
}

}  // namespace minimax::lp
