#include "wdrdg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wdrdg/errors.hpp"

namespace wdrdg {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-9;
constexpr int kDegenerateStallLimit = 600;
constexpr int kMaxIterations = 200000;

struct Tableau {
    RowMajorMatrix body;            // m x ncols, current B^-1 [A | S | R]
    Eigen::VectorXd rhs;            // m, current B^-1 b (kept >= 0)
    Eigen::RowVectorXd reduced;     // ncols reduced costs of the active phase
    double objective = 0.0;         // active-phase objective value
    std::vector<Eigen::Index> basis;  // basic column per row
    std::vector<char> enterable;      // columns allowed to enter
};

enum class PivotOutcome { Optimal, Unbounded };

void apply_pivot(Tableau& t, Eigen::Index row, Eigen::Index col) {
    const double pivot = t.body(row, col);
    t.body.row(row) /= pivot;
    t.rhs[row] /= pivot;
    t.basis[static_cast<std::size_t>(row)] = col;
    for (Eigen::Index i = 0; i < t.body.rows(); ++i) {
        if (i == row) continue;
        const double factor = t.body(i, col);
        if (factor == 0.0) continue;
        t.body.row(i) -= factor * t.body.row(row);
        t.rhs[i] -= factor * t.rhs[row];
        if (t.rhs[i] < 0.0 && t.rhs[i] > -1e-11) t.rhs[i] = 0.0;
    }
    const double red = t.reduced[col];
    if (red != 0.0) {
        t.reduced -= red * t.body.row(row);
        t.objective += red * t.rhs[row];  // reduced < 0 decreases a min objective
    }
}

PivotOutcome run_simplex(Tableau& t) {
    bool bland = false;
    int degenerate_streak = 0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        // Entering column.
        Eigen::Index enter = -1;
        if (bland) {
            for (Eigen::Index j = 0; j < t.reduced.size(); ++j) {
                if (t.enterable[static_cast<std::size_t>(j)] && t.reduced[j] < -kReducedCostTol) {
                    enter = j;
                    break;
                }
            }
        } else {
            double best = -kReducedCostTol;
            for (Eigen::Index j = 0; j < t.reduced.size(); ++j) {
                if (t.enterable[static_cast<std::size_t>(j)] && t.reduced[j] < best) {
                    best = t.reduced[j];
                    enter = j;
                }
            }
        }
        if (enter < 0) return PivotOutcome::Optimal;

        // Ratio test: min rhs/entry over positive entries. Ties within
        // kRatioTieTol go to the largest pivot element (stability), or to the
        // smallest basic index under Bland's rule (termination).
        Eigen::Index leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < t.body.rows(); ++i) {
            const double entry = t.body(i, enter);
            if (entry <= kPivotTol) continue;
            const double ratio = t.rhs[i] / entry;
            if (ratio < best_ratio - kRatioTieTol) {
                best_ratio = ratio;
                leave = i;
            } else if (ratio <= best_ratio + kRatioTieTol && leave >= 0) {
                if (bland) {
                    if (t.basis[static_cast<std::size_t>(i)] <
                        t.basis[static_cast<std::size_t>(leave)])
                        leave = i;
                } else if (entry > t.body(leave, enter)) {
                    leave = i;
                }
            }
        }
        if (leave < 0) return PivotOutcome::Unbounded;

        if (best_ratio <= 1e-12) {
            if (++degenerate_streak > kDegenerateStallLimit) bland = true;
        } else {
            degenerate_streak = 0;
        }
        apply_pivot(t, leave, enter);
    }
    throw NumericalFailure("simplex exceeded the iteration cap");
}

void validate(const LinearProgram& p) {
    const Eigen::Index n = p.num_variables();
    if (n == 0) throw InvalidArgument("linear program has no variables");
    if (!p.objective.allFinite()) throw InvalidArgument("objective has non-finite entries");
    auto check_block = [n](const Eigen::MatrixXd& lhs, const Eigen::VectorXd& rhs,
                           const char* what) {
        if (lhs.rows() != rhs.size())
            throw DimensionMismatch(std::string(what) + ": row count does not match rhs length");
        if (lhs.rows() > 0 && lhs.cols() != n)
            throw DimensionMismatch(std::string(what) + ": column count does not match variables");
        if (!lhs.allFinite() || !rhs.allFinite())
            throw InvalidArgument(std::string(what) + ": non-finite entries");
    };
    check_block(p.eq_lhs, p.eq_rhs, "equality block");
    check_block(p.le_lhs, p.le_rhs, "inequality block");
    if (p.lower_bounds.size() != 0) {
        if (p.lower_bounds.size() != n)
            throw DimensionMismatch("lower bound count does not match variables");
        if (!p.lower_bounds.allFinite())
            throw InvalidArgument("lower bounds must be finite");
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& program) {
    validate(program);

    const Eigen::Index n = program.num_variables();
    const Eigen::Index m_eq = program.eq_lhs.rows();
    const Eigen::Index m_le = program.le_lhs.rows();
    const Eigen::Index m = m_eq + m_le;

    const bool maximize = program.sense == LpSense::Maximize;
    Eigen::VectorXd cost = maximize ? Eigen::VectorXd(-program.objective) : program.objective;

    Eigen::VectorXd lb = program.lower_bounds.size() ? program.lower_bounds
                                                     : Eigen::VectorXd::Zero(n);

    // Shift to x' = x - lb >= 0.
    Eigen::VectorXd rhs_user(m);
    if (m_eq > 0) rhs_user.head(m_eq) = program.eq_rhs - program.eq_lhs * lb;
    if (m_le > 0) rhs_user.tail(m_le) = program.le_rhs - program.le_lhs * lb;

    const Eigen::Index slack_begin = n;
    const Eigen::Index art_begin = n + m_le;
    const Eigen::Index ncols = n + m_le + m;

    Tableau t;
    t.body = RowMajorMatrix::Zero(m, ncols);
    t.rhs = Eigen::VectorXd::Zero(m);
    t.basis.resize(static_cast<std::size_t>(m));
    t.enterable.assign(static_cast<std::size_t>(ncols), 1);

    std::vector<char> negated(static_cast<std::size_t>(m), 0);
    for (Eigen::Index i = 0; i < m; ++i) {
        const bool is_eq = i < m_eq;
        if (is_eq) {
            t.body.block(i, 0, 1, n) = program.eq_lhs.row(i);
        } else {
            t.body.block(i, 0, 1, n) = program.le_lhs.row(i - m_eq);
            t.body(i, slack_begin + (i - m_eq)) = 1.0;
        }
        t.rhs[i] = rhs_user[i];
        if (t.rhs[i] < 0.0) {
            t.body.row(i) = -t.body.row(i);
            t.rhs[i] = -t.rhs[i];
            negated[static_cast<std::size_t>(i)] = 1;
        }
        t.body(i, art_begin + i) = 1.0;
        t.basis[static_cast<std::size_t>(i)] = art_begin + i;
    }

    // Phase 1: minimize the sum of artificials. All basic costs are 1, so the
    // reduced cost of column j is -sum_i body(i, j) for non-artificials.
    t.reduced = Eigen::RowVectorXd::Zero(ncols);
    if (m > 0) {
        t.reduced.head(art_begin) = -t.body.leftCols(art_begin).colwise().sum();
        t.objective = t.rhs.sum();
        if (run_simplex(t) == PivotOutcome::Unbounded)
            throw NumericalFailure("phase 1 reported unbounded");  // cannot happen: bounded below by 0

        const double scale = std::max(1.0, rhs_user.size() ? rhs_user.cwiseAbs().maxCoeff() : 0.0);
        if (t.objective > 1e-8 * scale) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            return sol;
        }

        // Pivot artificials out of the basis where a nonzero structural or
        // slack entry exists; rows with none are redundant and keep their
        // artificial basic at zero. The basic value is at most the phase-1
        // objective, so it is zeroed first and the pivot cannot move it.
        for (Eigen::Index i = 0; i < m; ++i) {
            if (t.basis[static_cast<std::size_t>(i)] < art_begin) continue;
            if (t.rhs[i] < 1e-7 * scale) t.rhs[i] = 0.0;
            Eigen::Index pivot_col = -1;
            double best = 1e-6;
            for (Eigen::Index j = 0; j < art_begin; ++j) {
                if (std::abs(t.body(i, j)) > best) {
                    best = std::abs(t.body(i, j));
                    pivot_col = j;
                }
            }
            if (pivot_col >= 0) {
                apply_pivot(t, i, pivot_col);
                if (t.rhs[i] < 0.0) t.rhs[i] = 0.0;
            }
        }
    }

    // Phase 2: artificials may never re-enter.
    for (Eigen::Index j = art_begin; j < ncols; ++j) t.enterable[static_cast<std::size_t>(j)] = 0;

    t.reduced = Eigen::RowVectorXd::Zero(ncols);
    t.reduced.head(n) = cost.transpose();
    t.objective = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index b = t.basis[static_cast<std::size_t>(i)];
        if (b < n && cost[b] != 0.0) {
            t.reduced -= cost[b] * t.body.row(i);
            t.objective += cost[b] * t.rhs[i];
        }
    }

    if (run_simplex(t) == PivotOutcome::Unbounded) {
        LpSolution sol;
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    // Recover the primal point.
    Eigen::VectorXd x_shifted = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index b = t.basis[static_cast<std::size_t>(i)];
        if (b < n) x_shifted[b] = std::max(0.0, t.rhs[i]);
    }

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.x = x_shifted + lb;
    sol.objective = program.objective.dot(sol.x);

    // Duals from the artificial columns: y_i = -reduced[artificial_i] in the
    // minimized, row-normalized system.
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double yi = -t.reduced[art_begin + i];
        if (negated[static_cast<std::size_t>(i)]) yi = -yi;
        if (maximize) yi = -yi;
        y[i] = yi;
    }
    sol.eq_duals = y.head(m_eq);
    sol.le_duals = y.tail(m_le);

    // Certify the point against the original data before handing it out.
    const double scale = std::max(1.0, rhs_user.size() ? rhs_user.cwiseAbs().maxCoeff() : 0.0);
    const double tol = 1e-7 * scale;
    if (m_eq > 0) {
        const double r = (program.eq_lhs * sol.x - program.eq_rhs).cwiseAbs().maxCoeff();
        if (r > tol) throw NumericalFailure("equality residual " + std::to_string(r) + " exceeds tolerance");
    }
    if (m_le > 0) {
        const double r = (program.le_lhs * sol.x - program.le_rhs).maxCoeff();
        if (r > tol) throw NumericalFailure("inequality residual " + std::to_string(r) + " exceeds tolerance");
    }
    if (((sol.x - lb).array() < -1e-9).any())
        throw NumericalFailure("variable bound violated in recovered solution");

    return sol;
}

}  // namespace wdrdg
