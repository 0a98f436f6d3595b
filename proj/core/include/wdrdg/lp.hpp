#pragma once

#include <Eigen/Core>

namespace wdrdg {

enum class LpSense { Minimize, Maximize };

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// A linear program over variables x:
///   optimize  objective . x
///   s.t.      eq_lhs x == eq_rhs
///             le_lhs x <= le_rhs
///             x >= lower_bounds   (all zero when empty)
/// Constraint blocks may be empty (0 rows); column counts must match the
/// variable count.
struct LinearProgram {
    Eigen::VectorXd objective;
    LpSense sense = LpSense::Minimize;
    Eigen::MatrixXd eq_lhs;
    Eigen::VectorXd eq_rhs;
    Eigen::MatrixXd le_lhs;
    Eigen::VectorXd le_rhs;
    Eigen::VectorXd lower_bounds;  // empty means all zero

    Eigen::Index num_variables() const noexcept { return objective.size(); }
};

/// Solver result. `x`, `objective` and the dual vectors are meaningful only
/// when status == Optimal. Duals are reported per constraint row, in the
/// original row order and orientation; for Maximize they are the multipliers
/// of the maximization problem.
struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    Eigen::VectorXd x;
    double objective = 0.0;
    Eigen::VectorXd eq_duals;
    Eigen::VectorXd le_duals;
};

/// Dense two-phase primal simplex. Deterministic for a fixed input: Dantzig
/// pricing with lowest-index tie breaking, switching to Bland's rule after a
/// long degenerate stall. Optimal results are verified against the original
/// constraints (residuals <= 1e-7 scale) before being returned; failures of
/// that certificate throw NumericalFailure instead of returning a bad point.
/// Infeasible and Unbounded are reported through `status`, not exceptions.
LpSolution solve_lp(const LinearProgram& program);

}  // namespace wdrdg
