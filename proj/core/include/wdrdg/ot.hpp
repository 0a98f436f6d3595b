#pragma once

#include <Eigen/Core>

#include "wdrdg/measures.hpp"

namespace wdrdg {

/// A transport plan between two discrete measures: nonnegative matrix whose
/// row sums equal the first measure's weights and column sums the second's
/// (within 1e-7).
struct Coupling {
    Eigen::MatrixXd plan;           // n x m
    Eigen::VectorXd row_marginal;   // n
    Eigen::VectorXd col_marginal;   // m
};

/// Exact minimum-cost coupling between `a` and `b` under the given cost.
/// Returns the plan and the transport cost <plan, cost>. Solved with a
/// transportation simplex; deterministic for a fixed input.
std::pair<Coupling, double> optimal_coupling(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                             const CostMatrix& cost);

/// Order-2 Wasserstein distance: square root of the optimal squared-Euclidean
/// transport cost.
double wasserstein2(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Order-1 Wasserstein distance: optimal transport cost under plain Euclidean
/// cost, no root. Diagnostic companion of the order-2 machinery.
double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Maps each of the coupling's n_t uniform-weight source atoms into the
/// convex hull of `target_points`: row j goes to sum_i n_t plan(j,i) x_i.
/// Throws NonUniformSourceWeights when a row's mass deviates from 1/n_t by
/// more than 1e-7.
Eigen::MatrixXd barycentric_map(const Coupling& coupling, Eigen::Index n_t,
                                const Eigen::MatrixXd& target_points);

/// Low-level entry point: minimum-cost transport between two nonnegative
/// mass vectors of equal total (within 1e-7). Exposed for reuse by the
/// solver-facing modules; prefer optimal_coupling for measures.
std::pair<Eigen::MatrixXd, double> solve_transport(const Eigen::VectorXd& supply,
                                                   const Eigen::VectorXd& demand,
                                                   const Eigen::MatrixXd& cost);

}  // namespace wdrdg
