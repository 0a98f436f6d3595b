#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "wdrdg/lp.hpp"
#include "wdrdg/measures.hpp"
#include "wdrdg/uncertainty.hpp"

namespace wdrdg {

/// Union of the class barycenter supports, kept in class-blocked order, with
/// the squared-distance matrix over the pooled points.
struct PooledSupport {
    Eigen::MatrixXd points;                    // n_b x d
    std::vector<int> class_of;                 // 1-based class of origin per point
    std::vector<Eigen::Index> block_offsets;   // K+1 entries, block k = [off_k, off_{k+1})
    CostMatrix cost;

    static PooledSupport from_sets(const std::vector<UncertaintySet>& sets);

    Eigen::Index size() const noexcept { return points.rows(); }
    int num_classes() const noexcept { return static_cast<int>(block_offsets.size()) - 1; }
};

/// Solved robust program: least favorable distributions over the pooled
/// support, the certifying couplings, and the induced prediction table.
struct DroSolution {
    PooledSupport support;
    Eigen::MatrixXd lfds;                     // K x n_b, row k sums to 1
    std::vector<Eigen::MatrixXd> gammas;      // K couplings, n_b x n_b
    std::vector<Eigen::MatrixXd> betas;       // one per unordered pair
    std::vector<std::pair<int, int>> beta_pairs;  // 1-based (u, v), u < v
    double objective = 0.0;                   // 1 - sum_i max_k prior_k lfd_k(i)
    Eigen::MatrixXd phi;                      // n_b x K, row-stochastic
    std::vector<Eigen::Index> degenerate_rows;  // rows where every lfd vanished
    Eigen::VectorXd priors;
    double delta = 0.0;
    Eigen::VectorXd radii;                    // K

    int num_classes() const noexcept { return static_cast<int>(lfds.rows()); }
};

/// Builds the linear program whose optimum yields the least favorable
/// distributions: mass vectors P_k tied to their class barycenter through a
/// coupling of squared cost at most radius^2, pairwise couplings of squared
/// cost at least delta^2, and epigraph variables t_i >= prior_k P_k(x_i)
/// linearizing the per-point max. The program maximizes -sum_i t_i; the
/// reported model objective adds the constant 1 back.
LinearProgram assemble_program(const std::vector<UncertaintySet>& sets,
                               const ClassPriors& priors, double delta);

/// Assembles and solves the robust program. Throws InfeasibleDelta when no
/// distributions satisfy the pairwise separation, NumericalFailure when the
/// solver fails.
DroSolution solve_dro(const std::vector<UncertaintySet>& sets, const ClassPriors& priors,
                      double delta);

/// Post-hoc diagnostic: the true order-2 distance between each pair of LFDs
/// compared against delta. The program constrains only one coupling per pair,
/// so the true (minimal) distance may come out below delta; this check makes
/// that visible rather than guaranteeing it away.
struct DiscriminabilityRecord {
    int class_u = 0;
    int class_v = 0;
    double w2 = 0.0;
    double delta = 0.0;
    bool satisfied = false;
};
std::vector<DiscriminabilityRecord> lfd_discriminability_check(const DroSolution& solution);

/// Model artifact round trip. The JSON stores the pooled support, LFDs,
/// prediction table, objective, delta, radii and priors; the certifying
/// couplings are not persisted, so loaded models carry empty gamma/beta
/// blocks.
void save_model_json(const DroSolution& solution, const std::string& path);
DroSolution load_model_json(const std::string& path);

}  // namespace wdrdg
