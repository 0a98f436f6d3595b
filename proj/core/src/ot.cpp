#include "wdrdg/ot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "wdrdg/errors.hpp"

namespace wdrdg {

namespace {

constexpr int kStallLimit = 500;
constexpr int kMaxPivots = 1000000;

// Transportation simplex over the bipartite graph of supply rows and demand
// columns. The basis is a spanning tree of n + m - 1 cells, kept explicitly;
// potentials and pivot cycles are recomputed from it each iteration, which is
// plenty fast at the support sizes this library targets.
class TransportSimplex {
public:
    TransportSimplex(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                     const Eigen::MatrixXd& cost)
        : supply_(supply), demand_(demand), cost_(cost),
          n_(supply.size()), m_(demand.size()) {}

    std::pair<Eigen::MatrixXd, double> solve() {
        northwest_corner();
        const double cost_scale = 1.0 + cost_.cwiseAbs().maxCoeff();
        const double rc_tol = 1e-11 * cost_scale;

        bool bland = false;
        bool optimal = false;
        int stall = 0;
        for (int iter = 0; iter < kMaxPivots; ++iter) {
            compute_potentials();

            Eigen::Index enter_i = -1, enter_j = -1;
            double best = -rc_tol;
            for (Eigen::Index i = 0; i < n_ && (enter_i < 0 || !bland); ++i) {
                for (Eigen::Index j = 0; j < m_; ++j) {
                    const double rc = cost_(i, j) - u_[static_cast<std::size_t>(i)] -
                                      v_[static_cast<std::size_t>(j)];
                    if (rc < best) {
                        best = rc;
                        enter_i = i;
                        enter_j = j;
                        if (bland) break;
                    }
                }
            }
            if (enter_i < 0) {
                optimal = true;
                break;
            }

            const double theta = pivot(enter_i, enter_j);
            if (theta <= 1e-15) {
                if (++stall > kStallLimit) bland = true;
            } else {
                stall = 0;
            }
        }
        if (!optimal) throw NumericalFailure("transport simplex exceeded the pivot cap");

        Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(n_, m_);
        double total = 0.0;
        for (std::size_t c = 0; c < cell_i_.size(); ++c) {
            const double f = std::max(0.0, flow_[c]);
            plan(cell_i_[c], cell_j_[c]) += f;
            total += f * cost_(cell_i_[c], cell_j_[c]);
        }
        return {std::move(plan), total};
    }

private:
    // Initial spanning-tree basis; degenerate zero cells appear on ties.
    void northwest_corner() {
        cell_i_.reserve(static_cast<std::size_t>(n_ + m_ - 1));
        Eigen::Index i = 0, j = 0;
        double ra = supply_[0], rb = demand_[0];
        while (true) {
            const double f = std::min(ra, rb);
            cell_i_.push_back(i);
            cell_j_.push_back(j);
            flow_.push_back(f);
            ra -= f;
            rb -= f;
            if (i == n_ - 1 && j == m_ - 1) break;
            if (i == n_ - 1) {
                ++j;
                rb = demand_[j];
            } else if (j == m_ - 1) {
                ++i;
                ra = supply_[i];
            } else if (ra <= rb) {
                ++i;
                ra = supply_[i];
            } else {
                ++j;
                rb = demand_[j];
            }
        }
    }

    void build_adjacency() {
        adj_.assign(static_cast<std::size_t>(n_ + m_), {});
        for (std::size_t c = 0; c < cell_i_.size(); ++c) {
            adj_[static_cast<std::size_t>(cell_i_[c])].push_back(c);
            adj_[static_cast<std::size_t>(n_ + cell_j_[c])].push_back(c);
        }
    }

    void compute_potentials() {
        build_adjacency();
        u_.assign(static_cast<std::size_t>(n_), 0.0);
        v_.assign(static_cast<std::size_t>(m_), 0.0);
        std::vector<char> seen(static_cast<std::size_t>(n_ + m_), 0);
        std::queue<Eigen::Index> queue;
        queue.push(0);
        seen[0] = 1;
        while (!queue.empty()) {
            const Eigen::Index node = queue.front();
            queue.pop();
            for (std::size_t c : adj_[static_cast<std::size_t>(node)]) {
                const Eigen::Index row = cell_i_[c];
                const Eigen::Index col_node = n_ + cell_j_[c];
                const Eigen::Index other = (node == row) ? col_node : row;
                if (seen[static_cast<std::size_t>(other)]) continue;
                seen[static_cast<std::size_t>(other)] = 1;
                if (other == col_node)
                    v_[static_cast<std::size_t>(cell_j_[c])] = cost_(row, cell_j_[c]) - u_[static_cast<std::size_t>(row)];
                else
                    u_[static_cast<std::size_t>(row)] = cost_(row, cell_j_[c]) - v_[static_cast<std::size_t>(cell_j_[c])];
                queue.push(other);
            }
        }
    }

    // Brings (enter_i, enter_j) into the basis, returns the pivot step size.
    double pivot(Eigen::Index enter_i, Eigen::Index enter_j) {
        // Path through the tree from the entering row node to the entering
        // column node.
        const std::size_t node_count = static_cast<std::size_t>(n_ + m_);
        std::vector<std::int64_t> parent_cell(node_count, -1);
        std::vector<Eigen::Index> parent_node(node_count, -1);
        std::vector<char> seen(node_count, 0);
        std::queue<Eigen::Index> queue;
        queue.push(enter_i);
        seen[static_cast<std::size_t>(enter_i)] = 1;
        const Eigen::Index goal = n_ + enter_j;
        while (!queue.empty()) {
            const Eigen::Index node = queue.front();
            queue.pop();
            if (node == goal) break;
            for (std::size_t c : adj_[static_cast<std::size_t>(node)]) {
                const Eigen::Index row = cell_i_[c];
                const Eigen::Index col_node = n_ + cell_j_[c];
                const Eigen::Index other = (node == row) ? col_node : row;
                if (seen[static_cast<std::size_t>(other)]) continue;
                seen[static_cast<std::size_t>(other)] = 1;
                parent_cell[static_cast<std::size_t>(other)] = static_cast<std::int64_t>(c);
                parent_node[static_cast<std::size_t>(other)] = node;
                queue.push(other);
            }
        }
        if (!seen[static_cast<std::size_t>(goal)])
            throw NumericalFailure("transport basis lost its spanning tree");

        // Walk back from the column node collecting the cycle's basic cells;
        // cells at even distance from the entering cell lose mass.
        std::vector<std::size_t> path_cells;
        for (Eigen::Index node = goal; node != enter_i; node = parent_node[static_cast<std::size_t>(node)])
            path_cells.push_back(static_cast<std::size_t>(parent_cell[static_cast<std::size_t>(node)]));
        std::reverse(path_cells.begin(), path_cells.end());

        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < path_cells.size(); t += 2)
            theta = std::min(theta, flow_[path_cells[t]]);

        // Leaving cell: among losing cells that attain theta, the
        // lexicographically smallest (row, column).
        std::size_t leave_pos = std::numeric_limits<std::size_t>::max();
        for (std::size_t t = 0; t < path_cells.size(); t += 2) {
            const std::size_t c = path_cells[t];
            if (flow_[c] > theta + 1e-15) continue;
            if (leave_pos == std::numeric_limits<std::size_t>::max()) {
                leave_pos = t;
                continue;
            }
            const std::size_t lc = path_cells[leave_pos];
            if (cell_i_[c] < cell_i_[lc] ||
                (cell_i_[c] == cell_i_[lc] && cell_j_[c] < cell_j_[lc]))
                leave_pos = t;
        }

        const std::size_t leave_cell = path_cells[leave_pos];
        for (std::size_t t = 0; t < path_cells.size(); ++t) {
            if (t % 2 == 0)
                flow_[path_cells[t]] -= theta;
            else
                flow_[path_cells[t]] += theta;
            if (flow_[path_cells[t]] < 0.0) flow_[path_cells[t]] = 0.0;
        }
        cell_i_[leave_cell] = enter_i;
        cell_j_[leave_cell] = enter_j;
        flow_[leave_cell] = theta;
        return theta;
    }

    const Eigen::VectorXd& supply_;
    const Eigen::VectorXd& demand_;
    const Eigen::MatrixXd& cost_;
    Eigen::Index n_, m_;
    std::vector<Eigen::Index> cell_i_, cell_j_;
    std::vector<double> flow_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<double> u_, v_;
};

}  // namespace

std::pair<Eigen::MatrixXd, double> solve_transport(const Eigen::VectorXd& supply,
                                                   const Eigen::VectorXd& demand,
                                                   const Eigen::MatrixXd& cost) {
    if (supply.size() == 0 || demand.size() == 0)
        throw EmptyInput("transport needs nonempty marginals");
    if (cost.rows() != supply.size() || cost.cols() != demand.size())
        throw DimensionMismatch("cost matrix is " + std::to_string(cost.rows()) + "x" +
                                std::to_string(cost.cols()) + ", marginals need " +
                                std::to_string(supply.size()) + "x" + std::to_string(demand.size()));
    if ((supply.array() < 0.0).any() || (demand.array() < 0.0).any())
        throw InvalidArgument("transport marginals must be nonnegative");
    if (std::abs(supply.sum() - demand.sum()) > 1e-7)
        throw InvalidArgument("transport marginals must carry equal mass");
    TransportSimplex solver(supply, demand, cost);
    return solver.solve();
}

std::pair<Coupling, double> optimal_coupling(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                             const CostMatrix& cost) {
    if (cost.entries.rows() != a.size() || cost.entries.cols() != b.size())
        throw DimensionMismatch("cost matrix does not match the measure supports");
    auto [plan, value] = solve_transport(a.weights(), b.weights(), cost.entries);
    return {Coupling{std::move(plan), a.weights(), b.weights()}, value};
}

double wasserstein2(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto [coupling, value] = optimal_coupling(a, b, squared_cost(a, b));
    return std::sqrt(std::max(0.0, value));
}

double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto [coupling, value] = optimal_coupling(a, b, euclidean_cost(a, b));
    return value;
}

Eigen::MatrixXd barycentric_map(const Coupling& coupling, Eigen::Index n_t,
                                const Eigen::MatrixXd& target_points) {
    if (coupling.plan.rows() != n_t)
        throw DimensionMismatch("coupling has " + std::to_string(coupling.plan.rows()) +
                                " rows, expected " + std::to_string(n_t));
    if (coupling.plan.cols() != target_points.rows())
        throw DimensionMismatch("coupling columns do not match the target support");
    const double expected = 1.0 / static_cast<double>(n_t);
    for (Eigen::Index j = 0; j < n_t; ++j) {
        if (std::abs(coupling.plan.row(j).sum() - expected) > 1e-7)
            throw NonUniformSourceWeights("coupling row " + std::to_string(j) +
                                          " does not carry mass 1/n_t");
    }
    return static_cast<double>(n_t) * coupling.plan * target_points;
}

}  // namespace wdrdg
