#include "wdrdg/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "wdrdg/errors.hpp"
#include "wdrdg/ot.hpp"
#include "wdrdg/rng.hpp"

namespace wdrdg {

namespace {

Eigen::MatrixXd pooled_sorted_points(const std::vector<DiscreteMeasure>& measures) {
    Eigen::Index total = 0;
    for (const auto& q : measures) total += q.size();
    Eigen::MatrixXd pooled(total, measures.front().dim());
    Eigen::Index row = 0;
    for (const auto& q : measures) {
        pooled.middleRows(row, q.size()) = q.points();
        row += q.size();
    }
    // Canonical lexicographic order so that the init does not depend on the
    // order in which the inputs are passed.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&pooled](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index c = 0; c < pooled.cols(); ++c) {
            if (pooled(a, c) != pooled(b, c)) return pooled(a, c) < pooled(b, c);
        }
        return false;
    });
    Eigen::MatrixXd sorted(total, pooled.cols());
    for (Eigen::Index i = 0; i < total; ++i) sorted.row(i) = pooled.row(order[static_cast<std::size_t>(i)]);
    return sorted;
}

Eigen::MatrixXd init_pooled_subsample(const Eigen::MatrixXd& pooled, Eigen::Index b,
                                      std::uint64_t seed) {
    Rng rng(derive_seed(seed, "barycenter-init"));
    const Eigen::Index n = pooled.rows();
    Eigen::MatrixXd points(b, pooled.cols());
    Eigen::Index filled = 0;
    while (filled < b) {
        const Eigen::Index take = std::min<Eigen::Index>(b - filled, n);
        const auto picks = rng.sample_without_replacement(static_cast<std::size_t>(n),
                                                          static_cast<std::size_t>(take));
        for (std::size_t q = 0; q < picks.size(); ++q)
            points.row(filled++) = pooled.row(static_cast<Eigen::Index>(picks[q]));
    }
    return points;
}

Eigen::MatrixXd init_kmeans_like(const Eigen::MatrixXd& pooled, Eigen::Index b,
                                 std::uint64_t seed) {
    Rng rng(derive_seed(seed, "barycenter-init"));
    const Eigen::Index n = pooled.rows();
    Eigen::MatrixXd centers(b, pooled.cols());

    // k-means++ style seeding.
    centers.row(0) = pooled.row(static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::size_t>(n))));
    Eigen::VectorXd dist2 = (pooled.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Eigen::Index c = 1; c < b; ++c) {
        const double total = dist2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double target = rng.uniform01() * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= dist2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::size_t>(n)));
        }
        centers.row(c) = pooled.row(pick);
        dist2 = dist2.cwiseMin((pooled.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    // A few Lloyd rounds; empty clusters keep their previous center.
    std::vector<Eigen::Index> assignment(static_cast<std::size_t>(n));
    for (int round = 0; round < 25; ++round) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            double best_d = (pooled.row(i) - centers.row(0)).squaredNorm();
            for (Eigen::Index c = 1; c < b; ++c) {
                const double d = (pooled.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[static_cast<std::size_t>(i)] != best || round == 0) {
                assignment[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        for (Eigen::Index c = 0; c < b; ++c) {
            Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(pooled.cols());
            Eigen::Index count = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (assignment[static_cast<std::size_t>(i)] == c) {
                    sum += pooled.row(i);
                    ++count;
                }
            }
            if (count > 0) centers.row(c) = sum / static_cast<double>(count);
        }
    }
    return centers;
}

struct IterationState {
    std::vector<Eigen::MatrixXd> plans;  // one coupling per input measure
    double objective = 0.0;              // mean W2
};

IterationState couple_all(const Eigen::MatrixXd& support,
                          const std::vector<DiscreteMeasure>& measures) {
    IterationState state;
    state.plans.reserve(measures.size());
    const DiscreteMeasure current = DiscreteMeasure::uniform(support);
    double sum = 0.0;
    for (const auto& q : measures) {
        auto [plan, cost] = solve_transport(current.weights(), q.weights(),
                                            squared_cost(current, q).entries);
        sum += std::sqrt(std::max(0.0, cost));
        state.plans.push_back(std::move(plan));
    }
    state.objective = sum / static_cast<double>(measures.size());
    return state;
}

}  // namespace

BarycenterResult free_support_barycenter(const std::vector<DiscreteMeasure>& measures,
                                         const BarycenterConfig& config) {
    if (measures.empty()) throw EmptyInput("barycenter needs at least one input measure");
    const Eigen::Index dim = measures.front().dim();
    for (const auto& q : measures) {
        if (q.dim() != dim)
            throw DimensionMismatch("barycenter inputs must share one dimension");
    }
    const Eigen::Index b = config.support_size;
    if (b < 1) throw InvalidArgument("barycenter support size must be >= 1");
    if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (config.tol < 0.0) throw InvalidArgument("tol must be nonnegative");

    Eigen::MatrixXd support;
    switch (config.init) {
        case BarycenterInit::ProvidedPoints:
            if (config.provided_points.rows() != b || config.provided_points.cols() != dim)
                throw InvalidArgument("provided_points must be b x d");
            support = config.provided_points;
            break;
        case BarycenterInit::PooledSubsample:
            support = init_pooled_subsample(pooled_sorted_points(measures), b, config.seed);
            break;
        case BarycenterInit::KMeansLike:
            support = init_kmeans_like(pooled_sorted_points(measures), b, config.seed);
            break;
    }

    const double r = static_cast<double>(measures.size());
    IterationState state = couple_all(support, measures);

    BarycenterResult result{DiscreteMeasure::uniform(support), state.objective, 0, false, {}};
    result.objective_trace.push_back(state.objective);

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        // Location update: average the per-input barycentric projections.
        // Coupling rows carry mass 1/b, so b * plan * points is row-stochastic.
        Eigen::MatrixXd candidate = Eigen::MatrixXd::Zero(b, dim);
        for (std::size_t q = 0; q < measures.size(); ++q)
            candidate.noalias() += state.plans[q] * measures[q].points();
        candidate *= static_cast<double>(b) / r;

        IterationState next = couple_all(candidate, measures);
        if (next.objective > state.objective + 1e-12) {
            // The averaged update is a descent step for the squared objective,
            // not for the mean distance itself; keep the better iterate.
            result.converged = true;
            break;
        }
        const double previous = state.objective;
        const double decrease = previous - next.objective;
        support = std::move(candidate);
        state = std::move(next);
        result.iterations = iter;
        result.objective_trace.push_back(state.objective);
        if (decrease <= config.tol * std::max(previous, 1e-30)) {
            result.converged = true;
            break;
        }
    }

    result.measure = DiscreteMeasure::uniform(support);
    result.objective = state.objective;
    return result;
}

}  // namespace wdrdg
