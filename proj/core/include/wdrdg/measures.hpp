#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wdrdg {

/// A finitely supported probability measure on R^d: one support point per row
/// and a nonnegative weight per point summing to one. Immutable after
/// construction; out-of-tolerance weights are rejected, never renormalized.
/// Duplicate support points are allowed and kept as-is.
class DiscreteMeasure {
public:
    /// Weights must be nonnegative and sum to 1 within 1e-9.
    DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights);

    /// Uniform measure (weight 1/n per point).
    static DiscreteMeasure uniform(Eigen::MatrixXd points);

    /// Point mass at x.
    static DiscreteMeasure dirac(const Eigen::VectorXd& x);

    const Eigen::MatrixXd& points() const noexcept { return points_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    Eigen::Index size() const noexcept { return points_.rows(); }
    Eigen::Index dim() const noexcept { return points_.cols(); }

private:
    Eigen::MatrixXd points_;   // n x d
    Eigen::VectorXd weights_;  // n
};

/// Pairwise transport cost between two supports. `exponent` records the power
/// of the Euclidean distance stored in `entries` (2 everywhere except the
/// order-1 diagnostic path).
struct CostMatrix {
    Eigen::MatrixXd entries;
    int exponent = 2;
};

/// entries(i, j) = ||a_i - b_j||^2. Symmetric with zero diagonal when both
/// arguments share a support.
CostMatrix squared_cost(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// entries(i, j) = ||a_i - b_j||; used only by the order-1 distance.
CostMatrix euclidean_cost(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Class prior probabilities over {1..K}.
class ClassPriors {
public:
    /// Entries must be nonnegative and sum to 1 within 1e-9.
    explicit ClassPriors(Eigen::VectorXd prior);

    static ClassPriors uniform(int num_classes);

    /// Priors proportional to per-class sample counts.
    static ClassPriors from_counts(const std::vector<std::int64_t>& counts);

    const Eigen::VectorXd& prior() const noexcept { return prior_; }
    int num_classes() const noexcept { return static_cast<int>(prior_.size()); }

private:
    Eigen::VectorXd prior_;
};

/// Labeled samples of one domain. Labels are 1-based.
struct DomainData {
    std::string id;
    Eigen::MatrixXd features;  // n x d
    std::vector<int> labels;   // n entries in {1..K}
};

/// Labeled feature vectors partitioned by domain, each label in {1..K}.
class MultiDomainDataset {
public:
    MultiDomainDataset(std::vector<DomainData> domains, int num_classes);

    int num_classes() const noexcept { return num_classes_; }
    Eigen::Index dim() const noexcept { return dim_; }
    const std::vector<DomainData>& domains() const noexcept { return domains_; }
    std::size_t num_domains() const noexcept { return domains_.size(); }

    const DomainData& domain(std::string_view id) const;
    bool has_domain(std::string_view id) const noexcept;

    /// Dataset restricted to the given domain ids, in the given order.
    MultiDomainDataset subset(const std::vector<std::string>& ids) const;

private:
    std::vector<DomainData> domains_;
    int num_classes_;
    Eigen::Index dim_;
};

/// Uniform empirical measure over the class-k samples of one domain.
/// Throws EmptyClassCell when the cell holds no samples.
DiscreteMeasure empirical_class_conditional(const MultiDomainDataset& data,
                                            std::string_view domain_id, int label);
DiscreteMeasure empirical_class_conditional(const DomainData& domain, int label);

}  // namespace wdrdg
