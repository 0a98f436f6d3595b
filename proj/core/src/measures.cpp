#include "wdrdg/measures.hpp"

#include <cmath>
#include <unordered_set>

#include "wdrdg/errors.hpp"

namespace wdrdg {

namespace {
constexpr double kSimplexTol = 1e-9;
}

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.rows() == 0) throw EmptyInput("measure needs at least one support point");
    if (points_.cols() == 0) throw InvalidArgument("measure needs dimension >= 1");
    if (weights_.size() != points_.rows())
        throw DimensionMismatch("weight count does not match support size");
    if (!points_.allFinite() || !weights_.allFinite())
        throw InvalidArgument("measure contains non-finite values");
    if ((weights_.array() < 0.0).any())
        throw InvalidArgument("measure weights must be nonnegative");
    if (std::abs(weights_.sum() - 1.0) > kSimplexTol)
        throw InvalidArgument("measure weights must sum to 1 within 1e-9, got " +
                              std::to_string(weights_.sum()));
}

DiscreteMeasure DiscreteMeasure::uniform(Eigen::MatrixXd points) {
    const Eigen::Index n = points.rows();
    if (n == 0) throw EmptyInput("uniform measure needs at least one point");
    return DiscreteMeasure(std::move(points), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::dirac(const Eigen::VectorXd& x) {
    Eigen::MatrixXd points(1, x.size());
    points.row(0) = x.transpose();
    return DiscreteMeasure(std::move(points), Eigen::VectorXd::Ones(1));
}

namespace {

CostMatrix distance_cost(const DiscreteMeasure& a, const DiscreteMeasure& b, int exponent) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("cost matrix needs supports of equal dimension (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    const Eigen::Index n = a.size();
    const Eigen::Index m = b.size();
    Eigen::MatrixXd entries(n, m);
    // ||x - y||^2 = ||x||^2 + ||y||^2 - 2 x.y, clamped against roundoff.
    const Eigen::VectorXd a2 = a.points().rowwise().squaredNorm();
    const Eigen::VectorXd b2 = b.points().rowwise().squaredNorm();
    entries.noalias() = -2.0 * a.points() * b.points().transpose();
    entries.colwise() += a2;
    entries.rowwise() += b2.transpose();
    entries = entries.cwiseMax(0.0);
    if (exponent == 1) entries = entries.cwiseSqrt();
    return CostMatrix{std::move(entries), exponent};
}

}  // namespace

CostMatrix squared_cost(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return distance_cost(a, b, 2);
}

CostMatrix euclidean_cost(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return distance_cost(a, b, 1);
}

ClassPriors::ClassPriors(Eigen::VectorXd prior) : prior_(std::move(prior)) {
    if (prior_.size() == 0) throw EmptyInput("priors need at least one class");
    if (!prior_.allFinite() || (prior_.array() < 0.0).any())
        throw InvalidArgument("priors must be finite and nonnegative");
    if (std::abs(prior_.sum() - 1.0) > kSimplexTol)
        throw InvalidArgument("priors must sum to 1 within 1e-9");
}

ClassPriors ClassPriors::uniform(int num_classes) {
    if (num_classes < 1) throw InvalidArgument("need at least one class");
    return ClassPriors(Eigen::VectorXd::Constant(num_classes, 1.0 / num_classes));
}

ClassPriors ClassPriors::from_counts(const std::vector<std::int64_t>& counts) {
    if (counts.empty()) throw EmptyInput("from_counts: empty count vector");
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw InvalidArgument("from_counts: negative count");
        total += c;
    }
    if (total == 0) throw InvalidArgument("from_counts: all counts are zero");
    Eigen::VectorXd prior(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        prior[static_cast<Eigen::Index>(k)] = static_cast<double>(counts[k]) / static_cast<double>(total);
    return ClassPriors(std::move(prior));
}

MultiDomainDataset::MultiDomainDataset(std::vector<DomainData> domains, int num_classes)
    : domains_(std::move(domains)), num_classes_(num_classes) {
    if (num_classes_ < 1) throw InvalidArgument("dataset needs at least one class");
    if (domains_.empty()) throw EmptyInput("dataset needs at least one domain");
    dim_ = domains_.front().features.cols();
    std::unordered_set<std::string> seen;
    for (const DomainData& d : domains_) {
        if (!seen.insert(d.id).second)
            throw InvalidArgument("duplicate domain id '" + d.id + "'");
        if (d.features.cols() != dim_)
            throw DimensionMismatch("domain '" + d.id + "' has feature dimension " +
                                    std::to_string(d.features.cols()) + ", expected " +
                                    std::to_string(dim_));
        if (static_cast<Eigen::Index>(d.labels.size()) != d.features.rows())
            throw DimensionMismatch("domain '" + d.id + "' label count does not match sample count");
        if (!d.features.allFinite())
            throw InvalidArgument("domain '" + d.id + "' contains non-finite features");
        for (int label : d.labels) {
            if (label < 1 || label > num_classes_)
                throw LabelOutOfRange("domain '" + d.id + "' has label " + std::to_string(label) +
                                      " outside {1.." + std::to_string(num_classes_) + "}");
        }
    }
}

const DomainData& MultiDomainDataset::domain(std::string_view id) const {
    for (const DomainData& d : domains_)
        if (d.id == id) return d;
    throw InvalidArgument("unknown domain id '" + std::string(id) + "'");
}

bool MultiDomainDataset::has_domain(std::string_view id) const noexcept {
    for (const DomainData& d : domains_)
        if (d.id == id) return true;
    return false;
}

MultiDomainDataset MultiDomainDataset::subset(const std::vector<std::string>& ids) const {
    std::vector<DomainData> picked;
    picked.reserve(ids.size());
    for (const std::string& id : ids) picked.push_back(domain(id));
    return MultiDomainDataset(std::move(picked), num_classes_);
}

DiscreteMeasure empirical_class_conditional(const DomainData& domain, int label) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(domain.labels.size()); ++i)
        if (domain.labels[static_cast<std::size_t>(i)] == label) rows.push_back(i);
    if (rows.empty()) throw EmptyClassCell(domain.id, label);
    Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()), domain.features.cols());
    for (Eigen::Index r = 0; r < points.rows(); ++r)
        points.row(r) = domain.features.row(rows[static_cast<std::size_t>(r)]);
    return DiscreteMeasure::uniform(std::move(points));
}

DiscreteMeasure empirical_class_conditional(const MultiDomainDataset& data,
                                            std::string_view domain_id, int label) {
    if (label < 1 || label > data.num_classes())
        throw LabelOutOfRange("label " + std::to_string(label) + " outside {1.." +
                              std::to_string(data.num_classes()) + "}");
    return empirical_class_conditional(data.domain(domain_id), label);
}

}  // namespace wdrdg
