#include "wdrdg/inference.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "wdrdg/errors.hpp"
#include "wdrdg/ot.hpp"

namespace wdrdg {

namespace {

constexpr double kTieTol = 1e-12;

void check_targets(const DroSolution& model, const Eigen::MatrixXd& targets) {
    if (targets.rows() == 0) throw EmptyInput("prediction needs at least one target sample");
    if (targets.cols() != model.support.points.cols())
        throw DimensionMismatch("targets have dimension " + std::to_string(targets.cols()) +
                                ", model expects " + std::to_string(model.support.points.cols()));
    if (!targets.allFinite()) throw InvalidArgument("targets contain non-finite values");
}

int argmax_label(const Eigen::VectorXd& scores, bool* tie) {
    int best = 0;
    for (int k = 1; k < scores.size(); ++k)
        if (scores[k] > scores[best]) best = k;
    if (tie) {
        *tie = false;
        for (int k = 0; k < scores.size(); ++k)
            if (k != best && scores[k] >= scores[best] - kTieTol) *tie = true;
    }
    return best + 1;
}

Eigen::MatrixXd target_coupling(const DroSolution& model, const Eigen::MatrixXd& targets) {
    const DiscreteMeasure mu_t = DiscreteMeasure::uniform(targets);
    const DiscreteMeasure mu_b = DiscreteMeasure::uniform(model.support.points);
    auto [coupling, cost] = optimal_coupling(mu_t, mu_b, squared_cost(mu_t, mu_b));
    return std::move(coupling.plan);
}

}  // namespace

std::vector<Prediction> predict_adaptive(const DroSolution& model, const Eigen::MatrixXd& targets) {
    check_targets(model, targets);
    const Eigen::MatrixXd plan = target_coupling(model, targets);
    const int num_classes = model.num_classes();

    std::vector<Prediction> predictions;
    predictions.reserve(static_cast<std::size_t>(targets.rows()));
    for (Eigen::Index j = 0; j < targets.rows(); ++j) {
        Prediction pred;
        pred.coupling_row = plan.row(j).transpose();
        Eigen::VectorXd scores = model.lfds * pred.coupling_row;  // K
        const double total = scores.sum();
        if (total <= 1e-15) {
            pred.degenerate = true;
            pred.likelihood = Eigen::VectorXd::Constant(num_classes, 1.0 / num_classes);
        } else {
            pred.likelihood = scores / total;
        }
        pred.label = argmax_label(pred.degenerate ? pred.likelihood : scores, &pred.tie);
        predictions.push_back(std::move(pred));
    }
    return predictions;
}

std::vector<Prediction> predict_nonadaptive(const DroSolution& model,
                                            const Eigen::MatrixXd& targets) {
    check_targets(model, targets);
    const Eigen::Index n_b = model.support.size();

    std::vector<Prediction> predictions;
    predictions.reserve(static_cast<std::size_t>(targets.rows()));
    for (Eigen::Index j = 0; j < targets.rows(); ++j) {
        Eigen::Index nearest = 0;
        double best = (targets.row(j) - model.support.points.row(0)).squaredNorm();
        for (Eigen::Index i = 1; i < n_b; ++i) {
            const double d = (targets.row(j) - model.support.points.row(i)).squaredNorm();
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        Prediction pred;
        pred.likelihood = model.phi.row(nearest).transpose();
        pred.coupling_row = Eigen::VectorXd::Zero(n_b);
        pred.coupling_row[nearest] = 1.0;
        pred.label = argmax_label(pred.likelihood, &pred.tie);
        predictions.push_back(std::move(pred));
    }
    return predictions;
}

Proposition1Report proposition1_check(const DroSolution& model, const Eigen::MatrixXd& targets) {
    check_targets(model, targets);
    const Eigen::MatrixXd plan = target_coupling(model, targets);
    const double n_t = static_cast<double>(targets.rows());

    Proposition1Report report;
    report.records.reserve(static_cast<std::size_t>(targets.rows()));
    Eigen::Index agreements = 0;
    for (Eigen::Index j = 0; j < targets.rows(); ++j) {
        const Eigen::VectorXd row = plan.row(j).transpose();
        const Eigen::VectorXd one_step = model.lfds * row;
        const Eigen::VectorXd two_step = model.phi.transpose() * (n_t * row);

        Proposition1Record rec;
        rec.sample = j;
        rec.one_step_label = argmax_label(one_step, nullptr);
        rec.two_step_label = argmax_label(two_step, nullptr);
        rec.agree = rec.one_step_label == rec.two_step_label;
        if (rec.agree) ++agreements;
        report.records.push_back(rec);
    }
    report.agreement_rate = static_cast<double>(agreements) / n_t;
    return report;
}

double domain_gap(const DroSolution& model, const Eigen::MatrixXd& targets) {
    check_targets(model, targets);
    return wasserstein1(DiscreteMeasure::uniform(model.support.points),
                        DiscreteMeasure::uniform(targets));
}

void write_predictions_csv(const std::vector<Prediction>& predictions, std::ostream& out) {
    if (predictions.empty()) throw EmptyInput("no predictions to write");
    const Eigen::Index num_classes = predictions.front().likelihood.size();
    out << "sample_index,label";
    for (Eigen::Index k = 1; k <= num_classes; ++k) out << ",likelihood_" << k;
    out << '\n';
    char buf[64];
    for (std::size_t j = 0; j < predictions.size(); ++j) {
        out << j << ',' << predictions[j].label;
        for (Eigen::Index k = 0; k < num_classes; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", predictions[j].likelihood[k]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace wdrdg
