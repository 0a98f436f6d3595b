#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "wdrdg/dro.hpp"

namespace wdrdg {

/// Per-sample prediction: class likelihood vector, hard label and the
/// transport row that produced it. `degenerate` marks rows whose reweighted
/// mass vanished (filled uniformly); `tie` marks argmax ties, which are
/// broken toward the smallest class index.
struct Prediction {
    Eigen::VectorXd likelihood;    // length K, sums to 1
    int label = 0;                 // 1-based
    Eigen::VectorXd coupling_row;  // length n_b
    bool degenerate = false;
    bool tie = false;
};

/// Transductive prediction: couples the uniform empirical target measure to
/// the uniform measure on the pooled barycenter samples by optimal transport
/// and reweights the LFDs with each sample's coupling row. The whole target
/// batch is transported jointly; a single sample is supported but its
/// coupling row is forced to the barycenter marginal and carries no
/// information.
std::vector<Prediction> predict_adaptive(const DroSolution& model, const Eigen::MatrixXd& targets);

/// Non-adaptive ablation: each target takes the prediction-table row of its
/// nearest pooled barycenter sample (Euclidean 1-NN, ties toward the lower
/// atom index).
std::vector<Prediction> predict_nonadaptive(const DroSolution& model,
                                            const Eigen::MatrixXd& targets);

/// Compares the one-step LFD reweighting against the two-step route that
/// reweights the normalized prediction table. The two agree when the per-atom
/// LFD totals are constant; in general this is a diagnostic, not an identity.
struct Proposition1Record {
    Eigen::Index sample = 0;
    int one_step_label = 0;
    int two_step_label = 0;
    bool agree = false;
};
struct Proposition1Report {
    std::vector<Proposition1Record> records;
    double agreement_rate = 0.0;
};
Proposition1Report proposition1_check(const DroSolution& model, const Eigen::MatrixXd& targets);

/// Order-1 distance between the uniform pooled-barycenter measure and the
/// uniform target measure; the empirical gap between the generalized source
/// domain and the target.
double domain_gap(const DroSolution& model, const Eigen::MatrixXd& targets);

/// CSV with header sample_index,label,likelihood_1..likelihood_K.
void write_predictions_csv(const std::vector<Prediction>& predictions, std::ostream& out);

}  // namespace wdrdg
