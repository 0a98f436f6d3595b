#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "wdrdg/measures.hpp"

namespace wdrdg {

enum class BarycenterInit {
    PooledSubsample,  // seeded draw from the union of the input supports
    KMeansLike,       // Lloyd iterations on the pooled supports
    ProvidedPoints,   // caller supplies the initial locations
};

struct BarycenterConfig {
    Eigen::Index support_size = 0;  // b; 0 lets build_sets pick its default
    int max_iters = 100;
    double tol = 1e-7;  // relative objective-decrease stopping threshold
    BarycenterInit init = BarycenterInit::PooledSubsample;
    Eigen::MatrixXd provided_points;  // used when init == ProvidedPoints
    std::uint64_t seed = 0;
};

struct BarycenterResult {
    DiscreteMeasure measure;  // uniform weights 1/b
    double objective;         // mean order-2 distance to the inputs
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // one entry per accepted iterate, non-increasing
};

/// Fixed-point iteration for a uniform-weight barycenter with free support:
/// alternate optimal couplings from the current support to every input with a
/// location update that averages the per-input barycentric projections. A
/// candidate update that would increase the objective is rejected and the
/// iteration stops, so the recorded objective trace never increases.
BarycenterResult free_support_barycenter(const std::vector<DiscreteMeasure>& measures,
                                         const BarycenterConfig& config);

}  // namespace wdrdg
