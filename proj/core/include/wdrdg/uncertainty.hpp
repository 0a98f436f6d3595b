#pragma once

#include <iosfwd>
#include <vector>

#include "wdrdg/barycenter.hpp"
#include "wdrdg/measures.hpp"

namespace wdrdg {

/// Wasserstein ball for one class: barycenter center plus max-distance radius.
struct UncertaintySet {
    int label = 0;            // class, 1-based
    DiscreteMeasure center;   // uniform-weight barycenter
    double radius = 0.0;
};

/// Largest order-2 distance from the center to any of the per-domain
/// class-conditional measures.
double radius(const DiscreteMeasure& center, const std::vector<DiscreteMeasure>& sources);

/// One uncertainty set per class: per-domain class-conditionals -> barycenter
/// -> max-distance radius. Every (domain, class) cell must be nonempty.
/// When config.support_size is 0 the support size defaults to the median
/// (domain, class) cell count clamped to [2, 50].
std::vector<UncertaintySet> build_sets(const MultiDomainDataset& data,
                                       const BarycenterConfig& config);

/// Pairwise overlap diagnostic: a pair of balls overlaps when the sum of the
/// radii exceeds the distance between their centers.
struct OverlapRecord {
    int class_i = 0;
    int class_j = 0;
    double radius_sum = 0.0;
    double barycenter_w2 = 0.0;
    bool overlapping = false;
};

/// One record per unordered class pair, (i, j) with i < j in class order.
std::vector<OverlapRecord> overlap_report(const std::vector<UncertaintySet>& sets);

/// CSV with header class_i,class_j,radius_sum,barycenter_w2,overlapping.
/// Floats are printed with round-trip precision.
void write_overlap_csv(const std::vector<OverlapRecord>& records, std::ostream& out);

}  // namespace wdrdg
