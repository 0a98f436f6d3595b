#include "wdrdg/uncertainty.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "wdrdg/errors.hpp"
#include "wdrdg/ot.hpp"
#include "wdrdg/rng.hpp"

namespace wdrdg {

double radius(const DiscreteMeasure& center, const std::vector<DiscreteMeasure>& sources) {
    if (sources.empty()) throw EmptyInput("radius needs at least one source measure");
    double worst = 0.0;
    for (const auto& q : sources) worst = std::max(worst, wasserstein2(center, q));
    return worst;
}

namespace {

Eigen::Index default_support_size(const MultiDomainDataset& data) {
    std::vector<Eigen::Index> counts;
    for (const DomainData& domain : data.domains()) {
        for (int k = 1; k <= data.num_classes(); ++k) {
            Eigen::Index c = 0;
            for (int label : domain.labels)
                if (label == k) ++c;
            counts.push_back(c);
        }
    }
    std::sort(counts.begin(), counts.end());
    const Eigen::Index median = counts[counts.size() / 2];
    return std::clamp<Eigen::Index>(median, 2, 50);
}

}  // namespace

std::vector<UncertaintySet> build_sets(const MultiDomainDataset& data,
                                       const BarycenterConfig& config) {
    BarycenterConfig per_class = config;
    if (per_class.support_size == 0) per_class.support_size = default_support_size(data);

    std::vector<UncertaintySet> sets;
    sets.reserve(static_cast<std::size_t>(data.num_classes()));
    for (int k = 1; k <= data.num_classes(); ++k) {
        std::vector<DiscreteMeasure> conditionals;
        conditionals.reserve(data.num_domains());
        for (const DomainData& domain : data.domains())
            conditionals.push_back(empirical_class_conditional(domain, k));

        per_class.seed = derive_seed(config.seed, "class-barycenter", static_cast<std::uint64_t>(k));
        BarycenterResult result = free_support_barycenter(conditionals, per_class);
        const double theta = radius(result.measure, conditionals);
        sets.push_back(UncertaintySet{k, std::move(result.measure), theta});
    }
    return sets;
}

std::vector<OverlapRecord> overlap_report(const std::vector<UncertaintySet>& sets) {
    if (sets.size() < 2) throw EmptyInput("overlap report needs at least two sets");
    std::vector<OverlapRecord> records;
    records.reserve(sets.size() * (sets.size() - 1) / 2);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            OverlapRecord rec;
            rec.class_i = sets[i].label;
            rec.class_j = sets[j].label;
            rec.radius_sum = sets[i].radius + sets[j].radius;
            rec.barycenter_w2 = wasserstein2(sets[i].center, sets[j].center);
            rec.overlapping = rec.radius_sum > rec.barycenter_w2;
            records.push_back(rec);
        }
    }
    return records;
}

void write_overlap_csv(const std::vector<OverlapRecord>& records, std::ostream& out) {
    out << "class_i,class_j,radius_sum,barycenter_w2,overlapping\n";
    char buf[64];
    for (const OverlapRecord& rec : records) {
        out << rec.class_i << ',' << rec.class_j << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", rec.radius_sum);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", rec.barycenter_w2);
        out << buf << ',' << (rec.overlapping ? 1 : 0) << '\n';
    }
}

}  // namespace wdrdg
