#ifndef LPS_FUSION_HPP
#define LPS_FUSION_HPP

#include <iosfwd>
#include <vector>

#include "lps/graph.hpp"

namespace lps {

/// Triangle-weighted 10-bin histogram statistic of a regional saliency
/// map. High scores mean saliency mass concentrated in ambiguous
/// mid-range bins.
struct CompactnessScore {
    double value = 0;                 // in [1, 5]
    std::vector<double> histogram;    // 10 bin masses summing to 1
};

CompactnessScore compactness(const std::vector<double>& saliency);

/// True when the inner map should be refined by co-transduction.
/// Routes on C >= gamma2 (set invert for the opposite orientation).
bool needs_refinement(const CompactnessScore& c, double gamma2, bool invert = false);

struct CoTransductionResult {
    std::vector<double> s_background;  // S^B = 1 - normalize(V^B)
    std::vector<double> s_object;      // S^O = normalize(V^O)
    std::vector<double> s_combined;    // S^C = normalize(alpha S^B + beta S^O)
    int iterations = 0;
    std::vector<int> final_background_labels;
    std::vector<int> final_object_labels;
};

/// Coupled propagation of the boundary and objectness label sets on one
/// affinity graph. Each iteration the p1 lowest-ranked nodes of V^B join
/// the objectness set and the p2 lowest of V^O join the boundary set
/// (already-labeled nodes excluded; ties by ascending id). Runs until
/// both variance windows fall below cfg.thres or cfg.max_iters.
/// exact_iters > 0 forces that iteration count (for oracle comparison).
/// trace_csv, when non-null, receives per-iteration |B'|,|O|,check lines.
CoTransductionResult cotransduct(const AffinityGraph& g, std::vector<int> background_labels,
                                 std::vector<int> object_labels, const PropagationConfig& cfg,
                                 int p1, int p2, double alpha, double beta,
                                 std::ostream* trace_csv = nullptr, int exact_iters = 0);

}  // namespace lps

#endif
