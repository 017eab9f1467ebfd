#ifndef LPS_GRAPH_HPP
#define LPS_GRAPH_HPP

#include <string>
#include <vector>

#include "lps/segmentation.hpp"

namespace lps {

/// Row-normalized sparse affinity over superpixels: exp(-||c_i - c_j|| / sigma_c^2)
/// on the 2-layer neighborhood plus a full clique over the boundary set.
struct AffinityGraph {
    int n = 0;
    // CSR-style rows over the sparsity mask; w holds raw affinities, a the
    // row-normalized entries. Rows with zero degree carry a unit self-loop.
    std::vector<std::vector<int>> cols;
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> a;
    std::vector<double> degree;
    BoundarySet boundary;
};

struct PropagationConfig {
    double thres = 1e-4;   // stop threshold on windowed mean variance
    int window = 49;       // "const": variance window covers the last window+1 iterates
    int max_iters = 2000;  // hard cap

    void validate() const;
};

struct LabelState {
    std::vector<int> labels;  // sorted node ids
    std::vector<double> v;    // similarity vector in [0,1]^n
    int t = 0;                // iterations run
};

AffinityGraph build_affinity(const SuperpixelMap& sp, const BoundarySet& boundary,
                             double sigma_c2);

/// Ranks boundary nodes by mean pairwise unit-LAB distance to the rest of
/// the boundary (descending, ties by ascending id) and drops the top
/// floor(drop_frac * |B|). Requires |B| >= 2.
std::vector<int> select_boundary_labels(const BoundarySet& boundary, const SuperpixelMap& sp,
                                        double drop_frac);

/// Clamped label propagation: labeled nodes fixed to 1, the rest start at 0
/// and follow v_{t+1}(i) = sum_j a_ij v_t(j). Stops when the mean per-node
/// variance over the last window+1 iterates drops below thres, or at
/// max_iters. trace_csv, when non-null, receives one "t,check" line per
/// iteration plus the v snapshot.
LabelState propagate(const AffinityGraph& g, const std::vector<int>& labels,
                     const PropagationConfig& cfg, std::ostream* trace_csv = nullptr);

/// Same recursion run an exact number of steps on the sparse structure.
std::vector<double> propagate_steps(const AffinityGraph& g, const std::vector<int>& labels,
                                    int iters);

/// Dense, unoptimized reference of the same recursion (test oracle path).
std::vector<double> propagate_oracle(const AffinityGraph& g, const std::vector<int>& labels,
                                     int iters);

/// Min-max normalization to [0,1]; a constant vector maps to all zeros.
std::vector<double> min_max_normalize(const std::vector<double>& v);

/// S^B = 1 - normalize(v); constant v yields all-zeros saliency.
std::vector<double> background_to_saliency(const std::vector<double>& v);

/// Sparse triplet text dump (i, j, value per line) of W and A.
void dump_affinity(const AffinityGraph& g, const std::string& path);

}  // namespace lps

#endif
