#ifndef LPS_EVALUATION_HPP
#define LPS_EVALUATION_HPP

#include <array>
#include <string>
#include <vector>

#include "lps/raster.hpp"

namespace lps {

/// Binary ground-truth mask (salient = 1). Loaded masks binarize at > 127.
struct GroundTruth {
    int width = 0, height = 0;
    std::vector<std::uint8_t> mask;  // strictly 0/1
    std::string source_path;
};

GroundTruth binarize_ground_truth(const GrayRaster& g, const std::string& source_path = "");

struct PrPoint {
    double precision = 0;
    double recall = 0;
};

struct ImageMetrics {
    std::string id;
    std::array<PrPoint, 256> curve;
    double adaptive_threshold = 0;  // T_a on the [0,255] scale
    double precision = 0, recall = 0, f_beta = 0;
    double overlap = 0;  // IoU at T_a
    double mae = 0;
};

struct MetricsReport {
    std::vector<ImageMetrics> per_image;
    std::array<PrPoint, 256> mean_curve;
    double mean_precision = 0, mean_recall = 0, mean_f_beta = 0;
    double mean_overlap = 0, mean_mae = 0;
};

/// Precision/recall at every threshold tau in [0,255]; prediction is
/// map >= tau. An empty prediction set has precision 1 by convention.
/// Requires at least one positive ground-truth pixel.
std::array<PrPoint, 256> pr_curve(const GrayRaster& map, const GroundTruth& gt);

/// T_a = k * mean(map), k = 1.5, on the map's own value scale.
double adaptive_threshold(const GrayRaster& map, double k = 1.5);

/// F = (1 + beta2) P R / (beta2 P + R); 0 when P = R = 0.
double f_measure(double precision, double recall, double beta2 = 0.3);

/// Intersection over union of the two binary masks; 0 on an empty union.
double overlap(const std::vector<std::uint8_t>& prediction, const GroundTruth& gt);

/// Mean |S - GT| with S taken in [0,1].
double mae(const GrayRaster& map, const GroundTruth& gt);

/// Binarizes at tau (map >= tau) into a 0/1 mask.
std::vector<std::uint8_t> binarize(const GrayRaster& map, double tau);

ImageMetrics evaluate_pair(const GrayRaster& map, const GroundTruth& gt, double k_adaptive = 1.5,
                           double beta2 = 0.3);

/// Pairs maps with ground truths by filename stem (case-insensitive,
/// extension-agnostic), resizes each map to its mask's dimensions, and
/// aggregates unweighted means. Throws when no pair matches.
MetricsReport evaluate_dataset(const std::string& map_dir, const std::string& gt_dir,
                               double k_adaptive = 1.5, double beta2 = 0.3);

void write_report_json(const MetricsReport& report, const std::string& path);
void write_report_csv(const MetricsReport& report, const std::string& path);
void write_pr_csv(const MetricsReport& report, const std::string& path);

}  // namespace lps

#endif
