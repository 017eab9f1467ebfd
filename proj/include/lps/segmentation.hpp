#ifndef LPS_SEGMENTATION_HPP
#define LPS_SEGMENTATION_HPP

#include <array>
#include <string>
#include <vector>

#include "lps/raster.hpp"

namespace lps {

struct Region {
    int id = 0;
    std::array<double, 3> mean_lab{};       // native LAB units
    std::array<double, 3> mean_lab_unit{};  // each channel in [0,1]
    double cx = 0, cy = 0;                  // centroid, pixels
    int pixel_count = 0;
    std::vector<int> neighbors_1;  // direct 4-adjacency neighbors, sorted
    std::vector<int> neighbors_2;  // nodes at graph distance <= 2, sorted, no self
};

struct SuperpixelMap {
    int width = 0;
    int height = 0;
    int n = 0;
    std::vector<int> labels;  // per-pixel region id in [0, n)
    std::vector<Region> regions;

    int label(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
};

/// Region ids touching row 0, row H-1, column 0 or column W-1. Sorted.
using BoundarySet = std::vector<int>;

/// Grid-seeded SLIC in (L,a,b,x,y) space, 10 iterations, with orphan
/// components merged into the largest adjacent region. Region ids are
/// dense and every region is 4-connected. Fills region stats but not
/// adjacency (see compute_adjacency).
SuperpixelMap slic_segment(const LabRaster& img, int n_target, double compactness);

/// Fills neighbors_1 (shared 4-adjacent pixel pair) and neighbors_2
/// (distance <= 2 in the neighbors_1 graph).
void compute_adjacency(SuperpixelMap& sp);

BoundarySet boundary_nodes(const SuperpixelMap& sp);

/// Debug dumps: region-id raster as 16-bit PNG, region stats as JSON.
void dump_superpixels(const SuperpixelMap& sp, const std::string& png_path,
                      const std::string& json_path);

}  // namespace lps

#endif
