#ifndef LPS_COHERENCE_HPP
#define LPS_COHERENCE_HPP

#include <string>
#include <vector>

#include "lps/raster.hpp"
#include "lps/segmentation.hpp"

namespace lps {

enum class MapProvenance { Inner, Inter, Coherent };

struct PixelSaliencyMap {
    int width = 0, height = 0;
    std::vector<double> data;  // values in [0,1]
    MapProvenance provenance = MapProvenance::Coherent;

    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

/// Up-samples regional saliency to pixels: each pixel blends its own
/// region and the region's direct neighbors, weighted by
/// exp(-(k1 * color_dist + k2 * spatial_dist)) with native-unit LAB color
/// and pixel-unit centroid distance; weights are normalized per pixel and
/// the result is min-max normalized.
PixelSaliencyMap pixel_coherence(const std::vector<double>& regional, const SuperpixelMap& sp,
                                 const LabRaster& lab, double k1, double k2,
                                 bool normalize = true);

/// Nearest-region paint of a regional map (no blending); used for stage dumps.
PixelSaliencyMap paint_regional(const std::vector<double>& regional, const SuperpixelMap& sp);

/// 8-bit grayscale PNG, value = round(255 * S(p)).
void render(const PixelSaliencyMap& map, const std::string& path);

GrayRaster to_gray(const PixelSaliencyMap& map);

}  // namespace lps

#endif
