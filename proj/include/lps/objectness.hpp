#ifndef LPS_OBJECTNESS_HPP
#define LPS_OBJECTNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lps/raster.hpp"
#include "lps/segmentation.hpp"

namespace lps {

struct Window {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive pixel bounds
    double cx() const { return 0.5 * (x0 + x1); }
    double cy() const { return 0.5 * (y0 + y1); }
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    long long area() const { return static_cast<long long>(width()) * height(); }
};

struct WindowScore {
    Window window;
    double ms = 0, cc = 0, ed = 0;  // cue scores, min-max normalized over the sample
    double p = 0;                   // combined P_m = ms * cc * ed
};

/// Per-pixel and per-region objectness (Gaussian accumulation of window
/// scores, then region means).
struct ObjectnessMaps {
    int width = 0, height = 0;
    std::vector<double> pixel;                // W*H, >= 0
    std::vector<double> regional;             // N, >= 0
    std::vector<double> regional_normalized;  // N, min-max scaled to [0,1]
};

/// A float map in [0,1] at full image resolution.
struct FloatMap {
    int width = 0, height = 0;
    std::vector<float> data;
    float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

/// Spectral-residual saliency, one map per scale (resize width), each
/// upsampled back to image resolution and min-max normalized.
std::vector<FloatMap> spectral_residual_map(const RgbRaster& img, const std::vector<int>& scales);

/// Sobel gradient magnitude with the top 10% marked as edgels.
FloatMap edge_raster(const RgbRaster& img);

/// Raw cue scores (before the per-sample min-max normalization).
double score_ms(const Window& win, const std::vector<FloatMap>& ms_maps);
double score_cc(const Window& win, const LabRaster& lab);
double score_ed(const Window& win, const FloatMap& edges);

/// P_m for already-normalized cue scores.
inline double combine_cues(double ms, double cc, double ed) { return ms * cc * ed; }

/// Draws 10*M uniform candidates (each side >= 10% of the image side),
/// keeps M of them without replacement with probability proportional to
/// their MS score (uniform fallback when all MS scores are zero), then
/// attaches normalized CC/ED and the combined probability.
std::vector<WindowScore> sample_windows(const RgbRaster& img, const LabRaster& lab, int m,
                                        std::uint64_t seed);

/// Gaussian accumulation of window scores with sigma_x = 0.25 W,
/// sigma_y = 0.25 H, plus per-region means.
ObjectnessMaps accumulate_objectness(const std::vector<WindowScore>& scores,
                                     const SuperpixelMap& sp);

/// Pixel-only variant (no segmentation needed); exposed for testing.
std::vector<double> pixel_objectness(const std::vector<WindowScore>& scores, int width,
                                     int height);

std::vector<double> region_objectness(const std::vector<double>& pixel, const SuperpixelMap& sp);

/// O = { i : normalized regional objectness >= gamma1 }.
std::vector<int> select_object_labels(const std::vector<double>& regional_normalized,
                                      double gamma1);

void dump_windows_csv(const std::vector<WindowScore>& scores, const std::string& path);
void dump_objectness_png(const ObjectnessMaps& maps, const std::string& path);

}  // namespace lps

#endif
