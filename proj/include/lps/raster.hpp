#ifndef LPS_RASTER_HPP
#define LPS_RASTER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lps {

/// 8-bit interleaved RGB image.
struct RgbRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size = width*height*3, R,G,B order

    std::uint8_t* px(int x, int y) { return data.data() + 3 * (y * width + x); }
    const std::uint8_t* px(int x, int y) const { return data.data() + 3 * (y * width + x); }
};

/// CIE LAB image in native units: L in [0,100], a,b in [-128,127].
/// unit() maps each channel affinely into [0,1].
struct LabRaster {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // size = width*height*3, L,a,b order

    const float* px(int x, int y) const { return data.data() + 3 * (y * width + x); }
    float* px(int x, int y) { return data.data() + 3 * (y * width + x); }

    static std::array<double, 3> to_unit(const float* lab) {
        return {lab[0] / 100.0, (lab[1] + 128.0) / 255.0, (lab[2] + 128.0) / 255.0};
    }
    std::array<double, 3> unit(int x, int y) const { return to_unit(px(x, y)); }
};

/// Single-channel 8-bit image (saliency maps, masks).
struct GrayRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const { return data[y * width + x]; }
};

/// Decodes an 8-bit image; grayscale inputs are promoted to RGB.
/// Throws std::runtime_error naming the path on missing/undecodable files.
RgbRaster load_image(const std::string& path);

RgbRaster resize_max_dim(const RgbRaster& img, int max_dim);

/// sRGB (D65) to CIE LAB, per pixel.
LabRaster rgb_to_lab(const RgbRaster& img);

GrayRaster load_gray(const std::string& path);

void save_png(const RgbRaster& img, const std::string& path);
void save_png(const GrayRaster& img, const std::string& path);

}  // namespace lps

#endif
