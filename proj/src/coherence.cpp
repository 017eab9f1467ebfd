#include "lps/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lps {

PixelSaliencyMap pixel_coherence(const std::vector<double>& regional, const SuperpixelMap& sp,
                                 const LabRaster& lab, double k1, double k2,
                                 bool normalize) {
    if (static_cast<int>(regional.size()) != sp.n)
        throw std::invalid_argument("pixel_coherence: regional vector size mismatch");
    PixelSaliencyMap out;
    out.width = sp.width;
    out.height = sp.height;
    out.data.resize(static_cast<size_t>(sp.width) * sp.height);

    for (int y = 0; y < sp.height; ++y) {
        for (int x = 0; x < sp.width; ++x) {
            const int own = sp.label(x, y);
            const float* cp = lab.px(x, y);
            double wsum = 0, ssum = 0;
            auto add = [&](int i) {
                const Region& r = sp.regions[i];
                double dc = 0;
                for (int c = 0; c < 3; ++c) {
                    double d = cp[c] - r.mean_lab[c];
                    dc += d * d;
                }
                double dx = x - r.cx, dy = y - r.cy;
                double wgt = std::exp(-(k1 * std::sqrt(dc) + k2 * std::sqrt(dx * dx + dy * dy)));
                wsum += wgt;
                ssum += wgt * regional[i];
            };
            add(own);
            for (int i : sp.regions[own].neighbors_1) add(i);
            out.data[static_cast<size_t>(y) * sp.width + x] = ssum / wsum;
        }
    }
    if (normalize) {
        auto [mn, mx] = std::minmax_element(out.data.begin(), out.data.end());
        if (*mx - *mn > 0)
            for (double& v : out.data) v = (v - *mn) / (*mx - *mn);
        else
            std::fill(out.data.begin(), out.data.end(), 0.0);
    }
    return out;
}

PixelSaliencyMap paint_regional(const std::vector<double>& regional, const SuperpixelMap& sp) {
    PixelSaliencyMap out;
    out.width = sp.width;
    out.height = sp.height;
    out.data.resize(static_cast<size_t>(sp.width) * sp.height);
    for (int y = 0; y < sp.height; ++y)
        for (int x = 0; x < sp.width; ++x)
            out.data[static_cast<size_t>(y) * sp.width + x] = regional[sp.label(x, y)];
    return out;
}

GrayRaster to_gray(const PixelSaliencyMap& map) {
    GrayRaster g;
    g.width = map.width;
    g.height = map.height;
    g.data.resize(map.data.size());
    for (size_t i = 0; i < map.data.size(); ++i)
        g.data[i] = static_cast<std::uint8_t>(
            std::lround(255.0 * std::clamp(map.data[i], 0.0, 1.0)));
    return g;
}

void render(const PixelSaliencyMap& map, const std::string& path) {
    save_png(to_gray(map), path);
}

}  // namespace lps
