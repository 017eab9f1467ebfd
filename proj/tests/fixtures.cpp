#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lps::testing {

RgbRaster make_constant(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RgbRaster img;
    img.width = w;
    img.height = h;
    img.data.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
        img.data[3 * i] = r;
        img.data[3 * i + 1] = g;
        img.data[3 * i + 2] = b;
    }
    return img;
}

RgbRaster make_two_half(int w, int h, std::array<std::uint8_t, 3> left,
                        std::array<std::uint8_t, 3> right) {
    RgbRaster img = make_constant(w, h, 0, 0, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto& c = x < w / 2 ? left : right;
            std::uint8_t* p = img.px(x, y);
            p[0] = c[0];
            p[1] = c[1];
            p[2] = c[2];
        }
    return img;
}

namespace {

std::uint8_t jitter(std::uint8_t v, int amp, std::mt19937_64& rng) {
    if (amp == 0) return v;
    int d = static_cast<int>(rng() % (2 * amp + 1)) - amp;
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + d, 0, 255));
}

}  // namespace

BlobFixture make_blob(int w, int h, int x0, int y0, int x1, int y1,
                      std::array<std::uint8_t, 3> fg, std::array<std::uint8_t, 3> bg,
                      int noise_amp, std::uint64_t seed) {
    BlobFixture f;
    f.x0 = x0;
    f.y0 = y0;
    f.x1 = x1;
    f.y1 = y1;
    f.image = make_constant(w, h, 0, 0, 0);
    f.mask.assign(static_cast<size_t>(w) * h, 0);
    std::mt19937_64 rng(seed);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            bool inside = x >= x0 && x <= x1 && y >= y0 && y <= y1;
            const auto& c = inside ? fg : bg;
            std::uint8_t* p = f.image.px(x, y);
            for (int ch = 0; ch < 3; ++ch) p[ch] = jitter(c[ch], noise_amp, rng);
            if (inside) f.mask[static_cast<size_t>(y) * w + x] = 1;
        }
    return f;
}

RgbRaster make_noisy_step(int w, int h, int noise_amp, std::uint64_t seed) {
    RgbRaster img = make_constant(w, h, 0, 0, 0);
    std::mt19937_64 rng(seed);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t base = x < w / 2 ? 60 : 200;
            std::uint8_t* p = img.px(x, y);
            for (int c = 0; c < 3; ++c) p[c] = jitter(base, noise_amp, rng);
        }
    return img;
}

long long nonzero_gradient_pairs(const RgbRaster& img) {
    long long count = 0;
    auto differs = [&](int x0, int y0, int x1, int y1) {
        const std::uint8_t* a = img.px(x0, y0);
        const std::uint8_t* b = img.px(x1, y1);
        return a[0] != b[0] || a[1] != b[1] || a[2] != b[2];
    };
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (x + 1 < img.width && differs(x, y, x + 1, y)) ++count;
            if (y + 1 < img.height && differs(x, y, x, y + 1)) ++count;
        }
    return count;
}

namespace {

AffinityGraph graph_from_support(int n, const std::vector<std::vector<char>>& support,
                                 std::mt19937_64& rng) {
    AffinityGraph g;
    g.n = n;
    g.cols.resize(n);
    g.w.resize(n);
    g.a.resize(n);
    g.degree.assign(n, 0.0);
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (support[i][j]) w[i][j] = w[j][i] = unit(rng);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (w[i][j] > 0) {
                g.cols[i].push_back(j);
                g.w[i].push_back(w[i][j]);
                g.degree[i] += w[i][j];
            }
        if (g.cols[i].empty()) {
            g.cols[i].push_back(i);
            g.w[i].push_back(0.0);
            g.a[i].push_back(1.0);
        } else {
            for (double wv : g.w[i]) g.a[i].push_back(wv / g.degree[i]);
        }
    }
    return g;
}

}  // namespace

AffinityGraph make_random_graph(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<char>> support(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        int j = static_cast<int>(rng() % n);
        if (j != i) support[i][j] = support[j][i] = 1;
        for (int k = 0; k < 3; ++k) {
            int j2 = static_cast<int>(rng() % n);
            if (j2 != i && rng() % 2) support[i][j2] = support[j2][i] = 1;
        }
    }
    return graph_from_support(n, support, rng);
}

AffinityGraph make_connected_graph(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<char>> support(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        if (j != i) support[i][j] = support[j][i] = 1;
    }
    for (int k = 0; k < n; ++k) {
        int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
        if (i != j) support[i][j] = support[j][i] = 1;
    }
    return graph_from_support(n, support, rng);
}

std::vector<BlobFixture> acceptance_suite() {
    std::vector<BlobFixture> suite;
    const int w = 160, h = 120;
    struct Layout {
        double frac;      // object area fraction
        std::array<std::uint8_t, 3> fg, bg;
        int noise;
        std::uint64_t seed;
    };
    const std::vector<Layout> layouts = {
        {0.05, {200, 40, 40}, {120, 120, 120}, 0, 11},
        {0.10, {30, 80, 200}, {140, 140, 130}, 0, 12},
        {0.15, {230, 180, 30}, {90, 90, 110}, 0, 13},
        {0.20, {40, 160, 60}, {150, 140, 140}, 0, 14},
        {0.30, {220, 60, 160}, {110, 115, 110}, 0, 15},
        {0.40, {40, 40, 200}, {160, 150, 140}, 0, 16},
        {0.08, {210, 50, 50}, {130, 130, 130}, 12, 17},
        {0.18, {40, 90, 210}, {145, 140, 135}, 12, 18},
        {0.28, {230, 170, 40}, {100, 100, 115}, 12, 19},
        {0.38, {50, 170, 70}, {150, 145, 140}, 12, 20},
    };
    int idx = 0;
    for (const Layout& s : layouts) {
        double aspect = 1.0 + 0.2 * (idx % 3);
        int bw = static_cast<int>(std::lround(std::sqrt(s.frac * w * h * aspect)));
        int bh = static_cast<int>(std::lround(std::sqrt(s.frac * w * h / aspect)));
        bw = std::min(bw, w - 20);
        bh = std::min(bh, h - 20);
        int x0 = (w - bw) / 2 + (idx % 2 ? 6 : -6);
        int y0 = (h - bh) / 2 + (idx % 3 == 0 ? 4 : -4);
        suite.push_back(make_blob(w, h, x0, y0, x0 + bw - 1, y0 + bh - 1, s.fg, s.bg, s.noise,
                                  s.seed));
        ++idx;
    }
    return suite;
}

}  // namespace lps::testing
