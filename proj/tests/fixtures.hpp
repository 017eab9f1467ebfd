#ifndef LPS_TEST_FIXTURES_HPP
#define LPS_TEST_FIXTURES_HPP

#include <cstdint>
#include <vector>

#include "lps/graph.hpp"
#include "lps/raster.hpp"

namespace lps::testing {

RgbRaster make_constant(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Left half one color, right half another.
RgbRaster make_two_half(int w, int h, std::array<std::uint8_t, 3> left,
                        std::array<std::uint8_t, 3> right);

/// Axis-aligned rectangle of `fg` on a `bg` background; optional uniform
/// noise of +-noise_amp on every channel (seeded).
struct BlobFixture {
    RgbRaster image;
    std::vector<std::uint8_t> mask;  // 0/1, object = 1
    int x0, y0, x1, y1;
};
BlobFixture make_blob(int w, int h, int x0, int y0, int x1, int y1,
                      std::array<std::uint8_t, 3> fg, std::array<std::uint8_t, 3> bg,
                      int noise_amp = 0, std::uint64_t seed = 1);

/// Vertical step edge at w/2 with additive seeded noise.
RgbRaster make_noisy_step(int w, int h, int noise_amp, std::uint64_t seed);

/// Counts pixel pairs (4-neighborhood) whose channel values differ.
long long nonzero_gradient_pairs(const RgbRaster& img);

/// Random sparse row-stochastic affinity graph with symmetric support,
/// every node keeping at least one incident edge.
AffinityGraph make_random_graph(int n, std::uint64_t seed);

/// Connected variant (ring backbone plus random chords).
AffinityGraph make_connected_graph(int n, std::uint64_t seed);

/// The acceptance-suite images: one high-contrast object per image on a
/// plain or textured background, object area 5-40% of the image.
std::vector<BlobFixture> acceptance_suite();

}  // namespace lps::testing

#endif
