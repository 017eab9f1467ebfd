#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "lps/graph.hpp"
#include "lps/segmentation.hpp"

using namespace lps;

namespace {

// Minimal superpixel map stub: regions with given unit-LAB colors laid on
// a strip; adjacency injected directly.
SuperpixelMap stub_map(const std::vector<std::array<double, 3>>& colors,
                       const std::vector<std::vector<int>>& neighbors_2) {
    SuperpixelMap sp;
    sp.n = static_cast<int>(colors.size());
    sp.width = sp.n;
    sp.height = 1;
    sp.labels.resize(sp.n);
    sp.regions.assign(sp.n, {});
    for (int i = 0; i < sp.n; ++i) {
        sp.labels[i] = i;
        sp.regions[i].id = i;
        sp.regions[i].mean_lab_unit = colors[i];
        sp.regions[i].pixel_count = 1;
        sp.regions[i].neighbors_2 = neighbors_2[i];
    }
    return sp;
}

double dense_entry(const AffinityGraph& g, int i, int j) {
    for (size_t k = 0; k < g.cols[i].size(); ++k)
        if (g.cols[i][k] == j) return g.a[i][k];
    return 0.0;
}

double dense_w(const AffinityGraph& g, int i, int j) {
    for (size_t k = 0; k < g.cols[i].size(); ++k)
        if (g.cols[i][k] == j) return g.w[i][k];
    return 0.0;
}

}  // namespace

TEST_CASE("affinity diagonal is zero and identical colors give w = 1") {
    auto sp = stub_map({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}, {{1}, {0}});
    AffinityGraph g = build_affinity(sp, {}, 0.1);
    CHECK(dense_w(g, 0, 0) == 0.0);
    CHECK(dense_w(g, 1, 1) == 0.0);
    CHECK(dense_w(g, 0, 1) == doctest::Approx(1.0));
    CHECK(dense_w(g, 1, 0) == doctest::Approx(1.0));
}

TEST_CASE("row normalization of a 2-node graph") {
    // Colors chosen so w01 = w10 = some positive value; A rows must be (0,1),(1,0).
    auto sp = stub_map({{0.2, 0.5, 0.5}, {0.4, 0.5, 0.5}}, {{1}, {0}});
    AffinityGraph g = build_affinity(sp, {}, 0.1);
    CHECK(dense_entry(g, 0, 1) == doctest::Approx(1.0));
    CHECK(dense_entry(g, 1, 0) == doctest::Approx(1.0));
}

TEST_CASE("affinity sparsity respects the neighborhood mask plus boundary clique") {
    // 5-node path, nodes 0 and 4 boundary.
    std::vector<std::vector<int>> n2 = {{1, 2}, {0, 2, 3}, {0, 1, 3, 4}, {1, 2, 4}, {2, 3}};
    auto sp = stub_map({{0.1, 0.5, 0.5},
                        {0.2, 0.5, 0.5},
                        {0.3, 0.5, 0.5},
                        {0.4, 0.5, 0.5},
                        {0.5, 0.5, 0.5}},
                       n2);
    AffinityGraph g = build_affinity(sp, {0, 4}, 0.1);
    CHECK(dense_w(g, 0, 4) > 0.0);  // boundary clique edge
    CHECK(dense_w(g, 0, 3) == 0.0); // not in mask, not both boundary
    CHECK(dense_w(g, 1, 4) == 0.0);
    for (int i = 0; i < g.n; ++i) {
        double row = 0;
        for (double a : g.a[i]) row += a;
        CHECK(std::abs(row - 1.0) < 1e-12);
    }
}

TEST_CASE("isolated node becomes a row-stochastic self-loop") {
    auto sp = stub_map({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.9, 0.1, 0.1}},
                       {{1}, {0}, {}});
    AffinityGraph g = build_affinity(sp, {}, 0.1);
    CHECK(g.cols[2] == std::vector<int>{2});
    CHECK(g.a[2][0] == 1.0);
    // Unlabeled isolated node stays 0 forever.
    auto v = propagate_steps(g, {0}, 25);
    CHECK(v[2] == 0.0);
}

TEST_CASE("select_boundary_labels drops floor(0.3 |B|) nodes") {
    std::vector<std::array<double, 3>> colors(10, {0.5, 0.5, 0.5});
    std::vector<std::vector<int>> n2(10);
    auto sp = stub_map(colors, n2);
    BoundarySet b(10);
    std::iota(b.begin(), b.end(), 0);
    auto kept = select_boundary_labels(b, sp, 0.3);
    CHECK(kept.size() == 7);
    // All identical: ties broken by ascending id, so ids 0,1,2 are dropped.
    CHECK(kept == std::vector<int>{3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("select_boundary_labels always drops the one distinct node") {
    std::vector<std::array<double, 3>> colors(10, {0.5, 0.5, 0.5});
    colors[6] = {0.5, 0.9, 0.8};  // the red one
    std::vector<std::vector<int>> n2(10);
    auto sp = stub_map(colors, n2);
    BoundarySet b(10);
    std::iota(b.begin(), b.end(), 0);
    auto kept = select_boundary_labels(b, sp, 0.3);
    CHECK(kept.size() == 7);
    CHECK(std::find(kept.begin(), kept.end(), 6) == kept.end());
}

TEST_CASE("select_boundary_labels preconditions") {
    auto sp = stub_map({{0.5, 0.5, 0.5}}, {{}});
    CHECK_THROWS_AS(select_boundary_labels({0}, sp, 0.3), std::invalid_argument);
    auto sp2 = stub_map({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}, {{1}, {0}});
    CHECK_THROWS_AS(select_boundary_labels({0, 1}, sp2, 1.0), std::invalid_argument);
}

TEST_CASE("propagate with every node labeled is all ones immediately") {
    AffinityGraph g = testing::make_connected_graph(6, 1);
    PropagationConfig cfg{1e-4, 3, 100};
    LabelState st = propagate(g, {0, 1, 2, 3, 4, 5}, cfg);
    for (double v : st.v) CHECK(v == 1.0);
}

TEST_CASE("3-node chain hand trace") {
    // Unit affinities on a path 0-1-2; row-normalized: node 1 splits evenly.
    AffinityGraph g;
    g.n = 3;
    g.cols = {{1}, {0, 2}, {1}};
    g.w = {{1.0}, {1.0, 1.0}, {1.0}};
    g.a = {{1.0}, {0.5, 0.5}, {1.0}};
    g.degree = {1.0, 2.0, 1.0};
    auto v1 = propagate_steps(g, {0}, 1);
    CHECK(v1 == std::vector<double>{1.0, 0.5, 0.0});
    auto v2 = propagate_steps(g, {0}, 2);
    CHECK(v2 == std::vector<double>{1.0, 0.5, 0.5});
}

TEST_CASE("propagate rejects an empty label set") {
    AffinityGraph g = testing::make_connected_graph(4, 9);
    PropagationConfig cfg;
    CHECK_THROWS_AS(propagate(g, {}, cfg), std::invalid_argument);
}

TEST_CASE("connected graph converges to all ones") {
    AffinityGraph g = testing::make_connected_graph(12, 4);
    auto v = propagate_steps(g, {3}, 5000);
    for (double x : v) CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("propagate_oracle matches the sparse path on random graphs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 5 + static_cast<int>(rng() % 16);
        AffinityGraph g = testing::make_random_graph(n, rng());
        std::vector<int> labels{static_cast<int>(rng() % n)};
        int iters = 1 + static_cast<int>(rng() % 30);
        auto a = propagate_steps(g, labels, iters);
        auto b = propagate_oracle(g, labels, iters);
        for (int i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
}

TEST_CASE("oracle at zero iterations is the label indicator") {
    AffinityGraph g = testing::make_random_graph(8, 5);
    auto v = propagate_oracle(g, {2, 5}, 0);
    for (int i = 0; i < 8; ++i) CHECK(v[i] == ((i == 2 || i == 5) ? 1.0 : 0.0));
}

TEST_CASE("propagation is coordinate-wise monotone and clamped") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        AffinityGraph g = testing::make_random_graph(20, rng());
        std::vector<int> labels{static_cast<int>(rng() % 20)};
        std::vector<double> prev = propagate_steps(g, labels, 0);
        for (int t = 1; t <= 40; ++t) {
            auto cur = propagate_steps(g, labels, t);
            for (int i = 0; i < 20; ++i) {
                CHECK(cur[i] >= prev[i] - 1e-15);
                CHECK(cur[i] <= 1.0 + 1e-15);
            }
            for (int l : labels) CHECK(cur[l] == 1.0);
            prev = cur;
        }
    }
}

TEST_CASE("background_to_saliency") {
    CHECK(background_to_saliency({1.0, 0.5, 0.0}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(background_to_saliency({0.7, 0.7, 0.7}) == std::vector<double>{0.0, 0.0, 0.0});
    auto s = background_to_saliency({0.2, 0.8, 0.6});
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(0.0));
    CHECK(s[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("propagate stops on the windowed variance criterion") {
    AffinityGraph g = testing::make_connected_graph(10, 2);
    PropagationConfig cfg{1e-6, 9, 500};
    LabelState st = propagate(g, {0}, cfg);
    CHECK(st.t >= cfg.window + 1);
    CHECK(st.t < cfg.max_iters);
}
