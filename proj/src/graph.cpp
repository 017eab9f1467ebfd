#include "lps/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace lps {

void PropagationConfig::validate() const {
    if (!(thres > 0)) throw std::invalid_argument("propagation: thres must be > 0");
    if (window < 1) throw std::invalid_argument("propagation: window must be >= 1");
    if (max_iters <= window) throw std::invalid_argument("propagation: max_iters must exceed window");
}

namespace {

double unit_lab_dist(const Region& a, const Region& b) {
    double s = 0;
    for (int c = 0; c < 3; ++c) {
        double d = a.mean_lab_unit[c] - b.mean_lab_unit[c];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

AffinityGraph build_affinity(const SuperpixelMap& sp, const BoundarySet& boundary,
                             double sigma_c2) {
    if (!(sigma_c2 > 0)) throw std::invalid_argument("build_affinity: sigma_c2 must be > 0");
    AffinityGraph g;
    g.n = sp.n;
    g.boundary = boundary;
    g.cols.resize(sp.n);
    g.w.resize(sp.n);
    g.a.resize(sp.n);
    g.degree.assign(sp.n, 0.0);

    std::vector<bool> is_boundary(sp.n, false);
    for (int b : boundary) is_boundary[b] = true;

    for (int i = 0; i < sp.n; ++i) {
        std::set<int> mask(sp.regions[i].neighbors_2.begin(), sp.regions[i].neighbors_2.end());
        if (is_boundary[i])
            for (int b : boundary)
                if (b != i) mask.insert(b);
        for (int j : mask) {
            double wij = std::exp(-unit_lab_dist(sp.regions[i], sp.regions[j]) / sigma_c2);
            g.cols[i].push_back(j);
            g.w[i].push_back(wij);
            g.degree[i] += wij;
        }
        g.a[i].resize(g.cols[i].size());
        if (g.cols[i].empty()) {
            // Isolated node: unit self-loop keeps A row-stochastic.
            g.cols[i].push_back(i);
            g.w[i].push_back(0.0);
            g.a[i].push_back(1.0);
        } else {
            for (size_t k = 0; k < g.cols[i].size(); ++k) g.a[i][k] = g.w[i][k] / g.degree[i];
        }
    }
    return g;
}

std::vector<int> select_boundary_labels(const BoundarySet& boundary, const SuperpixelMap& sp,
                                        double drop_frac) {
    if (boundary.size() < 2)
        throw std::invalid_argument("select_boundary_labels: need at least 2 boundary nodes");
    if (drop_frac < 0 || drop_frac >= 1)
        throw std::invalid_argument("select_boundary_labels: drop_frac must be in [0,1)");

    const size_t nb = boundary.size();
    std::vector<double> distinct(nb, 0.0);
    for (size_t i = 0; i < nb; ++i) {
        for (size_t j = 0; j < nb; ++j) {
            if (i == j) continue;
            distinct[i] += unit_lab_dist(sp.regions[boundary[i]], sp.regions[boundary[j]]);
        }
        distinct[i] /= static_cast<double>(nb - 1);
    }
    std::vector<size_t> order(nb);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (distinct[a] != distinct[b]) return distinct[a] > distinct[b];
        return boundary[a] < boundary[b];
    });
    const size_t drop = static_cast<size_t>(std::floor(drop_frac * nb));
    std::vector<int> kept;
    for (size_t k = drop; k < nb; ++k) kept.push_back(boundary[order[k]]);
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

void step_sparse(const AffinityGraph& g, const std::vector<bool>& labeled,
                 const std::vector<double>& v, std::vector<double>& out) {
    for (int i = 0; i < g.n; ++i) {
        if (labeled[i]) {
            out[i] = 1.0;
            continue;
        }
        double s = 0;
        const auto& cols = g.cols[i];
        const auto& a = g.a[i];
        for (size_t k = 0; k < cols.size(); ++k) s += a[k] * v[cols[k]];
        out[i] = s;
    }
}

std::vector<bool> label_mask(int n, const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("propagate: empty label set");
    std::vector<bool> m(n, false);
    for (int l : labels) {
        if (l < 0 || l >= n) throw std::invalid_argument("propagate: label id out of range");
        m[l] = true;
    }
    return m;
}

}  // namespace

LabelState propagate(const AffinityGraph& g, const std::vector<int>& labels,
                     const PropagationConfig& cfg, std::ostream* trace_csv) {
    cfg.validate();
    auto labeled = label_mask(g.n, labels);
    std::vector<double> v(g.n, 0.0), next(g.n);
    for (int l : labels) v[l] = 1.0;

    std::deque<std::vector<double>> window;
    window.push_back(v);
    int t = 0;
    while (t < cfg.max_iters) {
        step_sparse(g, labeled, v, next);
        v.swap(next);
        ++t;
        window.push_back(v);
        if (static_cast<int>(window.size()) > cfg.window + 1) window.pop_front();
        double check = std::numeric_limits<double>::max();
        if (static_cast<int>(window.size()) == cfg.window + 1) {
            // Mean over nodes of the per-node variance across the window.
            double total = 0;
            const size_t m = window.size();
            for (int i = 0; i < g.n; ++i) {
                double mean = 0;
                for (const auto& snap : window) mean += snap[i];
                mean /= static_cast<double>(m);
                double var = 0;
                for (const auto& snap : window) var += (snap[i] - mean) * (snap[i] - mean);
                total += var / static_cast<double>(m);
            }
            check = total / g.n;
        }
        if (trace_csv) {
            *trace_csv << t << ',' << (check == std::numeric_limits<double>::max() ? -1.0 : check);
            for (double x : v) *trace_csv << ',' << x;
            *trace_csv << '\n';
        }
        if (check < cfg.thres) break;
    }
    LabelState st;
    st.labels = labels;
    std::sort(st.labels.begin(), st.labels.end());
    st.v = std::move(v);
    st.t = t;
    return st;
}

std::vector<double> propagate_steps(const AffinityGraph& g, const std::vector<int>& labels,
                                    int iters) {
    auto labeled = label_mask(g.n, labels);
    std::vector<double> v(g.n, 0.0), next(g.n);
    for (int l : labels) v[l] = 1.0;
    for (int t = 0; t < iters; ++t) {
        step_sparse(g, labeled, v, next);
        v.swap(next);
    }
    return v;
}

std::vector<double> propagate_oracle(const AffinityGraph& g, const std::vector<int>& labels,
                                     int iters) {
    auto labeled = label_mask(g.n, labels);
    // Materialize dense A, then run the recursion with naive products.
    std::vector<std::vector<double>> A(g.n, std::vector<double>(g.n, 0.0));
    for (int i = 0; i < g.n; ++i)
        for (size_t k = 0; k < g.cols[i].size(); ++k) A[i][g.cols[i][k]] += g.a[i][k];
    std::vector<double> v(g.n, 0.0);
    for (int l : labels) v[l] = 1.0;
    for (int t = 0; t < iters; ++t) {
        std::vector<double> next(g.n, 0.0);
        for (int i = 0; i < g.n; ++i) {
            if (labeled[i]) {
                next[i] = 1.0;
                continue;
            }
            for (int j = 0; j < g.n; ++j) next[i] += A[i][j] * v[j];
        }
        v = next;
    }
    return v;
}

std::vector<double> min_max_normalize(const std::vector<double>& v) {
    if (v.empty()) return {};
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    std::vector<double> out(v.size(), 0.0);
    if (*mx - *mn <= 0) return out;  // degenerate: no contrast
    for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *mn) / (*mx - *mn);
    return out;
}

std::vector<double> background_to_saliency(const std::vector<double>& v) {
    if (v.empty()) return {};
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    std::vector<double> out(v.size(), 0.0);
    if (*mx - *mn <= 0) return out;  // constant v: no contrast evidence
    for (size_t i = 0; i < v.size(); ++i) out[i] = 1.0 - (v[i] - *mn) / (*mx - *mn);
    return out;
}

void dump_affinity(const AffinityGraph& g, const std::string& path) {
    std::ofstream f(path);
    f << "# W triplets\n";
    for (int i = 0; i < g.n; ++i)
        for (size_t k = 0; k < g.cols[i].size(); ++k)
            f << i << ' ' << g.cols[i][k] << ' ' << g.w[i][k] << '\n';
    f << "# A triplets\n";
    for (int i = 0; i < g.n; ++i)
        for (size_t k = 0; k < g.cols[i].size(); ++k)
            f << i << ' ' << g.cols[i][k] << ' ' << g.a[i][k] << '\n';
}

}  // namespace lps
