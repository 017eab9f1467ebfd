#include "lps/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace lps {

CompactnessScore compactness(const std::vector<double>& saliency) {
    if (saliency.empty()) throw std::invalid_argument("compactness: empty saliency vector");
    CompactnessScore c;
    c.histogram.assign(10, 0.0);
    for (double s : saliency) {
        if (s < 0 || s > 1) throw std::invalid_argument("compactness: saliency outside [0,1]");
        int bin = std::min(static_cast<int>(s * 10.0), 9);  // bin 10 closed on the right
        c.histogram[bin] += 1.0;
    }
    for (double& h : c.histogram) h /= static_cast<double>(saliency.size());
    for (int b = 1; b <= 10; ++b) {
        double weight = std::min(b, 11 - b);
        c.value += weight * c.histogram[b - 1];
    }
    return c;
}

bool needs_refinement(const CompactnessScore& c, double gamma2, bool invert) {
    if (!(gamma2 > 0)) throw std::invalid_argument("needs_refinement: gamma2 must be > 0");
    return invert ? c.value < gamma2 : c.value >= gamma2;
}

namespace {

double window_check(const std::deque<std::vector<double>>& window, int n) {
    const size_t m = window.size();
    double total = 0;
    for (int i = 0; i < n; ++i) {
        double mean = 0;
        for (const auto& snap : window) mean += snap[i];
        mean /= static_cast<double>(m);
        double var = 0;
        for (const auto& snap : window) var += (snap[i] - mean) * (snap[i] - mean);
        total += var / static_cast<double>(m);
    }
    return total / n;
}

// The k unlabeled-anywhere nodes with the lowest values, ties by id.
std::vector<int> bottom_k(const std::vector<double>& v, const std::vector<bool>& labeled_b,
                          const std::vector<bool>& labeled_o, int k) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (!labeled_b[i] && !labeled_o[i]) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (v[a] != v[b]) return v[a] < v[b];
        return a < b;
    });
    if (static_cast<int>(idx.size()) > k) idx.resize(k);
    return idx;
}

}  // namespace

CoTransductionResult cotransduct(const AffinityGraph& g, std::vector<int> background_labels,
                                 std::vector<int> object_labels, const PropagationConfig& cfg,
                                 int p1, int p2, double alpha, double beta,
                                 std::ostream* trace_csv, int exact_iters) {
    cfg.validate();
    if (background_labels.empty()) throw std::invalid_argument("cotransduct: empty boundary label set");
    if (object_labels.empty()) throw std::invalid_argument("cotransduct: empty objectness label set");
    if (p1 < 1 || p2 < p1) throw std::invalid_argument("cotransduct: need 1 <= p1 <= p2");

    std::vector<bool> in_b(g.n, false), in_o(g.n, false);
    for (int l : object_labels) {
        if (l < 0 || l >= g.n) throw std::invalid_argument("cotransduct: label id out of range");
        in_o[l] = true;
    }
    // Initial conflicts resolve in favor of the objectness set.
    std::vector<int> bg;
    for (int l : background_labels) {
        if (l < 0 || l >= g.n) throw std::invalid_argument("cotransduct: label id out of range");
        if (!in_o[l] && !in_b[l]) {
            in_b[l] = true;
            bg.push_back(l);
        }
    }
    if (bg.empty()) throw std::invalid_argument("cotransduct: boundary set consumed by objectness set");

    std::vector<double> vb(g.n, 0.0), vo(g.n, 0.0), nb(g.n), no(g.n);
    std::deque<std::vector<double>> win_b, win_o;
    auto clamp_labels = [&]() {
        for (int i = 0; i < g.n; ++i) {
            if (in_b[i]) vb[i] = 1.0;
            if (in_o[i]) vo[i] = 1.0;
        }
    };
    clamp_labels();
    win_b.push_back(vb);
    win_o.push_back(vo);

    const int iter_cap = exact_iters > 0 ? exact_iters : cfg.max_iters;
    int t = 0;
    while (t < iter_cap) {
        for (int i = 0; i < g.n; ++i) {
            double sb = 0, so = 0;
            const auto& cols = g.cols[i];
            const auto& a = g.a[i];
            for (size_t k = 0; k < cols.size(); ++k) {
                sb += a[k] * vb[cols[k]];
                so += a[k] * vo[cols[k]];
            }
            nb[i] = in_b[i] ? 1.0 : sb;
            no[i] = in_o[i] ? 1.0 : so;
        }
        vb.swap(nb);
        vo.swap(no);
        ++t;

        win_b.push_back(vb);
        win_o.push_back(vo);
        if (static_cast<int>(win_b.size()) > cfg.window + 1) {
            win_b.pop_front();
            win_o.pop_front();
        }
        double check_b = std::numeric_limits<double>::max(), check_o = check_b;
        if (static_cast<int>(win_b.size()) == cfg.window + 1) {
            check_b = window_check(win_b, g.n);
            check_o = window_check(win_o, g.n);
        }

        // Label switching: the nodes least similar to one label set become
        // labels of the other. L^B feeds O first; L^O then excludes them.
        for (int i : bottom_k(vb, in_b, in_o, p1)) {
            in_o[i] = true;
            vo[i] = 1.0;
        }
        for (int i : bottom_k(vo, in_b, in_o, p2)) {
            in_b[i] = true;
            vb[i] = 1.0;
        }

        if (trace_csv) {
            long long cb = std::count(in_b.begin(), in_b.end(), true);
            long long co = std::count(in_o.begin(), in_o.end(), true);
            *trace_csv << t << ',' << cb << ',' << co << ','
                       << (check_b == std::numeric_limits<double>::max() ? -1.0 : check_b) << ','
                       << (check_o == std::numeric_limits<double>::max() ? -1.0 : check_o) << '\n';
        }
        if (exact_iters == 0 && check_b < cfg.thres && check_o < cfg.thres) break;
    }

    CoTransductionResult r;
    r.iterations = t;
    r.s_background = background_to_saliency(vb);
    r.s_object = min_max_normalize(vo);
    std::vector<double> combined(g.n);
    for (int i = 0; i < g.n; ++i)
        combined[i] = alpha * r.s_background[i] + beta * r.s_object[i];
    r.s_combined = min_max_normalize(combined);
    for (int i = 0; i < g.n; ++i) {
        if (in_b[i]) r.final_background_labels.push_back(i);
        if (in_o[i]) r.final_object_labels.push_back(i);
    }
    return r;
}

}  // namespace lps
