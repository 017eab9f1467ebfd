#include "lps/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>

namespace lps {

namespace {

struct Cluster {
    double l = 0, a = 0, b = 0, x = 0, y = 0;
};

double grad_at(const LabRaster& img, int x, int y) {
    int xm = std::max(x - 1, 0), xp = std::min(x + 1, img.width - 1);
    int ym = std::max(y - 1, 0), yp = std::min(y + 1, img.height - 1);
    double g = 0;
    for (int c = 0; c < 3; ++c) {
        double dx = img.px(xp, y)[c] - img.px(xm, y)[c];
        double dy = img.px(x, yp)[c] - img.px(x, ym)[c];
        g += dx * dx + dy * dy;
    }
    return g;
}

void fill_region_stats(SuperpixelMap& sp, const LabRaster& img) {
    sp.regions.assign(sp.n, {});
    for (int i = 0; i < sp.n; ++i) sp.regions[i].id = i;
    for (int y = 0; y < sp.height; ++y) {
        for (int x = 0; x < sp.width; ++x) {
            Region& r = sp.regions[sp.label(x, y)];
            const float* lab = img.px(x, y);
            for (int c = 0; c < 3; ++c) r.mean_lab[c] += lab[c];
            r.cx += x;
            r.cy += y;
            r.pixel_count += 1;
        }
    }
    for (Region& r : sp.regions) {
        for (int c = 0; c < 3; ++c) r.mean_lab[c] /= r.pixel_count;
        r.cx /= r.pixel_count;
        r.cy /= r.pixel_count;
        float native[3] = {static_cast<float>(r.mean_lab[0]), static_cast<float>(r.mean_lab[1]),
                           static_cast<float>(r.mean_lab[2])};
        r.mean_lab_unit = LabRaster::to_unit(native);
    }
}

// Relabels so that every region is one 4-connected component; components
// that are not the largest of their SLIC label are merged into the
// largest adjacent region.
void enforce_connectivity(std::vector<int>& labels, int w, int h, int& n) {
    const int npx = w * h;
    std::vector<int> comp(npx, -1);
    std::vector<int> comp_label, comp_size;
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    int ncomp = 0;
    for (int i = 0; i < npx; ++i) {
        if (comp[i] >= 0) continue;
        int id = ncomp++;
        comp_label.push_back(labels[i]);
        comp_size.push_back(0);
        std::queue<int> q;
        q.push(i);
        comp[i] = id;
        while (!q.empty()) {
            int p = q.front();
            q.pop();
            ++comp_size[id];
            int px = p % w, py = p / w;
            for (int d = 0; d < 4; ++d) {
                int nx = px + dx[d], ny = py + dy[d];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                int np = ny * w + nx;
                if (comp[np] < 0 && labels[np] == labels[i]) {
                    comp[np] = id;
                    q.push(np);
                }
            }
        }
    }
    // Keep the largest component per label; everything else is an orphan.
    std::vector<int> best(n, -1);
    for (int c = 0; c < ncomp; ++c) {
        int l = comp_label[c];
        if (best[l] < 0 || comp_size[c] > comp_size[best[l]]) best[l] = c;
    }
    std::vector<bool> keep(ncomp, false);
    for (int l = 0; l < n; ++l)
        if (best[l] >= 0) keep[best[l]] = true;

    // Iteratively merge orphan components into the largest adjacent kept
    // component (merging updates sizes, order is by component id).
    std::vector<int> merged_into(ncomp, -1);
    auto resolve = [&](int c) {
        while (merged_into[c] >= 0) c = merged_into[c];
        return c;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int c = 0; c < ncomp; ++c) {
            if (keep[c] || merged_into[c] >= 0) continue;
            // Find adjacent components of c.
            int best_adj = -1;
            for (int i = 0; i < npx; ++i) {
                if (resolve(comp[i]) != c) continue;
                int px = i % w, py = i / w;
                for (int d = 0; d < 4; ++d) {
                    int nx = px + dx[d], ny = py + dy[d];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    int oc = resolve(comp[ny * w + nx]);
                    if (oc == c) continue;
                    if (best_adj < 0 || comp_size[oc] > comp_size[best_adj]) best_adj = oc;
                }
            }
            if (best_adj >= 0) {
                comp_size[best_adj] += comp_size[c];
                merged_into[c] = best_adj;
                changed = true;
            }
        }
    }
    // Dense relabel over surviving components.
    std::vector<int> newid(ncomp, -1);
    int next = 0;
    for (int i = 0; i < npx; ++i) {
        int c = resolve(comp[i]);
        if (newid[c] < 0) newid[c] = next++;
        labels[i] = newid[c];
    }
    n = next;
}

}  // namespace

SuperpixelMap slic_segment(const LabRaster& img, int n_target, double compactness) {
    if (n_target < 4) throw std::invalid_argument("slic_segment: n_target must be >= 4");
    if (compactness <= 0) throw std::invalid_argument("slic_segment: compactness must be > 0");
    const int w = img.width, h = img.height;
    const double step = std::sqrt(static_cast<double>(w) * h / n_target);
    if (w < step || h < step || step < 1)
        throw std::invalid_argument("slic_segment: image smaller than the seed grid spacing");

    const int gx = std::max(1, static_cast<int>(std::lround(w / step)));
    const int gy = std::max(1, static_cast<int>(std::lround(h / step)));
    std::vector<Cluster> centers;
    for (int j = 0; j < gy; ++j) {
        for (int i = 0; i < gx; ++i) {
            int cx = static_cast<int>((i + 0.5) * w / gx);
            int cy = static_cast<int>((j + 0.5) * h / gy);
            // Nudge the seed to the lowest-gradient spot in its 3x3 patch.
            int bx = cx, by = cy;
            double bg = grad_at(img, cx, cy);
            for (int oy = -1; oy <= 1; ++oy)
                for (int ox = -1; ox <= 1; ++ox) {
                    int nx = cx + ox, ny = cy + oy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    double g = grad_at(img, nx, ny);
                    if (g < bg) {
                        bg = g;
                        bx = nx;
                        by = ny;
                    }
                }
            const float* lab = img.px(bx, by);
            centers.push_back({lab[0], lab[1], lab[2], static_cast<double>(bx), static_cast<double>(by)});
        }
    }

    int n = static_cast<int>(centers.size());
    std::vector<int> labels(static_cast<size_t>(w) * h, -1);
    std::vector<double> dist(labels.size());
    const double inv_s2 = (compactness / step) * (compactness / step);
    const int search = static_cast<int>(std::ceil(step));

    for (int iter = 0; iter < 10; ++iter) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::max());
        for (int k = 0; k < n; ++k) {
            const Cluster& c = centers[k];
            int x0 = std::max(0, static_cast<int>(c.x) - search);
            int x1 = std::min(w - 1, static_cast<int>(c.x) + search);
            int y0 = std::max(0, static_cast<int>(c.y) - search);
            int y1 = std::min(h - 1, static_cast<int>(c.y) + search);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const float* lab = img.px(x, y);
                    double dl = lab[0] - c.l, da = lab[1] - c.a, db = lab[2] - c.b;
                    double dxp = x - c.x, dyp = y - c.y;
                    double d = dl * dl + da * da + db * db + (dxp * dxp + dyp * dyp) * inv_s2;
                    size_t idx = static_cast<size_t>(y) * w + x;
                    if (d < dist[idx]) {
                        dist[idx] = d;
                        labels[idx] = k;
                    }
                }
            }
        }
        // Recompute centers.
        std::vector<Cluster> acc(n);
        std::vector<int> cnt(n, 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                int k = labels[static_cast<size_t>(y) * w + x];
                if (k < 0) continue;
                const float* lab = img.px(x, y);
                acc[k].l += lab[0];
                acc[k].a += lab[1];
                acc[k].b += lab[2];
                acc[k].x += x;
                acc[k].y += y;
                ++cnt[k];
            }
        }
        for (int k = 0; k < n; ++k) {
            if (cnt[k] == 0) continue;
            centers[k] = {acc[k].l / cnt[k], acc[k].a / cnt[k], acc[k].b / cnt[k],
                          acc[k].x / cnt[k], acc[k].y / cnt[k]};
        }
    }
    // Pixels outside every search window (possible on thin images) go to
    // the nearest center spatially.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            size_t idx = static_cast<size_t>(y) * w + x;
            if (labels[idx] >= 0) continue;
            double bd = std::numeric_limits<double>::max();
            for (int k = 0; k < n; ++k) {
                double dxp = x - centers[k].x, dyp = y - centers[k].y;
                double d = dxp * dxp + dyp * dyp;
                if (d < bd) {
                    bd = d;
                    labels[idx] = k;
                }
            }
        }

    enforce_connectivity(labels, w, h, n);

    SuperpixelMap sp;
    sp.width = w;
    sp.height = h;
    sp.n = n;
    sp.labels = std::move(labels);
    fill_region_stats(sp, img);
    return sp;
}

void compute_adjacency(SuperpixelMap& sp) {
    std::vector<std::set<int>> adj(sp.n);
    for (int y = 0; y < sp.height; ++y) {
        for (int x = 0; x < sp.width; ++x) {
            int a = sp.label(x, y);
            if (x + 1 < sp.width) {
                int b = sp.label(x + 1, y);
                if (a != b) {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
            if (y + 1 < sp.height) {
                int b = sp.label(x, y + 1);
                if (a != b) {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
    }
    for (int i = 0; i < sp.n; ++i) {
        sp.regions[i].neighbors_1.assign(adj[i].begin(), adj[i].end());
        std::set<int> two(adj[i].begin(), adj[i].end());
        for (int j : adj[i]) two.insert(adj[j].begin(), adj[j].end());
        two.erase(i);
        sp.regions[i].neighbors_2.assign(two.begin(), two.end());
    }
}

BoundarySet boundary_nodes(const SuperpixelMap& sp) {
    std::set<int> b;
    for (int x = 0; x < sp.width; ++x) {
        b.insert(sp.label(x, 0));
        b.insert(sp.label(x, sp.height - 1));
    }
    for (int y = 0; y < sp.height; ++y) {
        b.insert(sp.label(0, y));
        b.insert(sp.label(sp.width - 1, y));
    }
    return BoundarySet(b.begin(), b.end());
}

void dump_superpixels(const SuperpixelMap& sp, const std::string& png_path,
                      const std::string& json_path) {
    cv::Mat m(sp.height, sp.width, CV_16UC1);
    for (int y = 0; y < sp.height; ++y)
        for (int x = 0; x < sp.width; ++x)
            m.at<std::uint16_t>(y, x) = static_cast<std::uint16_t>(sp.label(x, y));
    cv::imwrite(png_path, m);

    nlohmann::json j = nlohmann::json::array();
    for (const Region& r : sp.regions) {
        j.push_back({{"id", r.id},
                     {"mean_lab", r.mean_lab},
                     {"centroid", {r.cx, r.cy}},
                     {"pixel_count", r.pixel_count},
                     {"neighbors_1", r.neighbors_1},
                     {"neighbors_2", r.neighbors_2}});
    }
    std::ofstream(json_path) << j.dump(2) << '\n';
}

}  // namespace lps
