#include "lps/objectness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace lps {

namespace {

cv::Mat to_gray_f32(const RgbRaster& img) {
    cv::Mat g(img.height, img.width, CV_32F);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.px(x, y);
            g.at<float>(y, x) = (0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]) / 255.f;
        }
    return g;
}

// Min-max to [0,1] with a relative epsilon; near-constant maps collapse to 0.
void normalize_map(cv::Mat& m) {
    double mn, mx;
    cv::minMaxLoc(m, &mn, &mx);
    if (mx - mn < 1e-12 * std::max(std::abs(mx), 1.0)) {
        m.setTo(0);
        return;
    }
    m = (m - mn) / (mx - mn);
}

FloatMap mat_to_map(const cv::Mat& m) {
    FloatMap out;
    out.width = m.cols;
    out.height = m.rows;
    out.data.resize(static_cast<size_t>(m.cols) * m.rows);
    for (int y = 0; y < m.rows; ++y)
        std::copy_n(m.ptr<float>(y), m.cols, out.data.data() + static_cast<size_t>(y) * m.cols);
    return out;
}

}  // namespace

std::vector<FloatMap> spectral_residual_map(const RgbRaster& img, const std::vector<int>& scales) {
    if (scales.empty()) throw std::invalid_argument("spectral_residual_map: no scales");
    cv::Mat gray = to_gray_f32(img);
    double gmin, gmax;
    cv::minMaxLoc(gray, &gmin, &gmax);
    const bool flat = (gmax - gmin) < 1e-12;

    std::vector<FloatMap> maps;
    for (int scale : scales) {
        if (scale > img.width)
            throw std::invalid_argument("spectral_residual_map: scale larger than image");
        int sw = scale;
        int sh = std::max(1, static_cast<int>(std::lround(static_cast<double>(scale) * img.height / img.width)));
        cv::Mat out = cv::Mat::zeros(sh, sw, CV_32F);
        if (!flat) {
            cv::Mat small;
            cv::resize(gray, small, cv::Size(sw, sh), 0, 0, cv::INTER_AREA);
            cv::Mat freq;
            cv::dft(small, freq, cv::DFT_COMPLEX_OUTPUT);
            cv::Mat planes[2];
            cv::split(freq, planes);
            cv::Mat amp, phase;
            cv::magnitude(planes[0], planes[1], amp);
            cv::phase(planes[0], planes[1], phase);
            cv::Mat logamp;
            cv::log(amp + 1e-8f, logamp);
            cv::Mat avg;
            cv::blur(logamp, avg, cv::Size(3, 3), cv::Point(-1, -1), cv::BORDER_REPLICATE);
            cv::Mat residual = logamp - avg;
            cv::Mat newamp;
            cv::exp(residual, newamp);
            cv::polarToCart(newamp, phase, planes[0], planes[1]);
            cv::merge(planes, 2, freq);
            cv::Mat spatial;
            cv::dft(freq, spatial, cv::DFT_INVERSE | cv::DFT_REAL_OUTPUT | cv::DFT_SCALE);
            out = spatial.mul(spatial);
            cv::GaussianBlur(out, out, cv::Size(0, 0), 2.5, 2.5, cv::BORDER_REPLICATE);
            normalize_map(out);
        }
        cv::Mat full;
        cv::resize(out, full, cv::Size(img.width, img.height), 0, 0, cv::INTER_LINEAR);
        cv::min(cv::max(full, 0.f), 1.f, full);  // interpolation can overshoot by an LSB
        maps.push_back(mat_to_map(full));
    }
    return maps;
}

FloatMap edge_raster(const RgbRaster& img) {
    cv::Mat gray = to_gray_f32(img);
    cv::Mat gx, gy, mag;
    cv::Sobel(gray, gx, CV_32F, 1, 0, 3);
    cv::Sobel(gray, gy, CV_32F, 0, 1, 3);
    cv::magnitude(gx, gy, mag);
    std::vector<float> vals(mag.begin<float>(), mag.end<float>());
    size_t k = vals.size() - std::max<size_t>(1, vals.size() / 10);  // 90th percentile
    std::nth_element(vals.begin(), vals.begin() + k, vals.end());
    float thr = std::max(vals[k], 1e-12f);
    cv::Mat edges = cv::Mat::zeros(mag.size(), CV_32F);
    for (int y = 0; y < mag.rows; ++y)
        for (int x = 0; x < mag.cols; ++x)
            if (mag.at<float>(y, x) >= thr) edges.at<float>(y, x) = 1.f;
    return mat_to_map(edges);
}

double score_ms(const Window& win, const std::vector<FloatMap>& ms_maps) {
    double best = 0;
    for (const FloatMap& m : ms_maps) {
        double s = 0;
        for (int y = win.y0; y <= win.y1; ++y)
            for (int x = win.x0; x <= win.x1; ++x) s += m.at(x, y);
        best = std::max(best, s / static_cast<double>(win.area()));
    }
    return best;
}

namespace {

constexpr int kCcBins = 8;

void accumulate_hist(const LabRaster& lab, int x0, int y0, int x1, int y1,
                     const Window& exclude, bool use_exclude, std::vector<double>& hist,
                     double& total) {
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (use_exclude && x >= exclude.x0 && x <= exclude.x1 && y >= exclude.y0 &&
                y <= exclude.y1)
                continue;
            auto u = lab.unit(x, y);
            int bl = std::min(static_cast<int>(u[0] * kCcBins), kCcBins - 1);
            int ba = std::min(static_cast<int>(u[1] * kCcBins), kCcBins - 1);
            int bb = std::min(static_cast<int>(u[2] * kCcBins), kCcBins - 1);
            hist[(bl * kCcBins + ba) * kCcBins + bb] += 1.0;
            total += 1.0;
        }
    }
}

}  // namespace

double score_cc(const Window& win, const LabRaster& lab) {
    // Surround: window dilated to twice the size per axis, clipped, minus the window.
    int hw = win.width() / 2, hh = win.height() / 2;
    int sx0 = std::max(0, win.x0 - hw), sx1 = std::min(lab.width - 1, win.x1 + hw);
    int sy0 = std::max(0, win.y0 - hh), sy1 = std::min(lab.height - 1, win.y1 + hh);

    std::vector<double> hw_in(kCcBins * kCcBins * kCcBins, 0.0), hw_out(hw_in.size(), 0.0);
    double tin = 0, tout = 0;
    accumulate_hist(lab, win.x0, win.y0, win.x1, win.y1, win, false, hw_in, tin);
    accumulate_hist(lab, sx0, sy0, sx1, sy1, win, true, hw_out, tout);
    if (tout <= 0) return 0.0;  // window fills the whole image

    double chi2 = 0;
    for (size_t b = 0; b < hw_in.size(); ++b) {
        double p = hw_in[b] / tin, q = hw_out[b] / tout;
        if (p + q > 0) chi2 += (p - q) * (p - q) / (p + q);
    }
    return chi2 / 2.0;  // chi-squared of two unit-mass histograms caps at 2
}

double score_ed(const Window& win, const FloatMap& edges) {
    // Ring between the window and the centered half-area inner window.
    int iw = std::max(1, static_cast<int>(std::lround(win.width() / std::sqrt(2.0))));
    int ih = std::max(1, static_cast<int>(std::lround(win.height() / std::sqrt(2.0))));
    int ix0 = win.x0 + (win.width() - iw) / 2;
    int iy0 = win.y0 + (win.height() - ih) / 2;
    Window inner{ix0, iy0, ix0 + iw - 1, iy0 + ih - 1};
    long long ring_area = win.area() - inner.area();
    if (ring_area <= 0) return 0.0;
    long long count = 0;
    for (int y = win.y0; y <= win.y1; ++y)
        for (int x = win.x0; x <= win.x1; ++x) {
            if (x >= inner.x0 && x <= inner.x1 && y >= inner.y0 && y <= inner.y1) continue;
            if (edges.at(x, y) > 0.5f) ++count;
        }
    return static_cast<double>(count) / static_cast<double>(ring_area);
}

namespace {

// Degenerate spread keeps a positive constant cue at 1 rather than
// nulling the whole product.
void normalize_cue(std::vector<double>& s) {
    auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    double lo = *mn, hi = *mx;
    for (double& x : s) x = (hi - lo > 0) ? (x - lo) / (hi - lo) : (hi > 0 ? 1.0 : 0.0);
}

}  // namespace

std::vector<WindowScore> sample_windows(const RgbRaster& img, const LabRaster& lab, int m,
                                        std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_windows: M must be >= 1");
    const int w = img.width, h = img.height;
    const int minw = std::max(1, (w + 9) / 10), minh = std::max(1, (h + 9) / 10);

    std::mt19937_64 rng(seed);
    auto uniform_int = [&rng](int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    auto ms_maps = spectral_residual_map(img, {std::min(16, w), std::min(32, w), std::min(64, w)});
    FloatMap edges = edge_raster(img);

    const int pool = 10 * m;
    std::vector<Window> cand(pool);
    std::vector<double> ms_raw(pool);
    for (int i = 0; i < pool; ++i) {
        int ww = uniform_int(minw, w), wh = uniform_int(minh, h);
        int x0 = uniform_int(0, w - ww), y0 = uniform_int(0, h - wh);
        cand[i] = {x0, y0, x0 + ww - 1, y0 + wh - 1};
        ms_raw[i] = score_ms(cand[i], ms_maps);
    }

    // MS-proportional sampling without replacement; uniform fallback when
    // every candidate scores zero.
    std::vector<int> chosen;
    double total = std::accumulate(ms_raw.begin(), ms_raw.end(), 0.0);
    std::vector<char> taken(pool, 0);
    const int take = std::min(m, pool);
    if (total <= 0) {
        std::vector<int> idx(pool);
        std::iota(idx.begin(), idx.end(), 0);
        for (int i = 0; i < take; ++i) {
            int j = uniform_int(i, pool - 1);
            std::swap(idx[i], idx[j]);
            chosen.push_back(idx[i]);
        }
    } else {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i < take; ++i) {
            double r = unit(rng) * total;
            int pick = -1;
            for (int j = 0; j < pool; ++j) {
                if (taken[j]) continue;
                r -= ms_raw[j];
                pick = j;
                if (r <= 0) break;
            }
            taken[pick] = 1;
            total -= ms_raw[pick];
            chosen.push_back(pick);
        }
    }

    std::vector<WindowScore> scores(chosen.size());
    std::vector<double> ms(chosen.size()), cc(chosen.size()), ed(chosen.size());
    for (size_t i = 0; i < chosen.size(); ++i) {
        scores[i].window = cand[chosen[i]];
        ms[i] = ms_raw[chosen[i]];
        cc[i] = score_cc(scores[i].window, lab);
        ed[i] = score_ed(scores[i].window, edges);
    }
    normalize_cue(ms);
    normalize_cue(cc);
    normalize_cue(ed);
    for (size_t i = 0; i < chosen.size(); ++i) {
        scores[i].ms = ms[i];
        scores[i].cc = cc[i];
        scores[i].ed = ed[i];
        scores[i].p = combine_cues(ms[i], cc[i], ed[i]);
    }
    return scores;
}

std::vector<double> pixel_objectness(const std::vector<WindowScore>& scores, int width,
                                     int height) {
    std::vector<double> out(static_cast<size_t>(width) * height, 0.0);
    const double sx = 0.25 * width, sy = 0.25 * height;
    std::vector<double> wx(width), wy(height);
    for (const WindowScore& s : scores) {
        if (s.p == 0) continue;
        const double cx = s.window.cx(), cy = s.window.cy();
        for (int x = 0; x < width; ++x) {
            double d = x - cx;
            wx[x] = std::exp(-d * d / (2 * sx * sx));
        }
        for (int y = 0; y < height; ++y) {
            double d = y - cy;
            wy[y] = std::exp(-d * d / (2 * sy * sy));
        }
        for (int y = 0; y < height; ++y) {
            double py = s.p * wy[y];
            double* row = out.data() + static_cast<size_t>(y) * width;
            for (int x = 0; x < width; ++x) row[x] += py * wx[x];
        }
    }
    return out;
}

std::vector<double> region_objectness(const std::vector<double>& pixel, const SuperpixelMap& sp) {
    std::vector<double> out(sp.n, 0.0);
    for (int y = 0; y < sp.height; ++y)
        for (int x = 0; x < sp.width; ++x)
            out[sp.label(x, y)] += pixel[static_cast<size_t>(y) * sp.width + x];
    for (int i = 0; i < sp.n; ++i) out[i] /= sp.regions[i].pixel_count;
    return out;
}

ObjectnessMaps accumulate_objectness(const std::vector<WindowScore>& scores,
                                     const SuperpixelMap& sp) {
    ObjectnessMaps maps;
    maps.width = sp.width;
    maps.height = sp.height;
    maps.pixel = pixel_objectness(scores, sp.width, sp.height);
    maps.regional = region_objectness(maps.pixel, sp);
    auto [mn, mx] = std::minmax_element(maps.regional.begin(), maps.regional.end());
    maps.regional_normalized.assign(sp.n, 0.0);
    if (*mx - *mn > 0)
        for (int i = 0; i < sp.n; ++i)
            maps.regional_normalized[i] = (maps.regional[i] - *mn) / (*mx - *mn);
    return maps;
}

std::vector<int> select_object_labels(const std::vector<double>& regional_normalized,
                                      double gamma1) {
    std::vector<int> out;
    for (size_t i = 0; i < regional_normalized.size(); ++i)
        if (regional_normalized[i] >= gamma1) out.push_back(static_cast<int>(i));
    return out;
}

void dump_windows_csv(const std::vector<WindowScore>& scores, const std::string& path) {
    std::ofstream f(path);
    f << "x0,y0,x1,y1,ms,cc,ed,p\n";
    for (const WindowScore& s : scores)
        f << s.window.x0 << ',' << s.window.y0 << ',' << s.window.x1 << ',' << s.window.y1 << ','
          << s.ms << ',' << s.cc << ',' << s.ed << ',' << s.p << '\n';
}

void dump_objectness_png(const ObjectnessMaps& maps, const std::string& path) {
    GrayRaster g;
    g.width = maps.width;
    g.height = maps.height;
    g.data.resize(maps.pixel.size());
    auto [mn, mx] = std::minmax_element(maps.pixel.begin(), maps.pixel.end());
    double range = *mx - *mn;
    for (size_t i = 0; i < maps.pixel.size(); ++i)
        g.data[i] = range > 0 ? static_cast<std::uint8_t>(
                                    std::lround(255.0 * (maps.pixel[i] - *mn) / range))
                              : 0;
    save_png(g, path);
}

}  // namespace lps
