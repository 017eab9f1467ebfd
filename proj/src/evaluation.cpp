#include "lps/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <opencv2/imgproc.hpp>

namespace fs = std::filesystem;

namespace lps {

GroundTruth binarize_ground_truth(const GrayRaster& g, const std::string& source_path) {
    GroundTruth gt;
    gt.width = g.width;
    gt.height = g.height;
    gt.source_path = source_path;
    gt.mask.resize(g.data.size());
    for (size_t i = 0; i < g.data.size(); ++i) gt.mask[i] = g.data[i] > 127 ? 1 : 0;
    return gt;
}

std::array<PrPoint, 256> pr_curve(const GrayRaster& map, const GroundTruth& gt) {
    if (map.width != gt.width || map.height != gt.height)
        throw std::invalid_argument("pr_curve: raster dimensions differ");
    const size_t n = map.data.size();
    size_t positives = 0;
    for (auto m : gt.mask) positives += m;
    if (positives == 0) throw std::invalid_argument("pr_curve: ground truth has no positive pixel");

    // Count (value, gt) occurrences once; sweep thresholds over the counts.
    std::array<long long, 256> pos_at{}, neg_at{};
    for (size_t i = 0; i < n; ++i) {
        if (gt.mask[i])
            ++pos_at[map.data[i]];
        else
            ++neg_at[map.data[i]];
    }
    std::array<PrPoint, 256> curve;
    long long tp = 0, fp = 0;
    for (int v = 255; v >= 0; --v) {
        tp += pos_at[v];
        fp += neg_at[v];
        // tp/fp now cover predictions at threshold tau = v (map >= v)
        curve[v].precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
        curve[v].recall = static_cast<double>(tp) / static_cast<double>(positives);
    }
    return curve;
}

double adaptive_threshold(const GrayRaster& map, double k) {
    if (map.data.empty()) throw std::invalid_argument("adaptive_threshold: empty map");
    double sum = 0;
    for (auto v : map.data) sum += v;
    return k * sum / static_cast<double>(map.data.size());
}

double f_measure(double precision, double recall, double beta2) {
    if (precision == 0 && recall == 0) return 0.0;
    return (1.0 + beta2) * precision * recall / (beta2 * precision + recall);
}

std::vector<std::uint8_t> binarize(const GrayRaster& map, double tau) {
    std::vector<std::uint8_t> out(map.data.size());
    for (size_t i = 0; i < map.data.size(); ++i) out[i] = map.data[i] >= tau ? 1 : 0;
    return out;
}

double overlap(const std::vector<std::uint8_t>& prediction, const GroundTruth& gt) {
    if (prediction.size() != gt.mask.size())
        throw std::invalid_argument("overlap: raster dimensions differ");
    long long inter = 0, uni = 0;
    for (size_t i = 0; i < prediction.size(); ++i) {
        bool p = prediction[i] != 0, g = gt.mask[i] != 0;
        inter += (p && g);
        uni += (p || g);
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double mae(const GrayRaster& map, const GroundTruth& gt) {
    if (map.data.size() != gt.mask.size())
        throw std::invalid_argument("mae: raster dimensions differ");
    double sum = 0;
    for (size_t i = 0; i < map.data.size(); ++i)
        sum += std::abs(map.data[i] / 255.0 - static_cast<double>(gt.mask[i]));
    return sum / static_cast<double>(map.data.size());
}

ImageMetrics evaluate_pair(const GrayRaster& map, const GroundTruth& gt, double k_adaptive,
                           double beta2) {
    ImageMetrics m;
    m.curve = pr_curve(map, gt);
    m.adaptive_threshold = adaptive_threshold(map, k_adaptive);
    auto pred = binarize(map, m.adaptive_threshold);
    long long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        bool p = pred[i] != 0, g = gt.mask[i] != 0;
        tp += (p && g);
        fp += (p && !g);
        fn += (!p && g);
    }
    m.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
    m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    m.f_beta = f_measure(m.precision, m.recall, beta2);
    m.overlap = overlap(pred, gt);
    m.mae = mae(map, gt);
    return m;
}

namespace {

std::string lower_stem(const fs::path& p) {
    std::string s = p.stem().string();
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

GrayRaster resize_to(const GrayRaster& g, int w, int h) {
    if (g.width == w && g.height == h) return g;
    cv::Mat src(g.height, g.width, CV_8UC1, const_cast<std::uint8_t*>(g.data.data()));
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(w, h), 0, 0, cv::INTER_LINEAR);
    GrayRaster out;
    out.width = w;
    out.height = h;
    out.data.assign(dst.data, dst.data + static_cast<size_t>(w) * h);
    return out;
}

}  // namespace

MetricsReport evaluate_dataset(const std::string& map_dir, const std::string& gt_dir,
                               double k_adaptive, double beta2) {
    std::map<std::string, fs::path> gts;
    for (const auto& e : fs::directory_iterator(gt_dir))
        if (e.is_regular_file()) gts[lower_stem(e.path())] = e.path();

    std::vector<std::pair<std::string, std::pair<fs::path, fs::path>>> pairs;
    for (const auto& e : fs::directory_iterator(map_dir)) {
        if (!e.is_regular_file()) continue;
        auto it = gts.find(lower_stem(e.path()));
        if (it != gts.end()) pairs.push_back({it->first, {e.path(), it->second}});
    }
    std::sort(pairs.begin(), pairs.end());
    if (pairs.empty())
        throw std::runtime_error("evaluate_dataset: no matched (map, ground-truth) pairs");

    MetricsReport report;
    for (const auto& [stem, paths] : pairs) {
        GrayRaster map = load_gray(paths.first.string());
        GroundTruth gt = binarize_ground_truth(load_gray(paths.second.string()),
                                               paths.second.string());
        map = resize_to(map, gt.width, gt.height);
        ImageMetrics m = evaluate_pair(map, gt, k_adaptive, beta2);
        m.id = stem;
        report.per_image.push_back(std::move(m));
    }
    const double n = static_cast<double>(report.per_image.size());
    for (const ImageMetrics& m : report.per_image) {
        for (int t = 0; t < 256; ++t) {
            report.mean_curve[t].precision += m.curve[t].precision / n;
            report.mean_curve[t].recall += m.curve[t].recall / n;
        }
        report.mean_precision += m.precision / n;
        report.mean_recall += m.recall / n;
        report.mean_f_beta += m.f_beta / n;
        report.mean_overlap += m.overlap / n;
        report.mean_mae += m.mae / n;
    }
    return report;
}

void write_report_json(const MetricsReport& report, const std::string& path) {
    nlohmann::json per = nlohmann::json::array();
    for (const ImageMetrics& m : report.per_image) {
        per.push_back({{"id", m.id},
                       {"adaptive_threshold", m.adaptive_threshold},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f_beta", m.f_beta},
                       {"overlap", m.overlap},
                       {"mae", m.mae}});
    }
    nlohmann::json j = {{"per_image", per},
                        {"mean",
                         {{"precision", report.mean_precision},
                          {"recall", report.mean_recall},
                          {"f_beta", report.mean_f_beta},
                          {"overlap", report.mean_overlap},
                          {"mae", report.mean_mae}}}};
    std::ofstream(path) << j.dump(2) << '\n';
}

void write_report_csv(const MetricsReport& report, const std::string& path) {
    std::ofstream f(path);
    f << "id,adaptive_threshold,precision,recall,f_beta,overlap,mae\n";
    for (const ImageMetrics& m : report.per_image)
        f << m.id << ',' << m.adaptive_threshold << ',' << m.precision << ',' << m.recall << ','
          << m.f_beta << ',' << m.overlap << ',' << m.mae << '\n';
    f << "mean," << ',' << report.mean_precision << ',' << report.mean_recall << ','
      << report.mean_f_beta << ',' << report.mean_overlap << ',' << report.mean_mae << '\n';
}

void write_pr_csv(const MetricsReport& report, const std::string& path) {
    std::ofstream f(path);
    f << "threshold,precision,recall\n";
    for (int t = 0; t < 256; ++t)
        f << t << ',' << report.mean_curve[t].precision << ',' << report.mean_curve[t].recall
          << '\n';
}

}  // namespace lps
