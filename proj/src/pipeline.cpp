#include "lps/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "lps/evaluation.hpp"
#include "lps/fusion.hpp"
#include "lps/graph.hpp"
#include "lps/l0_smooth.hpp"
#include "lps/objectness.hpp"
#include "lps/segmentation.hpp"

namespace fs = std::filesystem;

namespace lps {

namespace {

class StageClock {
  public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

[[noreturn]] void stage_error(const std::string& stage, const std::string& image,
                              const std::exception& e) {
    throw std::runtime_error("[" + stage + "] " + image + ": " + e.what());
}

}  // namespace

RunResult run_single(const std::string& image_path, const PipelineConfig& cfg,
                     const RunOptions& opts) {
    cfg.validate();
    fs::create_directories(opts.output_dir);
    const std::string stem = fs::path(image_path).stem().string();
    const fs::path out_dir(opts.output_dir);

    RunResult result;
    RunRecord& rec = result.record;
    rec.image_id = stem;
    StageClock total_clock, clock;

    RgbRaster img;
    try {
        img = load_image(image_path);
        if (cfg.resize_max_dim > 0) img = resize_max_dim(img, cfg.resize_max_dim);
    } catch (const std::exception& e) {
        stage_error("load", image_path, e);
    }

    RgbRaster smoothed;
    try {
        smoothed = cfg.smoothing ? l0_smooth(img, cfg.l0_lambda, cfg.l0_kappa) : img;
    } catch (const std::exception& e) {
        stage_error("smooth", image_path, e);
    }
    rec.t_smooth = clock.lap();
    if (opts.dump_stages) save_png(smoothed, (out_dir / (stem + "_smoothed.png")).string());

    LabRaster lab = rgb_to_lab(smoothed);
    SuperpixelMap sp;
    BoundarySet boundary;
    try {
        sp = slic_segment(lab, cfg.n_target, cfg.slic_compactness);
        compute_adjacency(sp);
        boundary = boundary_nodes(sp);
    } catch (const std::exception& e) {
        stage_error("segment", image_path, e);
    }
    rec.region_count = sp.n;
    rec.t_segment = clock.lap();
    if (opts.dump_stages)
        dump_superpixels(sp, (out_dir / (stem + "_superpixels.png")).string(),
                         (out_dir / (stem + "_regions.json")).string());

    AffinityGraph graph;
    std::vector<int> bg_labels;
    try {
        graph = build_affinity(sp, boundary, cfg.sigma_c2);
        bg_labels = select_boundary_labels(boundary, sp, cfg.drop_frac);
    } catch (const std::exception& e) {
        stage_error("graph", image_path, e);
    }
    rec.t_graph = clock.lap();
    if (opts.dump_stages) dump_affinity(graph, (out_dir / (stem + "_affinity.txt")).string());

    PropagationConfig pcfg{cfg.thres, cfg.window, cfg.max_iters};
    std::ofstream trace_inner;
    if (opts.trace) trace_inner.open((out_dir / (stem + "_inner_trace.csv")).string());
    LabelState inner;
    try {
        inner = propagate(graph, bg_labels, pcfg, opts.trace ? &trace_inner : nullptr);
    } catch (const std::exception& e) {
        stage_error("inner-propagation", image_path, e);
    }
    std::vector<double> s_inner = background_to_saliency(inner.v);
    rec.inner_iterations = inner.t;
    rec.t_inner = clock.lap();
    if (opts.dump_stages)
        render(paint_regional(s_inner, sp), (out_dir / (stem + "_inner.png")).string());

    CompactnessScore c = compactness(s_inner);
    rec.compactness = c.value;

    std::vector<double> s_regional = s_inner;
    rec.route = "inner-only";
    MapProvenance provenance = MapProvenance::Inner;
    if (needs_refinement(c, cfg.gamma2, cfg.invert_gate)) {
        std::vector<WindowScore> windows;
        ObjectnessMaps obj;
        std::vector<int> obj_labels;
        try {
            windows = sample_windows(smoothed, lab, cfg.m_windows, cfg.seed);
            obj = accumulate_objectness(windows, sp);
            obj_labels = select_object_labels(obj.regional_normalized, cfg.gamma1);
        } catch (const std::exception& e) {
            stage_error("objectness", image_path, e);
        }
        rec.t_objectness = clock.lap();
        if (opts.dump_stages) {
            dump_windows_csv(windows, (out_dir / (stem + "_windows.csv")).string());
            dump_objectness_png(obj, (out_dir / (stem + "_objectness.png")).string());
        }
        // Keep at least one background label out of the objectness set,
        // otherwise the run falls back to the inner map.
        std::vector<int> usable_bg;
        {
            std::vector<bool> in_o(graph.n, false);
            for (int l : obj_labels) in_o[l] = true;
            for (int l : bg_labels)
                if (!in_o[l]) usable_bg.push_back(l);
        }
        if (obj_labels.empty() || usable_bg.empty()) {
            rec.objectness_empty = true;
        } else {
            std::ofstream trace_inter;
            if (opts.trace) trace_inter.open((out_dir / (stem + "_inter_trace.csv")).string());
            CoTransductionResult co;
            try {
                co = cotransduct(graph, bg_labels, obj_labels, pcfg, cfg.p1, cfg.p2, cfg.alpha,
                                 cfg.beta, opts.trace ? &trace_inter : nullptr);
            } catch (const std::exception& e) {
                stage_error("inter-propagation", image_path, e);
            }
            s_regional = co.s_combined;
            rec.route = "inter";
            rec.inter_iterations = co.iterations;
            provenance = MapProvenance::Inter;
            rec.t_inter = clock.lap();
        }
    }

    try {
        result.map = pixel_coherence(s_regional, sp, lab, cfg.k1, cfg.k2);
        result.map.provenance = provenance;
    } catch (const std::exception& e) {
        stage_error("coherence", image_path, e);
    }
    rec.t_coherence = clock.lap();

    rec.output_path = (out_dir / (stem + ".png")).string();
    try {
        render(result.map, rec.output_path);
    } catch (const std::exception& e) {
        stage_error("render", image_path, e);
    }
    rec.t_total = total_clock.lap();
    return result;
}

namespace {

bool looks_like_image(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

}  // namespace

BatchSummary run_batch(const std::string& input_dir, const PipelineConfig& cfg,
                       const RunOptions& opts, int workers) {
    std::vector<fs::path> images;
    for (const auto& e : fs::directory_iterator(input_dir))
        if (e.is_regular_file() && looks_like_image(e.path())) images.push_back(e.path());
    std::sort(images.begin(), images.end());
    if (images.empty()) throw std::runtime_error("run_batch: no readable images in " + input_dir);

    BatchSummary summary;
    summary.records.resize(images.size());
    std::vector<std::string> errors(images.size());

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= images.size()) return;
            try {
                summary.records[i] = run_single(images[i].string(), cfg, opts).record;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    workers = std::max(1, workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<RunRecord> ok;
    int inter = 0;
    for (size_t i = 0; i < images.size(); ++i) {
        if (!errors[i].empty()) {
            summary.failures.push_back({images[i].string(), errors[i]});
            continue;
        }
        if (summary.records[i].route == "inter") ++inter;
        ok.push_back(std::move(summary.records[i]));
    }
    summary.records = std::move(ok);
    if (!summary.records.empty())
        summary.inter_route_fraction = static_cast<double>(inter) / summary.records.size();
    return summary;
}

void write_run_report(const BatchSummary& summary, const PipelineConfig& cfg,
                      const std::string& output_dir) {
    fs::create_directories(output_dir);
    nlohmann::json images = nlohmann::json::array();
    for (const RunRecord& r : summary.records) {
        images.push_back({{"id", r.image_id},
                          {"route", r.route},
                          {"compactness", r.compactness},
                          {"objectness_empty", r.objectness_empty},
                          {"inner_iterations", r.inner_iterations},
                          {"inter_iterations", r.inter_iterations},
                          {"region_count", r.region_count},
                          {"output", fs::path(r.output_path).filename().string()}});
    }
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& [img, err] : summary.failures) failures.push_back({{"image", img}, {"error", err}});
    nlohmann::json j = {{"config", cfg.to_map()},
                        {"images", images},
                        {"failures", failures},
                        {"inter_route_fraction", summary.inter_route_fraction}};
    std::ofstream((fs::path(output_dir) / "report.json").string()) << j.dump(2) << '\n';

    std::ofstream t((fs::path(output_dir) / "timings.csv").string());
    t << "id,smooth,segment,graph,inner,objectness,inter,coherence,total\n";
    for (const RunRecord& r : summary.records)
        t << r.image_id << ',' << r.t_smooth << ',' << r.t_segment << ',' << r.t_graph << ','
          << r.t_inner << ',' << r.t_objectness << ',' << r.t_inter << ',' << r.t_coherence << ','
          << r.t_total << '\n';
}

}  // namespace lps
