#ifndef LPS_PIPELINE_HPP
#define LPS_PIPELINE_HPP

#include <string>
#include <vector>

#include "lps/coherence.hpp"
#include "lps/config.hpp"

namespace lps {

struct RunRecord {
    std::string image_id;
    std::string route;         // "inner-only" | "inter"
    double compactness = 0;    // C of the inner map
    bool objectness_empty = false;  // gate fired but O was empty
    int inner_iterations = 0;
    int inter_iterations = 0;
    int region_count = 0;
    std::string output_path;
    // Wall-clock per stage, seconds. Volatile: excluded from report.json
    // so reports are byte-reproducible; emitted in timings.csv instead.
    double t_smooth = 0, t_segment = 0, t_graph = 0, t_inner = 0;
    double t_objectness = 0, t_inter = 0, t_coherence = 0, t_total = 0;
};

struct RunOptions {
    std::string output_dir = "out";
    bool dump_stages = false;
    bool trace = false;
};

struct RunResult {
    PixelSaliencyMap map;
    RunRecord record;
};

/// Full pipeline on one image: smooth, segment, affinity, inner
/// propagation, compactness gate, optional co-transduction, pixel
/// coherence, PNG output.
RunResult run_single(const std::string& image_path, const PipelineConfig& cfg,
                     const RunOptions& opts);

struct BatchSummary {
    std::vector<RunRecord> records;
    std::vector<std::pair<std::string, std::string>> failures;  // (image, error)
    double inter_route_fraction = 0;
};

/// Processes every readable image in the directory. Parallel across
/// images only; per-image outputs are independent of the worker count.
BatchSummary run_batch(const std::string& input_dir, const PipelineConfig& cfg,
                       const RunOptions& opts, int workers = 1);

/// report.json (deterministic) + timings.csv (volatile wall-clock).
void write_run_report(const BatchSummary& summary, const PipelineConfig& cfg,
                      const std::string& output_dir);

}  // namespace lps

#endif
