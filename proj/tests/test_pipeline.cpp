#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "lps/pipeline.hpp"

using namespace lps;
using namespace lps::testing;
namespace fs = std::filesystem;

namespace {

// Small, fast defaults for pipeline tests.
PipelineConfig fast_config() {
    PipelineConfig cfg;
    cfg.n_target = 60;
    cfg.m_windows = 100;
    cfg.smoothing = false;
    return cfg;
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("run_single produces a full-resolution map and a sane record") {
    fs::path dir = fresh_dir("lps_pipe_single");
    BlobFixture fx = make_blob(120, 90, 40, 25, 80, 65, {200, 60, 50}, {110, 110, 110});
    save_png(fx.image, (dir / "blob.png").string());

    RunOptions opts;
    opts.output_dir = (dir / "out").string();
    RunResult r = run_single((dir / "blob.png").string(), fast_config(), opts);

    CHECK(r.map.width == 120);
    CHECK(r.map.height == 90);
    for (double v : r.map.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(r.record.region_count > 10);
    CHECK(r.record.inner_iterations > 0);
    CHECK((r.record.route == "inner-only" || r.record.route == "inter"));
    CHECK(fs::exists(r.record.output_path));
}

TEST_CASE("run_single fails cleanly on unreadable input") {
    fs::path dir = fresh_dir("lps_pipe_bad");
    RunOptions opts;
    opts.output_dir = (dir / "out").string();
    CHECK_THROWS_AS(run_single((dir / "nothing.png").string(), fast_config(), opts),
                    std::runtime_error);
    std::ofstream((dir / "junk.png")) << "not an image";
    CHECK_THROWS_AS(run_single((dir / "junk.png").string(), fast_config(), opts),
                    std::runtime_error);
}

TEST_CASE("dump_stages writes intermediate artifacts") {
    fs::path dir = fresh_dir("lps_pipe_dump");
    BlobFixture fx = make_blob(100, 80, 30, 20, 70, 60, {60, 170, 80}, {120, 120, 130});
    save_png(fx.image, (dir / "img.png").string());
    RunOptions opts;
    opts.output_dir = (dir / "out").string();
    opts.dump_stages = true;
    run_single((dir / "img.png").string(), fast_config(), opts);
    CHECK(fs::exists(dir / "out" / "img_superpixels.png"));
    CHECK(fs::exists(dir / "out" / "img_affinity.txt"));
    CHECK(fs::exists(dir / "out" / "img_inner.png"));
}

TEST_CASE("batch over a directory visits every image and reports the gate split") {
    fs::path dir = fresh_dir("lps_pipe_batch");
    fs::create_directories(dir / "in");
    for (int i = 0; i < 3; ++i) {
        BlobFixture fx = make_blob(100, 80, 20 + 5 * i, 15, 60 + 8 * i, 55, {210, 70, 60},
                                   {115, 115, 115}, 0, 10 + i);
        save_png(fx.image, (dir / "in" / ("im" + std::to_string(i) + ".png")).string());
    }
    std::ofstream(dir / "in" / "notes.txt") << "skip me";

    RunOptions opts;
    opts.output_dir = (dir / "out").string();
    PipelineConfig cfg = fast_config();
    BatchSummary s = run_batch((dir / "in").string(), cfg, opts, 2);
    REQUIRE(s.records.size() == 3);
    CHECK(s.failures.empty());

    int inter = 0;
    for (const auto& rec : s.records) {
        CHECK(fs::exists(rec.output_path));
        bool gate_fires = cfg.invert_gate ? (rec.compactness < cfg.gamma2)
                                          : (rec.compactness >= cfg.gamma2);
        bool inter_route = rec.route == "inter";
        // The record's route must agree with its own compactness value,
        // except when the objectness stage produced no labels.
        if (rec.objectness_empty) CHECK(rec.route == "inner-only");
        else CHECK(inter_route == gate_fires);
        inter += inter_route;
    }
    CHECK(s.inter_route_fraction == doctest::Approx(inter / 3.0));

    write_run_report(s, cfg, opts.output_dir);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "timings.csv"));
}

TEST_CASE("batch results do not depend on the worker count") {
    fs::path dir = fresh_dir("lps_pipe_workers");
    fs::create_directories(dir / "in");
    for (int i = 0; i < 4; ++i) {
        BlobFixture fx = make_blob(90, 70, 15 + 4 * i, 12, 55 + 4 * i, 50, {70, 90, 200},
                                   {120, 118, 112}, 0, 20 + i);
        save_png(fx.image, (dir / "in" / ("w" + std::to_string(i) + ".png")).string());
    }
    PipelineConfig cfg = fast_config();
    RunOptions o1, o4;
    o1.output_dir = (dir / "out1").string();
    o4.output_dir = (dir / "out4").string();
    BatchSummary s1 = run_batch((dir / "in").string(), cfg, o1, 1);
    BatchSummary s4 = run_batch((dir / "in").string(), cfg, o4, 4);
    REQUIRE(s1.records.size() == s4.records.size());
    for (size_t i = 0; i < s1.records.size(); ++i) {
        CHECK(s1.records[i].image_id == s4.records[i].image_id);
        CHECK(s1.records[i].route == s4.records[i].route);
        CHECK(s1.records[i].compactness == s4.records[i].compactness);
        fs::path a = s1.records[i].output_path, b = s4.records[i].output_path;
        CHECK(read_file(a) == read_file(b));
    }
}

TEST_CASE("report.json is byte-identical across repeated runs") {
    fs::path dir = fresh_dir("lps_pipe_repro");
    fs::create_directories(dir / "in");
    BlobFixture fx = make_blob(80, 64, 20, 14, 58, 48, {220, 80, 60}, {110, 112, 114}, 8, 31);
    save_png(fx.image, (dir / "in" / "r.png").string());
    PipelineConfig cfg = fast_config();
    RunOptions oa, ob;
    oa.output_dir = (dir / "outA").string();
    ob.output_dir = (dir / "outB").string();
    BatchSummary sa = run_batch((dir / "in").string(), cfg, oa, 1);
    BatchSummary sb = run_batch((dir / "in").string(), cfg, ob, 1);
    write_run_report(sa, cfg, oa.output_dir);
    write_run_report(sb, cfg, ob.output_dir);
    CHECK(read_file(dir / "outA" / "report.json") == read_file(dir / "outB" / "report.json"));
    CHECK(read_file(dir / "outA" / "r.png") == read_file(dir / "outB" / "r.png"));
}

TEST_CASE("batch collects per-image failures instead of aborting") {
    fs::path dir = fresh_dir("lps_pipe_fail");
    fs::create_directories(dir / "in");
    BlobFixture fx = make_blob(80, 64, 18, 14, 58, 48, {200, 70, 60}, {115, 115, 115}, 0, 40);
    save_png(fx.image, (dir / "in" / "good.png").string());
    std::ofstream(dir / "in" / "bad.png") << "garbage bytes";
    RunOptions opts;
    opts.output_dir = (dir / "out").string();
    BatchSummary s = run_batch((dir / "in").string(), fast_config(), opts, 1);
    CHECK(s.records.size() == 1);
    REQUIRE(s.failures.size() == 1);
    CHECK(s.failures[0].first.find("bad.png") != std::string::npos);
    CHECK(!s.failures[0].second.empty());
}

TEST_CASE("run_batch rejects a missing input directory") {
    RunOptions opts;
    opts.output_dir = (fs::temp_directory_path() / "lps_pipe_noout").string();
    CHECK_THROWS_AS(run_batch("/nonexistent/input_dir", fast_config(), opts, 1),
                    std::runtime_error);
}
