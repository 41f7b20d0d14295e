#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_scenes.hpp"

using namespace lensfield;
using namespace lensfield::testing;

namespace {

RenderConfig base_config(RenderMode mode, int frames = 1, int threads = 1) {
    RenderConfig cfg;
    cfg.mode = mode;
    cfg.width = kTestWidth;
    cfg.height = kTestHeight;
    cfg.frames = frames;
    cfg.threads = threads;
    cfg.reference_spp = 16;
    return cfg;
}

bool images_identical(const Image<Color3>& a, const Image<Color3>& b) {
    if (!a.same_size(b))
        return false;
    return std::memcmp(a.data(), b.data(), a.pixel_count() * sizeof(Color3)) == 0;
}

}  // namespace

TEST_CASE("mode=sharp equals the G-buffer color pass") {
    SceneFile sf = two_quads_scene();
    Renderer renderer(base_config(RenderMode::sharp), sf.scene, {sf.camera});
    FrameSet frame = renderer.render_frame(0);
    LensCamera cam = scene_camera(sf);
    FrameScene fs = FrameScene::build(sf.scene, 0);
    GBuffer gb = render_gbuffer(fs, cam, 1);
    CHECK(images_identical(frame.final_color, gb.color));
}

TEST_CASE("mode=reference with aperture 0 and jitter off equals sharp") {
    SceneFile sf = two_quads_scene(0.0);
    RenderConfig cfg = base_config(RenderMode::reference);
    cfg.jitter_primary = false;
    cfg.reference_spp = 9;
    Renderer ref_renderer(cfg, sf.scene, {sf.camera});
    Renderer sharp_renderer(base_config(RenderMode::sharp), sf.scene, {sf.camera});
    FrameSet ref = ref_renderer.render_frame(0);
    FrameSet sharp = sharp_renderer.render_frame(0);
    CHECK(images_identical(ref.final_color, sharp.final_color));
}

TEST_CASE("postprocess mode output is independent of every ray-trace parameter") {
    SceneFile sf = two_quads_scene();
    RenderConfig a = base_config(RenderMode::postprocess);
    RenderConfig b = a;
    b.seed = 999;
    b.mask.n_max = 32;
    b.mask.v_ref = 1.0;
    b.temporal.alpha = 0.9;
    b.spatial.v_clamp = 0.5;
    b.composite.h_threshold = 0.1;
    b.trace.transition_scale = 0.2;
    b.trace.seed = 999;
    Renderer ra(a, sf.scene, {sf.camera});
    Renderer rb(b, sf.scene, {sf.camera});
    CHECK(images_identical(ra.render_frame(0).final_color,
                           rb.render_frame(0).final_color));
}

TEST_CASE("hybrid frames are byte-identical across worker counts") {
    SceneFile sf = two_quads_scene();
    RenderConfig c1 = base_config(RenderMode::hybrid, 3, 1);
    RenderConfig c8 = base_config(RenderMode::hybrid, 3, 8);
    Renderer r1(c1, sf.scene, {sf.camera});
    Renderer r8(c8, sf.scene, {sf.camera});
    for (int frame = 0; frame < 3; ++frame) {
        FrameSet f1 = r1.render_frame(frame);
        FrameSet f8 = r8.render_frame(frame);
        CHECK(images_identical(f1.final_color, f8.final_color));
        CHECK(f1.stats.rays_traced == f8.stats.rays_traced);
        CHECK(f1.stats.mean_hit_ratio == f8.stats.mean_hit_ratio);
    }
}

TEST_CASE("hybrid reruns with the same seed are byte-identical") {
    SceneFile sf = two_quads_scene();
    RenderConfig cfg = base_config(RenderMode::hybrid, 2, 2);
    cfg.seed = 31337;
    cfg.trace.seed = cfg.seed;
    Renderer ra(cfg, sf.scene, {sf.camera});
    Renderer rb(cfg, sf.scene, {sf.camera});
    for (int frame = 0; frame < 2; ++frame)
        CHECK(images_identical(ra.render_frame(frame).final_color,
                               rb.render_frame(frame).final_color));
}

TEST_CASE("hybrid stats: ray accounting matches the budget") {
    SceneFile sf = two_quads_scene();
    Renderer renderer(base_config(RenderMode::hybrid), sf.scene, {sf.camera});
    FrameSet frame = renderer.render_frame(0);
    long total = 0;
    for (int y = 0; y < kTestHeight; ++y)
        for (int x = 0; x < kTestWidth; ++x)
            total += frame.budget.rays.at(x, y);
    CHECK(frame.stats.rays_traced == total);
    CHECK(frame.stats.rays_full_equiv == 8L * kTestWidth * kTestHeight);
    CHECK(frame.stats.masked_fraction > 0.0);
    CHECK(frame.stats.masked_fraction < 0.5);
    CHECK(frame.stats.mean_hit_ratio >= 0.0);
    CHECK(frame.stats.mean_hit_ratio <= 1.0);
}

TEST_CASE("run_render writes frames, PNGs, and a stats CSV") {
    namespace fs = std::filesystem;
    SceneFile sf = two_quads_scene();
    RenderConfig cfg = base_config(RenderMode::hybrid, 2, 2);
    fs::path out = fs::temp_directory_path() / "lensfield_run_test";
    fs::remove_all(out);
    cfg.out_dir = out.string();
    RunResult result = run_render(cfg, sf.scene, {sf.camera});
    CHECK(result.stats.size() == 2);
    CHECK(fs::exists(out / "frame_0000.pfm"));
    CHECK(fs::exists(out / "frame_0001.pfm"));
    CHECK(fs::exists(out / "frame_0000.png"));
    CHECK(fs::exists(out / "stats.csv"));
    std::ifstream csv(out / "stats.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == stats_csv_header());
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty())
            ++rows;
    CHECK(rows == 2);
    fs::remove_all(out);
}

TEST_CASE("run_render dumps intermediates on request") {
    namespace fs = std::filesystem;
    SceneFile sf = two_quads_scene();
    RenderConfig cfg = base_config(RenderMode::hybrid, 1, 2);
    fs::path out = fs::temp_directory_path() / "lensfield_dump_test";
    fs::path dump = out / "intermediates";
    fs::remove_all(out);
    cfg.out_dir = out.string();
    run_render(cfg, sf.scene, {sf.camera}, dump.string());
    for (const char* stem :
         {"gbuffer_color", "gbuffer_depth", "coc", "postprocess", "edges", "ray_budget",
          "field_near", "field_hit_ratio", "rt_color", "rt_variance", "spatial"}) {
        CAPTURE(stem);
        CHECK(fs::exists(dump / (std::string(stem) + "_0000.pfm")));
    }
    CHECK(fs::exists(dump / "ray_mask_0000.pgm"));
    fs::remove_all(out);
}

TEST_CASE("camera path keyframes drive per-frame cameras, clamped at the end") {
    SceneFile sf = occluder_wall_scene();
    std::vector<CameraKeyframe> path;
    for (int i = 0; i < 3; ++i) {
        CameraKeyframe key = sf.camera;
        key.position = key.position + Vec3{0.05 * i, 0, 0};
        key.look_at = key.look_at + Vec3{0.05 * i, 0, 0};
        path.push_back(key);
    }
    Renderer renderer(base_config(RenderMode::sharp, 5), sf.scene, path);
    CHECK(renderer.camera_for_frame(0).position.x == doctest::Approx(0.0));
    CHECK(renderer.camera_for_frame(2).position.x == doctest::Approx(0.10));
    CHECK(renderer.camera_for_frame(4).position.x == doctest::Approx(0.10));  // clamped
}

TEST_CASE("hybrid: temporal history persists across frames in one renderer") {
    SceneFile sf = two_quads_scene();
    Renderer renderer(base_config(RenderMode::hybrid, 4), sf.scene, {sf.camera});
    FrameSet f0 = renderer.render_frame(0);
    FrameSet f1 = renderer.render_frame(1);
    // frame 0 traces the full newly-masked budget; frame 1 should trace less
    CHECK(f1.stats.rays_traced < f0.stats.rays_traced);
    CHECK(f0.stats.rays_traced > 0);
}
