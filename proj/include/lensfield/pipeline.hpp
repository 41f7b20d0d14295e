#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lensfield/composite.hpp"
#include "lensfield/config.hpp"
#include "lensfield/gbuffer.hpp"
#include "lensfield/image_io.hpp"
#include "lensfield/lens_trace.hpp"
#include "lensfield/metrics.hpp"
#include "lensfield/postprocess.hpp"
#include "lensfield/ray_mask.hpp"
#include "lensfield/scene_io.hpp"
#include "lensfield/spatial.hpp"
#include "lensfield/temporal.hpp"

namespace lensfield {

struct FrameStats {
    int frame = 0;
    double ms_gbuffer = 0, ms_postprocess = 0, ms_mask = 0, ms_trace = 0;
    double ms_temporal = 0, ms_spatial = 0, ms_composite = 0;
    long rays_traced = 0;
    long rays_full_equiv = 0;  // n_max * pixel count, the unmasked cost
    double masked_fraction = 0.0;
    double mean_hit_ratio = 0.0;
};

inline const char* stats_csv_header() {
    return "frame,ms_gbuffer,ms_postprocess,ms_mask,ms_trace,ms_temporal,ms_spatial,"
           "ms_composite,rays_traced,rays_full_equiv,masked_fraction,mean_hit_ratio";
}

inline std::string stats_csv_row(const FrameStats& s) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%d,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%ld,%ld,%.6f,%.6f",
                  s.frame, s.ms_gbuffer, s.ms_postprocess, s.ms_mask, s.ms_trace,
                  s.ms_temporal, s.ms_spatial, s.ms_composite, s.rays_traced,
                  s.rays_full_equiv, s.masked_fraction, s.mean_hit_ratio);
    return buf;
}

// Every intermediate and final image of one frame, plus its statistics.
struct FrameSet {
    GBuffer gbuffer;
    CocMap coc;
    Image<Color3> postprocess;
    Image<float> spec_intensity;
    Image<float> edges;
    RayBudget budget;
    Image<FieldSample> fields;
    ReconstructionFrame recon;
    Image<Color3> rt_resolved;  // reconstruction with pp fallback where invalid
    Image<Color3> spatial_out;
    Image<Color3> final_color;
    FrameStats stats;
};

// Frame-sequential renderer; owns the temporal state between frames.
class Renderer {
public:
    Renderer(RenderConfig config, Scene scene, std::vector<CameraKeyframe> camera_frames)
        : cfg_(std::move(config)), scene_(std::move(scene)),
          camera_frames_(std::move(camera_frames)) {
        if (camera_frames_.empty())
            throw std::invalid_argument("Renderer: need at least one camera keyframe");
        scene_.validate();
    }

    const RenderConfig& config() const { return cfg_; }
    const Scene& scene() const { return scene_; }
    const HistoryBuffer& history() const { return history_; }

    LensCamera camera_for_frame(int frame) const {
        int idx = std::min<int>(frame, static_cast<int>(camera_frames_.size()) - 1);
        idx = std::max(idx, 0);
        return make_camera(camera_frames_[idx], cfg_.width, cfg_.height);
    }

    // Runs one frame of the configured mode and advances temporal state.
    FrameSet render_frame(int frame) {
        using clock = std::chrono::steady_clock;
        auto ms_since = [](clock::time_point t0) {
            return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        };
        FrameSet fs;
        fs.stats.frame = frame;
        LensCamera cam = camera_for_frame(frame);
        LensCamera prev_cam = camera_for_frame(frame > 0 ? frame - 1 : 0);
        FrameScene frame_scene = FrameScene::build(scene_, frame);
        FrameScene prev_scene = FrameScene::build(scene_, frame > 0 ? frame - 1 : 0);

        auto t0 = clock::now();
        fs.gbuffer = render_gbuffer(frame_scene, prev_scene, cam, prev_cam, cfg_.threads);
        fs.stats.ms_gbuffer = ms_since(t0);

        if (cfg_.mode == RenderMode::sharp) {
            fs.final_color = fs.gbuffer.color;
            return fs;
        }
        if (cfg_.mode == RenderMode::reference) {
            TraceParams ref = cfg_.trace;
            ref.jitter = cfg_.jitter_primary;
            t0 = clock::now();
            fs.final_color =
                trace_reference(frame_scene, cam, cfg_.reference_spp, ref, cfg_.threads, frame);
            fs.stats.ms_trace = ms_since(t0);
            fs.stats.rays_traced =
                static_cast<long>(cfg_.reference_spp) * cam.width * cam.height;
            return fs;
        }

        t0 = clock::now();
        fs.coc = build_coc_map(fs.gbuffer, cam, cfg_.tile_size);
        fs.postprocess = postprocess_blur(fs.gbuffer, fs.coc, cfg_.postprocess, cfg_.threads);
        fs.spec_intensity =
            specular_intensity(fs.gbuffer, fs.coc, cfg_.postprocess, cfg_.threads);
        fs.stats.ms_postprocess = ms_since(t0);

        if (cfg_.mode == RenderMode::postprocess) {
            fs.final_color = fs.postprocess;
            return fs;
        }

        // hybrid
        int width = cam.width, height = cam.height;
        if (history_.empty()) {
            history_ = HistoryBuffer(width, height);
            prev_variance_ = Image<float>(width, height, 0.0f);
            prev_valid_ = Image<uint8_t>(width, height, 0);
        }

        t0 = clock::now();
        FilteredGBuffer filtered = gaussian_filter_gbuffer(fs.gbuffer, cfg_.threads);
        fs.edges = sobel_edges(filtered, cfg_.mask, cfg_.threads);
        fs.budget = build_ray_budget(fs.edges, prev_variance_, fs.coc, prev_valid_, cfg_.mask);
        fs.stats.ms_mask = ms_since(t0);

        t0 = clock::now();
        TraceParams trace = cfg_.trace;
        trace.jitter = cfg_.jitter_primary;
        fs.fields = trace_masked(fs.budget, frame, frame_scene, cam, trace, cfg_.threads);
        fs.stats.ms_trace = ms_since(t0);

        t0 = clock::now();
        TemporalResult temporal = temporal_accumulate(history_, fs.gbuffer, fs.fields,
                                                      prev_cam, cfg_.temporal, cfg_.threads);
        history_ = std::move(temporal.history);
        fs.recon = std::move(temporal.frame);
        fs.stats.ms_temporal = ms_since(t0);

        t0 = clock::now();
        fs.rt_resolved = Image<Color3>(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                fs.rt_resolved.at(x, y) = fs.recon.valid.at(x, y)
                                              ? fs.recon.rt_color.at(x, y)
                                              : fs.postprocess.at(x, y);
        MipPyramid pyramid =
            MipPyramid::build(fs.rt_resolved, pyramid_levels_for(cfg_.spatial.r_max));
        fs.spatial_out = spatial_gather(fs.rt_resolved, pyramid, fs.recon.coc_gather,
                                        fs.recon.variance, fs.budget, cfg_.spatial, frame,
                                        cfg_.threads);
        fs.stats.ms_spatial = ms_since(t0);

        t0 = clock::now();
        Image<uint8_t> eligible = near_eligibility(fs.coc, cfg_.mask.focus_threshold);
        fs.final_color = composite(fs.gbuffer, fs.coc, fs.postprocess, fs.recon,
                                   fs.spatial_out, fs.spec_intensity, eligible,
                                   cfg_.composite, cfg_.threads);
        fs.stats.ms_composite = ms_since(t0);

        // stats reductions run sequentially over stored fields: deterministic
        long traced_pixels = 0;
        double h_sum = 0.0;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const FieldSample& f = fs.fields.at(x, y);
                if (f.rays > 0) {
                    ++traced_pixels;
                    h_sum += f.hit_ratio;
                }
            }
        }
        fs.stats.rays_traced = fs.budget.total_rays;
        fs.stats.rays_full_equiv = static_cast<long>(cfg_.mask.n_max) * width * height;
        fs.stats.masked_fraction =
            static_cast<double>(traced_pixels) / (static_cast<double>(width) * height);
        fs.stats.mean_hit_ratio = traced_pixels > 0 ? h_sum / traced_pixels : 0.0;

        prev_variance_ = fs.recon.variance;
        prev_valid_ = fs.recon.valid;
        return fs;
    }

    void reset_history() {
        history_ = HistoryBuffer{};
        prev_variance_ = Image<float>{};
        prev_valid_ = Image<uint8_t>{};
    }

private:
    RenderConfig cfg_;
    Scene scene_;
    std::vector<CameraKeyframe> camera_frames_;
    HistoryBuffer history_;
    Image<float> prev_variance_;
    Image<uint8_t> prev_valid_;
};

namespace detail {

inline std::string frame_name(const std::string& dir, const char* stem, int frame,
                              const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04d.%s", stem, frame, ext);
    return dir.empty() ? std::string(buf) : dir + "/" + buf;
}

inline Image<float> depth_as_float(const GBuffer& gb) {
    Image<float> out(gb.width, gb.height);
    for (int y = 0; y < gb.height; ++y)
        for (int x = 0; x < gb.width; ++x) {
            float z = gb.depth.at(x, y);
            out.at(x, y) = std::isinf(z) ? 0.0f : z;
        }
    return out;
}

inline void dump_intermediates(const FrameSet& fs, int frame, const std::string& dir) {
    namespace fsys = std::filesystem;
    fsys::create_directories(dir);
    auto name = [&](const char* stem, const char* ext) {
        return frame_name(dir, stem, frame, ext);
    };
    write_pfm(fs.gbuffer.color, name("gbuffer_color", "pfm"));
    write_pfm(fs.gbuffer.specular, name("gbuffer_specular", "pfm"));
    write_pfm(depth_as_float(fs.gbuffer), name("gbuffer_depth", "pfm"));
    {
        Image<Color3> n(fs.gbuffer.width, fs.gbuffer.height);
        Image<Color3> motion(fs.gbuffer.width, fs.gbuffer.height);
        for (int y = 0; y < fs.gbuffer.height; ++y)
            for (int x = 0; x < fs.gbuffer.width; ++x) {
                Vec3 v = fs.gbuffer.normal.at(x, y);
                n.at(x, y) = {static_cast<float>(v.x), static_cast<float>(v.y),
                              static_cast<float>(v.z)};
                Vec2 m = fs.gbuffer.motion.at(x, y);
                motion.at(x, y) = {static_cast<float>(m.x), static_cast<float>(m.y), 0.0f};
            }
        write_pfm(n, name("gbuffer_normal", "pfm"));
        write_pfm(motion, name("gbuffer_motion", "pfm"));
    }
    if (!fs.coc.signed_coc.empty()) {
        write_pfm(fs.coc.signed_coc, name("coc", "pfm"));
        write_pfm(fs.postprocess, name("postprocess", "pfm"));
        write_pfm(fs.spec_intensity, name("specular_intensity", "pfm"));
    }
    if (!fs.budget.rays.empty()) {
        write_pfm(fs.edges, name("edges", "pfm"));
        Image<float> rays(fs.budget.rays.width(), fs.budget.rays.height());
        Image<uint8_t> mask(fs.budget.rays.width(), fs.budget.rays.height());
        for (int y = 0; y < rays.height(); ++y)
            for (int x = 0; x < rays.width(); ++x) {
                rays.at(x, y) = fs.budget.rays.at(x, y);
                mask.at(x, y) = fs.budget.rays.at(x, y) > 0 ? 255 : 0;
            }
        write_pfm(rays, name("ray_budget", "pfm"));
        write_pgm(mask, name("ray_mask", "pgm"));
        write_pfm(fs.budget.variance_weight, name("mask_variance_weight", "pfm"));
        Image<Color3> near_c(rays.width(), rays.height());
        Image<Color3> far_c(rays.width(), rays.height());
        Image<float> hit(rays.width(), rays.height());
        for (int y = 0; y < rays.height(); ++y)
            for (int x = 0; x < rays.width(); ++x) {
                const FieldSample& f = fs.fields.at(x, y);
                near_c.at(x, y) = f.near_color;
                far_c.at(x, y) = f.far_color;
                hit.at(x, y) = f.hit_ratio;
            }
        write_pfm(near_c, name("field_near", "pfm"));
        write_pfm(far_c, name("field_far", "pfm"));
        write_pfm(hit, name("field_hit_ratio", "pfm"));
        write_pfm(fs.recon.rt_color, name("rt_color", "pfm"));
        write_pfm(fs.recon.variance, name("rt_variance", "pfm"));
        write_pfm(fs.recon.coc_gather, name("coc_gather", "pfm"));
        write_pfm(fs.spatial_out, name("spatial", "pfm"));
    }
}

}  // namespace detail

struct RunResult {
    std::vector<FrameStats> stats;
    std::string out_dir;
};

// Full render entry point: renders cfg.frames frames, writes
// frame_%04d.{png,pfm} plus stats.csv into out_dir, and optionally dumps
// per-pass intermediates.
inline RunResult run_render(const RenderConfig& cfg, const Scene& scene,
                            const std::vector<CameraKeyframe>& camera_frames,
                            const std::string& dump_dir = {}) {
    namespace fsys = std::filesystem;
    RunResult result;
    result.out_dir = cfg.out_dir;
    fsys::create_directories(cfg.out_dir);
    Renderer renderer(cfg, scene, camera_frames);
    std::ofstream stats_file(cfg.out_dir + "/stats.csv");
    if (!stats_file)
        throw std::runtime_error("run_render: cannot write stats.csv in " + cfg.out_dir);
    stats_file << stats_csv_header() << "\n";
    for (int frame = 0; frame < cfg.frames; ++frame) {
        FrameSet fs = renderer.render_frame(frame);
        write_pfm(fs.final_color, detail::frame_name(cfg.out_dir, "frame", frame, "pfm"));
        write_png(fs.final_color, detail::frame_name(cfg.out_dir, "frame", frame, "png"));
        if (!dump_dir.empty())
            detail::dump_intermediates(fs, frame, dump_dir);
        stats_file << stats_csv_row(fs.stats) << "\n";
        result.stats.push_back(fs.stats);
    }
    return result;
}

}  // namespace lensfield
