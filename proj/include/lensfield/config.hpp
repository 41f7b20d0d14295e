#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lensfield/composite.hpp"
#include "lensfield/lens_trace.hpp"
#include "lensfield/postprocess.hpp"
#include "lensfield/ray_mask.hpp"
#include "lensfield/scene_io.hpp"
#include "lensfield/spatial.hpp"
#include "lensfield/temporal.hpp"

namespace lensfield {

enum class RenderMode { sharp, postprocess, hybrid, reference };

inline RenderMode parse_mode(const std::string& s) {
    if (s == "sharp") return RenderMode::sharp;
    if (s == "postprocess") return RenderMode::postprocess;
    if (s == "hybrid") return RenderMode::hybrid;
    if (s == "reference") return RenderMode::reference;
    throw std::runtime_error("config: unknown mode '" + s +
                             "' (expected sharp|postprocess|hybrid|reference)");
}

inline const char* mode_name(RenderMode m) {
    switch (m) {
        case RenderMode::sharp: return "sharp";
        case RenderMode::postprocess: return "postprocess";
        case RenderMode::hybrid: return "hybrid";
        case RenderMode::reference: return "reference";
    }
    return "?";
}

// Every paper-unstated constant lives here so a run is reproducible from the
// config file alone. Unknown keys are rejected; ranges are validated at load.
struct RenderConfig {
    std::string scene_path;
    std::string camera_path;  // optional
    RenderMode mode = RenderMode::hybrid;
    int width = 160, height = 120;
    int frames = 1;
    uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency
    int reference_spp = 256;
    bool jitter_primary = true;  // sub-pixel jitter for lens rays
    std::string out_dir = "out";
    int tile_size = 8;

    PostprocessParams postprocess;
    MaskParams mask;
    TraceParams trace;
    TemporalParams temporal;
    SpatialParams spatial;
    CompositeParams composite;

    void validate() const {
        auto check = [](bool ok, const char* msg) {
            if (!ok)
                throw std::runtime_error(std::string("config: ") + msg);
        };
        check(width >= 8 && height >= 8 && width <= 8192 && height <= 8192,
              "resolution must be within [8, 8192]");
        check(frames >= 1 && frames <= 100000, "frames must be in [1, 100000]");
        check(reference_spp >= 1 && reference_spp <= 65536,
              "reference_spp must be in [1, 65536]");
        check(threads >= 0 && threads <= 512, "threads must be in [0, 512]");
        check(tile_size >= 2 && tile_size <= 64, "tile_size must be in [2, 64]");
        check(postprocess.r_max >= 1.0 && postprocess.r_max <= 256.0,
              "postprocess.r_max must be in [1, 256]");
        check(postprocess.focus_threshold > 0.0, "postprocess.focus_threshold must be > 0");
        check(mask.n_max >= 1 && mask.n_max <= 1024, "mask.n_max must be in [1, 1024]");
        check(mask.n_min >= 1 && mask.n_min <= mask.n_max,
              "mask.n_min must be in [1, n_max]");
        check(mask.v_ref > 0.0, "mask.v_ref must be > 0");
        check(mask.depth_scale >= 0.0 && mask.w_normal >= 0.0 && mask.w_depth >= 0.0,
              "mask weights must be >= 0");
        check(trace.transition_scale > 0.0 && trace.transition_scale < 0.5,
              "trace.transition_scale must be in (0, 0.5)");
        check(temporal.alpha > 0.0 && temporal.alpha <= 1.0,
              "temporal.alpha must be in (0, 1]");
        check(temporal.alpha_h <= 1.0, "temporal.alpha_h must be <= 1");
        check(temporal.age_max >= 1, "temporal.age_max must be >= 1");
        check(temporal.eps > 0.0, "temporal.eps must be > 0");
        check(spatial.v_clamp > 0.0, "spatial.v_clamp must be > 0");
        check(spatial.r_max >= 1.0 && spatial.r_max <= 256.0,
              "spatial.r_max must be in [1, 256]");
        check(composite.focus_threshold > 0.0, "composite.focus_threshold must be > 0");
        check(composite.h_threshold > 0.0 && composite.h_threshold <= 1.0,
              "composite.h_threshold must be in (0, 1]");
        check(composite.specular_scale >= 0.0, "composite.specular_scale must be >= 0");
    }
};

inline RenderConfig load_config(const std::string& path) {
    using detail::json;
    json j = detail::parse_json_file(path, "load_config");
    detail::require_keys(j,
                         {"version", "scene", "camera_path", "mode", "width", "height",
                          "frames", "seed", "threads", "reference_spp", "jitter_primary",
                          "out_dir", "tile_size", "postprocess", "mask", "trace", "temporal",
                          "spatial", "composite"},
                         "config");
    if (j.value("version", 1) != 1)
        throw std::runtime_error("load_config: unsupported version");

    RenderConfig cfg;
    if (!j.contains("scene"))
        throw std::runtime_error("load_config: missing required key 'scene'");
    cfg.scene_path = j["scene"].get<std::string>();
    cfg.camera_path = j.value("camera_path", std::string{});
    cfg.mode = parse_mode(j.value("mode", "hybrid"));
    cfg.width = j.value("width", cfg.width);
    cfg.height = j.value("height", cfg.height);
    cfg.frames = j.value("frames", cfg.frames);
    cfg.seed = j.value("seed", static_cast<uint64_t>(0));
    cfg.threads = j.value("threads", 0);
    cfg.reference_spp = j.value("reference_spp", cfg.reference_spp);
    cfg.jitter_primary = j.value("jitter_primary", true);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.tile_size = j.value("tile_size", cfg.tile_size);

    if (j.contains("postprocess")) {
        const auto& p = j["postprocess"];
        detail::require_keys(p, {"r_max", "focus_threshold"}, "config.postprocess");
        cfg.postprocess.r_max = p.value("r_max", cfg.postprocess.r_max);
        cfg.postprocess.focus_threshold =
            p.value("focus_threshold", cfg.postprocess.focus_threshold);
    }
    if (j.contains("mask")) {
        const auto& p = j["mask"];
        detail::require_keys(p,
                             {"n_max", "n_min", "v_ref", "w_normal", "w_depth", "depth_scale",
                              "include_far_edges", "focus_threshold"},
                             "config.mask");
        cfg.mask.n_max = p.value("n_max", cfg.mask.n_max);
        cfg.mask.n_min = p.value("n_min", cfg.mask.n_min);
        cfg.mask.v_ref = p.value("v_ref", cfg.mask.v_ref);
        cfg.mask.w_normal = p.value("w_normal", cfg.mask.w_normal);
        cfg.mask.w_depth = p.value("w_depth", cfg.mask.w_depth);
        cfg.mask.depth_scale = p.value("depth_scale", cfg.mask.depth_scale);
        cfg.mask.include_far_edges = p.value("include_far_edges", false);
        cfg.mask.focus_threshold = p.value("focus_threshold", cfg.mask.focus_threshold);
    }
    if (j.contains("trace")) {
        const auto& p = j["trace"];
        detail::require_keys(p, {"transition_scale", "hard_split", "misses_in_far"},
                             "config.trace");
        cfg.trace.transition_scale = p.value("transition_scale", cfg.trace.transition_scale);
        cfg.trace.hard_split = p.value("hard_split", false);
        cfg.trace.misses_in_far = p.value("misses_in_far", true);
    }
    if (j.contains("temporal")) {
        const auto& p = j["temporal"];
        detail::require_keys(p, {"alpha", "alpha_h", "eps", "age_max", "strict_rejection"},
                             "config.temporal");
        cfg.temporal.alpha = p.value("alpha", cfg.temporal.alpha);
        cfg.temporal.alpha_h = p.value("alpha_h", cfg.temporal.alpha_h);
        cfg.temporal.eps = p.value("eps", cfg.temporal.eps);
        cfg.temporal.age_max = p.value("age_max", cfg.temporal.age_max);
        cfg.temporal.strict_rejection = p.value("strict_rejection", false);
    }
    if (j.contains("spatial")) {
        const auto& p = j["spatial"];
        detail::require_keys(p, {"v_clamp", "r_max"}, "config.spatial");
        cfg.spatial.v_clamp = p.value("v_clamp", cfg.spatial.v_clamp);
        cfg.spatial.r_max = p.value("r_max", cfg.spatial.r_max);
    }
    if (j.contains("composite")) {
        const auto& p = j["composite"];
        detail::require_keys(p,
                             {"focus_threshold", "coc_is_diameter", "h_threshold",
                              "specular_scale", "use_accumulated_h"},
                             "config.composite");
        cfg.composite.focus_threshold =
            p.value("focus_threshold", cfg.composite.focus_threshold);
        cfg.composite.coc_is_diameter = p.value("coc_is_diameter", false);
        cfg.composite.h_threshold = p.value("h_threshold", cfg.composite.h_threshold);
        cfg.composite.specular_scale = p.value("specular_scale", cfg.composite.specular_scale);
        cfg.composite.use_accumulated_h = p.value("use_accumulated_h", false);
    }

    cfg.trace.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

}  // namespace lensfield
