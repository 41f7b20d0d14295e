#pragma once

#include <cmath>
#include <stdexcept>

#include "lensfield/camera.hpp"
#include "lensfield/image.hpp"
#include "lensfield/intersect.hpp"
#include "lensfield/parallel.hpp"
#include "lensfield/ray_mask.hpp"
#include "lensfield/rng.hpp"

namespace lensfield {

struct TraceParams {
    double transition_scale = 0.02;  // T >= transition_scale * z_f
    bool hard_split = false;         // step at z_f instead of smoothstep
    bool misses_in_far = true;       // environment misses count as far hits
    bool jitter = true;              // sub-pixel jitter on lens rays
    uint64_t seed = 0;
};

// Near-field contribution of a hit at view depth z: smoothstep falloff
// across [z_f - T, z_f + T].
inline double near_weight(double z, double focus_distance, double transition_half_width) {
    double t = clamp((z - (focus_distance - transition_half_width)) /
                         (2.0 * transition_half_width),
                     0.0, 1.0);
    return 1.0 - t * t * (3.0 - 2.0 * t);
}

// T = max(scale * z_f, depth equivalent of 1 px of CoC at the focus plane).
inline double transition_half_width(const LensCamera& cam, double scale = 0.02) {
    double t = scale * cam.focus_distance;
    double coc_slope = coc_radius_limit(cam);  // d|coc|/dz at z_f is limit / z_f
    if (coc_slope > 0.0)
        t = std::fmax(t, cam.focus_distance / coc_slope);
    return t;
}

// Per-pixel distributed ray-trace output, split across the focus plane.
struct FieldSample {
    Color3 near_color, far_color;  // weighted means
    float hit_ratio = 0.0f;
    float near_coc = 0.0f, far_coc = 0.0f;  // weighted mean |CoC|, px
    Vec3 far_pos;                  // weighted mean far hit position
    bool far_pos_valid = false;
    int rays = 0;
};

// Traces n lens rays for one pixel with stratified lens samples and shared
// G-buffer shading. Accumulation in double keeps the near/far split's energy
// identity tight.
inline FieldSample trace_pixel(int x, int y, int frame, int n, const FrameScene& fs,
                               const LensCamera& cam, const TraceParams& params) {
    if (n < 1)
        throw std::invalid_argument("trace_pixel: ray count must be >= 1");
    double z_f = cam.focus_distance;
    double half_width = transition_half_width(cam, params.transition_scale);
    double coc_background = coc_radius_limit(cam);

    int grid_x = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    int grid_y = (n + grid_x - 1) / grid_x;

    double sum_w = 0.0, sum_fw = 0.0;
    double near_c[3] = {}, far_c[3] = {};
    double near_coc = 0.0, far_coc = 0.0;
    double far_pos[3] = {};
    double far_pos_w = 0.0;
    int denominator = 0;

    for (int s = 0; s < n; ++s) {
        double jx = 0.5, jy = 0.5;
        if (params.jitter) {
            jx = rand01(params.seed, x, y, frame, s, 0);
            jy = rand01(params.seed, x, y, frame, s, 1);
        }
        double u = (s % grid_x + rand01(params.seed, x, y, frame, s, 2)) / grid_x;
        double v = (s / grid_x + rand01(params.seed, x, y, frame, s, 3)) / grid_y;
        Ray ray = generate_lens_ray(cam, x + jx, y + jy, sample_lens_disk(u, v));
        HitRecord hit = intersect(ray, fs, cam);
        double w;
        double coc;
        if (hit.hit) {
            w = params.hard_split ? (hit.view_depth < z_f ? 1.0 : 0.0)
                                  : near_weight(hit.view_depth, z_f, half_width);
            coc = std::abs(coc_radius(hit.view_depth, cam));
        } else {
            if (!params.misses_in_far)
                continue;  // misses-excluded variant
            w = 0.0;
            coc = coc_background;
        }
        ++denominator;
        Color3 c = hit.shaded;
        sum_w += w;
        sum_fw += 1.0 - w;
        near_c[0] += c.r * w;
        near_c[1] += c.g * w;
        near_c[2] += c.b * w;
        far_c[0] += c.r * (1.0 - w);
        far_c[1] += c.g * (1.0 - w);
        far_c[2] += c.b * (1.0 - w);
        near_coc += coc * w;
        far_coc += coc * (1.0 - w);
        if (hit.hit && w < 1.0) {
            far_pos[0] += hit.position.x * (1.0 - w);
            far_pos[1] += hit.position.y * (1.0 - w);
            far_pos[2] += hit.position.z * (1.0 - w);
            far_pos_w += 1.0 - w;
        }
    }

    FieldSample out;
    out.rays = n;
    if (denominator == 0)
        return out;  // every ray missed in the misses-excluded variant
    out.hit_ratio = static_cast<float>(sum_w / denominator);
    if (sum_w > 0.0) {
        out.near_color = {static_cast<float>(near_c[0] / sum_w),
                          static_cast<float>(near_c[1] / sum_w),
                          static_cast<float>(near_c[2] / sum_w)};
        out.near_coc = static_cast<float>(near_coc / sum_w);
    }
    if (sum_fw > 0.0) {
        out.far_color = {static_cast<float>(far_c[0] / sum_fw),
                         static_cast<float>(far_c[1] / sum_fw),
                         static_cast<float>(far_c[2] / sum_fw)};
        out.far_coc = static_cast<float>(far_coc / sum_fw);
    }
    if (far_pos_w > 1e-6) {
        out.far_pos = {far_pos[0] / far_pos_w, far_pos[1] / far_pos_w,
                       far_pos[2] / far_pos_w};
        out.far_pos_valid = true;
    }
    return out;
}

// Traces every pixel the mask selected. Untraced pixels keep rays = 0.
inline Image<FieldSample> trace_masked(const RayBudget& budget, int frame,
                                       const FrameScene& fs, const LensCamera& cam,
                                       const TraceParams& params, int threads = 1) {
    Image<FieldSample> out(cam.width, cam.height);
    parallel_rows(cam.height, threads, [&](int y) {
        for (int x = 0; x < cam.width; ++x) {
            int n = budget.rays.at(x, y);
            if (n > 0)
                out.at(x, y) = trace_pixel(x, y, frame, n, fs, cam, params);
        }
    });
    return out;
}

// Brute-force thin-lens reference: every pixel traced at spp stratified lens
// rays, plain average. Double accumulation makes the pinhole degenerate case
// (aperture 0, jitter off) reproduce the sharp image bit-exactly.
inline Image<Color3> trace_reference(const FrameScene& fs, const LensCamera& cam, int spp,
                                     const TraceParams& params = {}, int threads = 1,
                                     int frame = 0) {
    if (spp < 1)
        throw std::invalid_argument("trace_reference: spp must be >= 1");
    Image<Color3> out(cam.width, cam.height);
    int grid_x = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spp))));
    int grid_y = (spp + grid_x - 1) / grid_x;
    parallel_rows(cam.height, threads, [&](int y) {
        for (int x = 0; x < cam.width; ++x) {
            double acc[3] = {};
            for (int s = 0; s < spp; ++s) {
                double jx = 0.5, jy = 0.5;
                if (params.jitter) {
                    jx = rand01(params.seed, x, y, frame, s, 0);
                    jy = rand01(params.seed, x, y, frame, s, 1);
                }
                double u = (s % grid_x + rand01(params.seed, x, y, frame, s, 2)) / grid_x;
                double v = (s / grid_x + rand01(params.seed, x, y, frame, s, 3)) / grid_y;
                Ray ray = generate_lens_ray(cam, x + jx, y + jy, sample_lens_disk(u, v));
                Color3 c = intersect(ray, fs, cam).shaded;
                acc[0] += c.r;
                acc[1] += c.g;
                acc[2] += c.b;
            }
            out.at(x, y) = {static_cast<float>(acc[0] / spp),
                            static_cast<float>(acc[1] / spp),
                            static_cast<float>(acc[2] / spp)};
        }
    });
    return out;
}

}  // namespace lensfield
