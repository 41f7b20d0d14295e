#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "lensfield/image.hpp"
#include "lensfield/parallel.hpp"
#include "lensfield/postprocess.hpp"
#include "lensfield/ray_mask.hpp"

namespace lensfield {

struct SpatialParams {
    double v_clamp = 0.01;  // variance that saturates the blend factor
    double r_max = 32.0;    // kernel clamp, px
};

// Box-filtered half-resolution chain of the reconstruction color; level k
// pixel is the mean of its (edge-clamped) 2x2 children.
struct MipPyramid {
    std::vector<Image<Color3>> levels;

    static MipPyramid build(const Image<Color3>& base, int level_count) {
        MipPyramid pyr;
        pyr.levels.push_back(base);
        for (int l = 1; l <= level_count; ++l) {
            const Image<Color3>& prev = pyr.levels.back();
            if (prev.width() <= 1 && prev.height() <= 1)
                break;
            int w = std::max(1, prev.width() / 2);
            int h = std::max(1, prev.height() / 2);
            Image<Color3> level(w, h);
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    Color3 sum = prev.at_clamped(2 * x, 2 * y) +
                                 prev.at_clamped(2 * x + 1, 2 * y) +
                                 prev.at_clamped(2 * x, 2 * y + 1) +
                                 prev.at_clamped(2 * x + 1, 2 * y + 1);
                    level.at(x, y) = sum * 0.25f;
                }
            }
            pyr.levels.push_back(std::move(level));
        }
        return pyr;
    }

    int max_level() const { return static_cast<int>(levels.size()) - 1; }

    // Bilinear fetch at base-resolution pixel coordinates.
    Color3 sample(int level, double base_px, double base_py) const {
        double scale = 1.0 / (1 << level);
        return bilinear(levels[level], base_px * scale, base_py * scale);
    }
};

inline int pyramid_levels_for(double r_max) {
    return std::max(0, static_cast<int>(std::floor(std::log2(std::fmax(r_max, 1.0)))));
}

// Optional per-tap probe for tests: (x, y, tap value, distance, tap CoC,
// survived).
using SpatialTapProbe =
    std::function<void(int, int, Color3, double, float, bool)>;

// CoC-scaled 16-tap circular gather over the mip pyramid for masked pixels.
// Taps whose own gather CoC is smaller than their distance to the center are
// rejected; the result is blended in by the clamped variance estimate so
// converged pixels pass through untouched.
inline Image<Color3> spatial_gather(const Image<Color3>& rt_resolved, const MipPyramid& pyramid,
                                    const Image<float>& coc_gather, const Image<float>& variance,
                                    const RayBudget& mask, const SpatialParams& params = {},
                                    int frame = 0, int threads = 1,
                                    const SpatialTapProbe* probe = nullptr) {
    constexpr int kRingTaps[2] = {6, 10};
    int width = rt_resolved.width(), height = rt_resolved.height();
    int top_level = pyramid.max_level();
    Image<Color3> out(width, height);
    parallel_rows(height, threads, [&](int y) {
        for (int x = 0; x < width; ++x) {
            Color3 center = rt_resolved.at(x, y);
            if (mask.rays.at(x, y) == 0) {
                out.at(x, y) = center;
                continue;
            }
            double radius = clamp(coc_gather.at(x, y), 0.0, params.r_max);
            double lod_f = radius > 0.0 ? std::log2(radius / 4.0) : 0.0;
            int lod = std::clamp(static_cast<int>(std::floor(lod_f)), 0, top_level);
            double phase =
                kGoldenAngle * (static_cast<double>(y) * width + x + frame * 61.0);
            Color3 sum = center;
            int taps = 1;
            for (int ring = 0; ring < 2; ++ring) {
                double ring_r = radius * (ring + 1) / 2.0;
                for (int j = 0; j < kRingTaps[ring]; ++j) {
                    double angle = phase + 2.0 * std::numbers::pi * j / kRingTaps[ring] +
                                   ring * 0.7;
                    double fx = x + 0.5 + ring_r * std::cos(angle);
                    double fy = y + 0.5 + ring_r * std::sin(angle);
                    int ix = static_cast<int>(std::floor(fx));
                    int iy = static_cast<int>(std::floor(fy));
                    if (ix < 0 || iy < 0 || ix >= width || iy >= height)
                        continue;
                    float tap_coc = coc_gather.at(ix, iy);
                    bool survives = tap_coc >= static_cast<float>(ring_r);
                    Color3 value{};
                    if (survives) {
                        value = pyramid.sample(lod, fx, fy);
                        sum = sum + value;
                        ++taps;
                    }
                    if (probe && *probe)
                        (*probe)(x, y, value, ring_r, tap_coc, survives);
                }
            }
            Color3 gathered = sum * (1.0f / taps);
            float beta = static_cast<float>(clamp(variance.at(x, y) / params.v_clamp, 0.0, 1.0));
            out.at(x, y) = lerp(center, gathered, beta);
        }
    });
    return out;
}

}  // namespace lensfield
