#pragma once

#include <cmath>
#include <numbers>

#include "lensfield/camera.hpp"
#include "lensfield/gbuffer.hpp"
#include "lensfield/image.hpp"
#include "lensfield/parallel.hpp"

namespace lensfield {

constexpr double kFocusCocDefault = 1.4142135623730951;  // sqrt(2) px
constexpr double kGoldenAngle = 2.3999632297286533;

// Per-pixel signed CoC radius plus per-tile maxima (8x8 tiles by default,
// dilated by one tile ring). Tile queries are exposed per pixel.
struct CocMap {
    Image<float> signed_coc;
    int tile_size = 8;
    Image<float> tile_max_abs;   // dilated
    Image<float> tile_max_near;  // dilated, |coc| over near-field pixels only

    float tile_abs_at(int x, int y) const {
        return tile_max_abs.at(x / tile_size, y / tile_size);
    }
    float tile_near_at(int x, int y) const {
        return tile_max_near.at(x / tile_size, y / tile_size);
    }
};

inline CocMap build_coc_map(const GBuffer& gb, const LensCamera& cam, int tile_size = 8) {
    CocMap map;
    map.tile_size = tile_size;
    map.signed_coc = Image<float>(gb.width, gb.height);
    float background_coc = static_cast<float>(coc_radius_limit(cam));
    for (int y = 0; y < gb.height; ++y) {
        for (int x = 0; x < gb.width; ++x) {
            float z = gb.depth.at(x, y);
            map.signed_coc.at(x, y) =
                std::isinf(z) ? background_coc : static_cast<float>(coc_radius(z, cam));
        }
    }
    int tiles_x = (gb.width + tile_size - 1) / tile_size;
    int tiles_y = (gb.height + tile_size - 1) / tile_size;
    Image<float> raw_abs(tiles_x, tiles_y, 0.0f);
    Image<float> raw_near(tiles_x, tiles_y, 0.0f);
    for (int y = 0; y < gb.height; ++y) {
        for (int x = 0; x < gb.width; ++x) {
            float r = map.signed_coc.at(x, y);
            float& a = raw_abs.at(x / tile_size, y / tile_size);
            a = std::fmax(a, std::fabs(r));
            if (r < 0.0f) {
                float& n = raw_near.at(x / tile_size, y / tile_size);
                n = std::fmax(n, -r);
            }
        }
    }
    map.tile_max_abs = Image<float>(tiles_x, tiles_y);
    map.tile_max_near = Image<float>(tiles_x, tiles_y);
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            float ma = 0.0f, mn = 0.0f;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    ma = std::fmax(ma, raw_abs.at_clamped(tx + dx, ty + dy));
                    mn = std::fmax(mn, raw_near.at_clamped(tx + dx, ty + dy));
                }
            }
            map.tile_max_abs.at(tx, ty) = ma;
            map.tile_max_near.at(tx, ty) = mn;
        }
    }
    return map;
}

struct PostprocessParams {
    double r_max = 32.0;  // kernel clamp, px
    double focus_threshold = kFocusCocDefault;
};

namespace detail {

constexpr int kPpRingTaps[3] = {8, 16, 24};  // 48 taps total

// Circular scatter-as-gather over an arbitrary per-pixel source. Taps whose
// own CoC cannot reach the center are rejected; near-field taps use the
// dilated near-tile CoC, which reproduces the baseline's foreground overblur.
// Pixels inside the focus threshold copy the source value untouched.
template <typename Out, typename Fetch>
inline Image<Out> gather_blur(const CocMap& coc, const PostprocessParams& params,
                              int width, int height, int threads, Fetch&& fetch) {
    Image<Out> out(width, height);
    parallel_rows(height, threads, [&](int y) {
        for (int x = 0; x < width; ++x) {
            float radius = std::fmin(coc.tile_abs_at(x, y), static_cast<float>(params.r_max));
            if (radius < static_cast<float>(params.focus_threshold)) {
                out.at(x, y) = fetch(x, y);
                continue;
            }
            double phase = kGoldenAngle * (static_cast<double>(y) * width + x);
            Out sum = fetch(x, y);  // center tap always survives
            int taps = 1;
            for (int ring = 0; ring < 3; ++ring) {
                double ring_r = radius * (ring + 1) / 3.0;
                int count = kPpRingTaps[ring];
                for (int j = 0; j < count; ++j) {
                    double angle = phase + 2.0 * std::numbers::pi * j / count + ring * 0.5;
                    int tx = static_cast<int>(std::floor(x + 0.5 + ring_r * std::cos(angle)));
                    int ty = static_cast<int>(std::floor(y + 0.5 + ring_r * std::sin(angle)));
                    if (tx < 0 || ty < 0 || tx >= width || ty >= height)
                        continue;
                    float tap_coc = coc.signed_coc.at(tx, ty);
                    float reach = tap_coc < 0.0f ? coc.tile_near_at(tx, ty) : tap_coc;
                    if (reach < static_cast<float>(ring_r))
                        continue;
                    sum = sum + fetch(tx, ty);
                    ++taps;
                }
            }
            out.at(x, y) = sum * (1.0f / taps);
        }
    });
    return out;
}

}  // namespace detail

// Full-frame gather DoF over the sharp image — the post-process baseline and
// the far-field fallback of the composite.
inline Image<Color3> postprocess_blur(const GBuffer& gb, const CocMap& coc,
                                      const PostprocessParams& params = {},
                                      int threads = 1) {
    return detail::gather_blur<Color3>(coc, params, gb.width, gb.height, threads,
                                       [&](int x, int y) { return gb.color.at(x, y); });
}

// Luminance of the specular channel after the same gather kernel, so bokeh
// disks of bright highlights register at every pixel they cover.
inline Image<float> specular_intensity(const GBuffer& gb, const CocMap& coc,
                                       const PostprocessParams& params = {},
                                       int threads = 1) {
    return detail::gather_blur<float>(coc, params, gb.width, gb.height, threads,
                                      [&](int x, int y) {
                                          return luminance(gb.specular.at(x, y));
                                      });
}

}  // namespace lensfield
