#pragma once

#include <cmath>

#include "lensfield/gbuffer.hpp"
#include "lensfield/image.hpp"
#include "lensfield/parallel.hpp"
#include "lensfield/postprocess.hpp"
#include "lensfield/temporal.hpp"

namespace lensfield {

struct CompositeParams {
    double focus_threshold = kFocusCocDefault;  // CoC px
    bool coc_is_diameter = false;  // compare 2|r| against the threshold instead
    double h_threshold = 0.7;      // far blend knee (theta)
    double specular_scale = 4.0;   // k in s = clamp(k * spec_intensity, 0, 1)
    bool use_accumulated_h = false;
};

enum class Zone : uint8_t { focus, near, far };

// Deterministic zone label. Near takes precedence over far inside
// mask-eligible near tiles so traced silhouette semi-transparency can cover
// background pixels under the blur.
inline Zone zone_classify(float signed_coc, float tile_max_abs, bool near_tile_eligible,
                          const CompositeParams& params = {}) {
    double scale = params.coc_is_diameter ? 2.0 : 1.0;
    if (scale * std::fabs(signed_coc) < params.focus_threshold &&
        scale * tile_max_abs < params.focus_threshold)
        return Zone::focus;
    if (signed_coc < 0.0f || near_tile_eligible)
        return Zone::near;
    return Zone::far;
}

// Zone rules: focus -> sharp color bit-exactly; near -> ray-trace color with
// a specular-intensity lerp toward the post-process color; far -> hit-ratio
// blend that reaches pure post-process at h >= theta. Pixels without valid
// reconstruction data fall back to the post-process color.
inline Image<Color3> composite(const GBuffer& gb, const CocMap& coc, const Image<Color3>& pp,
                               const ReconstructionFrame& recon, const Image<Color3>& rt_color,
                               const Image<float>& spec_intensity,
                               const Image<uint8_t>& near_eligible,
                               const CompositeParams& params = {}, int threads = 1) {
    Image<Color3> out(gb.width, gb.height);
    parallel_rows(gb.height, threads, [&](int y) {
        for (int x = 0; x < gb.width; ++x) {
            float r = coc.signed_coc.at(x, y);
            Zone zone = zone_classify(r, coc.tile_abs_at(x, y),
                                      near_eligible.at(x, y) != 0, params);
            Color3 result;
            switch (zone) {
                case Zone::focus:
                    result = gb.color.at(x, y);
                    break;
                case Zone::near: {
                    if (!recon.valid.at(x, y)) {
                        result = pp.at(x, y);
                        break;
                    }
                    float s = clampf(
                        static_cast<float>(params.specular_scale) * spec_intensity.at(x, y),
                        0.0f, 1.0f);
                    result = lerp(rt_color.at(x, y), pp.at(x, y), s);
                    break;
                }
                case Zone::far: {
                    if (!recon.valid.at(x, y)) {
                        result = pp.at(x, y);
                        break;
                    }
                    float h = params.use_accumulated_h ? recon.acc_h.at(x, y)
                                                       : recon.latest_h.at(x, y);
                    float t = clampf(h / static_cast<float>(params.h_threshold), 0.0f, 1.0f);
                    result = t >= 1.0f ? pp.at(x, y)
                                       : lerp(rt_color.at(x, y), pp.at(x, y), t);
                    break;
                }
            }
            out.at(x, y) = {std::fmax(result.r, 0.0f), std::fmax(result.g, 0.0f),
                            std::fmax(result.b, 0.0f)};
        }
    });
    return out;
}

// Near-tile eligibility expanded to pixels: blur above the focus threshold
// with near-field presence in the dilated tile neighborhood. Drives the
// compositor's near-zone coverage.
inline Image<uint8_t> near_eligibility(const CocMap& coc, double focus_threshold) {
    int width = coc.signed_coc.width(), height = coc.signed_coc.height();
    Image<uint8_t> out(width, height, 0);
    float thr = static_cast<float>(focus_threshold);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) =
                coc.tile_abs_at(x, y) >= thr && coc.tile_near_at(x, y) >= thr ? 1 : 0;
    return out;
}

}  // namespace lensfield
