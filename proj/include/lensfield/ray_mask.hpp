#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "lensfield/gbuffer.hpp"
#include "lensfield/image.hpp"
#include "lensfield/parallel.hpp"
#include "lensfield/postprocess.hpp"

namespace lensfield {

struct MaskParams {
    int n_max = 8;
    int n_min = 2;
    double v_ref = 0.05;        // variance that saturates the budget
    double w_normal = 1.0;      // Sobel weight on normal dissimilarity
    double w_depth = 1.0;       // Sobel weight on inverse depth
    double depth_scale = 100.0; // scale on the inverse-depth gradient
    double focus_threshold = kFocusCocDefault;
    bool include_far_edges = false;  // widen eligibility beyond near-field tiles
};

// Denoised edge inputs: Gaussian-filtered normals and inverse view depth.
struct FilteredGBuffer {
    Image<Vec3> normal;
    Image<float> inv_depth;
};

// 5x5 Gaussian (sigma = 1) on normals and inverse depth; normals are
// renormalized, zero vectors stay zero. Inverse depth keeps the infinite
// background bounded.
inline FilteredGBuffer gaussian_filter_gbuffer(const GBuffer& gb, int threads = 1) {
    std::array<double, 5> k;
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
        k[i] = std::exp(-0.5 * (i - 2) * (i - 2));
        sum += k[i];
    }
    for (double& w : k)
        w /= sum;

    FilteredGBuffer out;
    out.normal = Image<Vec3>(gb.width, gb.height);
    out.inv_depth = Image<float>(gb.width, gb.height);
    Image<Vec3> tmp_n(gb.width, gb.height);
    Image<float> tmp_d(gb.width, gb.height);
    auto inv_z = [&](int x, int y) {
        float z = gb.depth.at_clamped(x, y);
        return std::isinf(z) ? 0.0f : 1.0f / z;
    };
    parallel_rows(gb.height, threads, [&](int y) {  // horizontal pass
        for (int x = 0; x < gb.width; ++x) {
            Vec3 n{};
            double d = 0.0;
            for (int i = -2; i <= 2; ++i) {
                n += gb.normal.at_clamped(x + i, y) * k[i + 2];
                d += inv_z(x + i, y) * k[i + 2];
            }
            tmp_n.at(x, y) = n;
            tmp_d.at(x, y) = static_cast<float>(d);
        }
    });
    parallel_rows(gb.height, threads, [&](int y) {  // vertical pass
        for (int x = 0; x < gb.width; ++x) {
            Vec3 n{};
            double d = 0.0;
            for (int i = -2; i <= 2; ++i) {
                n += tmp_n.at_clamped(x, y + i) * k[i + 2];
                d += tmp_d.at_clamped(x, y + i) * k[i + 2];
            }
            double len = length(n);
            out.normal.at(x, y) = len > 1e-6 ? n / len : Vec3{};
            out.inv_depth.at(x, y) = static_cast<float>(d);
        }
    });
    return out;
}

// Per-pixel edge magnitude in [0,1]: Sobel responses over normal
// dissimilarity (relative to the center pixel's normal) plus scaled inverse
// depth.
inline Image<float> sobel_edges(const FilteredGBuffer& in, const MaskParams& params = {},
                                int threads = 1) {
    static constexpr int sx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static constexpr int sy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    int width = in.normal.width(), height = in.normal.height();
    Image<float> out(width, height);
    parallel_rows(height, threads, [&](int y) {
        for (int x = 0; x < width; ++x) {
            Vec3 n0 = in.normal.at(x, y);
            double gnx = 0, gny = 0, gdx = 0, gdy = 0;
            for (int j = -1; j <= 1; ++j) {
                for (int i = -1; i <= 1; ++i) {
                    double dissim = 1.0 - dot(in.normal.at_clamped(x + i, y + j), n0);
                    double inv_z = in.inv_depth.at_clamped(x + i, y + j);
                    gnx += sx[j + 1][i + 1] * dissim;
                    gny += sy[j + 1][i + 1] * dissim;
                    gdx += sx[j + 1][i + 1] * inv_z;
                    gdy += sy[j + 1][i + 1] * inv_z;
                }
            }
            double g_n = std::sqrt(gnx * gnx + gny * gny);
            double g_d = std::sqrt(gdx * gdx + gdy * gdy) * params.depth_scale;
            out.at(x, y) =
                static_cast<float>(clamp(params.w_normal * g_n + params.w_depth * g_d, 0.0, 1.0));
        }
    });
    return out;
}

// Per-pixel lens-ray budget plus the diagnostic fields that produced it.
struct RayBudget {
    Image<uint16_t> rays;
    Image<float> edge;             // edge magnitude input
    Image<float> variance_weight;  // clamped variance term
    long total_rays = 0;
};

// Budget rule: w = max(edge, clamp(var/v_ref, 0, 1)), forced to 1 for
// eligible pixels with no history; eligible pixels with w > 0 get
// clamp(round(w * n_max), n_min, n_max) rays, everything else gets none.
// Eligibility requires blur above the focus threshold and near-field
// presence in the dilated tile neighborhood.
inline RayBudget build_ray_budget(const Image<float>& edges, const Image<float>& variance,
                                  const CocMap& coc, const Image<uint8_t>& history_valid,
                                  const MaskParams& params = {}) {
    if (!edges.same_size(variance) || !edges.same_size(coc.signed_coc) ||
        !edges.same_size(history_valid))
        throw std::invalid_argument("build_ray_budget: field resolutions differ");
    int width = edges.width(), height = edges.height();
    RayBudget budget;
    budget.rays = Image<uint16_t>(width, height, 0);
    budget.edge = edges;
    budget.variance_weight = Image<float>(width, height, 0.0f);
    float thr = static_cast<float>(params.focus_threshold);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            float vw = static_cast<float>(clamp(variance.at(x, y) / params.v_ref, 0.0, 1.0));
            budget.variance_weight.at(x, y) = vw;
            bool eligible = coc.tile_abs_at(x, y) >= thr &&
                            (params.include_far_edges || coc.tile_near_at(x, y) >= thr);
            if (!eligible)
                continue;
            double w = std::fmax(edges.at(x, y), vw);
            if (!history_valid.at(x, y))
                w = 1.0;  // newly masked region: full budget
            if (w <= 0.0)
                continue;
            int n = static_cast<int>(std::lround(w * params.n_max));
            n = std::clamp(n, params.n_min, params.n_max);
            budget.rays.at(x, y) = static_cast<uint16_t>(n);
            budget.total_rays += n;
        }
    }
    return budget;
}

}  // namespace lensfield
