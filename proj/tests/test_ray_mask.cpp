#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_scenes.hpp"

using namespace lensfield;
using namespace lensfield::testing;

namespace {

GBuffer wall_gbuffer(int w, int h, double depth) {
    GBuffer gb(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            gb.color.at(x, y) = {0.5f, 0.5f, 0.5f};
            gb.depth.at(x, y) = static_cast<float>(depth);
            gb.normal.at(x, y) = {0, 0, -1};
        }
    return gb;
}

std::array<double, 5> gaussian_kernel_oracle() {
    std::array<double, 5> k;
    double sum = 0;
    for (int i = 0; i < 5; ++i) {
        k[i] = std::exp(-0.5 * (i - 2) * (i - 2));
        sum += k[i];
    }
    for (double& v : k)
        v /= sum;
    return k;
}

}  // namespace

TEST_CASE("gaussian_filter: constant fields are unchanged, kernel integrates to one") {
    GBuffer gb = wall_gbuffer(48, 40, 3.0);
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 2);
    for (int y = 0; y < gb.height; ++y)
        for (int x = 0; x < gb.width; ++x) {
            CHECK(length(filtered.normal.at(x, y) - Vec3{0, 0, -1}) < 1e-9);
            CHECK(filtered.inv_depth.at(x, y) ==
                  doctest::Approx(1.0 / 3.0).epsilon(1e-6));
        }
    auto k = gaussian_kernel_oracle();
    double sum = 0;
    for (double v : k)
        sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gaussian_filter: depth impulse spreads with the separable 5x5 weights") {
    GBuffer gb = wall_gbuffer(32, 32, 2.0);
    gb.depth.at(16, 16) = 1.0f;  // inverse depth impulse: 1.0 vs 0.5 background
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 1);
    auto k = gaussian_kernel_oracle();
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
            double expected = 0.5 + 0.5 * k[dx + 2] * k[dy + 2];
            CHECK(filtered.inv_depth.at(16 + dx, 16 + dy) ==
                  doctest::Approx(expected).epsilon(1e-5));
        }
    CHECK(filtered.inv_depth.at(16 + 3, 16) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("sobel_edges: zero on a uniform facing plane") {
    GBuffer gb = wall_gbuffer(40, 30, 2.5);
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 1);
    Image<float> edges = sobel_edges(filtered, {}, 1);
    for (int y = 0; y < gb.height; ++y)
        for (int x = 0; x < gb.width; ++x)
            CHECK(edges.at(x, y) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("sobel_edges: vertical depth step responds in a narrow band") {
    GBuffer gb = wall_gbuffer(64, 32, 4.0);
    for (int y = 0; y < gb.height; ++y)
        for (int x = 32; x < gb.width; ++x)
            gb.depth.at(x, y) = 1.0f;
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 1);
    Image<float> edges = sobel_edges(filtered, {}, 1);
    int y = 16;
    CHECK(edges.at(31, y) > 0.5f);
    CHECK(edges.at(32, y) > 0.5f);
    // the Gaussian prefilter widens the support; 6 px away it must be gone
    CHECK(edges.at(24, y) == doctest::Approx(0.0).epsilon(1e-5));
    CHECK(edges.at(40, y) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("sobel_edges: hand-evaluated 3x3 normal corner") {
    // normals tilt on the right half; the filtered field is fed straight in
    FilteredGBuffer in;
    int w = 9, h = 9;
    in.normal = Image<Vec3>(w, h, Vec3{0, 0, -1});
    in.inv_depth = Image<float>(w, h, 0.25f);
    Vec3 tilted = normalize(Vec3{0.5, 0, -1});
    for (int y = 0; y < h; ++y)
        for (int x = 5; x < w; ++x)
            in.normal.at(x, y) = tilted;
    MaskParams params;
    Image<float> edges = sobel_edges(in, params, 1);

    // manual convolution at (4,4): dissimilarity field d(q) = 1 - n(q).n0
    double d_tilted = 1.0 - dot(tilted, Vec3{0, 0, -1});
    // sobel-x over the 3x3 block: columns -1,0,+1 -> weights sum 1+2+1 on +x side
    double gx = d_tilted * (1 + 2 + 1);
    double expected = std::sqrt(gx * gx);  // gy = 0 by symmetry
    CHECK(edges.at(4, 4) ==
          doctest::Approx(clamp(params.w_normal * expected, 0.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("build_ray_budget: in-focus frame gets no rays") {
    SceneFile sf = in_focus_wall_scene();
    LensCamera cam = scene_camera(sf);
    FrameScene fs = FrameScene::build(sf.scene, 0);
    GBuffer gb = render_gbuffer(fs, cam, 2);
    CocMap coc = build_coc_map(gb, cam);
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 2);
    Image<float> edges = sobel_edges(filtered, {}, 2);
    Image<float> variance(cam.width, cam.height, 1.0f);  // even with huge variance
    Image<uint8_t> valid(cam.width, cam.height, 0);
    RayBudget budget = build_ray_budget(edges, variance, coc, valid, {});
    CHECK(budget.total_rays == 0);
}

TEST_CASE("build_ray_budget: arithmetic of the stated formula") {
    SceneFile sf = two_quads_scene();
    LensCamera cam = scene_camera(sf);
    FrameScene fs = FrameScene::build(sf.scene, 0);
    GBuffer gb = render_gbuffer(fs, cam, 2);
    CocMap coc = build_coc_map(gb, cam);
    // pick a pixel on the near quad, well inside an eligible tile
    int px = 58, py = 60;
    REQUIRE(coc.signed_coc.at(px, py) < -kFocusCocDefault);

    Image<float> edges(cam.width, cam.height, 0.0f);
    Image<float> variance(cam.width, cam.height, 0.0f);
    Image<uint8_t> valid(cam.width, cam.height, 1);
    MaskParams params;

    SUBCASE("edge = 1 saturates to n_max") {
        edges.at(px, py) = 1.0f;
        RayBudget b = build_ray_budget(edges, variance, coc, valid, params);
        CHECK(b.rays.at(px, py) == params.n_max);
    }
    SUBCASE("variance at v_ref/2 gives half the budget") {
        variance.at(px, py) = static_cast<float>(params.v_ref / 2.0);
        RayBudget b = build_ray_budget(edges, variance, coc, valid, params);
        CHECK(b.rays.at(px, py) == 4);  // round(0.5 * 8)
    }
    SUBCASE("zero signals give zero rays even in an eligible tile") {
        RayBudget b = build_ray_budget(edges, variance, coc, valid, params);
        CHECK(b.rays.at(px, py) == 0);
    }
    SUBCASE("invalid history forces the full budget") {
        Image<uint8_t> invalid(cam.width, cam.height, 0);
        RayBudget b = build_ray_budget(edges, variance, coc, invalid, params);
        CHECK(b.rays.at(px, py) == params.n_max);
    }
    SUBCASE("tiny weights are floored at n_min") {
        variance.at(px, py) = static_cast<float>(params.v_ref * 0.01);
        RayBudget b = build_ray_budget(edges, variance, coc, valid, params);
        CHECK(b.rays.at(px, py) == params.n_min);
    }
}

TEST_CASE("build_ray_budget: monotone in edge and variance") {
    SceneFile sf = two_quads_scene();
    LensCamera cam = scene_camera(sf);
    FrameScene fs = FrameScene::build(sf.scene, 0);
    GBuffer gb = render_gbuffer(fs, cam, 2);
    CocMap coc = build_coc_map(gb, cam);
    Image<uint8_t> valid(cam.width, cam.height, 1);
    Image<float> e1(cam.width, cam.height, 0.0f), e2(cam.width, cam.height, 0.0f);
    Image<float> v1(cam.width, cam.height, 0.0f), v2(cam.width, cam.height, 0.0f);
    for (int y = 0; y < cam.height; ++y)
        for (int x = 0; x < cam.width; ++x) {
            float a = static_cast<float>(rand01(41, x, y, 0, 0, 0));
            float b = static_cast<float>(rand01(41, x, y, 1, 0, 0));
            e1.at(x, y) = a * 0.5f;
            e2.at(x, y) = a * 0.5f + b * 0.5f;
            v1.at(x, y) = b * 0.02f;
            v2.at(x, y) = b * 0.02f + a * 0.05f;
        }
    RayBudget b1 = build_ray_budget(e1, v1, coc, valid, {});
    RayBudget b2 = build_ray_budget(e2, v2, coc, valid, {});
    for (int y = 0; y < cam.height; ++y)
        for (int x = 0; x < cam.width; ++x)
            CHECK(b2.rays.at(x, y) >= b1.rays.at(x, y));
}

TEST_CASE("coverage soundness: near silhouette pixels are never starved") {
    SceneFile sf = two_quads_scene();
    LensCamera cam = scene_camera(sf);
    FrameScene fs = FrameScene::build(sf.scene, 0);
    GBuffer gb = render_gbuffer(fs, cam, 2);
    CocMap coc = build_coc_map(gb, cam);
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 2);
    Image<float> edges = sobel_edges(filtered, {}, 2);
    Image<float> variance(cam.width, cam.height, 0.0f);
    Image<uint8_t> valid(cam.width, cam.height, 1);  // aged history, worst case
    MaskParams params;
    RayBudget budget = build_ray_budget(edges, variance, coc, valid, params);

    auto is_near = [&](int x, int y) {
        return coc.signed_coc.in_bounds(x, y) &&
               coc.signed_coc.at(x, y) <= -kFocusCocDefault;
    };
    for (int y = 1; y < cam.height - 1; ++y) {
        for (int x = 1; x < cam.width - 1; ++x) {
            if (!is_near(x, y))
                continue;
            bool at_depth_edge = false;
            for (int dy = -1; dy <= 1 && !at_depth_edge; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (!is_near(x + dx, y + dy)) {
                        at_depth_edge = true;
                        break;
                    }
            if (at_depth_edge)
                CHECK(budget.rays.at(x, y) >= params.n_min);
        }
    }
}

TEST_CASE("two-quad budget stays under a fifth of the full-frame cost") {
    SceneFile sf = two_quads_scene();
    LensCamera cam = scene_camera(sf);
    FrameScene fs = FrameScene::build(sf.scene, 0);
    GBuffer gb = render_gbuffer(fs, cam, 2);
    CocMap coc = build_coc_map(gb, cam);
    FilteredGBuffer filtered = gaussian_filter_gbuffer(gb, 2);
    Image<float> edges = sobel_edges(filtered, {}, 2);
    Image<float> variance(cam.width, cam.height, 0.0f);
    MaskParams params;
    // worst case: no history anywhere, every eligible pixel at full budget
    Image<uint8_t> invalid(cam.width, cam.height, 0);
    RayBudget b = build_ray_budget(edges, variance, coc, invalid, params);
    long full = static_cast<long>(params.n_max) * cam.width * cam.height;
    CHECK(b.total_rays > 0);
    CHECK(b.total_rays <= full / 5);
}

TEST_CASE("build_ray_budget rejects mismatched resolutions") {
    Image<float> edges(16, 16, 0.0f);
    Image<float> variance(16, 8, 0.0f);
    Image<uint8_t> valid(16, 16, 1);
    CocMap coc;
    coc.signed_coc = Image<float>(16, 16, 0.0f);
    coc.tile_max_abs = Image<float>(2, 2, 0.0f);
    coc.tile_max_near = Image<float>(2, 2, 0.0f);
    CHECK_THROWS_AS(build_ray_budget(edges, variance, coc, valid, {}),
                    std::invalid_argument);
}
