#pragma once

#include <limits>

#include "lensfield/camera.hpp"
#include "lensfield/image.hpp"
#include "lensfield/intersect.hpp"
#include "lensfield/parallel.hpp"

namespace lensfield {

// Deferred-shading inputs: sharp color, specular component, view depth,
// normal, and screen-space motion (current UV minus previous UV).
struct GBuffer {
    int width = 0, height = 0;
    Image<Color3> color;
    Image<Color3> specular;
    Image<float> depth;    // +inf for background
    Image<Vec3> normal;    // unit, or exactly zero for background
    Image<Vec2> motion;    // UV units

    GBuffer() = default;
    GBuffer(int w, int h)
        : width(w), height(h), color(w, h), specular(w, h),
          depth(w, h, std::numeric_limits<float>::infinity()),
          normal(w, h), motion(w, h) {}
};

// The "rasterizer": one unjittered pinhole ray per pixel center, shaded with
// the same function the lens tracer uses. Motion vectors account for both
// camera and rigid object motion; background motion comes from the camera
// rotation applied to the ray direction.
inline GBuffer render_gbuffer(const FrameScene& fs, const FrameScene& fs_prev,
                              const LensCamera& cam, const LensCamera& prev_cam,
                              int threads = 1) {
    GBuffer gb(cam.width, cam.height);
    parallel_rows(cam.height, threads, [&](int y) {
        for (int x = 0; x < cam.width; ++x) {
            Ray ray = pinhole_ray(cam, x + 0.5, y + 0.5);
            HitRecord hit = intersect(ray, fs, cam);
            Vec2 uv{(x + 0.5) / cam.width, (y + 0.5) / cam.height};
            if (hit.hit) {
                gb.color.at(x, y) = hit.shaded;
                gb.specular.at(x, y) = hit.specular_part;
                gb.depth.at(x, y) = static_cast<float>(hit.view_depth);
                gb.normal.at(x, y) = hit.normal;
                Vec3 local = fs.world_to_object(hit.object).apply(hit.position);
                Vec3 prev_world = fs_prev.object_to_world(hit.object).apply(local);
                Projection prev = project_point(prev_cam, prev_world);
                gb.motion.at(x, y) = prev.valid ? uv - prev.uv : Vec2{};
            } else {
                gb.color.at(x, y) = fs.scene().background;
                Projection prev = project_direction(prev_cam, ray.dir);
                gb.motion.at(x, y) = prev.valid ? uv - prev.uv : Vec2{};
            }
        }
    });
    return gb;
}

// Static-camera convenience used by single-frame renders and tests.
inline GBuffer render_gbuffer(const FrameScene& fs, const LensCamera& cam, int threads = 1) {
    return render_gbuffer(fs, fs, cam, cam, threads);
}

}  // namespace lensfield
