#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "lensfield/bvh.hpp"
#include "lensfield/camera.hpp"
#include "lensfield/scene.hpp"
#include "lensfield/vec.hpp"

namespace lensfield {

constexpr double kRayTMin = 1e-4;  // self-intersection guard, meters

struct HitRecord {
    bool hit = false;
    double t = std::numeric_limits<double>::infinity();
    Vec3 position;
    Vec3 normal;  // unit, flipped toward the ray origin
    double view_depth = std::numeric_limits<double>::infinity();
    Color3 shaded;           // full direct-lit color (background color on miss)
    Color3 specular_part;    // Blinn-Phong term alone
    int prim = -1;
    int object = -1;
};

namespace detail {

// Barycentric bounds carry a small slack so rays that strike a shared edge
// register on at least one of the adjacent triangles instead of slipping
// through the crack.
inline bool hit_triangle(Vec3 origin, Vec3 dir, const Triangle& tri,
                         double tmin, double tmax, double& t_out) {
    constexpr double kEdgeSlack = 1e-9;
    Vec3 e1 = tri.b - tri.a;
    Vec3 e2 = tri.c - tri.a;
    Vec3 p = cross(dir, e2);
    double det = dot(e1, p);
    if (std::abs(det) < 1e-14)
        return false;
    double inv_det = 1.0 / det;
    Vec3 s = origin - tri.a;
    double u = dot(s, p) * inv_det;
    if (u < -kEdgeSlack || u > 1.0 + kEdgeSlack)
        return false;
    Vec3 q = cross(s, e1);
    double v = dot(dir, q) * inv_det;
    if (v < -kEdgeSlack || u + v > 1.0 + kEdgeSlack)
        return false;
    double t = dot(e2, q) * inv_det;
    if (t <= tmin || t >= tmax)
        return false;
    t_out = t;
    return true;
}

inline bool hit_sphere(Vec3 origin, Vec3 dir, const Sphere& sph,
                       double tmin, double tmax, double& t_out) {
    Vec3 oc = origin - sph.center;
    double b = dot(oc, dir);
    double c = dot(oc, oc) - sph.radius * sph.radius;
    double disc = b * b - c;
    if (disc < 0.0)
        return false;
    double s = std::sqrt(disc);
    double t = -b - s;
    if (t <= tmin) {
        t = -b + s;
        if (t <= tmin)
            return false;
    }
    if (t >= tmax)
        return false;
    t_out = t;
    return true;
}

}  // namespace detail

// One frame's view of the scene: primitives transformed to world space plus
// the per-object rigid transforms used for motion vectors. Immutable once
// built; safe for concurrent queries.
class FrameScene {
public:
    struct Prim {
        bool is_sphere = false;
        Triangle tri;
        Sphere sphere;
        int material = 0;
        int object = 0;
    };

    static FrameScene build(const Scene& scene, int frame) {
        FrameScene fs;
        fs.scene_ = &scene;
        fs.frame_ = frame;
        fs.object_to_world_.reserve(scene.objects.size());
        fs.world_to_object_.reserve(scene.objects.size());
        for (size_t oi = 0; oi < scene.objects.size(); ++oi) {
            const SceneObject& obj = scene.objects[oi];
            Transform xf = Transform::at_frame(obj.motion, frame);
            fs.object_to_world_.push_back(xf);
            fs.world_to_object_.push_back(xf.inverse());
            for (const Triangle& t : obj.triangles) {
                Prim p;
                p.tri = {xf.apply(t.a), xf.apply(t.b), xf.apply(t.c)};
                p.material = obj.material;
                p.object = static_cast<int>(oi);
                fs.prims_.push_back(p);
            }
            for (const Sphere& s : obj.spheres) {
                Prim p;
                p.is_sphere = true;
                p.sphere = {xf.apply(s.center), s.radius};
                p.material = obj.material;
                p.object = static_cast<int>(oi);
                fs.prims_.push_back(p);
            }
        }
        std::vector<Aabb> boxes(fs.prims_.size());
        for (size_t i = 0; i < fs.prims_.size(); ++i)
            boxes[i] = fs.prim_bounds(static_cast<int>(i));
        fs.bvh_.build(boxes);
        return fs;
    }

    const Scene& scene() const { return *scene_; }
    int frame() const { return frame_; }
    const std::vector<Prim>& prims() const { return prims_; }
    const Bvh& bvh() const { return bvh_; }
    const Transform& object_to_world(int oi) const { return object_to_world_[oi]; }
    const Transform& world_to_object(int oi) const { return world_to_object_[oi]; }

    Aabb prim_bounds(int i) const {
        const Prim& p = prims_[i];
        Aabb box;
        if (p.is_sphere) {
            Vec3 r{p.sphere.radius, p.sphere.radius, p.sphere.radius};
            box.grow(p.sphere.center - r);
            box.grow(p.sphere.center + r);
        } else {
            box.grow(p.tri.a);
            box.grow(p.tri.b);
            box.grow(p.tri.c);
        }
        return box;
    }

    Vec3 prim_normal(int i, Vec3 at) const {
        const Prim& p = prims_[i];
        if (p.is_sphere)
            return (at - p.sphere.center) / p.sphere.radius;
        return normalize(cross(p.tri.b - p.tri.a, p.tri.c - p.tri.a));
    }

private:
    const Scene* scene_ = nullptr;
    int frame_ = 0;
    std::vector<Prim> prims_;
    Bvh bvh_;
    std::vector<Transform> object_to_world_;
    std::vector<Transform> world_to_object_;
};

// Direct lighting: Lambert diffuse + Blinn-Phong specular, no shadow rays.
// The same function shades rasterized-equivalent and lens-traced hits.
inline void shade_hit(const FrameScene& fs, Vec3 position, Vec3 normal, Vec3 view_dir,
                      int material_index, Color3& out_full, Color3& out_specular) {
    const Scene& scene = fs.scene();
    const Material& mat = scene.materials[material_index];
    Vec3 to_eye = -view_dir;
    auto add_light = [&](Vec3 to_light, Color3 radiance, Color3& diff_acc, Color3& spec_acc) {
        double ndotl = dot(normal, to_light);
        if (ndotl <= 0.0)
            return;
        diff_acc += mat.diffuse * radiance * static_cast<float>(ndotl);
        if (max_component(mat.specular) > 0.0f) {
            Vec3 h = normalize(to_light + to_eye);
            double ndoth = dot(normal, h);
            if (ndoth > 0.0)
                spec_acc += mat.specular * radiance *
                            static_cast<float>(std::pow(ndoth, mat.shininess));
        }
    };
    Color3 diffuse_acc = mat.diffuse * scene.ambient;
    Color3 specular_acc;
    for (const auto& l : scene.directional_lights)
        add_light(normalize(-l.direction), l.color, diffuse_acc, specular_acc);
    for (const auto& l : scene.point_lights) {
        Vec3 d = l.position - position;
        double dist2 = std::fmax(dot(d, d), 1e-6);
        add_light(d / std::sqrt(dist2), l.color / static_cast<float>(dist2),
                  diffuse_acc, specular_acc);
    }
    out_specular = specular_acc;
    out_full = mat.emission + diffuse_acc + specular_acc;
}

// Nearest-hit query with shading. A miss is a value: hit=false with the
// background color. `cam` supplies the view axis for view_depth.
inline HitRecord intersect(Ray ray, const FrameScene& fs, const LensCamera& cam) {
    HitRecord rec;
    double tmax = std::numeric_limits<double>::infinity();
    int best = -1;
    fs.bvh().traverse(ray.origin, ray.dir, kRayTMin, tmax, [&](int pi, double& live_tmax) {
        const FrameScene::Prim& p = fs.prims()[pi];
        double t;
        bool hit = p.is_sphere
                       ? detail::hit_sphere(ray.origin, ray.dir, p.sphere, kRayTMin, live_tmax, t)
                       : detail::hit_triangle(ray.origin, ray.dir, p.tri, kRayTMin, live_tmax, t);
        if (hit) {
            live_tmax = t;
            best = pi;
        }
    });
    if (best < 0) {
        rec.shaded = fs.scene().background;
        return rec;
    }
    rec.hit = true;
    rec.t = tmax;
    rec.prim = best;
    rec.object = fs.prims()[best].object;
    rec.position = ray.origin + ray.dir * rec.t;
    Vec3 n = fs.prim_normal(best, rec.position);
    if (dot(n, ray.dir) > 0.0)
        n = -n;  // two-sided
    rec.normal = n;
    rec.view_depth = dot(rec.position - cam.position, cam.forward);
    shade_hit(fs, rec.position, rec.normal, ray.dir, fs.prims()[best].material,
              rec.shaded, rec.specular_part);
    return rec;
}

// Exhaustive scan reference for the BVH path; used by tests.
inline HitRecord intersect_linear(Ray ray, const FrameScene& fs, const LensCamera& cam) {
    double tmax = std::numeric_limits<double>::infinity();
    int best = -1;
    for (size_t pi = 0; pi < fs.prims().size(); ++pi) {
        const FrameScene::Prim& p = fs.prims()[pi];
        double t;
        bool hit = p.is_sphere
                       ? detail::hit_sphere(ray.origin, ray.dir, p.sphere, kRayTMin, tmax, t)
                       : detail::hit_triangle(ray.origin, ray.dir, p.tri, kRayTMin, tmax, t);
        if (hit) {
            tmax = t;
            best = static_cast<int>(pi);
        }
    }
    HitRecord rec;
    if (best < 0) {
        rec.shaded = fs.scene().background;
        return rec;
    }
    rec.hit = true;
    rec.t = tmax;
    rec.prim = best;
    rec.object = fs.prims()[best].object;
    rec.position = ray.origin + ray.dir * rec.t;
    Vec3 n = fs.prim_normal(best, rec.position);
    if (dot(n, ray.dir) > 0.0)
        n = -n;
    rec.normal = n;
    rec.view_depth = dot(rec.position - cam.position, cam.forward);
    shade_hit(fs, rec.position, rec.normal, ray.dir, fs.prims()[best].material,
              rec.shaded, rec.specular_part);
    return rec;
}

}  // namespace lensfield
