#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lensfield/vec.hpp"

namespace lensfield {

struct Material {
    Color3 diffuse{0.8f, 0.8f, 0.8f};
    Color3 specular{0.0f, 0.0f, 0.0f};
    Color3 emission{0.0f, 0.0f, 0.0f};
    float shininess = 32.0f;  // Blinn-Phong exponent
};

struct DirectionalLight {
    Vec3 direction{0, -1, 0};  // direction the light travels
    Color3 color{1, 1, 1};
};

struct PointLight {
    Vec3 position;
    Color3 color{1, 1, 1};  // radiant intensity; falls off with 1/d^2
};

struct Triangle {
    Vec3 a, b, c;
};

struct Sphere {
    Vec3 center;
    double radius = 1.0;
};

// Rigid per-frame motion: at frame k the object is rotated by
// k * angular_velocity around `axis` through `pivot`, then offset by
// k * velocity.
struct RigidMotion {
    Vec3 velocity;
    Vec3 axis{0, 1, 0};
    double angular_velocity = 0.0;  // radians per frame
    Vec3 pivot;

    bool is_identity() const {
        return velocity.x == 0 && velocity.y == 0 && velocity.z == 0 &&
               angular_velocity == 0;
    }
};

struct SceneObject {
    std::string name;
    std::vector<Triangle> triangles;
    std::vector<Sphere> spheres;
    int material = 0;
    RigidMotion motion;
};

struct Scene {
    std::vector<SceneObject> objects;
    std::vector<Material> materials;
    std::vector<DirectionalLight> directional_lights;
    std::vector<PointLight> point_lights;
    Color3 background{0, 0, 0};
    Color3 ambient{0, 0, 0};

    size_t primitive_count() const {
        size_t n = 0;
        for (const auto& o : objects)
            n += o.triangles.size() + o.spheres.size();
        return n;
    }

    void validate() const {
        auto check_color = [](Color3 c, const char* what) {
            if (!finite(c) || c.r < 0 || c.g < 0 || c.b < 0)
                throw std::invalid_argument(std::string("scene: ") + what +
                                            " must be finite and >= 0");
        };
        check_color(background, "background");
        check_color(ambient, "ambient");
        for (const auto& m : materials) {
            check_color(m.diffuse, "material diffuse");
            check_color(m.specular, "material specular");
            check_color(m.emission, "material emission");
        }
        for (const auto& l : directional_lights)
            check_color(l.color, "light color");
        for (const auto& l : point_lights)
            check_color(l.color, "light color");
        for (const auto& o : objects) {
            if (o.material < 0 || o.material >= static_cast<int>(materials.size()))
                throw std::invalid_argument("scene: object '" + o.name +
                                            "' references invalid material index");
        }
    }
};

// Rigid transform (rotation + translation).
struct Transform {
    // rows of the rotation matrix
    Vec3 rx{1, 0, 0}, ry{0, 1, 0}, rz{0, 0, 1};
    Vec3 t;

    Vec3 apply(Vec3 p) const {
        return {dot(rx, p) + t.x, dot(ry, p) + t.y, dot(rz, p) + t.z};
    }
    Vec3 apply_dir(Vec3 d) const { return {dot(rx, d), dot(ry, d), dot(rz, d)}; }

    Transform inverse() const {
        Transform inv;
        inv.rx = {rx.x, ry.x, rz.x};
        inv.ry = {rx.y, ry.y, rz.y};
        inv.rz = {rx.z, ry.z, rz.z};
        Vec3 it = inv.apply_dir(t);
        inv.t = -it;
        return inv;
    }

    static Transform rotation(Vec3 axis, double angle) {
        Vec3 u = normalize(axis);
        double c = std::cos(angle), s = std::sin(angle), mc = 1.0 - c;
        Transform r;
        r.rx = {c + u.x * u.x * mc, u.x * u.y * mc - u.z * s, u.x * u.z * mc + u.y * s};
        r.ry = {u.y * u.x * mc + u.z * s, c + u.y * u.y * mc, u.y * u.z * mc - u.x * s};
        r.rz = {u.z * u.x * mc - u.y * s, u.z * u.y * mc + u.x * s, c + u.z * u.z * mc};
        return r;
    }

    static Transform at_frame(const RigidMotion& m, int frame) {
        if (m.is_identity() || frame == 0)
            return Transform{.t = m.velocity * static_cast<double>(frame)};
        Transform r = rotation(m.axis, m.angular_velocity * frame);
        // rotate about pivot, then translate
        r.t = m.pivot - r.apply_dir(m.pivot) + m.velocity * static_cast<double>(frame);
        return r;
    }
};

// Convenience: axis-aligned-ish quad as two triangles.
inline void add_quad(SceneObject& obj, Vec3 corner, Vec3 edge_u, Vec3 edge_v) {
    Vec3 a = corner, b = corner + edge_u, c = corner + edge_u + edge_v, d = corner + edge_v;
    obj.triangles.push_back({a, b, c});
    obj.triangles.push_back({a, c, d});
}

}  // namespace lensfield
