#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lensfield/vec.hpp"

namespace lensfield {

struct Ray {
    Vec3 origin;
    Vec3 dir;  // normalized
};

// Thin-lens camera. The focus plane is perpendicular to `forward` at view
// depth `focus_distance`; aperture 0 degenerates to a pinhole.
struct LensCamera {
    Vec3 position;
    Vec3 right, up, forward;  // orthonormal basis
    double vertical_fov = 1.0;  // radians
    double focal_length = 0.05;  // meters
    double aperture = 0.0;  // lens diameter, meters
    double focus_distance = 1.0;  // meters along the view axis
    int width = 1, height = 1;

    double tan_half_fov() const { return std::tan(vertical_fov * 0.5); }
    double aspect() const { return static_cast<double>(width) / height; }

    // Sensor meters -> pixels along the vertical axis.
    double pixel_scale() const {
        return height / (2.0 * focal_length * tan_half_fov());
    }

    static LensCamera make_look_at(Vec3 position, Vec3 target, Vec3 up_hint,
                                   double vertical_fov, double focal_length,
                                   double aperture, double focus_distance,
                                   int width, int height) {
        LensCamera cam;
        cam.position = position;
        cam.forward = normalize(target - position);
        cam.right = normalize(cross(up_hint, cam.forward));
        cam.up = cross(cam.forward, cam.right);
        cam.vertical_fov = vertical_fov;
        cam.focal_length = focal_length;
        cam.aperture = aperture;
        cam.focus_distance = focus_distance;
        cam.width = width;
        cam.height = height;
        cam.validate();
        return cam;
    }

    void validate() const {
        if (!(focal_length > 0.0))
            throw std::invalid_argument("camera: focal_length must be > 0");
        if (!(focus_distance > focal_length))
            throw std::invalid_argument("camera: focus_distance must exceed focal_length");
        if (aperture < 0.0)
            throw std::invalid_argument("camera: aperture must be >= 0");
        if (!(vertical_fov > 0.0 && vertical_fov < std::numbers::pi))
            throw std::invalid_argument("camera: vertical_fov out of (0, pi)");
        if (width < 1 || height < 1)
            throw std::invalid_argument("camera: image size must be positive");
        constexpr double tol = 1e-6;
        if (std::abs(length(right) - 1.0) > tol || std::abs(length(up) - 1.0) > tol ||
            std::abs(length(forward) - 1.0) > tol || std::abs(dot(right, up)) > tol ||
            std::abs(dot(right, forward)) > tol || std::abs(dot(up, forward)) > tol)
            throw std::invalid_argument("camera: basis not orthonormal");
    }
};

// Signed circle-of-confusion radius, in pixels, of a point at view depth z.
// Negative in the near field (z < focus_distance), positive in the far field.
inline double coc_radius(double z, const LensCamera& cam) {
    if (!(z > 0.0))
        throw std::domain_error("coc_radius: view depth must be > 0");
    double lens_term = (cam.aperture * 0.5) *
                       (cam.focal_length / (cam.focus_distance - cam.focal_length));
    return cam.pixel_scale() * lens_term * ((z - cam.focus_distance) / z);
}

// z -> infinity limit of coc_radius; the CoC of environment pixels.
inline double coc_radius_limit(const LensCamera& cam) {
    return cam.pixel_scale() * (cam.aperture * 0.5) *
           (cam.focal_length / (cam.focus_distance - cam.focal_length));
}

// Concentric map of the unit square onto the unit disk; area-preserving.
inline Vec2 sample_lens_disk(double u, double v) {
    double a = 2.0 * u - 1.0;
    double b = 2.0 * v - 1.0;
    if (a == 0.0 && b == 0.0)
        return {0.0, 0.0};
    double r, phi;
    if (std::abs(a) > std::abs(b)) {
        r = a;
        phi = (std::numbers::pi / 4.0) * (b / a);
    } else {
        r = b;
        phi = (std::numbers::pi / 2.0) - (std::numbers::pi / 4.0) * (a / b);
    }
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Center-of-lens ray through continuous pixel coordinates (px, py);
// (x + 0.5, y + 0.5) is the center of pixel (x, y).
inline Ray pinhole_ray(const LensCamera& cam, double px, double py) {
    double sx = (2.0 * (px / cam.width) - 1.0) * cam.tan_half_fov() * cam.aspect();
    double sy = (1.0 - 2.0 * (py / cam.height)) * cam.tan_half_fov();
    Vec3 dir = normalize(cam.right * sx + cam.up * sy + cam.forward);
    return {cam.position, dir};
}

// Thin-lens ray: origin offset on the lens disk, direction through the point
// where the pinhole ray meets the focus plane. lens_uv = (0,0) returns the
// pinhole ray unchanged so the two construction paths agree bit-for-bit.
inline Ray generate_lens_ray(const LensCamera& cam, double px, double py, Vec2 lens_uv) {
    Ray center = pinhole_ray(cam, px, py);
    double ox = lens_uv.x * (cam.aperture * 0.5);
    double oy = lens_uv.y * (cam.aperture * 0.5);
    if (ox == 0.0 && oy == 0.0)
        return center;
    double cos_view = dot(center.dir, cam.forward);
    Vec3 focus_point = cam.position + center.dir * (cam.focus_distance / cos_view);
    Vec3 origin = cam.position + cam.right * ox + cam.up * oy;
    return {origin, normalize(focus_point - origin)};
}

struct Projection {
    Vec2 uv;  // (0,0) top-left .. (1,1) bottom-right
    double view_depth = 0.0;
    bool valid = false;  // in front of the camera
};

// Projects a world point into the camera's UV space.
inline Projection project_point(const LensCamera& cam, Vec3 world) {
    Vec3 d = world - cam.position;
    double z = dot(d, cam.forward);
    if (!(z > 1e-12))
        return {};
    double sx = dot(d, cam.right) / (z * cam.tan_half_fov() * cam.aspect());
    double sy = dot(d, cam.up) / (z * cam.tan_half_fov());
    Projection p;
    p.uv = {(sx + 1.0) * 0.5, (1.0 - sy) * 0.5};
    p.view_depth = z;
    p.valid = true;
    return p;
}

// Projects a direction (environment point at infinity); translation-free.
inline Projection project_direction(const LensCamera& cam, Vec3 dir) {
    double z = dot(dir, cam.forward);
    if (!(z > 1e-12))
        return {};
    double sx = dot(dir, cam.right) / (z * cam.tan_half_fov() * cam.aspect());
    double sy = dot(dir, cam.up) / (z * cam.tan_half_fov());
    Projection p;
    p.uv = {(sx + 1.0) * 0.5, (1.0 - sy) * 0.5};
    p.view_depth = z;
    p.valid = true;
    return p;
}

}  // namespace lensfield
