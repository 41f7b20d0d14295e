#pragma once

#include <cmath>
#include <cstdint>

namespace lensfield {

// Geometry math runs in double; pixel storage uses Color3 (float).

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double length(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(double s, Vec3 a) { return a * s; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3& operator+=(Vec3& a, Vec3 b) { a = a + b; return a; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalize(Vec3 a) {
    double len = length(a);
    return len > 0.0 ? a / len : Vec3{};
}

// Linear RGB pixel value.
struct Color3 {
    float r = 0.0f, g = 0.0f, b = 0.0f;
};

inline Color3 operator+(Color3 a, Color3 b) { return {a.r + b.r, a.g + b.g, a.b + b.b}; }
inline Color3 operator-(Color3 a, Color3 b) { return {a.r - b.r, a.g - b.g, a.b - b.b}; }
inline Color3 operator*(Color3 a, float s) { return {a.r * s, a.g * s, a.b * s}; }
inline Color3 operator*(float s, Color3 a) { return a * s; }
inline Color3 operator*(Color3 a, Color3 b) { return {a.r * b.r, a.g * b.g, a.b * b.b}; }
inline Color3 operator/(Color3 a, float s) { return {a.r / s, a.g / s, a.b / s}; }
inline Color3& operator+=(Color3& a, Color3 b) { a = a + b; return a; }
inline bool operator==(Color3 a, Color3 b) { return a.r == b.r && a.g == b.g && a.b == b.b; }
inline bool operator!=(Color3 a, Color3 b) { return !(a == b); }

inline float max_component(Color3 c) { return std::fmax(c.r, std::fmax(c.g, c.b)); }

inline bool finite(Color3 c) {
    return std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b);
}

template <typename T>
inline T lerp(T a, T b, double t) {
    return a + (b - a) * t;
}
inline Color3 lerp(Color3 a, Color3 b, float t) { return a + (b - a) * t; }

inline double clamp(double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}
inline float clampf(float v, float lo, float hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

// Rec.709 luma of a linear RGB color.
inline float luminance(Color3 c) {
    return 0.2126f * c.r + 0.7152f * c.g + 0.0722f * c.b;
}

}  // namespace lensfield
