#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lensfield/camera.hpp"
#include "lensfield/scene.hpp"

namespace lensfield {

namespace detail {

using json = nlohmann::json;

inline json parse_json_file(const std::string& path, const char* what) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error(std::string(what) + ": cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string(what) + ": " + path + ": " + e.what());
    }
}

inline void require_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw std::runtime_error("unknown key '" + it.key() + "' in " + where);
    }
}

inline Vec3 parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error(where + " must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Color3 parse_color(const json& j, const std::string& where) {
    Vec3 v = parse_vec3(j, where);
    return {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
}

}  // namespace detail

// Camera description as it appears in scene and camera-path files.
struct CameraKeyframe {
    Vec3 position;
    Vec3 look_at{0, 0, 1};
    Vec3 up{0, 1, 0};
    double vertical_fov_deg = 60.0;
    double focal_length = 0.05;
    double aperture = 0.0;
    double focus_distance = 2.0;
};

inline LensCamera make_camera(const CameraKeyframe& key, int width, int height) {
    return LensCamera::make_look_at(key.position, key.look_at, key.up,
                                    key.vertical_fov_deg * std::numbers::pi / 180.0,
                                    key.focal_length, key.aperture, key.focus_distance,
                                    width, height);
}

struct SceneFile {
    Scene scene;
    CameraKeyframe camera;
};

// Scene schema (version 1): background/ambient colors, materials, lights,
// objects made of triangles / quads / spheres with optional rigid per-frame
// motion, and the default camera.
inline SceneFile load_scene(const std::string& path) {
    using detail::json;
    json j = detail::parse_json_file(path, "load_scene");
    detail::require_keys(j, {"version", "background", "ambient", "materials", "lights",
                             "objects", "camera"},
                         "scene file");
    if (j.value("version", 1) != 1)
        throw std::runtime_error("load_scene: unsupported scene version");

    SceneFile out;
    Scene& scene = out.scene;
    if (j.contains("background"))
        scene.background = detail::parse_color(j["background"], "background");
    if (j.contains("ambient"))
        scene.ambient = detail::parse_color(j["ambient"], "ambient");

    for (const auto& m : j.value("materials", json::array())) {
        detail::require_keys(m, {"name", "diffuse", "specular", "emission", "shininess"},
                             "material");
        Material mat;
        if (m.contains("diffuse"))
            mat.diffuse = detail::parse_color(m["diffuse"], "material diffuse");
        if (m.contains("specular"))
            mat.specular = detail::parse_color(m["specular"], "material specular");
        if (m.contains("emission"))
            mat.emission = detail::parse_color(m["emission"], "material emission");
        mat.shininess = m.value("shininess", 32.0f);
        scene.materials.push_back(mat);
    }

    for (const auto& l : j.value("lights", json::array())) {
        detail::require_keys(l, {"type", "direction", "position", "color"}, "light");
        std::string type = l.value("type", "");
        if (type == "directional") {
            DirectionalLight dl;
            dl.direction = detail::parse_vec3(l.at("direction"), "light direction");
            dl.color = detail::parse_color(l.at("color"), "light color");
            scene.directional_lights.push_back(dl);
        } else if (type == "point") {
            PointLight pl;
            pl.position = detail::parse_vec3(l.at("position"), "light position");
            pl.color = detail::parse_color(l.at("color"), "light color");
            scene.point_lights.push_back(pl);
        } else {
            throw std::runtime_error("load_scene: light type must be directional or point");
        }
    }

    for (const auto& o : j.value("objects", json::array())) {
        detail::require_keys(o, {"name", "material", "triangles", "quads", "spheres",
                                 "animation"},
                             "object");
        SceneObject obj;
        obj.name = o.value("name", "");
        obj.material = o.value("material", 0);
        for (const auto& t : o.value("triangles", json::array())) {
            if (!t.is_array() || t.size() != 3)
                throw std::runtime_error("load_scene: triangle needs 3 vertices");
            obj.triangles.push_back({detail::parse_vec3(t[0], "vertex"),
                                     detail::parse_vec3(t[1], "vertex"),
                                     detail::parse_vec3(t[2], "vertex")});
        }
        for (const auto& q : o.value("quads", json::array())) {
            detail::require_keys(q, {"corner", "edge_u", "edge_v"}, "quad");
            add_quad(obj, detail::parse_vec3(q.at("corner"), "quad corner"),
                     detail::parse_vec3(q.at("edge_u"), "quad edge_u"),
                     detail::parse_vec3(q.at("edge_v"), "quad edge_v"));
        }
        for (const auto& s : o.value("spheres", json::array())) {
            detail::require_keys(s, {"center", "radius"}, "sphere");
            obj.spheres.push_back(
                {detail::parse_vec3(s.at("center"), "sphere center"), s.at("radius")});
        }
        if (o.contains("animation")) {
            const auto& a = o["animation"];
            detail::require_keys(a, {"velocity", "axis", "angular_velocity_deg", "pivot"},
                                 "animation");
            if (a.contains("velocity"))
                obj.motion.velocity = detail::parse_vec3(a["velocity"], "animation velocity");
            if (a.contains("axis"))
                obj.motion.axis = detail::parse_vec3(a["axis"], "animation axis");
            obj.motion.angular_velocity =
                a.value("angular_velocity_deg", 0.0) * std::numbers::pi / 180.0;
            if (a.contains("pivot"))
                obj.motion.pivot = detail::parse_vec3(a["pivot"], "animation pivot");
        }
        scene.objects.push_back(std::move(obj));
    }

    if (j.contains("camera")) {
        const auto& c = j["camera"];
        detail::require_keys(c, {"position", "look_at", "up", "vertical_fov_deg",
                                 "focal_length", "aperture", "focus_distance"},
                             "camera");
        out.camera.position = detail::parse_vec3(c.at("position"), "camera position");
        out.camera.look_at = detail::parse_vec3(c.at("look_at"), "camera look_at");
        if (c.contains("up"))
            out.camera.up = detail::parse_vec3(c["up"], "camera up");
        out.camera.vertical_fov_deg = c.value("vertical_fov_deg", 60.0);
        out.camera.focal_length = c.value("focal_length", 0.05);
        out.camera.aperture = c.value("aperture", 0.0);
        out.camera.focus_distance = c.value("focus_distance", 2.0);
    }

    scene.validate();
    return out;
}

// Camera path (version 1): per-frame keyframes; missing fields inherit the
// scene camera, frames beyond the list clamp to the last entry.
inline std::vector<CameraKeyframe> load_camera_path(const std::string& path,
                                                    const CameraKeyframe& base) {
    using detail::json;
    json j = detail::parse_json_file(path, "load_camera_path");
    detail::require_keys(j, {"version", "frames"}, "camera path");
    if (j.value("version", 1) != 1)
        throw std::runtime_error("load_camera_path: unsupported version");
    std::vector<CameraKeyframe> frames;
    for (const auto& k : j.value("frames", json::array())) {
        detail::require_keys(k, {"position", "look_at", "up", "focus_distance", "aperture"},
                             "camera path frame");
        CameraKeyframe key = base;
        if (k.contains("position"))
            key.position = detail::parse_vec3(k["position"], "path position");
        if (k.contains("look_at"))
            key.look_at = detail::parse_vec3(k["look_at"], "path look_at");
        if (k.contains("up"))
            key.up = detail::parse_vec3(k["up"], "path up");
        key.focus_distance = k.value("focus_distance", base.focus_distance);
        key.aperture = k.value("aperture", base.aperture);
        frames.push_back(key);
    }
    if (frames.empty())
        throw std::runtime_error("load_camera_path: no frames in " + path);
    return frames;
}

}  // namespace lensfield
