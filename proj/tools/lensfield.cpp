// lensfield command-line front end: `render` runs the pipeline on a scene,
// `compare` computes image-quality metrics between two PFM images.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lensfield/lensfield.hpp"

namespace {

// Paths inside a config file resolve relative to the config's directory.
std::string resolve_relative(const std::string& base_file, const std::string& path) {
    namespace fs = std::filesystem;
    if (path.empty() || fs::path(path).is_absolute())
        return path;
    return (fs::path(base_file).parent_path() / path).string();
}

int run_render_command(const std::string& config_path, const std::string& mode,
                       int frames, long long seed, const std::string& dump_dir,
                       const std::string& out_dir) {
    lensfield::RenderConfig cfg = lensfield::load_config(config_path);
    if (!mode.empty())
        cfg.mode = lensfield::parse_mode(mode);
    if (frames > 0)
        cfg.frames = frames;
    if (seed >= 0) {
        cfg.seed = static_cast<uint64_t>(seed);
        cfg.trace.seed = cfg.seed;
    }
    if (!out_dir.empty())
        cfg.out_dir = out_dir;
    if (const char* env_out = std::getenv("LENSFIELD_OUT"); env_out && *env_out)
        cfg.out_dir = env_out;  // env var overrides the output dir only
    cfg.validate();

    lensfield::SceneFile scene_file =
        lensfield::load_scene(resolve_relative(config_path, cfg.scene_path));
    std::vector<lensfield::CameraKeyframe> camera_frames;
    if (!cfg.camera_path.empty())
        camera_frames = lensfield::load_camera_path(
            resolve_relative(config_path, cfg.camera_path), scene_file.camera);
    else
        camera_frames = {scene_file.camera};

    lensfield::RunResult result =
        lensfield::run_render(cfg, scene_file.scene, camera_frames, dump_dir);
    long total_rays = 0;
    for (const auto& s : result.stats)
        total_rays += s.rays_traced;
    std::cout << "rendered " << result.stats.size() << " frame(s) ["
              << lensfield::mode_name(cfg.mode) << "] to " << result.out_dir
              << " (" << total_rays << " lens rays)\n";
    return 0;
}

int run_compare_command(const std::string& a_path, const std::string& b_path,
                        const std::string& region_path, bool csv) {
    lensfield::Image<lensfield::Color3> a = lensfield::read_pfm(a_path);
    lensfield::Image<lensfield::Color3> b = lensfield::read_pfm(b_path);
    lensfield::Image<uint8_t> region;
    const lensfield::Image<uint8_t>* region_ptr = nullptr;
    if (!region_path.empty()) {
        region = lensfield::read_pgm(region_path);
        region_ptr = &region;
    }
    lensfield::CompareResult r = lensfield::compare_images(a, b, region_ptr);
    if (csv)
        std::cout << "mse,psnr,ssim\n"
                  << r.mse << "," << r.psnr << "," << r.ssim << "\n";
    else
        std::cout << "MSE  = " << r.mse << "\nPSNR = " << r.psnr << " dB\nSSIM = " << r.ssim
                  << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lensfield - hybrid depth-of-field CPU renderer"};
    app.require_subcommand(1);

    std::string config_path, mode, dump_dir, out_dir;
    int frames = 0;
    long long seed = -1;
    CLI::App* render = app.add_subcommand("render", "Render a frame sequence from a config");
    render->add_option("config", config_path, "JSON render config")->required();
    render->add_option("--mode", mode, "sharp|postprocess|hybrid|reference");
    render->add_option("--frames", frames, "override frame count");
    render->add_option("--seed", seed, "override RNG seed");
    render->add_option("--dump-intermediates", dump_dir, "write per-pass images here");
    render->add_option("--out", out_dir, "output directory");

    std::string a_path, b_path, region_path;
    bool csv = false;
    CLI::App* compare = app.add_subcommand("compare", "MSE/PSNR/SSIM between two PFM images");
    compare->add_option("a", a_path, "first image (PFM)")->required();
    compare->add_option("b", b_path, "second image (PFM)")->required();
    compare->add_option("--region", region_path, "restrict metrics to a PGM mask (>0 = in)");
    compare->add_flag("--csv", csv, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed())
            return run_render_command(config_path, mode, frames, seed, dump_dir, out_dir);
        if (compare->parsed())
            return run_compare_command(a_path, b_path, region_path, csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
