#pragma once

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>

#include "lensfield/camera.hpp"
#include "lensfield/gbuffer.hpp"
#include "lensfield/image.hpp"
#include "lensfield/lens_trace.hpp"
#include "lensfield/parallel.hpp"

namespace lensfield {

struct TemporalParams {
    double alpha = 0.2;    // EMA blend toward the current frame
    double alpha_h = -1.0; // hit-ratio EMA; < 0 means "same as alpha"
    double eps = 1e-4;     // hit-ratio normalization guard
    int age_max = 256;
    bool strict_rejection = false;  // also reject history on depth mismatch
};

// Accumulated ray-trace history. Colors are premultiplied by their field
// weight (h for near, 1-h for far); age 0 means empty.
struct HistoryPixel {
    Color3 acc_near, acc_far;
    float acc_h = 0.0f;
    float acc_near_coc = 0.0f, acc_far_coc = 0.0f;
    float mu1 = 0.0f, mu2 = 0.0f;  // luminance moments
    float inv_depth = 0.0f;        // last frame's 1/z, for strict rejection
    float age = 0.0f;
};

using HistoryBuffer = Image<HistoryPixel>;

struct NearHistory {
    Color3 acc_near;
    float acc_h = 0.0f, acc_near_coc = 0.0f;
    float mu1 = 0.0f, mu2 = 0.0f;
    float age = 0.0f;
    bool valid = false;
};

struct FarHistory {
    Color3 acc_far;
    float acc_far_coc = 0.0f;
    float age = 0.0f;
    bool valid = false;
    Vec2 prev_uv;            // previous-frame screen position used
    bool prev_uv_valid = false;
};

namespace detail {

// Validity-weighted bilinear fetch; taps with age = 0 drop out of the mix.
template <typename Reduce>
inline bool history_bilinear(const HistoryBuffer& history, Vec2 uv, Reduce&& reduce) {
    double px = uv.x * history.width() - 0.5;
    double py = uv.y * history.height() - 0.5;
    if (uv.x < 0.0 || uv.y < 0.0 || uv.x > 1.0 || uv.y > 1.0)
        return false;
    int x0 = static_cast<int>(std::floor(px));
    int y0 = static_cast<int>(std::floor(py));
    double tx = px - x0, ty = py - y0;
    double weights[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    int xs[4] = {x0, x0 + 1, x0, x0 + 1};
    int ys[4] = {y0, y0, y0 + 1, y0 + 1};
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (!history.in_bounds(xs[i], ys[i]))
            continue;
        const HistoryPixel& h = history.at(xs[i], ys[i]);
        if (h.age <= 0.0f || weights[i] <= 0.0)
            continue;
        reduce(h, weights[i]);
        total += weights[i];
    }
    return total > 1e-6;
}

}  // namespace detail

// Near-field reprojection: follow the G-buffer motion vector.
inline NearHistory reproject_near(const HistoryBuffer& history, Vec2 motion, int x, int y) {
    Vec2 uv{(x + 0.5) / history.width(), (y + 0.5) / history.height()};
    Vec2 prev_uv = uv - motion;
    NearHistory out;
    double wsum = 0.0;
    float r = 0, g = 0, b = 0, h_acc = 0, coc = 0, m1 = 0, m2 = 0, age = 0;
    bool any = detail::history_bilinear(history, prev_uv, [&](const HistoryPixel& h, double w) {
        float wf = static_cast<float>(w);
        r += h.acc_near.r * wf;
        g += h.acc_near.g * wf;
        b += h.acc_near.b * wf;
        h_acc += h.acc_h * wf;
        coc += h.acc_near_coc * wf;
        m1 += h.mu1 * wf;
        m2 += h.mu2 * wf;
        age += h.age * wf;
        wsum += w;
    });
    if (!any)
        return out;
    float inv = static_cast<float>(1.0 / wsum);
    out.acc_near = Color3{r, g, b} * inv;
    out.acc_h = h_acc * inv;
    out.acc_near_coc = coc * inv;
    out.mu1 = m1 * inv;
    out.mu2 = m2 * inv;
    out.age = age * inv;
    out.valid = true;
    return out;
}

// Far-field reprojection: project the pixel's mean far world position (or
// the 5x5 neighborhood mean when the pixel itself has no far hits) through
// the previous camera, then fetch history there.
inline FarHistory reproject_far(const HistoryBuffer& history, const Image<FieldSample>& fields,
                                int x, int y, const LensCamera& prev_cam) {
    FarHistory out;
    Vec3 world;
    bool have_world = false;
    const FieldSample& own = fields.at(x, y);
    if (own.rays > 0 && own.far_pos_valid) {
        world = own.far_pos;
        have_world = true;
    } else {
        Vec3 sum{};
        int count = 0;
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (!fields.in_bounds(nx, ny))
                    continue;
                const FieldSample& f = fields.at(nx, ny);
                if (f.rays > 0 && f.far_pos_valid) {
                    sum += f.far_pos;
                    ++count;
                }
            }
        }
        if (count > 0) {
            world = sum / count;
            have_world = true;
        }
    }
    if (!have_world)
        return out;
    Projection prev = project_point(prev_cam, world);
    if (!prev.valid)
        return out;
    out.prev_uv = prev.uv;
    out.prev_uv_valid = true;
    double wsum = 0.0;
    float r = 0, g = 0, b = 0, coc = 0, age = 0;
    bool any = detail::history_bilinear(history, prev.uv, [&](const HistoryPixel& h, double w) {
        float wf = static_cast<float>(w);
        r += h.acc_far.r * wf;
        g += h.acc_far.g * wf;
        b += h.acc_far.b * wf;
        coc += h.acc_far_coc * wf;
        age += h.age * wf;
        wsum += w;
    });
    if (!any)
        return out;
    float inv = static_cast<float>(1.0 / wsum);
    out.acc_far = Color3{r, g, b} * inv;
    out.acc_far_coc = coc * inv;
    out.age = age * inv;
    out.valid = true;
    return out;
}

// Accumulated-hit-ratio blend of the mean field CoC sizes; sizes the spatial
// gather kernel.
inline float blend_coc(float acc_h, float acc_near_coc, float acc_far_coc) {
    return acc_h * acc_near_coc + (1.0f - acc_h) * acc_far_coc;
}

// Everything the rest of the frame needs from temporal reconstruction.
struct ReconstructionFrame {
    Image<Color3> rt_color;        // latest-h composition of the resolved fields
    Image<Color3> resolved_near, resolved_far;
    Image<float> latest_h;
    Image<float> acc_h;
    Image<float> coc_gather;
    Image<float> variance;         // max(mu2 - mu1^2, 0)
    Image<uint8_t> valid;          // history age > 0 after the update

    ReconstructionFrame() = default;
    ReconstructionFrame(int w, int h)
        : rt_color(w, h), resolved_near(w, h), resolved_far(w, h), latest_h(w, h),
          acc_h(w, h), coc_gather(w, h), variance(w, h), valid(w, h, 0) {}
};

struct TemporalResult {
    HistoryBuffer history;
    ReconstructionFrame frame;
};

// One temporal step: reproject per field, EMA-blend the premultiplied
// accumulators, normalize by the accumulated hit ratio, and compose with the
// latest hit ratio. A field whose reprojection is invalid restarts from the
// current frame (alpha treated as 1).
inline TemporalResult temporal_accumulate(const HistoryBuffer& prev, const GBuffer& gb,
                                          const Image<FieldSample>& fields,
                                          const LensCamera& prev_cam,
                                          const TemporalParams& params, int threads = 1) {
    if (!(params.alpha > 0.0 && params.alpha <= 1.0))
        throw std::invalid_argument("temporal_accumulate: alpha must be in (0, 1]");
    int width = gb.width, height = gb.height;
    TemporalResult result;
    result.history = HistoryBuffer(width, height);
    result.frame = ReconstructionFrame(width, height);
    float alpha = static_cast<float>(params.alpha);
    float alpha_h = params.alpha_h > 0.0 ? static_cast<float>(params.alpha_h) : alpha;
    float eps = static_cast<float>(params.eps);

    parallel_rows(height, threads, [&](int y) {
        for (int x = 0; x < width; ++x) {
            NearHistory near_hist = reproject_near(prev, gb.motion.at(x, y), x, y);
            FarHistory far_hist = reproject_far(prev, fields, x, y, prev_cam);
            if (params.strict_rejection && near_hist.valid) {
                float z = gb.depth.at(x, y);
                float cur_inv = std::isinf(z) ? 0.0f : 1.0f / z;
                // sampled history inverse depth at the same spot
                Vec2 uv{(x + 0.5) / static_cast<double>(width),
                        (y + 0.5) / static_cast<double>(height)};
                Vec2 prev_uv = uv - gb.motion.at(x, y);
                float hist_inv = 0.0f;
                double wsum = 0.0;
                detail::history_bilinear(prev, prev_uv, [&](const HistoryPixel& h, double w) {
                    hist_inv += h.inv_depth * static_cast<float>(w);
                    wsum += w;
                });
                if (wsum > 1e-6)
                    hist_inv /= static_cast<float>(wsum);
                if (std::fabs(hist_inv - cur_inv) > 0.1f * std::fmax(cur_inv, 1e-4f))
                    near_hist.valid = false;
            }

            const FieldSample& field = fields.at(x, y);
            bool traced = field.rays > 0;
            HistoryPixel out;
            float latest_h;
            bool have_data;

            if (traced) {
                float h = field.hit_ratio;
                float a_n = near_hist.valid ? alpha : 1.0f;
                float a_f = far_hist.valid ? alpha : 1.0f;
                float a_hr = near_hist.valid ? alpha_h : 1.0f;
                out.acc_near = lerp(near_hist.acc_near, field.near_color * h, a_n);
                out.acc_far = lerp(far_hist.acc_far, field.far_color * (1.0f - h), a_f);
                out.acc_h = lerp(near_hist.acc_h, h, a_hr);
                out.acc_near_coc = lerp(near_hist.acc_near_coc, field.near_coc, a_n);
                out.acc_far_coc = lerp(far_hist.acc_far_coc, field.far_coc, a_f);
                latest_h = h;
                float base_age = near_hist.valid ? near_hist.age : 0.0f;
                out.age = std::fmin(base_age + 1.0f, static_cast<float>(params.age_max));
                have_data = true;
            } else if (near_hist.valid || far_hist.valid) {
                // no new rays: carry the reprojected history forward
                out.acc_near = near_hist.acc_near;
                out.acc_far = far_hist.acc_far;
                out.acc_h = near_hist.valid ? near_hist.acc_h : 0.0f;
                out.acc_near_coc = near_hist.acc_near_coc;
                out.acc_far_coc = far_hist.acc_far_coc;
                out.mu1 = near_hist.mu1;
                out.mu2 = near_hist.mu2;
                float base_age = std::fmax(near_hist.age, far_hist.age);
                out.age = std::fmin(base_age + 1.0f, static_cast<float>(params.age_max));
                latest_h = out.acc_h;
                have_data = true;
            } else {
                latest_h = 0.0f;
                have_data = false;
            }

            if (have_data) {
                float z = gb.depth.at(x, y);
                out.inv_depth = std::isinf(z) ? 0.0f : 1.0f / z;
                Color3 resolved_near = out.acc_near / std::fmax(out.acc_h, eps);
                Color3 resolved_far = out.acc_far / std::fmax(1.0f - out.acc_h, eps);
                Color3 rt = resolved_near * latest_h + resolved_far * (1.0f - latest_h);
                if (traced) {
                    float lum = luminance(rt);
                    float a_m = near_hist.valid ? alpha : 1.0f;
                    out.mu1 = lerp(near_hist.mu1, lum, a_m);
                    out.mu2 = lerp(near_hist.mu2, lum * lum, a_m);
                }
                result.frame.rt_color.at(x, y) = rt;
                result.frame.resolved_near.at(x, y) = resolved_near;
                result.frame.resolved_far.at(x, y) = resolved_far;
                result.frame.valid.at(x, y) = 1;
                result.frame.coc_gather.at(x, y) =
                    blend_coc(out.acc_h, out.acc_near_coc, out.acc_far_coc);
            }
            result.frame.latest_h.at(x, y) = latest_h;
            result.frame.acc_h.at(x, y) = out.acc_h;
            result.frame.variance.at(x, y) = std::fmax(out.mu2 - out.mu1 * out.mu1, 0.0f);
            result.history.at(x, y) = out;
        }
    });
    return result;
}

// -- history serialization (versioned little-endian dump) --------------------

constexpr char kHistoryMagic[8] = {'L', 'F', 'H', 'I', 'S', 'T', '0', '1'};
constexpr int kHistoryFloatsPerPixel = 13;

inline void save_history(const HistoryBuffer& history, int frame_index,
                         const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw std::runtime_error("save_history: cannot open " + path);
    std::fwrite(kHistoryMagic, 1, 8, f);
    uint32_t header[3] = {static_cast<uint32_t>(history.width()),
                          static_cast<uint32_t>(history.height()),
                          static_cast<uint32_t>(frame_index)};
    std::fwrite(header, sizeof(uint32_t), 3, f);
    for (int y = 0; y < history.height(); ++y) {
        for (int x = 0; x < history.width(); ++x) {
            const HistoryPixel& h = history.at(x, y);
            float rec[kHistoryFloatsPerPixel] = {
                h.acc_near.r, h.acc_near.g, h.acc_near.b,
                h.acc_far.r,  h.acc_far.g,  h.acc_far.b,
                h.acc_h,      h.acc_near_coc, h.acc_far_coc,
                h.mu1,        h.mu2,          h.inv_depth, h.age};
            std::fwrite(rec, sizeof(float), kHistoryFloatsPerPixel, f);
        }
    }
    std::fclose(f);
}

inline HistoryBuffer load_history(const std::string& path, int* frame_index = nullptr) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw std::runtime_error("load_history: cannot open " + path);
    char magic[8];
    uint32_t header[3];
    if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, kHistoryMagic, 8) != 0 ||
        std::fread(header, sizeof(uint32_t), 3, f) != 3) {
        std::fclose(f);
        throw std::runtime_error("load_history: bad header in " + path);
    }
    HistoryBuffer out(static_cast<int>(header[0]), static_cast<int>(header[1]));
    if (frame_index)
        *frame_index = static_cast<int>(header[2]);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            float rec[kHistoryFloatsPerPixel];
            if (std::fread(rec, sizeof(float), kHistoryFloatsPerPixel, f) !=
                kHistoryFloatsPerPixel) {
                std::fclose(f);
                throw std::runtime_error("load_history: truncated file " + path);
            }
            HistoryPixel& h = out.at(x, y);
            h.acc_near = {rec[0], rec[1], rec[2]};
            h.acc_far = {rec[3], rec[4], rec[5]};
            h.acc_h = rec[6];
            h.acc_near_coc = rec[7];
            h.acc_far_coc = rec[8];
            h.mu1 = rec[9];
            h.mu2 = rec[10];
            h.inv_depth = rec[11];
            h.age = rec[12];
        }
    }
    std::fclose(f);
    return out;
}

}  // namespace lensfield
