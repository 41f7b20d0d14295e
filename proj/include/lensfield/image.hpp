#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

#include "lensfield/vec.hpp"

namespace lensfield {

// Row-major 2D buffer. Pixel (0,0) is the top-left corner.
template <typename T>
class Image {
public:
    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height), pixels_(static_cast<size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }
    size_t pixel_count() const { return pixels_.size(); }

    T& at(int x, int y) {
        assert(in_bounds(x, y));
        return pixels_[static_cast<size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(in_bounds(x, y));
        return pixels_[static_cast<size_t>(y) * width_ + x];
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    // Clamp-to-edge fetch.
    const T& at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
        return at(x, y);
    }

    T* data() { return pixels_.data(); }
    const T* data() const { return pixels_.data(); }

    template <typename U>
    bool same_size(const Image<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> pixels_;
};

// Bilinear fetch at continuous pixel coordinates: (0.5, 0.5) is the center
// of pixel (0,0). Clamp-to-edge outside the image.
template <typename T>
inline T bilinear(const Image<T>& img, double px, double py) {
    double fx = px - 0.5;
    double fy = py - 0.5;
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    double tx = fx - x0;
    double ty = fy - y0;
    const T& p00 = img.at_clamped(x0, y0);
    const T& p10 = img.at_clamped(x0 + 1, y0);
    const T& p01 = img.at_clamped(x0, y0 + 1);
    const T& p11 = img.at_clamped(x0 + 1, y0 + 1);
    T top = p00 + (p10 - p00) * static_cast<float>(tx);
    T bot = p01 + (p11 - p01) * static_cast<float>(tx);
    return top + (bot - top) * static_cast<float>(ty);
}

inline double bilinear(const Image<double>& img, double px, double py) {
    double fx = px - 0.5, fy = py - 0.5;
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    double tx = fx - x0, ty = fy - y0;
    double top = lerp(img.at_clamped(x0, y0), img.at_clamped(x0 + 1, y0), tx);
    double bot = lerp(img.at_clamped(x0, y0 + 1), img.at_clamped(x0 + 1, y0 + 1), tx);
    return lerp(top, bot, ty);
}

}  // namespace lensfield
