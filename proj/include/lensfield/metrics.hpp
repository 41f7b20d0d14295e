#pragma once

#include <cmath>
#include <stdexcept>

#include "lensfield/image.hpp"
#include "lensfield/vec.hpp"

namespace lensfield {

struct CompareResult {
    double mse = 0.0;
    double psnr = 0.0;  // dB, capped at 99
    double ssim = 1.0;
};

constexpr double kPsnrCap = 99.0;

// MSE / PSNR / SSIM over [0,1]-clamped linear RGB. SSIM uses sliding 8x8
// uniform windows on luminance with the standard constants; with a region
// mask, MSE runs over masked pixels and SSIM over windows whose center pixel
// is masked.
inline CompareResult compare_images(const Image<Color3>& a, const Image<Color3>& b,
                                    const Image<uint8_t>* region = nullptr) {
    if (!a.same_size(b))
        throw std::invalid_argument("compare_images: dimension mismatch");
    if (region && !a.same_size(*region))
        throw std::invalid_argument("compare_images: region mask dimension mismatch");
    int width = a.width(), height = a.height();

    auto clamp01 = [](Color3 c) {
        return Color3{clampf(c.r, 0, 1), clampf(c.g, 0, 1), clampf(c.b, 0, 1)};
    };

    double se = 0.0;
    long count = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (region && !region->at(x, y))
                continue;
            Color3 ca = clamp01(a.at(x, y));
            Color3 cb = clamp01(b.at(x, y));
            double dr = ca.r - cb.r, dg = ca.g - cb.g, db = ca.b - cb.b;
            se += (dr * dr + dg * dg + db * db) / 3.0;
            ++count;
        }
    }
    CompareResult result;
    result.mse = count > 0 ? se / count : 0.0;
    result.psnr = result.mse > 0.0
                      ? std::fmin(10.0 * std::log10(1.0 / result.mse), kPsnrCap)
                      : kPsnrCap;

    constexpr int kWin = 8;
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    double ssim_sum = 0.0;
    long windows = 0;
    for (int y = 0; y + kWin <= height; ++y) {
        for (int x = 0; x + kWin <= width; ++x) {
            if (region) {
                int cx = x + kWin / 2, cy = y + kWin / 2;
                if (!region->at(cx, cy))
                    continue;
            }
            double ma = 0, mb = 0, va = 0, vb = 0, cov = 0;
            for (int j = 0; j < kWin; ++j) {
                for (int i = 0; i < kWin; ++i) {
                    double la = luminance(clamp01(a.at(x + i, y + j)));
                    double lb = luminance(clamp01(b.at(x + i, y + j)));
                    ma += la;
                    mb += lb;
                    va += la * la;
                    vb += lb * lb;
                    cov += la * lb;
                }
            }
            constexpr double n = kWin * kWin;
            ma /= n;
            mb /= n;
            va = va / n - ma * ma;
            vb = vb / n - mb * mb;
            cov = cov / n - ma * mb;
            double ssim = ((2 * ma * mb + c1) * (2 * cov + c2)) /
                          ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ssim_sum += ssim;
            ++windows;
        }
    }
    result.ssim = windows > 0 ? ssim_sum / windows : 1.0;
    return result;
}

}  // namespace lensfield
