#pragma once

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lensfield/image.hpp"
#include "lensfield/vec.hpp"

namespace lensfield {

// -- PFM: 32-bit float, little-endian, rows bottom-to-top ---------------------

inline void write_pfm(const Image<Color3>& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("write_pfm: cannot open " + path);
    f << "PF\n" << img.width() << " " << img.height() << "\n-1.0\n";
    for (int y = img.height() - 1; y >= 0; --y)
        f.write(reinterpret_cast<const char*>(&img.at(0, y)),
                static_cast<std::streamsize>(img.width()) * sizeof(Color3));
}

inline void write_pfm(const Image<float>& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("write_pfm: cannot open " + path);
    f << "Pf\n" << img.width() << " " << img.height() << "\n-1.0\n";
    for (int y = img.height() - 1; y >= 0; --y)
        f.write(reinterpret_cast<const char*>(&img.at(0, y)),
                static_cast<std::streamsize>(img.width()) * sizeof(float));
}

namespace detail {

inline std::string pfm_token(std::istream& in) {
    std::string tok;
    in >> tok;
    return tok;
}

}  // namespace detail

inline Image<Color3> read_pfm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("read_pfm: cannot open " + path);
    std::string magic = detail::pfm_token(f);
    bool gray = magic == "Pf";
    if (magic != "PF" && !gray)
        throw std::runtime_error("read_pfm: not a PFM file: " + path);
    int width = std::stoi(detail::pfm_token(f));
    int height = std::stoi(detail::pfm_token(f));
    double scale = std::stod(detail::pfm_token(f));
    if (scale >= 0.0)
        throw std::runtime_error("read_pfm: big-endian PFM unsupported: " + path);
    f.get();  // single whitespace after the header
    Image<Color3> img(width, height);
    std::vector<float> row(static_cast<size_t>(width) * (gray ? 1 : 3));
    for (int y = height - 1; y >= 0; --y) {
        f.read(reinterpret_cast<char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!f)
            throw std::runtime_error("read_pfm: truncated file: " + path);
        for (int x = 0; x < width; ++x) {
            if (gray)
                img.at(x, y) = {row[x], row[x], row[x]};
            else
                img.at(x, y) = {row[3 * x], row[3 * x + 1], row[3 * x + 2]};
        }
    }
    return img;
}

// -- PGM (P5/P2), used for masks ---------------------------------------------

inline void write_pgm(const Image<uint8_t>& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("write_pgm: cannot open " + path);
    f << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.data()),
            static_cast<std::streamsize>(img.pixel_count()));
}

inline Image<uint8_t> read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("read_pgm: cannot open " + path);
    auto next_token = [&f]() {
        std::string tok;
        while (f >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(f, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("read_pgm: truncated header");
    };
    std::string magic = next_token();
    if (magic != "P5" && magic != "P2")
        throw std::runtime_error("read_pgm: not a PGM file: " + path);
    int width = std::stoi(next_token());
    int height = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (maxval <= 0 || maxval > 255)
        throw std::runtime_error("read_pgm: unsupported maxval");
    Image<uint8_t> img(width, height);
    if (magic == "P5") {
        f.get();
        f.read(reinterpret_cast<char*>(img.data()),
               static_cast<std::streamsize>(img.pixel_count()));
        if (!f)
            throw std::runtime_error("read_pgm: truncated data: " + path);
    } else {
        for (size_t i = 0; i < img.pixel_count(); ++i)
            img.data()[i] = static_cast<uint8_t>(std::stoi(next_token()));
    }
    return img;
}

// -- PNG (8-bit sRGB), zlib-compressed ----------------------------------------

inline float linear_to_srgb(float v) {
    v = clampf(v, 0.0f, 1.0f);
    return v <= 0.0031308f ? 12.92f * v
                           : 1.055f * std::pow(v, 1.0f / 2.4f) - 0.055f;
}

namespace detail {

inline void png_chunk(std::ofstream& f, const char type[4], const unsigned char* data,
                      uint32_t size) {
    auto put_u32 = [&f](uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
        f.write(reinterpret_cast<char*>(b), 4);
    };
    put_u32(size);
    f.write(type, 4);
    if (size)
        f.write(reinterpret_cast<const char*>(data), size);
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    if (size)
        crc = crc32(crc, data, size);
    put_u32(static_cast<uint32_t>(crc));
}

}  // namespace detail

// Final frames go out as both exact PFM and viewable PNG; PNG quantizes
// through the sRGB transfer.
inline void write_png(const Image<Color3>& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("write_png: cannot open " + path);
    static const unsigned char sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    f.write(reinterpret_cast<const char*>(sig), 8);

    unsigned char ihdr[13];
    uint32_t w = static_cast<uint32_t>(img.width());
    uint32_t h = static_cast<uint32_t>(img.height());
    ihdr[0] = w >> 24; ihdr[1] = w >> 16; ihdr[2] = w >> 8; ihdr[3] = w;
    ihdr[4] = h >> 24; ihdr[5] = h >> 16; ihdr[6] = h >> 8; ihdr[7] = h;
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 2;   // truecolor
    ihdr[10] = ihdr[11] = ihdr[12] = 0;
    detail::png_chunk(f, "IHDR", ihdr, 13);

    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(img.height()) * (1 + 3 * img.width()));
    for (int y = 0; y < img.height(); ++y) {
        raw.push_back(0);  // filter: none
        for (int x = 0; x < img.width(); ++x) {
            Color3 c = img.at(x, y);
            raw.push_back(static_cast<unsigned char>(
                std::lround(linear_to_srgb(c.r) * 255.0f)));
            raw.push_back(static_cast<unsigned char>(
                std::lround(linear_to_srgb(c.g) * 255.0f)));
            raw.push_back(static_cast<unsigned char>(
                std::lround(linear_to_srgb(c.b) * 255.0f)));
        }
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) !=
        Z_OK)
        throw std::runtime_error("write_png: deflate failed");
    detail::png_chunk(f, "IDAT", compressed.data(), static_cast<uint32_t>(bound));
    detail::png_chunk(f, "IEND", nullptr, 0);
}

}  // namespace lensfield
