#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stereo_avoid/camera.hpp"

namespace stereo_avoid {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // interleaved, row-major

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
    }
};

// Binary PGM (P5, maxval 255). Comments after the magic or between header
// fields are accepted on read; exactly one whitespace byte precedes the raster.
GrayImage parse_pgm(const std::string& bytes);
std::string encode_pgm(const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

std::string encode_ppm(const RgbImage& image);
RgbImage parse_ppm(const std::string& bytes);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

/// Splits a side-by-side frame at the vertical midline: (left half, right half).
std::pair<GrayImage, GrayImage> split_side_by_side(const GrayImage& combined);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace stereo_avoid
