#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace stereo_avoid {

/// Pinhole stereo rig. The right camera sits baseline_m along the left
/// camera's right axis with identical orientation and intrinsics.
struct CameraRig {
    double baseline_m = 0.12;
    double focal_px = 450.0;
    double principal_x_px = 320.0;
    double principal_y_px = 180.0;
    int width_px = 640;
    int height_px = 360;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    friend bool operator==(const CameraRig&, const CameraRig&) = default;
};

/// Row-major 8-bit grayscale image.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint8_t at(int x, int y) const noexcept { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) noexcept { return pixels_[index(x, y)]; }

    std::span<const std::uint8_t> row(int y) const noexcept {
        return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }
    std::span<std::uint8_t> row(int y) noexcept {
        return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Rectified stereo pair. Construction checks that both images match the rig.
class StereoPair {
public:
    StereoPair(GrayImage left, GrayImage right, CameraRig rig);

    const GrayImage& left() const noexcept { return left_; }
    const GrayImage& right() const noexcept { return right_; }
    const CameraRig& rig() const noexcept { return rig_; }
    int width() const noexcept { return left_.width(); }
    int height() const noexcept { return left_.height(); }

private:
    GrayImage left_;
    GrayImage right_;
    CameraRig rig_;
};

/// Homogeneous pixel coordinate, rescaled so w == 1 on construction.
struct PixelHomog {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;

    /// Throws std::invalid_argument for w == 0.
    static PixelHomog normalized(double x, double y, double w);
};

struct FundamentalMatrix {
    std::array<double, 9> entries{};  // row-major

    double operator()(int row, int col) const noexcept { return entries[row * 3 + col]; }
    double determinant() const noexcept;

    friend bool operator==(const FundamentalMatrix&, const FundamentalMatrix&) = default;
};

/// z = B f / d. Throws InvalidDisparityError for d <= 0.
double depth_from_disparity(double disparity_px, const CameraRig& rig);

/// d = B f / z. Throws InvalidDepthError for z <= 0.
double disparity_from_depth(double depth_m, const CameraRig& rig);

/// F of an ideally rectified pair; m2' F m1 reduces to y1 - y2.
FundamentalMatrix rectified_fundamental() noexcept;

/// m2' F m1.
double epipolar_residual(const PixelHomog& m1, const PixelHomog& m2, const FundamentalMatrix& f) noexcept;

}  // namespace stereo_avoid
