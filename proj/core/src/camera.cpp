#include "stereo_avoid/camera.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "stereo_avoid/errors.hpp"

namespace stereo_avoid {

void CameraRig::validate() const {
    if (!(baseline_m > 0.0)) throw std::invalid_argument("camera rig: baseline_m must be > 0");
    if (!(focal_px > 0.0)) throw std::invalid_argument("camera rig: focal_px must be > 0");
    if (width_px <= 0 || height_px <= 0) throw std::invalid_argument("camera rig: image dimensions must be > 0");
    if (!(principal_x_px >= 0.0 && principal_x_px < width_px))
        throw std::invalid_argument("camera rig: principal_x_px outside [0, width)");
    if (!(principal_y_px >= 0.0 && principal_y_px < height_px))
        throw std::invalid_argument("camera rig: principal_y_px outside [0, height)");
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("image dimensions must be non-negative");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 0 || height < 0) throw std::invalid_argument("image dimensions must be non-negative");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("pixel count " + std::to_string(pixels_.size()) + " != " +
                                    std::to_string(width) + "x" + std::to_string(height));
}

StereoPair::StereoPair(GrayImage left, GrayImage right, CameraRig rig)
    : left_(std::move(left)), right_(std::move(right)), rig_(rig) {
    rig_.validate();
    if (left_.width() != right_.width() || left_.height() != right_.height())
        throw std::invalid_argument("stereo pair: left and right dimensions differ");
    if (left_.width() != rig_.width_px || left_.height() != rig_.height_px)
        throw std::invalid_argument("stereo pair: image dimensions do not match the rig");
}

PixelHomog PixelHomog::normalized(double x, double y, double w) {
    if (w == 0.0) throw std::invalid_argument("homogeneous pixel at infinity (w == 0)");
    return {x / w, y / w, 1.0};
}

double FundamentalMatrix::determinant() const noexcept {
    const auto& e = entries;
    return e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6]) +
           e[2] * (e[3] * e[7] - e[4] * e[6]);
}

double depth_from_disparity(double disparity_px, const CameraRig& rig) {
    if (!(disparity_px > 0.0))
        throw InvalidDisparityError("disparity must be > 0 (zero disparity is infinite depth)");
    return rig.baseline_m * rig.focal_px / disparity_px;
}

double disparity_from_depth(double depth_m, const CameraRig& rig) {
    if (!(depth_m > 0.0)) throw InvalidDepthError("depth must be > 0");
    return rig.baseline_m * rig.focal_px / depth_m;
}

FundamentalMatrix rectified_fundamental() noexcept {
    return {{0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0}};
}

double epipolar_residual(const PixelHomog& m1, const PixelHomog& m2, const FundamentalMatrix& f) noexcept {
    const double fm0 = f(0, 0) * m1.x + f(0, 1) * m1.y + f(0, 2) * m1.w;
    const double fm1 = f(1, 0) * m1.x + f(1, 1) * m1.y + f(1, 2) * m1.w;
    const double fm2 = f(2, 0) * m1.x + f(2, 1) * m1.y + f(2, 2) * m1.w;
    return m2.x * fm0 + m2.y * fm1 + m2.w * fm2;
}

}  // namespace stereo_avoid
