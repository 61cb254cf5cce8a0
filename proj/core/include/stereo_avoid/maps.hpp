#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace stereo_avoid {

/// Marks a pixel with no measurement. NaN, so it differs from every finite value.
inline constexpr float kInvalid = std::numeric_limits<float>::quiet_NaN();

inline bool is_valid(float v) noexcept { return !std::isnan(v); }

/// Dense per-pixel float field. Tag distinguishes disparity (px) from depth (m).
template <class Tag>
class ScalarMap {
public:
    ScalarMap() = default;
    ScalarMap(int width, int height, float fill = kInvalid)
        : width_(width), height_(height), values_(static_cast<std::size_t>(width) * height, fill) {
        if (width < 0 || height < 0) throw std::invalid_argument("map dimensions must be non-negative");
    }
    ScalarMap(int width, int height, std::vector<float> values)
        : width_(width), height_(height), values_(std::move(values)) {
        if (values_.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("map value count does not match dimensions");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    float at(int x, int y) const noexcept { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    float& at(int x, int y) noexcept { return values_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<float> row(int y) noexcept {
        return {values_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }
    std::span<const float> row(int y) const noexcept {
        return {values_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    const std::vector<float>& values() const noexcept { return values_; }

    std::size_t valid_count() const noexcept {
        std::size_t n = 0;
        for (float v : values_) n += is_valid(v) ? 1 : 0;
        return n;
    }

    /// Bitwise comparison; NaN sentinels compare equal to each other.
    bool bit_identical(const ScalarMap& other) const noexcept {
        if (width_ != other.width_ || height_ != other.height_) return false;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (std::bit_cast<std::uint32_t>(values_[i]) != std::bit_cast<std::uint32_t>(other.values_[i]))
                return false;
        return true;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> values_;
};

struct DisparityTag {};
struct DepthTag {};

using DisparityMap = ScalarMap<DisparityTag>;
using DepthMap = ScalarMap<DepthTag>;

}  // namespace stereo_avoid
