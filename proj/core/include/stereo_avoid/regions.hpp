#pragma once

#include <array>
#include <string_view>

#include "stereo_avoid/maps.hpp"

namespace stereo_avoid {

enum class Region : int {
    center = 0,
    up,
    down,
    left,
    right,
    up_left,
    up_right,
    down_left,
    down_right,
};

inline constexpr int kRegionCount = 9;

inline constexpr std::array<Region, kRegionCount> kAllRegions = {
    Region::center,  Region::up,       Region::down,      Region::left,      Region::right,
    Region::up_left, Region::up_right, Region::down_left, Region::down_right,
};

std::string_view region_name(Region r) noexcept;
/// Throws std::invalid_argument for an unknown name.
Region region_from_name(std::string_view name);

/// Reported for a region without any valid pixel: three times the 3 m
/// normalization span, so it saturates to "fully far".
inline constexpr double kFarSentinelM = 9.0;

/// Half-open pixel rectangle [x_lo, x_hi) x [y_lo, y_hi).
struct PixelRect {
    int x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;

    int area() const noexcept { return (x_hi - x_lo) * (y_hi - y_lo); }
    bool contains(int x, int y) const noexcept { return x >= x_lo && x < x_hi && y >= y_lo && y < y_hi; }
    friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// 3x3 partition of the image induced by the center band bounds.
struct RegionGrid {
    int width_px = 0;
    int height_px = 0;
    int x_lo = 0, x_hi = 0;
    int y_lo = 0, y_hi = 0;

    void validate() const;

    /// Column class 0/1/2 = left/center/right band; row class 0/1/2 = up/center/down band.
    static Region region_of_bands(int col_band, int row_band) noexcept;
    Region region_of(int x, int y) const noexcept;
    PixelRect rect(Region r) const noexcept;

    friend bool operator==(const RegionGrid&, const RegionGrid&) = default;
};

/// Nine region-minimum depths in meters, indexed by Region.
struct RegionDepths {
    std::array<double, kRegionCount> values{};

    static RegionDepths filled(double v) noexcept {
        RegionDepths r;
        r.values.fill(v);
        return r;
    }

    double operator[](Region r) const noexcept { return values[static_cast<int>(r)]; }
    double& operator[](Region r) noexcept { return values[static_cast<int>(r)]; }

    friend bool operator==(const RegionDepths&, const RegionDepths&) = default;
};

/// round(focal * safe_width / plane_distance): pixel side of the safe window
/// projected onto a plane at plane_dist_m. Throws on non-positive arguments.
int center_region_px(double focal_px, double safe_width_m = 0.5, double plane_dist_m = 1.5);

/// Center band at image center +/- side/2. Throws std::invalid_argument unless
/// 0 < center_side_px < min(width, height) - 2.
RegionGrid make_grid(int width_px, int height_px, int center_side_px);

/// Minimum over valid pixels per region; kFarSentinelM for regions with none.
RegionDepths region_min_depths(const DepthMap& depth, const RegionGrid& grid);

}  // namespace stereo_avoid
