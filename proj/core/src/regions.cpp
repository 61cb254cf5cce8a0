#include "stereo_avoid/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stereo_avoid {

namespace {
constexpr std::array<std::string_view, kRegionCount> kNames = {
    "center", "up", "down", "left", "right", "up_left", "up_right", "down_left", "down_right",
};

// [row_band][col_band]
constexpr Region kBandTable[3][3] = {
    {Region::up_left, Region::up, Region::up_right},
    {Region::left, Region::center, Region::right},
    {Region::down_left, Region::down, Region::down_right},
};
}  // namespace

std::string_view region_name(Region r) noexcept { return kNames[static_cast<int>(r)]; }

Region region_from_name(std::string_view name) {
    for (int i = 0; i < kRegionCount; ++i)
        if (kNames[i] == name) return static_cast<Region>(i);
    throw std::invalid_argument("unknown region '" + std::string(name) + "'");
}

void RegionGrid::validate() const {
    if (!(0 < x_lo && x_lo < x_hi && x_hi < width_px))
        throw std::invalid_argument("region grid: need 0 < x_lo < x_hi < width");
    if (!(0 < y_lo && y_lo < y_hi && y_hi < height_px))
        throw std::invalid_argument("region grid: need 0 < y_lo < y_hi < height");
}

Region RegionGrid::region_of_bands(int col_band, int row_band) noexcept { return kBandTable[row_band][col_band]; }

Region RegionGrid::region_of(int x, int y) const noexcept {
    const int col = x < x_lo ? 0 : (x < x_hi ? 1 : 2);
    const int row = y < y_lo ? 0 : (y < y_hi ? 1 : 2);
    return region_of_bands(col, row);
}

PixelRect RegionGrid::rect(Region r) const noexcept {
    const std::array<int, 4> xs = {0, x_lo, x_hi, width_px};
    const std::array<int, 4> ys = {0, y_lo, y_hi, height_px};
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col)
            if (kBandTable[row][col] == r) return {xs[col], xs[col + 1], ys[row], ys[row + 1]};
    return {};
}

int center_region_px(double focal_px, double safe_width_m, double plane_dist_m) {
    if (!(focal_px > 0.0) || !(safe_width_m > 0.0) || !(plane_dist_m > 0.0))
        throw std::invalid_argument("center_region_px: all arguments must be > 0");
    return static_cast<int>(std::lround(focal_px * safe_width_m / plane_dist_m));
}

RegionGrid make_grid(int width_px, int height_px, int center_side_px) {
    if (center_side_px <= 0) throw std::invalid_argument("make_grid: center side must be > 0");
    if (center_side_px >= std::min(width_px, height_px) - 2)
        throw std::invalid_argument("make_grid: center side " + std::to_string(center_side_px) +
                                    " too large for " + std::to_string(width_px) + "x" +
                                    std::to_string(height_px));
    RegionGrid g;
    g.width_px = width_px;
    g.height_px = height_px;
    g.x_lo = width_px / 2 - center_side_px / 2;
    g.x_hi = g.x_lo + center_side_px;
    g.y_lo = height_px / 2 - center_side_px / 2;
    g.y_hi = g.y_lo + center_side_px;
    g.validate();
    return g;
}

RegionDepths region_min_depths(const DepthMap& depth, const RegionGrid& grid) {
    if (depth.width() != grid.width_px || depth.height() != grid.height_px)
        throw std::invalid_argument("region_min_depths: depth map size does not match grid");
    std::array<float, kRegionCount> mins;
    mins.fill(std::numeric_limits<float>::infinity());
    for (int y = 0; y < depth.height(); ++y) {
        auto row = depth.row(y);
        for (int x = 0; x < depth.width(); ++x) {
            const float v = row[x];
            if (!is_valid(v)) continue;
            auto& m = mins[static_cast<int>(grid.region_of(x, y))];
            m = std::min(m, v);
        }
    }
    RegionDepths out;
    for (int i = 0; i < kRegionCount; ++i)
        out.values[i] = std::isinf(mins[i]) ? kFarSentinelM : static_cast<double>(mins[i]);
    return out;
}

}  // namespace stereo_avoid
