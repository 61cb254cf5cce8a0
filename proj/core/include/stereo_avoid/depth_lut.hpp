#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stereo_avoid/maps.hpp"

namespace stereo_avoid {

struct LutEntry {
    double computed_m = 0.0;
    double true_m = 0.0;

    friend bool operator==(const LutEntry&, const LutEntry&) = default;
};

/// Monotone correction from computed depth to true depth.
///
/// Piecewise-linear between entries; inputs outside the calibrated range clamp
/// to the nearest end's true depth. A default-constructed table is the identity.
class DepthLUT {
public:
    DepthLUT() = default;

    static DepthLUT identity() { return {}; }

    /// Sorts by computed depth. Throws std::invalid_argument on fewer than two
    /// samples, duplicate computed depths, non-positive depths, or true depths
    /// that do not increase with computed depth.
    static DepthLUT build(std::vector<LutEntry> samples);

    bool is_identity() const noexcept { return entries_.empty(); }
    const std::vector<LutEntry>& entries() const noexcept { return entries_; }

    /// Throws InvalidDepthError for computed <= 0.
    double refine(double computed_m) const;

private:
    std::vector<LutEntry> entries_;
};

/// Applies the table to every valid pixel; invalid pixels stay invalid.
DepthMap refine_depth_map(const DepthMap& depth, const DepthLUT& lut);

/// CSV with header `computed_m,true_m`, one pair per row.
DepthLUT parse_lut_csv(const std::string& text);
std::string encode_lut_csv(const DepthLUT& lut);
DepthLUT load_lut_csv(const std::filesystem::path& path);

}  // namespace stereo_avoid
