#pragma once

#include <cstdint>
#include <optional>

#include "stereo_avoid/camera.hpp"
#include "stereo_avoid/depth_lut.hpp"
#include "stereo_avoid/maps.hpp"
#include "stereo_avoid/regions.hpp"

namespace stereo_avoid {

struct MatchParams {
    int window_radius_px = 4;
    int max_disparity_px = 64;
    /// Reject when best >= (1 - ratio) * second best (outside +/-1 px of the winner).
    double uniqueness_ratio = 0.15;
    /// Max |d_left - d_right|; nullopt disables the left-right check.
    std::optional<int> lr_consistency_px;

    void validate() const;

    friend bool operator==(const MatchParams&, const MatchParams&) = default;
};

/// Sum of absolute differences between the (2r+1)^2 window at (x, y) in
/// `left` and at (x - d, y) in `right`. Throws std::out_of_range when either
/// window leaves its image.
std::uint32_t sad_cost(const GrayImage& left, const GrayImage& right, int x, int y, int d, int radius);

/// Pixels whose window plus full search range fits inside the image. Everything
/// outside is invalid in every disparity map produced with these params.
PixelRect matchable_area(int width, int height, const MatchParams& params) noexcept;

/// Winner-take-all SAD block matching along scanlines, smallest disparity on
/// ties. `workers` == 0 picks std::thread::hardware_concurrency(); the result
/// is bit-identical for every worker count.
DisparityMap block_match(const StereoPair& pair, const MatchParams& params, unsigned workers = 0);

/// Eq. z = B f / d per pixel; invalid and zero disparities become invalid.
DepthMap disparity_to_depth(const DisparityMap& disparity, const CameraRig& rig);

struct FusedResult {
    DepthMap depth;  // refined
    RegionDepths regions;
};

/// block_match -> disparity_to_depth -> LUT refinement -> region minima in a
/// single pass over row bands, each band keeping its own running minima.
FusedResult fused_pipeline(const StereoPair& pair, const MatchParams& params, const RegionGrid& grid,
                           const DepthLUT& lut, unsigned workers = 0);

/// Same result as fused_pipeline, built from the separate operations.
FusedResult unfused_pipeline(const StereoPair& pair, const MatchParams& params, const RegionGrid& grid,
                             const DepthLUT& lut, unsigned workers = 0);

unsigned resolve_workers(unsigned requested) noexcept;

}  // namespace stereo_avoid
