#pragma once

#include <filesystem>
#include <string>

#include "stereo_avoid/camera.hpp"
#include "stereo_avoid/disparity.hpp"
#include "stereo_avoid/fuzzy.hpp"
#include "stereo_avoid/maps.hpp"
#include "stereo_avoid/regions.hpp"
#include "stereo_avoid/sim.hpp"

// Text formats shared by the CLI and tests. Parsers throw ParseError on
// malformed input and std::invalid_argument when the content violates an
// invariant of the type it describes.
namespace stereo_avoid::io {

/// {"baseline_m", "focal_px", "principal_x_px", "principal_y_px", "width_px", "height_px"}
CameraRig parse_rig_json(const std::string& text);
std::string rig_to_json(const CameraRig& rig);
CameraRig load_rig(const std::filesystem::path& path);

/// {"window_radius_px", "max_disparity_px", "uniqueness_ratio", "lr_consistency_px" (int or null)};
/// missing keys keep their defaults.
MatchParams parse_match_json(const std::string& text);
std::string match_to_json(const MatchParams& params);

/// {"variables": [{"name", "role": "input"|"output", "universe": [lo, hi],
///   "terms": {"near": [a, b, c, d], ...}}],
///  "rules": [{"if": [[var, term] | [var, term, "not"], ...], "then": [[var, term], ...],
///             "op": "and"|"or"}],
///  "and", "or", "aggregation", "defuzz", "q"}
fuzzy::RuleBase parse_rulebase_json(const std::string& text);
std::string rulebase_to_json(const fuzzy::RuleBase& rb);
fuzzy::RuleBase load_rulebase(const std::filesystem::path& path);

/// {"boxes": [{"min": [x,y,z], "max": [x,y,z], "seed": n, "velocity": [vx,vy,vz]}],
///  "bounds": {"min": [x,y,z], "max": [x,y,z]}}; velocity is optional.
sim::Scene parse_scene_json(const std::string& text);
std::string scene_to_json(const sim::Scene& scene);
sim::Scene load_scene(const std::filesystem::path& path);

/// Nine depths keyed by region name.
std::string region_depths_to_json(const RegionDepths& depths);
RegionDepths parse_region_depths_json(const std::string& text);
std::string grid_to_json(const RegionGrid& grid);

/// One CSV row per image row, meters with 9 significant digits, "nan" for invalid.
std::string depth_map_csv(const DepthMap& depth);
DepthMap parse_depth_map_csv(const std::string& text);

/// round(d * scale) clamped to [0, 255]; invalid pixels are 0.
GrayImage disparity_to_pgm_image(const DisparityMap& disparity, double scale);

}  // namespace stereo_avoid::io
