#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stereo_avoid/fuzzy.hpp"
#include "stereo_avoid/regions.hpp"

namespace stereo_avoid {

/// Normalized steering: pitch > 0 is upward, yaw > 0 is rightward, both in [-1, 1].
struct SteerCommand {
    double pitch = 0.0;
    double yaw = 0.0;

    double magnitude() const noexcept;
    friend bool operator==(const SteerCommand&, const SteerCommand&) = default;
};

enum class RulePreset {
    paper_literal,    // the seven printed rules plus both tie-breaks, verbatim
    paper_corrected,  // rules 6 and 7 re-aimed away from the near region
};

/// Accepts "paper_literal"/"paper-literal" and "paper_corrected"/"paper-corrected".
std::optional<RulePreset> preset_from_name(std::string_view name) noexcept;
std::string_view preset_name(RulePreset p) noexcept;

/// clamp(d / span, 0, 1). Throws InvalidDepthError for d <= 0.
double normalize_depth(double depth_m, double span_m = 3.0);

/// Five inputs (center, up, down, left, right) on [0, 1] with terms
/// near/medium/far; outputs pitch and yaw on [-1, 1] with negative/zero/positive.
fuzzy::RuleBase build_primary_rulebase(RulePreset preset);

/// The primary rule base relabeled 45 degrees counter-clockwise:
/// up -> up_left, right -> up_right, down -> down_right, left -> down_left,
/// pitch -> pitch_rot, yaw -> yaw_rot.
fuzzy::RuleBase build_diagonal_rulebase(RulePreset preset);
fuzzy::RuleBase rotate_rulebase(const fuzzy::RuleBase& primary);

/// Rotated-frame command back to (pitch, yaw), clamped to [-1, 1].
std::pair<double, double> rotate_back(double pitch_rot, double yaw_rot) noexcept;

struct ControllerConfig {
    double normalization_span_m = 3.0;
    RulePreset preset = RulePreset::paper_corrected;
    /// Primary command magnitude below which the corner controller is consulted.
    double diagonal_trigger = 0.05;
    /// Minimum near-degree every cardinal region needs before corners are consulted.
    double diagonal_gate = 0.5;
    /// Evaluate each axis with its farther side in the positive slot and flip
    /// the sign back afterwards. Unset: on for paper_corrected, off otherwise.
    std::optional<bool> farther_side_first;

    void validate() const;
};

enum class ActiveController { primary, diagonal };
std::string_view to_string(ActiveController a) noexcept;

struct SteerResult {
    SteerCommand command;
    ActiveController active = ActiveController::primary;
    std::vector<double> rule_strengths;  // of the active controller
    bool pitch_inactive = false;         // no rule activated the output; component forced to 0
    bool yaw_inactive = false;
    RegionDepths normalized;
};

/// Primary five-region controller plus the rotated corner controller.
class AvoidanceController {
public:
    explicit AvoidanceController(ControllerConfig cfg = {});
    /// Custom primary rule base; must declare the preset variable and term names.
    AvoidanceController(fuzzy::RuleBase primary, ControllerConfig cfg);

    SteerResult steer_detailed(const RegionDepths& depths) const;
    SteerCommand steer(const RegionDepths& depths) const { return steer_detailed(depths).command; }

    const fuzzy::RuleBase& primary() const noexcept { return primary_; }
    const fuzzy::RuleBase& diagonal() const noexcept { return diagonal_; }
    const ControllerConfig& config() const noexcept { return cfg_; }
    bool farther_side_first() const noexcept { return canonical_; }

private:
    ControllerConfig cfg_;
    fuzzy::RuleBase primary_;
    fuzzy::RuleBase diagonal_;
    bool canonical_;
};

SteerCommand steer(const RegionDepths& depths, const ControllerConfig& cfg = {});

}  // namespace stereo_avoid
