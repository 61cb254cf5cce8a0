#include "stereo_avoid/controller.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "stereo_avoid/errors.hpp"

namespace stereo_avoid {

using fuzzy::Clause;
using fuzzy::Consequent;
using fuzzy::FuzzyRule;
using fuzzy::LinguisticVariable;
using fuzzy::RuleBase;
using fuzzy::RuleBaseSpec;
using fuzzy::Trapezoid;

double SteerCommand::magnitude() const noexcept { return std::hypot(pitch, yaw); }

std::optional<RulePreset> preset_from_name(std::string_view name) noexcept {
    if (name == "paper_literal" || name == "paper-literal") return RulePreset::paper_literal;
    if (name == "paper_corrected" || name == "paper-corrected") return RulePreset::paper_corrected;
    return std::nullopt;
}

std::string_view preset_name(RulePreset p) noexcept {
    return p == RulePreset::paper_literal ? "paper_literal" : "paper_corrected";
}

std::string_view to_string(ActiveController a) noexcept {
    return a == ActiveController::primary ? "primary" : "diagonal";
}

double normalize_depth(double depth_m, double span_m) {
    if (!(depth_m > 0.0)) throw InvalidDepthError("normalize_depth: depth must be > 0");
    return std::clamp(depth_m / span_m, 0.0, 1.0);
}

void ControllerConfig::validate() const {
    if (!(normalization_span_m > 0.0)) throw std::invalid_argument("controller: normalization span must be > 0");
    if (!(diagonal_trigger >= 0.0 && diagonal_trigger <= 1.0))
        throw std::invalid_argument("controller: diagonal trigger must be in [0, 1]");
    if (!(diagonal_gate >= 0.0 && diagonal_gate <= 1.0))
        throw std::invalid_argument("controller: diagonal gate must be in [0, 1]");
}

namespace {

LinguisticVariable distance_variable(std::string name) {
    // 0.25 and 0.75 are 0.75 m and 2.25 m after the 1/3 scale.
    return {std::move(name),
            0.0,
            1.0,
            {{"near", {0.0, 0.0, 0.25, 0.5}}, {"medium", {0.25, 0.5, 0.5, 0.75}}, {"far", {0.5, 0.75, 1.0, 1.0}}}};
}

LinguisticVariable command_variable(std::string name) {
    return {std::move(name),
            -1.0,
            1.0,
            {{"negative", {-1.0, -1.0, -0.5, 0.0}}, {"zero", {-0.5, 0.0, 0.0, 0.5}}, {"positive", {0.0, 0.5, 1.0, 1.0}}}};
}

FuzzyRule rule(std::vector<Clause> antecedent, std::vector<Consequent> consequents) {
    return {std::move(antecedent), std::move(consequents), fuzzy::Connective::all_of};
}

std::string relabel(const std::string& name) {
    static const std::map<std::string, std::string> kMap = {
        {"up", "up_left"},    {"right", "up_right"}, {"down", "down_right"},
        {"left", "down_left"}, {"pitch", "pitch_rot"}, {"yaw", "yaw_rot"},
    };
    const auto it = kMap.find(name);
    return it == kMap.end() ? name : it->second;
}

struct AxisNames {
    const char* pitch;
    const char* yaw;
    const char* up;  // positive-pitch side
    const char* down;
    const char* right;  // positive-yaw side
    const char* left;
};

constexpr AxisNames kPrimaryAxes{"pitch", "yaw", "up", "down", "right", "left"};
constexpr AxisNames kDiagonalAxes{"pitch_rot", "yaw_rot", "up_left", "down_right", "up_right", "down_left"};

struct AxisOutput {
    double pitch = 0.0;
    double yaw = 0.0;
    bool pitch_inactive = false;
    bool yaw_inactive = false;
    std::vector<double> strengths;
};

// The farther side is picked on metric depth: normalized values saturate at
// the span, and a saturated pair would otherwise always resolve to up/right.
AxisOutput evaluate_axes(const RuleBase& rb, std::map<std::string, double> inputs, const RegionDepths& depths,
                         const AxisNames& axes, bool canonical) {
    bool flip_pitch = false;
    bool flip_yaw = false;
    if (canonical) {
        const auto raw = [&](const char* name) { return depths[region_from_name(name)]; };
        if (raw(axes.down) > raw(axes.up)) {
            std::swap(inputs.at(axes.down), inputs.at(axes.up));
            flip_pitch = true;
        }
        if (raw(axes.left) > raw(axes.right)) {
            std::swap(inputs.at(axes.left), inputs.at(axes.right));
            flip_yaw = true;
        }
    }
    auto inference = rb.infer(inputs);
    AxisOutput out;
    out.strengths = std::move(inference.rule_strengths);
    const auto defuzz = rb.spec().defuzz;
    auto crisp = [&](const char* name, bool& inactive) {
        try {
            return fuzzy::defuzzify(inference.outputs.at(name), defuzz);
        } catch (const NoActivationError&) {
            inactive = true;
            return 0.0;
        }
    };
    out.pitch = crisp(axes.pitch, out.pitch_inactive);
    out.yaw = crisp(axes.yaw, out.yaw_inactive);
    if (flip_pitch) out.pitch = -out.pitch;
    if (flip_yaw) out.yaw = -out.yaw;
    return out;
}

void require_names(const RuleBase& rb, const AxisNames& axes) {
    for (const char* in : {"center", axes.up, axes.down, axes.left, axes.right}) {
        const auto& v = rb.input(in);
        if (!v.has_term("near") || !v.has_term("far"))
            throw std::invalid_argument(std::string("controller input '") + in + "' needs terms near and far");
    }
    rb.output(axes.pitch);
    rb.output(axes.yaw);
}

}  // namespace

RuleBase build_primary_rulebase(RulePreset preset) {
    RuleBaseSpec spec;
    for (const char* n : {"center", "up", "down", "left", "right"}) spec.inputs.push_back(distance_variable(n));
    spec.outputs = {command_variable("pitch"), command_variable("yaw")};

    const bool literal = preset == RulePreset::paper_literal;
    spec.rules = {
        rule({{"center", "far"}}, {{"pitch", "zero"}, {"yaw", "zero"}}),
        rule({{"center", "near"}, {"up", "near"}, {"down", "far"}}, {{"pitch", "negative"}}),
        rule({{"center", "near"}, {"down", "near"}, {"up", "far"}}, {{"pitch", "positive"}}),
        rule({{"center", "near"}, {"right", "near"}, {"left", "far"}}, {{"yaw", "negative"}}),
        rule({{"center", "near"}, {"left", "near"}, {"right", "far"}}, {{"yaw", "positive"}}),
        rule({{"center", "near"}, {literal ? "right" : "left", "near"}}, {{"yaw", "positive"}}),
        rule({{"center", "near"}, {literal ? "up" : "down", "near"}}, {{"pitch", "positive"}}),
        // Tie-breaks: both sides open, take the right (resp. upper) path.
        rule({{"center", "near"}, {"left", "far"}, {"right", "far"}}, {{"yaw", "positive"}}),
        rule({{"center", "near"}, {"up", "far"}, {"down", "far"}}, {{"pitch", "positive"}}),
    };
    return RuleBase(std::move(spec));
}

RuleBase rotate_rulebase(const RuleBase& primary) {
    RuleBaseSpec spec = primary.spec();
    for (auto& v : spec.inputs) v.name = relabel(v.name);
    for (auto& v : spec.outputs) v.name = relabel(v.name);
    for (auto& r : spec.rules) {
        for (auto& c : r.antecedent) c.variable = relabel(c.variable);
        for (auto& c : r.consequents) c.variable = relabel(c.variable);
    }
    return RuleBase(std::move(spec));
}

RuleBase build_diagonal_rulebase(RulePreset preset) { return rotate_rulebase(build_primary_rulebase(preset)); }

std::pair<double, double> rotate_back(double pitch_rot, double yaw_rot) noexcept {
    constexpr double kHalfSqrt2 = 0.70710678118654752440;
    const double pitch = (pitch_rot + yaw_rot) * kHalfSqrt2;
    const double yaw = (yaw_rot - pitch_rot) * kHalfSqrt2;
    return {std::clamp(pitch, -1.0, 1.0), std::clamp(yaw, -1.0, 1.0)};
}

AvoidanceController::AvoidanceController(ControllerConfig cfg)
    : AvoidanceController(build_primary_rulebase(cfg.preset), cfg) {}

AvoidanceController::AvoidanceController(RuleBase primary, ControllerConfig cfg)
    : cfg_(cfg),
      primary_(std::move(primary)),
      diagonal_(rotate_rulebase(primary_)),
      canonical_(cfg.farther_side_first.value_or(cfg.preset == RulePreset::paper_corrected)) {
    cfg_.validate();
    require_names(primary_, kPrimaryAxes);
    require_names(diagonal_, kDiagonalAxes);
}

SteerResult AvoidanceController::steer_detailed(const RegionDepths& depths) const {
    SteerResult result;
    for (int i = 0; i < kRegionCount; ++i)
        result.normalized.values[i] = normalize_depth(depths.values[i], cfg_.normalization_span_m);
    const auto& n = result.normalized;

    std::map<std::string, double> cardinal = {
        {"center", n[Region::center]}, {"up", n[Region::up]},     {"down", n[Region::down]},
        {"left", n[Region::left]},     {"right", n[Region::right]},
    };
    auto primary = evaluate_axes(primary_, cardinal, depths, kPrimaryAxes, canonical_);
    result.command = {primary.pitch, primary.yaw};
    result.pitch_inactive = primary.pitch_inactive;
    result.yaw_inactive = primary.yaw_inactive;
    result.rule_strengths = std::move(primary.strengths);

    const double center_far = primary_.input("center").term("far")(n[Region::center]);
    bool blocked = true;
    for (const char* side : {"up", "down", "left", "right"})
        blocked = blocked && primary_.input(side).term("near")(cardinal.at(side)) >= cfg_.diagonal_gate;

    if (center_far < 1.0 && result.command.magnitude() < cfg_.diagonal_trigger && blocked) {
        std::map<std::string, double> corners = {
            {"center", n[Region::center]},      {"up_left", n[Region::up_left]},
            {"up_right", n[Region::up_right]},  {"down_left", n[Region::down_left]},
            {"down_right", n[Region::down_right]},
        };
        auto diag = evaluate_axes(diagonal_, corners, depths, kDiagonalAxes, canonical_);
        if (!(diag.pitch_inactive && diag.yaw_inactive)) {
            const auto [pitch, yaw] = rotate_back(diag.pitch, diag.yaw);
            result.command = {pitch, yaw};
            result.active = ActiveController::diagonal;
            result.pitch_inactive = diag.pitch_inactive;
            result.yaw_inactive = diag.yaw_inactive;
            result.rule_strengths = std::move(diag.strengths);
        }
    }
    result.command.pitch = std::clamp(result.command.pitch, -1.0, 1.0);
    result.command.yaw = std::clamp(result.command.yaw, -1.0, 1.0);
    return result;
}

SteerCommand steer(const RegionDepths& depths, const ControllerConfig& cfg) {
    return AvoidanceController(cfg).steer(depths);
}

}  // namespace stereo_avoid
